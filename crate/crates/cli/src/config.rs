//! Run configuration: command-line flags merged over an optional TOML file.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;
use surfpoints::field::{is_prime, primes_between, PrimeField};
use surfpoints::padic::DEFAULT_PRECISION;

use crate::CliError;

/// λ values are drawn at random above this prime; at or below it every λ is checked.
pub const EXHAUSTIVE_LIMIT: u64 = 50;
pub const DEFAULT_SAMPLES: usize = 20;
pub const DEFAULT_BINS: usize = 60;
pub const DEFAULT_MAX_M: u32 = 4;

/// Flags shared by every subcommand. The config file uses the same keys with
/// underscores (`max_m`, `index2`, ...).
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Primes: a range `a..b` (inclusive) or a comma list `5,7,11`.
    #[arg(long)]
    pub primes: Option<String>,
    /// A single prime.
    #[arg(long)]
    pub prime: Option<u64>,
    /// Parameter λ, reduced modulo p.
    #[arg(long)]
    pub lambda: Option<u64>,
    /// Check suite for `verify`, or moment family for `moments`.
    #[arg(long)]
    pub suite: Option<String>,
    /// Largest moment order.
    #[arg(long = "max-m")]
    pub max_m: Option<u32>,
    /// p-adic precision N.
    #[arg(long)]
    pub precision: Option<u32>,
    /// Number of sampled λ per prime above the exhaustive limit.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Seed for λ sampling.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format: json or csv.
    #[arg(long)]
    pub format: Option<String>,
    /// Histogram bins for `distribution`.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Character index j for `gauss` and `jacobi`.
    #[arg(long)]
    pub index: Option<u64>,
    /// Second character index for `jacobi`.
    #[arg(long)]
    pub index2: Option<u64>,
    /// TOML file providing defaults for any of the flags above.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

macro_rules! merge_fields {
    ($flags:expr, $file:expr, $($f:ident),*) => {
        Options {
            $($f: $flags.$f.or($file.$f),)*
            config: $flags.config,
        }
    };
}

impl Options {
    /// Loads the config file named by `--config`, if any, and fills every
    /// flag that was not given on the command line.
    pub fn resolve(self) -> Result<Options, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load(&path)?;
        Ok(merge_fields!(
            self, file, primes, prime, lambda, suite, max_m, precision, samples, workers, seed,
            out, format, bins, index, index2
        ))
    }

    pub fn format(&self, default: Format) -> Result<Format, CliError> {
        match self.format.as_deref() {
            None => Ok(default),
            Some("json") => Ok(Format::Json),
            Some("csv") => Ok(Format::Csv),
            Some(other) => Err(CliError::Usage(format!(
                "unknown format {other:?}, expected json or csv"
            ))),
        }
    }

    pub fn precision(&self) -> Result<u32, CliError> {
        let n = self.precision.unwrap_or(DEFAULT_PRECISION);
        if !(3..=12).contains(&n) {
            return Err(CliError::Usage(format!(
                "precision must be in 3..=12, got {n}"
            )));
        }
        Ok(n)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    /// The primes selected by `--prime` and `--primes`, ascending.
    pub fn primes(&self) -> Result<Vec<u64>, CliError> {
        let mut out = Vec::new();
        if let Some(p) = self.prime {
            out.push(checked_prime(p)?);
        }
        if let Some(spec) = &self.primes {
            out.extend(parse_primes(spec)?);
        }
        if out.is_empty() {
            return Err(CliError::Usage(
                "no prime given; use --prime or --primes".into(),
            ));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn single_prime(&self) -> Result<u64, CliError> {
        let ps = self.primes()?;
        match ps.as_slice() {
            [p] => Ok(*p),
            _ => Err(CliError::Usage(format!(
                "this command takes one prime, got {}",
                ps.len()
            ))),
        }
    }
}

fn load(path: &Path) -> Result<Options, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

fn checked_prime(p: u64) -> Result<u64, CliError> {
    if !is_prime(p) || p < 5 {
        return Err(CliError::Usage(format!("{p} is not a prime >= 5")));
    }
    PrimeField::new(p).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(p)
}

/// `a..b` (inclusive, primes >= 5 inside), `a..=b`, or `p1,p2,...` (each must be a prime >= 5).
pub fn parse_primes(spec: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse prime list {spec:?}"));
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    if let Some((a, b)) = spec.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (lo, hi) = (num(a)?, num(b)?);
        if lo > hi {
            return Err(bad());
        }
        let ps = primes_between(lo, hi);
        if ps.is_empty() {
            return Err(CliError::Usage(format!("no primes >= 5 in {spec}")));
        }
        for &p in &ps {
            checked_prime(p)?;
        }
        return Ok(ps);
    }
    spec.split(',').map(|s| checked_prime(num(s)?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_lists() {
        assert_eq!(parse_primes("5..20").unwrap(), vec![5, 7, 11, 13, 17, 19]);
        assert_eq!(parse_primes("2..=7").unwrap(), vec![5, 7]);
        assert_eq!(parse_primes("7, 5").unwrap(), vec![7, 5]);
        assert!(parse_primes("4").is_err());
        assert!(parse_primes("3").is_err());
        assert!(parse_primes("8..10").is_err());
        assert!(parse_primes("x").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("surfpoints-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(&path, "prime = 7\nseed = 3\nmax_m = 6\n").unwrap();
        let flags = Options {
            seed: Some(9),
            config: Some(path.clone()),
            ..Default::default()
        };
        let o = flags.resolve().unwrap();
        assert_eq!((o.prime, o.seed, o.max_m), (Some(7), Some(9), Some(6)));
        std::fs::write(&path, "colour = 1\n").unwrap();
        let flags = Options {
            config: Some(path),
            ..Default::default()
        };
        assert!(flags.resolve().is_err());
        std::fs::remove_dir_all(dir).unwrap();
    }
}
