//! Command-line front end: identity suites, trace tables, moment and
//! distribution reports, and p-adic hypergeometric values.

pub mod config;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use surfpoints::arithstat::{
    clausen_even_moments, distribution_report, empirical_moments, gn_moment_check, GnFamily,
    CSV_HEADER,
};
use surfpoints::char_sums::GaussContext;
use surfpoints::curves::{Provenance, TraceRecord};
use surfpoints::field::{CharIndex, PrimeField};
use surfpoints::gn_hyper::GnEvaluator;
use thiserror::Error;

use config::{Format, Options, DEFAULT_BINS, DEFAULT_MAX_M, EXHAUSTIVE_LIMIT};
use suites::{run_suite, Sampling, SuiteReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] surfpoints::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot write json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Parser, Debug)]
#[command(
    name = "surfpoints",
    version,
    about = "Point counts, character sums and p-adic hypergeometric checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run identity suites; exits 1 if any check fails.
    Verify(Options),
    /// Legendre, Clausen and surface traces per λ.
    Trace(Options),
    /// Power sums of A_p (or of 3G3, 9G9, Clausen traces) against their limits.
    Moments(Options),
    /// Histogram of A_p/p with both limiting densities.
    Distribution(Options),
    /// Decoded 3G3 or 9G9 values.
    Gn(Options),
    /// Gauss sums, numerically and in Gross–Koblitz form.
    Gauss(Options),
    /// Jacobi sums and Greene binomial coefficients.
    Jacobi(Options),
}

/// Runs the program on `args` (including the program name) and returns the exit code:
/// 0 on success, 1 if a check failed, 2 on a usage or configuration error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

type Handler = fn(&Options) -> Result<i32, CliError>;

fn dispatch(command: Command) -> Result<i32, CliError> {
    let (opts, f): (Options, Handler) = match command {
        Command::Verify(o) => (o, verify),
        Command::Trace(o) => (o, trace),
        Command::Moments(o) => (o, moments),
        Command::Distribution(o) => (o, distribution),
        Command::Gn(o) => (o, gn),
        Command::Gauss(o) => (o, gauss),
        Command::Jacobi(o) => (o, jacobi),
    };
    let opts = opts.resolve()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = opts.workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start workers: {e}")))?;
    pool.install(|| f(&opts))
}

fn writer(opts: &Options) -> Result<Box<dyn Write>, CliError> {
    Ok(match &opts.out {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(opts: &Options, value: &T) -> Result<(), CliError> {
    let mut w = writer(opts)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn emit_csv<R, S>(opts: &Options, header: &[&str], rows: R) -> Result<(), CliError>
where
    R: IntoIterator<Item = Vec<S>>,
    S: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(writer(opts)?);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn verify(opts: &Options) -> Result<i32, CliError> {
    let suite = opts.suite.clone().unwrap_or_else(|| "all".into());
    if !suites::is_known(&suite) {
        return Err(CliError::Usage(format!("unknown suite {suite:?}")));
    }
    let names: Vec<&str> = if suite == "all" {
        suites::ALL.to_vec()
    } else {
        vec![suite.as_str()]
    };
    let primes = opts.primes()?;
    let precision = opts.precision()?;
    let sampling = Sampling {
        samples: opts.samples(),
        seed: opts.seed(),
        exhaustive_limit: EXHAUSTIVE_LIMIT,
    };
    let units: Vec<(u64, &str)> = primes
        .iter()
        .flat_map(|&p| names.iter().map(move |&s| (p, s)))
        .collect();
    let reports: Vec<SuiteReport> = units
        .par_iter()
        .map(|&(p, s)| run_suite(s, p, precision, &sampling))
        .collect::<surfpoints::Result<_>>()?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    match opts.format(Format::Json)? {
        Format::Json => emit_json(opts, &reports)?,
        Format::Csv => emit_csv(
            opts,
            &["suite", "prime", "identity", "inputs", "lhs", "rhs"],
            reports.iter().flat_map(|r| {
                r.failures.iter().map(move |f| {
                    vec![
                        r.suite.clone(),
                        r.prime.to_string(),
                        f.identity.clone(),
                        f.inputs.clone(),
                        f.lhs.clone(),
                        f.rhs.clone(),
                    ]
                })
            }),
        )?,
    }
    let total: usize = reports.iter().map(|r| r.checks).sum();
    eprintln!(
        "{total} checks across {} suite runs, {failed} with failures",
        reports.len()
    );
    Ok(if failed == 0 { 0 } else { 1 })
}

fn trace(opts: &Options) -> Result<i32, CliError> {
    let primes = opts.primes()?;
    let mut records = Vec::new();
    for p in primes {
        let f = PrimeField::new(p)?;
        let lambdas: Vec<u64> = match opts.lambda {
            Some(l) if l % p == 0 => {
                return Err(CliError::Usage(format!("λ = 0 is singular for p = {p}")))
            }
            Some(l) => vec![l % p],
            None => (1..p).collect(),
        };
        let rs: Vec<TraceRecord> = lambdas
            .par_iter()
            .map(|&l| TraceRecord::compute(&f, l, Provenance::Fast))
            .collect::<surfpoints::Result<_>>()?;
        records.extend(rs);
    }
    let opt = |a: Option<i64>| a.map(|v| v.to_string()).unwrap_or_default();
    match opts.format(Format::Csv)? {
        Format::Json => emit_json(opts, &records)?,
        Format::Csv => emit_csv(
            opts,
            &["p", "lambda", "a_leg", "a_cl", "A_p"],
            records.iter().map(|r| {
                vec![
                    r.p.to_string(),
                    r.lambda.to_string(),
                    opt(r.a_leg),
                    opt(r.a_cl),
                    r.a_p.to_string(),
                ]
            }),
        )?,
    }
    Ok(0)
}

fn moments(opts: &Options) -> Result<i32, CliError> {
    let m_max = opts.max_m.unwrap_or(DEFAULT_MAX_M);
    let family = opts.suite.as_deref().unwrap_or("surface");
    let primes = opts.primes()?;
    let format = opts.format(Format::Json)?;
    if family == "clausen" {
        let reports = primes
            .iter()
            .map(|&p| Ok(clausen_even_moments(&PrimeField::new(p)?, m_max)?))
            .collect::<Result<Vec<_>, CliError>>()?;
        match format {
            Format::Json => emit_json(opts, &reports)?,
            Format::Csv => emit_csv(
                opts,
                &["p", "j", "raw", "normalized", "target"],
                reports.iter().flat_map(|r| {
                    (0..r.raw.len()).map(move |i| {
                        vec![
                            r.p.to_string(),
                            (i + 1).to_string(),
                            r.raw[i].to_string(),
                            r.normalized[i].to_string(),
                            r.targets[i].to_string(),
                        ]
                    })
                }),
            )?,
        }
        return Ok(0);
    }
    let gn_family = match family {
        "surface" => None,
        "3g3" => Some(GnFamily::G3),
        "9g9" => Some(GnFamily::G9),
        other => {
            return Err(CliError::Usage(format!(
                "unknown moment family {other:?}, expected surface, 3g3, 9g9 or clausen"
            )))
        }
    };
    let mut reports = Vec::new();
    for p in primes {
        match gn_family {
            None => reports.push(empirical_moments(&PrimeField::new(p)?, m_max)?),
            Some(fam) => {
                let need = if fam == GnFamily::G3 { 1 } else { 2 };
                if p % 3 != need {
                    eprintln!("note: skipping p={p}: {family} moments need p ≡ {need} (mod 3)");
                    continue;
                }
                reports.push(gn_moment_check(&GaussContext::new(p)?, fam, m_max)?);
            }
        }
    }
    if reports.is_empty() {
        return Err(CliError::Usage(
            "no prime in the required residue class".into(),
        ));
    }
    match format {
        Format::Json => emit_json(opts, &reports)?,
        Format::Csv => emit_csv(
            opts,
            &[
                "p",
                "m",
                "raw",
                "normalized",
                "normalized_approx",
                "target",
                "gap",
            ],
            reports.iter().flat_map(|r| {
                (0..r.raw.len()).map(move |i| {
                    vec![
                        r.p.to_string(),
                        (i + 1).to_string(),
                        r.raw[i].to_string(),
                        r.normalized[i].clone(),
                        r.normalized_approx[i].to_string(),
                        r.targets[i].to_string(),
                        r.gaps[i].to_string(),
                    ]
                })
            }),
        )?,
    }
    let failed = reports
        .iter()
        .any(|r| r.cross_checks.iter().any(|c| !c.passed));
    Ok(if failed { 1 } else { 0 })
}

fn distribution(opts: &Options) -> Result<i32, CliError> {
    let bins = opts.bins.unwrap_or(DEFAULT_BINS);
    match opts.format(Format::Csv)? {
        Format::Csv => {
            let p = opts.single_prime()?;
            let h = distribution_report(&PrimeField::new(p)?, bins)?;
            eprintln!(
                "p={p}: ks_a={:.4} ks_b={:.4} winner={}",
                h.ks_a,
                h.ks_b,
                h.winner.name()
            );
            emit_csv(
                opts,
                &CSV_HEADER,
                h.to_csv_rows().into_iter().map(Vec::from),
            )?;
        }
        Format::Json => {
            let reports = opts
                .primes()?
                .iter()
                .map(|&p| Ok(distribution_report(&PrimeField::new(p)?, bins)?))
                .collect::<Result<Vec<_>, CliError>>()?;
            emit_json(opts, &reports)?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct GnRecord {
    p: u64,
    lambda: u64,
    family: &'static str,
    /// The p-adic value as evaluated.
    padic: String,
    /// `p · (-Γ_p(1/3)³) ₃G₃(λ)` or `₉G₉(λ)` as an integer.
    decoded: i128,
    precision: u32,
}

fn gn(opts: &Options) -> Result<i32, CliError> {
    let n = opts.precision()?;
    let mut records = Vec::new();
    for p in opts.primes()? {
        let ctx = GaussContext::new(p)?;
        let ev = GnEvaluator::new(&ctx);
        let lambdas: Vec<u64> = match opts.lambda {
            Some(l) if l % p == 1 => {
                return Err(CliError::Usage(format!("λ = 1 is excluded for p = {p}")))
            }
            Some(l) => vec![l % p],
            None => (0..p).filter(|&l| l != 1).collect(),
        };
        let rs: Vec<GnRecord> = lambdas
            .par_iter()
            .map(|&l| {
                Ok(if p % 3 == 1 {
                    let d = ev.g3_times_p(l, true)?;
                    GnRecord {
                        p,
                        lambda: l,
                        family: "3G3",
                        padic: ev.g3_eval(l, n)?.to_string(),
                        decoded: d.value,
                        precision: d.precision,
                    }
                } else {
                    let d = ev.g9_decoded(l)?;
                    GnRecord {
                        p,
                        lambda: l,
                        family: "9G9",
                        padic: ev.g9_eval(l, n)?.to_string(),
                        decoded: d.value,
                        precision: d.precision,
                    }
                })
            })
            .collect::<surfpoints::Result<_>>()?;
        records.extend(rs);
    }
    match opts.format(Format::Json)? {
        Format::Json => emit_json(opts, &records)?,
        Format::Csv => emit_csv(
            opts,
            &["p", "lambda", "family", "padic", "decoded", "precision"],
            records.iter().map(|r| {
                vec![
                    r.p.to_string(),
                    r.lambda.to_string(),
                    r.family.to_string(),
                    r.padic.clone(),
                    r.decoded.to_string(),
                    r.precision.to_string(),
                ]
            }),
        )?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct GaussRecord {
    p: u64,
    j: u64,
    re: f64,
    im: f64,
    abs_squared: f64,
    /// `g(ω^j) = π^e · unit` from Gross–Koblitz.
    pi_exponent: u64,
    unit: String,
}

fn gauss(opts: &Options) -> Result<i32, CliError> {
    let n = opts.precision()?;
    let mut records = Vec::new();
    for p in opts.primes()? {
        let ctx = GaussContext::new(p)?;
        let js: Vec<u64> = match opts.index {
            Some(j) => vec![j % (p - 1)],
            None => (0..p - 1).collect(),
        };
        for j in js {
            let g = ctx.gauss(j as i64);
            // g(ω^j) = g(ω̄^{-j}).
            let gp = ctx.gauss_sum_padic(CharIndex::new(-(j as i64), p), n)?;
            records.push(GaussRecord {
                p,
                j,
                re: g.re,
                im: g.im,
                abs_squared: g.abs() * g.abs(),
                pi_exponent: gp.e,
                unit: gp.unit.to_string(),
            });
        }
    }
    match opts.format(Format::Json)? {
        Format::Json => emit_json(opts, &records)?,
        Format::Csv => emit_csv(
            opts,
            &["p", "j", "re", "im", "abs_squared", "pi_exponent", "unit"],
            records.iter().map(|r| {
                vec![
                    r.p.to_string(),
                    r.j.to_string(),
                    r.re.to_string(),
                    r.im.to_string(),
                    r.abs_squared.to_string(),
                    r.pi_exponent.to_string(),
                    r.unit.clone(),
                ]
            }),
        )?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct JacobiRecord {
    p: u64,
    j1: u64,
    j2: u64,
    re: f64,
    im: f64,
    /// Greene's `(ω^{j1} choose ω^{j2})`.
    binomial_re: f64,
    binomial_im: f64,
}

fn jacobi(opts: &Options) -> Result<i32, CliError> {
    let mut records = Vec::new();
    for p in opts.primes()? {
        let ctx = GaussContext::new(p)?;
        let pick = |x: Option<u64>| match x {
            Some(j) => vec![j % (p - 1)],
            None => (0..p - 1).collect::<Vec<_>>(),
        };
        for j1 in pick(opts.index) {
            for j2 in pick(opts.index2) {
                let (a, b) = (CharIndex::new(j1 as i64, p), CharIndex::new(j2 as i64, p));
                let j = ctx.jacobi_sum_numeric(a, b);
                let bin = ctx.binomial(a, b);
                records.push(JacobiRecord {
                    p,
                    j1,
                    j2,
                    re: j.re,
                    im: j.im,
                    binomial_re: bin.re,
                    binomial_im: bin.im,
                });
            }
        }
    }
    match opts.format(Format::Json)? {
        Format::Json => emit_json(opts, &records)?,
        Format::Csv => emit_csv(
            opts,
            &["p", "j1", "j2", "re", "im", "binomial_re", "binomial_im"],
            records.iter().map(|r| {
                vec![
                    r.p.to_string(),
                    r.j1.to_string(),
                    r.j2.to_string(),
                    r.re.to_string(),
                    r.im.to_string(),
                    r.binomial_re.to_string(),
                    r.binomial_im.to_string(),
                ]
            }),
        )?,
    }
    Ok(0)
}
