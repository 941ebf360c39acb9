//! Identity suites run by `verify`.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use surfpoints::char_sums::floors::exponent_identities;
use surfpoints::char_sums::{CpValue, GaussContext};
use surfpoints::check::Check;
use surfpoints::curves::{
    surface_a_direct, surface_a_fast, surface_c_p_check, twist_check, Greene, Provenance,
    TraceRecord,
};
use surfpoints::field::CharIndex;
use surfpoints::gn_hyper::{decode_with_escalation, GnEvaluator, GnParameters};
use surfpoints::padic::{
    gamma_multiplication_check, gamma_prod2_check, gamma_reflection_check, ZpRational,
};
use surfpoints::Result;

/// Suites run by `--suite all`, in report order.
pub const ALL: &[&str] = &["floors", "gamma", "gauss", "curves", "fast", "gn"];

/// Suites only run when named: relations that are expected to fail.
pub const EXTRA: &[&str] = &["gn-as-stated"];

pub fn is_known(name: &str) -> bool {
    name == "all" || ALL.contains(&name) || EXTRA.contains(&name)
}

/// How λ (and character indices) are chosen per prime.
#[derive(Clone, Debug)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
    pub exhaustive_limit: u64,
}

impl Sampling {
    /// `lo..p` in full for small `p`, otherwise a seeded sorted sample.
    pub fn values(&self, p: u64, lo: u64) -> (Vec<u64>, bool) {
        let all: Vec<u64> = (lo..p).collect();
        if p <= self.exhaustive_limit || self.samples >= all.len() {
            return (all, false);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let mut picked: Vec<u64> = sample(&mut rng, all.len(), self.samples)
            .into_iter()
            .map(|i| all[i])
            .collect();
        picked.sort_unstable();
        (picked, true)
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Failure {
    pub identity: String,
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub prime: u64,
    pub checks: usize,
    pub failures: Vec<Failure>,
    pub seed: u64,
    /// The sampled λ, when the prime is above the exhaustive limit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampled: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Collector {
    checks: usize,
    failures: Vec<Failure>,
    skipped: Vec<String>,
}

impl Collector {
    fn new() -> Self {
        Collector {
            checks: 0,
            failures: Vec::new(),
            skipped: Vec::new(),
        }
    }

    fn push(&mut self, c: Check) {
        self.checks += 1;
        if !c.passed {
            self.failures.push(Failure {
                identity: c.identity,
                inputs: c.inputs,
                lhs: c.lhs,
                rhs: c.rhs,
            });
        }
    }

    /// A check whose evaluation itself failed counts as a failure.
    fn push_result(&mut self, identity: &str, inputs: impl Into<String>, r: Result<Check>) {
        match r {
            Ok(c) => self.push(c),
            Err(e) => {
                self.checks += 1;
                self.failures.push(Failure {
                    identity: identity.into(),
                    inputs: inputs.into(),
                    lhs: format!("error: {e}"),
                    rhs: String::new(),
                });
            }
        }
    }

    fn skip(&mut self, note: String) {
        eprintln!("note: {note}");
        self.skipped.push(note);
    }
}

/// Runs one named suite (not `all`) at one prime.
pub fn run_suite(name: &str, p: u64, precision: u32, sampling: &Sampling) -> Result<SuiteReport> {
    let ctx = GaussContext::new(p)?;
    let mut c = Collector::new();
    let sampled = match name {
        "floors" => {
            for ch in exponent_identities(p) {
                c.push(ch);
            }
            None
        }
        "gamma" => gamma(&mut c, p, precision, sampling),
        "gauss" => gauss(&mut c, &ctx, precision, sampling),
        "curves" => curves(&mut c, &ctx, sampling),
        "fast" => fast(&mut c, &ctx, sampling),
        "gn" => gn(&mut c, &ctx, precision, sampling),
        "gn-as-stated" => gn_as_stated(&mut c, &ctx, precision, sampling),
        other => panic!("unknown suite {other}"),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        prime: p,
        checks: c.checks,
        failures: c.failures,
        seed: sampling.seed,
        sampled,
        skipped: c.skipped,
    })
}

fn gamma(c: &mut Collector, p: u64, n: u32, s: &Sampling) -> Option<Vec<u64>> {
    let (ks, sampled) = s.values(p - 1, 0);
    let q = p as i64 - 1;
    for &k in &ks {
        let x = ZpRational::new(k as i64, q);
        let inputs = format!("p={p} N={n} k={k}");
        c.push_result(
            "gamma_reflection",
            inputs.clone(),
            gamma_reflection_check(p, n, x),
        );
        for m in [2, 3] {
            c.push_result(
                "gamma_multiplication",
                inputs.clone(),
                gamma_multiplication_check(p, n, m, x),
            );
            c.push_result("gamma_prod2", inputs.clone(), gamma_prod2_check(p, n, m, k));
        }
    }
    for m in [2, 3] {
        c.push_result(
            "gamma_multiplication",
            format!("p={p} N={n} k={q}"),
            gamma_multiplication_check(p, n, m, ZpRational::one()),
        );
    }
    sampled.then_some(ks)
}

fn gauss(c: &mut Collector, ctx: &GaussContext, n: u32, s: &Sampling) -> Option<Vec<u64>> {
    let p = ctx.p();
    let (js, sampled) = s.values(p - 1, 0);
    for &j in &js {
        let ch = CharIndex::new(j as i64, p);
        c.push(ctx.gauss_inverse_check(ch));
        c.push_result(
            "gross_koblitz_pair",
            format!("p={p} N={n} j={j}"),
            ctx.gross_koblitz_check(ch, n),
        );
        for &k in &js {
            c.push(ctx.gauss_jacobi_check(ch, CharIndex::new(k as i64, p)));
        }
    }
    sampled.then_some(js)
}

fn curves(c: &mut Collector, ctx: &GaussContext, s: &Sampling) -> Option<Vec<u64>> {
    let f = ctx.field();
    let p = f.p();
    let g = Greene::new(ctx);
    let (ls, sampled) = s.values(p, 0);
    for &l in &ls {
        let inputs = format!("p={p} lambda={l}");
        if l != 0 {
            c.push_result(
                "hasse_bounds",
                inputs.clone(),
                TraceRecord::compute(f, l, Provenance::Both).map(|r| {
                    Check::new(
                        "hasse_bounds",
                        inputs.clone(),
                        format!("a_leg={:?} a_cl={:?} A_p={}", r.a_leg, r.a_cl, r.a_p),
                        "|a| <= 2√p, |A_p| <= 3p",
                        r.within_bounds(),
                    )
                }),
            );
        }
        if l != 0 && l != 1 && l != p - 1 {
            c.push_result("quadratic_twist", inputs.clone(), twist_check(f, l));
        }
        if l >= 2 {
            c.push_result("legendre_2f1", inputs.clone(), g.legendre_relation_check(l));
            c.push_result("c_p_surface", inputs.clone(), surface_c_p_check(ctx, l));
        }
        if l != 0 && l != p - 1 {
            c.push_result("clausen_3f2", inputs.clone(), g.clausen_relation_check(l));
        }
        c.push(g.f32_bound_check(l));
        c.push_result(
            "3f2_decomposition",
            inputs.clone(),
            g.lemma_3f2_decomposition_check(l),
        );
        if l != 0 {
            let r = ctx.c_p_padic(l, None).map(|exact| {
                let approx = match ctx.c_p(l, surfpoints::char_sums::CpMode::Numeric) {
                    Ok(CpValue::Numeric(v)) => v,
                    _ => unreachable!("numeric mode returns a numeric value"),
                };
                let ok = approx.matches_real(exact as f64);
                Check::new("c_p_modes", inputs.clone(), approx, exact, ok)
            });
            c.push_result("c_p_modes", inputs.clone(), r);
        }
    }
    // Boundary values where the surface relation degenerates.
    let inputs = format!("p={p}");
    c.push_result(
        "surface_at_one",
        inputs.clone(),
        surface_a_direct(f, 1).map(|a| Check::equal("surface_at_one", inputs.clone(), a, -1)),
    );
    c.push_result(
        "c_p_at_zero",
        inputs.clone(),
        ctx.c_p_padic(0, None)
            .map(|v| Check::equal("c_p_at_zero", inputs.clone(), v, 0)),
    );
    let at_two = g.a_p_at_two().and_then(|v| {
        Ok(Check::equal(
            "a_p_at_two",
            inputs.clone(),
            v,
            surface_a_direct(f, 2)? as i128,
        ))
    });
    c.push_result("a_p_at_two", inputs, at_two);
    sampled.then_some(ls)
}

fn fast(c: &mut Collector, ctx: &GaussContext, s: &Sampling) -> Option<Vec<u64>> {
    let f = ctx.field();
    let p = f.p();
    let (ls, sampled) = s.values(p, 1);
    for &l in &ls {
        let inputs = format!("p={p} lambda={l}");
        let r = surface_a_fast(f, l).and_then(|a| {
            Ok(Check::equal(
                "fast_direct",
                inputs.clone(),
                a,
                surface_a_direct(f, l)?,
            ))
        });
        c.push_result("fast_direct", inputs, r);
    }
    sampled.then_some(ls)
}

fn gn(c: &mut Collector, ctx: &GaussContext, n: u32, s: &Sampling) -> Option<Vec<u64>> {
    let p = ctx.p();
    let ev = GnEvaluator::new(ctx);
    let (ls, sampled) = s.values(p, 0);
    let at_zero = format!("p={p} lambda=0");
    c.push_result("kappa", format!("p={p} N={n}"), ev.kappa_check(n));
    if p % 3 == 1 {
        c.skip(format!(
            "p={p}: skipping 9G9 checks, they need p ≡ 2 (mod 3)"
        ));
        c.push_result("sign_helper", format!("p={p}"), ev.sign_helper_check());
        for &l in ls.iter().filter(|&&l| l != 1) {
            let inputs = format!("p={p} N={n} lambda={l}");
            c.push_result("g3_c_p_normalized", inputs, ev.g3_surface_check(l, n, true));
            if l >= 2 {
                c.push_result(
                    "g3_surface_normalized",
                    format!("p={p} lambda={l}"),
                    ev.g3_chain_check(l, true),
                );
            }
        }
        let r = ev
            .g3_times_p(0, true)
            .map(|d| Check::equal("g3_at_zero", at_zero.clone(), d.value, 0));
        c.push_result("g3_at_zero", at_zero, r);
    } else {
        c.skip(format!(
            "p={p}: skipping 3G3 checks, they need p ≡ 1 (mod 3)"
        ));
        for &l in ls.iter().filter(|&&l| l != 1) {
            let inputs = format!("p={p} lambda={l}");
            c.push_result("g9_c_p", inputs.clone(), ev.g9_surface_check(l));
            if l >= 2 {
                c.push_result("g9_surface", inputs, ev.g9_chain_check(l));
            }
        }
        let r = ev
            .g9_decoded(0)
            .map(|d| Check::equal("g9_at_zero", at_zero.clone(), d.value, 0));
        c.push_result("g9_at_zero", at_zero, r);
    }
    sampled.then_some(ls)
}

/// The `₃G₃` relations without the `-Γ_p(1/3)³` factor, and the `₉G₉`
/// relation with the top row `1/3, 1/3, 1/3, 2/3, 2/3, 1/3, 0, 0, 0`.
fn gn_as_stated(c: &mut Collector, ctx: &GaussContext, n: u32, s: &Sampling) -> Option<Vec<u64>> {
    let f = ctx.field();
    let p = f.p();
    let ev = GnEvaluator::new(ctx);
    let (ls, sampled) = s.values(p, 0);
    if p % 3 == 1 {
        for &l in ls.iter().filter(|&&l| l != 1) {
            let inputs = format!("p={p} N={n} lambda={l}");
            c.push_result("g3_c_p", inputs, ev.g3_surface_check(l, n, false));
            if l >= 2 {
                c.push_result(
                    "g3_surface",
                    format!("p={p} lambda={l}"),
                    ev.g3_chain_check(l, false),
                );
            }
        }
    } else {
        let params = GnParameters::g9_misprinted();
        for &l in ls.iter().filter(|&&l| l >= 2) {
            let inputs = format!("p={p} lambda={l}");
            let one_minus = f.sub(1, l);
            let r = surface_a_direct(f, l).map(|a| {
                let lhs = match decode_with_escalation(p, n, 3 * p as u128, |m| {
                    ev.g9_eval_with(&params, one_minus, m)
                }) {
                    Ok(d) => d.value.to_string(),
                    Err(e) => format!("undecodable: {e}"),
                };
                let rhs = (-(a as i128)).to_string();
                let ok = lhs == rhs;
                Check::new("g9_surface_as_printed", inputs.clone(), lhs, rhs, ok)
            });
            c.push_result("g9_surface_as_printed", inputs, r);
        }
    }
    sampled.then_some(ls)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_seeded_and_sorted() {
        let s = Sampling {
            samples: 20,
            seed: 1,
            exhaustive_limit: 50,
        };
        let (a, sa) = s.values(101, 1);
        let (b, _) = s.values(101, 1);
        assert!(sa);
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        let (all, sampled) = s.values(47, 1);
        assert!(!sampled);
        assert_eq!(all.len(), 46);
        let other = Sampling { seed: 2, ..s };
        assert_ne!(other.values(101, 1).0, a);
    }
}
