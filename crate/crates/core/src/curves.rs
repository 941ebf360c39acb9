//! Point counts for the surface `X_λ` and the Legendre and Clausen curves,
//! and Greene's `₂F₁`, `₃F₂`.

use rayon::prelude::*;
use serde::Serialize;

use crate::char_sums::{ComplexApprox, GaussContext};
use crate::check::Check;
use crate::error::{Error, Result};
use crate::field::{CharIndex, PrimeField};

/// Width of the band around an integer inside which a numeric value is rounded.
pub const GUARD_BAND: f64 = 0.1;

/// Trace of Frobenius of `y² = x(x-1)(x-λ)`: `-Σ_x φ(x(x-1)(x-λ))`.
pub fn legendre_trace(f: &PrimeField, lambda: u64) -> Result<i64> {
    let p = f.p();
    let l = lambda % p;
    if l == 0 || l == 1 {
        return Err(Error::Singular {
            lambda: l,
            what: "the Legendre curve",
        });
    }
    let q = f.quadratic_table();
    let mut s: i64 = 0;
    for x in 0..p {
        let v = f.mul(f.mul(x, f.sub(x, 1)), f.sub(x, l));
        s += q[v as usize] as i64;
    }
    Ok(-s)
}

/// Trace of Frobenius of `y² = (x-1)(x²+λ)`: `-Σ_x φ((x-1)(x²+λ))`.
pub fn clausen_trace(f: &PrimeField, lambda: u64) -> Result<i64> {
    let p = f.p();
    let l = lambda % p;
    if l == 0 || l == p - 1 {
        return Err(Error::Singular {
            lambda: l,
            what: "the Clausen curve",
        });
    }
    let q = f.quadratic_table();
    let mut s: i64 = 0;
    for x in 0..p {
        let v = f.mul(f.sub(x, 1), f.add(f.mul(x, x), l));
        s += q[v as usize] as i64;
    }
    Ok(-s)
}

/// `(1-λ)/λ²`, for `λ != 0`.
pub fn surface_parameter(f: &PrimeField, lambda: u64) -> Option<u64> {
    let inv = f.inv(lambda)?;
    Some(f.mul(f.sub(1, lambda), f.mul(inv, inv)))
}

/// `A_p(λ) = p² - |X_λ(F_p)| = -Σ_{x,y} φ(xy(1+x+y)(xy + (1-λ)/λ²))`, by a double loop.
pub fn surface_a_direct(f: &PrimeField, lambda: u64) -> Result<i64> {
    let p = f.p();
    let l = lambda % p;
    let beta = surface_parameter(f, l).ok_or(Error::Singular {
        lambda: 0,
        what: "the surface X_λ",
    })?;
    let q = f.quadratic_table();
    let mut s: i64 = 0;
    for x in 1..p {
        let qx = q[x as usize] as i64;
        let mut acc: i64 = 0;
        for y in 1..p {
            let a = (1 + x + y) % p;
            if a == 0 {
                continue;
            }
            let b = (x * y + beta) % p;
            acc += (q[y as usize] * q[a as usize] * q[b as usize]) as i64;
        }
        s += qx * acc;
    }
    Ok(-s)
}

/// `A_p(λ)` in `O(p)` through a single Clausen trace.
///
/// With `μ = (1-λ)/λ`, so that `μ/(1+μ) = 1-λ`, the Clausen relation gives
/// `p² ₃F₂(1-λ) = φ(1+μ)(a_Cl(μ)² - p)`, and `A_p(λ) = -φ(λ) p² ₃F₂(1-λ)`.
/// The points `λ = 1` (where `μ = 0`) and `λ = 2` are delegated to
/// [`surface_a_direct`].
pub fn surface_a_fast(f: &PrimeField, lambda: u64) -> Result<i64> {
    let p = f.p();
    let l = lambda % p;
    if l == 0 {
        return Err(Error::Singular {
            lambda: 0,
            what: "the surface X_λ",
        });
    }
    if l == 1 || l == 2 {
        return surface_a_direct(f, l);
    }
    let inv = f.inv(l).expect("nonzero");
    let mu = f.mul(f.sub(1, l), inv);
    let a = clausen_trace(f, mu)?;
    let one_plus_mu = f.add(1, mu);
    let p2_3f2 = f.quadratic_char(one_plus_mu) as i64 * (a * a - p as i64);
    Ok(-(f.quadratic_char(l) as i64) * p2_3f2)
}

/// `A_p(λ)` for `λ = 1, ..., p-1` (index `λ - 1`), computed in parallel.
pub fn surface_a_table(f: &PrimeField) -> Vec<i64> {
    (1..f.p())
        .into_par_iter()
        .map(|l| surface_a_fast(f, l).expect("λ != 0"))
        .collect()
}

/// Which routes produced a [`TraceRecord`]'s `A_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Direct,
    Fast,
    Both,
}

/// Traces attached to one `(p, λ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub p: u64,
    pub lambda: u64,
    pub a_leg: Option<i64>,
    pub a_cl: Option<i64>,
    #[serde(rename = "A_p")]
    pub a_p: i64,
    pub provenance: Provenance,
}

impl TraceRecord {
    /// Builds the record; `provenance` selects which `A_p` routes run.
    /// With [`Provenance::Both`] the two routes must agree.
    pub fn compute(f: &PrimeField, lambda: u64, provenance: Provenance) -> Result<Self> {
        let l = lambda % f.p();
        let a_p = match provenance {
            Provenance::Direct => surface_a_direct(f, l)?,
            Provenance::Fast => surface_a_fast(f, l)?,
            Provenance::Both => {
                let d = surface_a_direct(f, l)?;
                let q = surface_a_fast(f, l)?;
                if d != q {
                    return Err(Error::Precondition(format!(
                        "fast A_p = {q} differs from direct A_p = {d} at p = {}, λ = {l}",
                        f.p()
                    )));
                }
                d
            }
        };
        Ok(TraceRecord {
            p: f.p(),
            lambda: l,
            a_leg: legendre_trace(f, l).ok(),
            a_cl: clausen_trace(f, l).ok(),
            a_p,
            provenance,
        })
    }

    /// Hasse bounds on both traces and `|A_p| <= 3p`.
    pub fn within_bounds(&self) -> bool {
        let hasse = |a: Option<i64>| a.is_none_or(|a| a * a <= 4 * self.p as i64);
        hasse(self.a_leg) && hasse(self.a_cl) && self.a_p.abs() <= 3 * self.p as i64
    }
}

/// Greene's hypergeometric functions over `F_p`, normalized by `p/(p-1)`:
/// `₂F₁(λ) = p/(p-1) Σ_χ (φχ choose χ)² χ(λ)`, `₃F₂(λ) = p/(p-1) Σ_χ (φχ choose χ)³ χ(λ)`.
pub struct Greene<'a> {
    ctx: &'a GaussContext,
    /// `(φω^j choose ω^j)` for `j ∈ [0, p-2]`.
    binom: Vec<ComplexApprox>,
}

impl<'a> Greene<'a> {
    pub fn new(ctx: &'a GaussContext) -> Self {
        let p = ctx.p();
        let h = (p - 1) / 2;
        let binom = (0..p - 1)
            .into_par_iter()
            .map(|j| {
                ctx.binomial(
                    CharIndex::new((h + j) as i64, p),
                    CharIndex::new(j as i64, p),
                )
            })
            .collect();
        Greene { ctx, binom }
    }

    pub fn context(&self) -> &GaussContext {
        self.ctx
    }

    fn sum_power(&self, lambda: u64, k: u32) -> ComplexApprox {
        let p = self.ctx.p();
        let mut acc = ComplexApprox::zero();
        for (j, b) in self.binom.iter().enumerate() {
            let w = self.ctx.char_value(j as i64, lambda);
            acc = acc.add(&b.powi(k).mul(&w));
        }
        acc.scale(p as f64 / (p as f64 - 1.0))
    }

    pub fn f21(&self, lambda: u64) -> ComplexApprox {
        self.sum_power(lambda, 2)
    }

    pub fn f32(&self, lambda: u64) -> ComplexApprox {
        self.sum_power(lambda, 3)
    }

    /// `p^k · value` rounded to the nearest integer, or a guard error.
    pub fn rounded(value: &ComplexApprox, p: u64, k: i32, what: &str) -> Result<i128> {
        let scaled = value.scale((p as f64).powi(k));
        scaled.round_guarded(GUARD_BAND).ok_or_else(|| {
            Error::Guard(format!(
                "p^{k}·{what} = {scaled} is not within {GUARD_BAND} of an integer"
            ))
        })
    }

    /// `₂F₁(λ) = -φ(-1) a_Leg(λ) / p`, compared as integers after scaling by `p`.
    pub fn legendre_relation_check(&self, lambda: u64) -> Result<Check> {
        let f = self.ctx.field();
        let p = f.p();
        let lhs = Self::rounded(&self.f21(lambda), p, 1, "2F1")?;
        let rhs = -(f.phi(-1) as i128) * legendre_trace(f, lambda)? as i128;
        Ok(Check::equal(
            "legendre_2f1",
            format!("p={p} lambda={lambda}"),
            lhs,
            rhs,
        ))
    }

    /// `p + p² φ(1+λ) ₃F₂(λ/(1+λ)) = a_Cl(λ)²` for `λ ∉ {0, -1}`.
    pub fn clausen_relation_check(&self, lambda: u64) -> Result<Check> {
        let f = self.ctx.field();
        let p = f.p();
        let a = clausen_trace(f, lambda)?;
        let one_plus = f.add(1, lambda);
        let arg = f.mul(lambda, f.inv(one_plus).expect("λ != -1"));
        let p2 = Self::rounded(&self.f32(arg), p, 2, "3F2")?;
        let lhs = p as i128 + f.quadratic_char(one_plus) as i128 * p2;
        Ok(Check::equal(
            "clausen_3f2",
            format!("p={p} lambda={lambda}"),
            lhs,
            (a * a) as i128,
        ))
    }

    /// `|p ₃F₂(λ)| <= 3` up to the numeric error.
    pub fn f32_bound_check(&self, lambda: u64) -> Check {
        let p = self.ctx.p() as f64;
        let v = self.f32(lambda).scale(p);
        Check::new(
            "3f2_bound",
            format!("p={} lambda={lambda}", self.ctx.p()),
            v.abs(),
            3,
            v.abs() <= 3.0 + v.err + 1e-9,
        )
    }

    /// Decomposition of `₃F₂(λ)` through `C_p(λ/(1-λ)²)`:
    ///
    /// `₃F₂(λ) = φ(λ-1)/(p³(p-1)) C_p(λ/(1-λ)²) + φ(-1)/p δ(1+λ)
    ///   + δ(1-λ) Δ(p) [(χ₄ choose φ)(φχ̄₄ choose χ̄₄) + (φχ₄ choose φ)(χ̄₄ choose φχ̄₄)]`,
    ///
    /// with `Δ(p) = 1` iff `p ≡ 1 (mod 4)`. At `λ = 1` the first term vanishes
    /// through `φ(0) = 0`.
    pub fn lemma_3f2_decomposition_check(&self, lambda: u64) -> Result<Check> {
        let ctx = self.ctx;
        let f = ctx.field();
        let p = f.p();
        let l = lambda % p;
        let lhs = self.f32(l);
        let mut rhs = ComplexApprox::zero();
        let s = f.quadratic_char(f.sub(l, 1));
        if s != 0 {
            let d = f.sub(1, l);
            let arg = f.mul(l, f.inv(f.mul(d, d)).expect("λ != 1"));
            let c = ctx.c_p_padic(arg, None)? as f64;
            let denom = (p as f64).powi(3) * (p as f64 - 1.0);
            rhs = rhs.add(&ComplexApprox::exact(s as f64 * c / denom));
        }
        if l == p - 1 {
            rhs = rhs.add(&ComplexApprox::exact(f.phi(-1) as f64 / p as f64));
        }
        if l == 1 && p % 4 == 1 {
            let c = (p - 1) / 4;
            let h = (p - 1) / 2;
            let ch = |j: u64| CharIndex::new(j as i64, p);
            let t1 = ctx
                .binomial(ch(c), ch(h))
                .mul(&ctx.binomial(ch(h + 3 * c), ch(3 * c)));
            let t2 = ctx
                .binomial(ch(h + c), ch(h))
                .mul(&ctx.binomial(ch(3 * c), ch(h + 3 * c)));
            rhs = rhs.add(&t1.add(&t2));
        }
        let diff = (lhs.value() - rhs.value()).norm();
        let ok = diff <= (1e-6 * rhs.abs()).max(lhs.err + rhs.err);
        Ok(Check::new(
            "3f2_decomposition",
            format!("p={p} lambda={l}"),
            lhs,
            rhs,
            ok,
        ))
    }

    /// `A_p(2) = -φ(2) p² ₃F₂(-1) + φ(-2) p`.
    pub fn a_p_at_two(&self) -> Result<i128> {
        let f = self.ctx.field();
        let p = f.p();
        let p2 = Self::rounded(&self.f32(p - 1), p, 2, "3F2(-1)")?;
        Ok(-(f.phi(2) as i128) * p2 + f.phi(-2) as i128 * p as i128)
    }
}

/// `|a_Cl(-λ²)| = |a_Leg(2λ/(λ-1))|` for `λ ∉ {0, ±1}`.
pub fn twist_check(f: &PrimeField, lambda: u64) -> Result<Check> {
    let p = f.p();
    let l = lambda % p;
    if l == 0 || l == 1 || l == p - 1 {
        return Err(Error::Singular {
            lambda: l,
            what: "the quadratic twist relation",
        });
    }
    let cl = clausen_trace(f, f.neg(f.mul(l, l)))?;
    let leg_arg = f.mul(f.mul(2, l), f.inv(f.sub(l, 1)).expect("λ != 1"));
    let leg = legendre_trace(f, leg_arg)?;
    Ok(Check::equal(
        "quadratic_twist",
        format!("p={p} lambda={l}"),
        cl.abs(),
        leg.abs(),
    ))
}

/// `C_p((1-λ)/λ²) = -φ(-1) p (p-1) A_p(λ)`, with `C_p` from Gross–Koblitz and
/// `A_p` from the direct count. Fails at `λ = 1`, where `C_p(0) = 0` but `A_p(1) = -1`.
pub fn surface_c_p_check(ctx: &GaussContext, lambda: u64) -> Result<Check> {
    let f = ctx.field();
    let p = f.p();
    let l = lambda % p;
    let beta = surface_parameter(f, l).ok_or(Error::Singular {
        lambda: 0,
        what: "the surface X_λ",
    })?;
    let lhs = ctx.c_p_padic(beta, None)?;
    let rhs = -(f.phi(-1) as i128) * p as i128 * (p as i128 - 1) * surface_a_direct(f, l)? as i128;
    Ok(Check::equal(
        "c_p_surface",
        format!("p={p} lambda={l}"),
        lhs,
        rhs,
    ))
}
