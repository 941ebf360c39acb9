//! McCarthy's p-adic hypergeometric function `ₙGₙ` and its two specializations
//! `₃G₃(λ)` and `₉G₉(λ)` attached to the surface family.
//!
//! For parameters `a_k, b_k ∈ Q ∩ Z_p`,
//!
//! `ₙGₙ[a; b | t] = -1/(p-1) Σ_{a=0}^{p-2} (-1)^{an} ω̄^a(t)
//!   Π_k (-p)^{-⌊⟨a_k⟩ - a/(p-1)⌋ - ⌊⟨-b_k⟩ + a/(p-1)⌋}
//!   Γ_p(⟨a_k - a/(p-1)⟩)/Γ_p(⟨a_k⟩) · Γ_p(⟨-b_k + a/(p-1)⟩)/Γ_p(⟨-b_k⟩)`.
//!
//! Everything except `ω̄^a(t)` is independent of `t`, so the per-`a`
//! coefficients are computed once per `(p, N, parameters)` and cached.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::char_sums::GaussContext;
use crate::check::Check;
use crate::curves::surface_a_direct;
use crate::error::{Error, Result};
use crate::padic::{
    gamma_p_batch, inv_mod, mul_mod, prime_power, PadicNumber, ZpRational, DEFAULT_PRECISION,
};

/// Smallest accepted precision for `ₙGₙ` evaluation.
pub const MIN_PRECISION: u32 = 3;

/// Parameter lists `a_1..a_n`, `b_1..b_n` of an `ₙGₙ` function.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GnParameters {
    a: Vec<ZpRational>,
    b: Vec<ZpRational>,
}

fn rats(xs: &[(i64, i64)]) -> Vec<ZpRational> {
    xs.iter().map(|&(n, d)| ZpRational::new(n, d)).collect()
}

impl GnParameters {
    pub fn new(a: Vec<ZpRational>, b: Vec<ZpRational>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::Precondition(format!(
                "parameter lists must be nonempty and of equal length, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(GnParameters { a, b })
    }

    /// `[1/3, 1/3, 1/3; 1/12, 7/12, 5/6]`.
    pub fn g3() -> Self {
        GnParameters {
            a: rats(&[(1, 3), (1, 3), (1, 3)]),
            b: rats(&[(1, 12), (7, 12), (5, 6)]),
        }
    }

    /// `[1/3, 1/3, 1/3, 2/3, 2/3, 2/3, 0, 0, 0; 1/12, 5/12, 7/12, 11/12, 1/6, 5/6, 1/4, 3/4, 1/2]`.
    pub fn g9() -> Self {
        GnParameters {
            a: rats(&[
                (1, 3),
                (1, 3),
                (1, 3),
                (2, 3),
                (2, 3),
                (2, 3),
                (0, 1),
                (0, 1),
                (0, 1),
            ]),
            b: Self::g9_bottom(),
        }
    }

    /// The top row `1/3, 1/3, 1/3, 2/3, 2/3, 1/3, 0, 0, 0`, which carries one
    /// `1/3` in place of a `2/3`. Kept to show that it does not satisfy the
    /// `C_p` relation.
    pub fn g9_misprinted() -> Self {
        GnParameters {
            a: rats(&[
                (1, 3),
                (1, 3),
                (1, 3),
                (2, 3),
                (2, 3),
                (1, 3),
                (0, 1),
                (0, 1),
                (0, 1),
            ]),
            b: Self::g9_bottom(),
        }
    }

    fn g9_bottom() -> Vec<ZpRational> {
        rats(&[
            (1, 12),
            (5, 12),
            (7, 12),
            (11, 12),
            (1, 6),
            (5, 6),
            (1, 4),
            (3, 4),
            (1, 2),
        ])
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn top(&self) -> &[ZpRational] {
        &self.a
    }

    pub fn bottom(&self) -> &[ZpRational] {
        &self.b
    }

    pub fn check_zp(&self, p: u64) -> Result<()> {
        for x in self.a.iter().chain(&self.b) {
            if !x.in_zp(p) {
                return Err(Error::NotInZp(x.to_string(), p));
            }
        }
        Ok(())
    }

    /// Total `(-p)`-exponent of the `a`-th term.
    pub fn exponent(&self, p: u64, a: u64) -> i64 {
        let s = ZpRational::new(a as i64, p as i64 - 1);
        let mut e = 0;
        for x in &self.a {
            e -= (x.frac_part() - s).floor_part();
        }
        for y in &self.b {
            e -= ((-*y).frac_part() + s).floor_part();
        }
        e
    }

    /// Every `Γ_p` argument used by a full sum over `a`, deduplicated.
    fn gamma_arguments(&self, p: u64) -> Vec<ZpRational> {
        let q = p as i64 - 1;
        let mut args = Vec::new();
        for x in &self.a {
            args.push(x.frac_part());
        }
        for y in &self.b {
            args.push((-*y).frac_part());
        }
        for a in 0..q {
            let s = ZpRational::new(a, q);
            for x in &self.a {
                args.push((*x - s).frac_part());
            }
            for y in &self.b {
                args.push((-*y + s).frac_part());
            }
        }
        args.sort_unstable();
        args.dedup();
        args
    }
}

/// Per-`a` coefficients `c_a`, so that `ₙGₙ(t) = -1/(p-1) Σ_a c_a ω(t)^{-a}`.
#[derive(Debug)]
pub struct GnCoefficients {
    pub p: u64,
    pub precision: u32,
    pub coeffs: Vec<PadicNumber>,
    pub exponents: Vec<i64>,
}

impl GnCoefficients {
    pub fn min_exponent(&self) -> i64 {
        self.exponents.iter().copied().min().unwrap_or(0)
    }
}

/// A decoded integer and the precision that was needed for it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub value: i128,
    pub precision: u32,
}

/// Decodes the integer `V` with `|V| <= bound` from `eval(N)`, starting at
/// `start` digits and adding digits while the modulus is too small or the
/// balanced residue lies within 1% of the boundary.
pub fn decode_with_escalation<F>(p: u64, start: u32, bound: u128, eval: F) -> Result<Decoded>
where
    F: Fn(u32) -> Result<PadicNumber>,
{
    let mut n = start;
    loop {
        let last = prime_power(p, n + 1).is_err();
        match eval(n)?.to_integer_with_margin(bound) {
            Ok((value, margin)) if margin < 0.99 || last => {
                return Ok(Decoded {
                    value,
                    precision: n,
                })
            }
            Ok(_) | Err(Error::InsufficientPrecision(_)) if !last => n += 1,
            Ok(_) => unreachable!("handled above"),
            Err(e) => return Err(e),
        }
    }
}

/// Evaluator with a coefficient cache keyed by `(N, parameters)`.
pub struct GnEvaluator<'a> {
    ctx: &'a GaussContext,
    cache: Mutex<HashMap<(u32, GnParameters), Arc<GnCoefficients>>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

fn psi6_minus_one(p: u64) -> i64 {
    if ((p - 1) / 6).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl<'a> GnEvaluator<'a> {
    pub fn new(ctx: &'a GaussContext) -> Self {
        GnEvaluator {
            ctx,
            cache: Mutex::new(HashMap::new()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    pub fn context(&self) -> &GaussContext {
        self.ctx
    }

    /// `(hits, misses)` of the coefficient cache.
    pub fn cache_stats(&self) -> (u64, u64) {
        (
            self.hits.load(Ordering::Relaxed),
            self.misses.load(Ordering::Relaxed),
        )
    }

    pub fn coefficients(&self, params: &GnParameters, n: u32) -> Result<Arc<GnCoefficients>> {
        let key = (n, params.clone());
        if let Some(c) = self.cache.lock().expect("gn cache poisoned").get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(c.clone());
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let c = Arc::new(self.build_coefficients(params, n)?);
        self.cache
            .lock()
            .expect("gn cache poisoned")
            .insert(key, c.clone());
        Ok(c)
    }

    fn build_coefficients(&self, params: &GnParameters, n: u32) -> Result<GnCoefficients> {
        let p = self.ctx.p();
        if n < MIN_PRECISION {
            return Err(Error::InsufficientPrecision(format!(
                "N = {n}, need at least {MIN_PRECISION}"
            )));
        }
        params.check_zp(p)?;
        let q = p as i64 - 1;
        let modulus = prime_power(p, n)?;
        let table = gamma_p_batch(p, n, &params.gamma_arguments(p))?;
        let res = |x: ZpRational| table.residue(&x);
        let mut base = 1u64;
        for x in &params.a {
            base = mul_mod(base, res(x.frac_part())?, modulus);
        }
        for y in &params.b {
            base = mul_mod(base, res((-*y).frac_part())?, modulus);
        }
        let base_inv = inv_mod(base, modulus).expect("Γ_p values are units");
        let len = params.n() as i64;
        let mut coeffs = Vec::with_capacity(q as usize);
        let mut exponents = Vec::with_capacity(q as usize);
        for a in 0..q {
            let s = ZpRational::new(a, q);
            let mut u = base_inv;
            for x in &params.a {
                u = mul_mod(u, res((*x - s).frac_part())?, modulus);
            }
            for y in &params.b {
                u = mul_mod(u, res((-*y + s).frac_part())?, modulus);
            }
            let e = params.exponent(p, a as u64);
            // (-1)^{an} (-p)^e = (-1)^{an + e} p^e.
            if (a * len + e).rem_euclid(2) == 1 {
                u = (modulus - u) % modulus;
            }
            coeffs.push(PadicNumber::from_parts(p, n, e as i32, u)?);
            exponents.push(e);
        }
        Ok(GnCoefficients {
            p,
            precision: n,
            coeffs,
            exponents,
        })
    }

    /// `ₙGₙ[params | t]` with units modulo `p^N`. Returns zero at `t = 0`.
    pub fn gn_eval(&self, params: &GnParameters, t: u64, n: u32) -> Result<PadicNumber> {
        let p = self.ctx.p();
        let c = self.coefficients(params, n)?;
        if t.is_multiple_of(p) {
            return Ok(PadicNumber::zero(p));
        }
        let tables = self.ctx.padic_tables(n)?;
        let mut acc = PadicNumber::zero(p);
        for (a, ca) in c.coeffs.iter().enumerate() {
            let w = self
                .ctx
                .teichmuller_power(&tables, t, -(a as i64))
                .expect("t != 0");
            acc = acc.add(&ca.mul(&PadicNumber::from_parts(p, n, 0, w)?)?)?;
        }
        let scale =
            PadicNumber::from_int(p, n, -1)?.div(&PadicNumber::from_int(p, n, p as i128 - 1)?)?;
        acc.mul(&scale)
    }

    fn require_class(&self, residue: u64, need: &'static str) -> Result<()> {
        let p = self.ctx.p();
        if p % 3 != residue {
            return Err(Error::ResidueClass { p, need });
        }
        Ok(())
    }

    fn not_one(&self, lambda: u64, what: &'static str) -> Result<u64> {
        let l = lambda % self.ctx.p();
        if l == 1 {
            return Err(Error::Singular { lambda: 1, what });
        }
        Ok(l)
    }

    /// `x = λ/(1-λ)²`.
    fn x_of(&self, l: u64) -> u64 {
        let f = self.ctx.field();
        let d = f.sub(1, l);
        f.mul(l, f.inv(f.mul(d, d)).expect("λ != 1"))
    }

    /// `ψ₃(λ/(1-λ)²) · ₃G₃[1/3, 1/3, 1/3; 1/12, 7/12, 5/6 | -4λ/(1-λ)²]`, with
    /// `ψ₃ = ω^{(p-1)/3}`. Requires `p ≡ 1 (mod 3)` and `λ != 1`.
    pub fn g3_eval(&self, lambda: u64, n: u32) -> Result<PadicNumber> {
        self.require_class(1, "p ≡ 1 (mod 3)")?;
        let l = self.not_one(lambda, "3G3")?;
        let f = self.ctx.field();
        let p = f.p();
        let x = self.x_of(l);
        let t = f.mul(f.neg(4), x);
        let g = self.gn_eval(&GnParameters::g3(), t, n)?;
        if x == 0 {
            return Ok(g);
        }
        let tables = self.ctx.padic_tables(n)?;
        let psi = self
            .ctx
            .teichmuller_power(&tables, x, ((p - 1) / 3) as i64)
            .expect("x != 0");
        g.mul(&PadicNumber::from_parts(p, n, 0, psi)?)
    }

    /// `-Γ_p(1/3)³ · ₃G₃(λ)`: the scaling under which `₃G₃` satisfies the
    /// `C_p` relation exactly (see [`g3_surface_check`](Self::g3_surface_check)).
    pub fn g3_normalized_eval(&self, lambda: u64, n: u32) -> Result<PadicNumber> {
        let g = self.g3_eval(lambda, n)?;
        Ok(g.mul(&self.gamma_third_cubed(n)?)?.neg())
    }

    /// `Γ_p(1/3)³` modulo `p^N`.
    pub fn gamma_third_cubed(&self, n: u32) -> Result<PadicNumber> {
        let p = self.ctx.p();
        let g = if p % 3 == 1 {
            let t = self.ctx.padic_tables(n)?;
            PadicNumber::from_parts(p, n, 0, t.gamma[((p - 1) / 3) as usize])?
        } else {
            let third = ZpRational::new(1, 3);
            gamma_p_batch(p, n, [&third])?.get(&third)?
        };
        g.mul(&g)?.mul(&g)
    }

    /// `₉G₉[...| -64λ³/(1-λ)⁶]` with the parameters of [`GnParameters::g9`].
    /// Requires `p ≡ 2 (mod 3)` and `λ != 1`.
    pub fn g9_eval(&self, lambda: u64, n: u32) -> Result<PadicNumber> {
        self.g9_eval_with(&GnParameters::g9(), lambda, n)
    }

    pub fn g9_eval_with(&self, params: &GnParameters, lambda: u64, n: u32) -> Result<PadicNumber> {
        self.require_class(2, "p ≡ 2 (mod 3)")?;
        let l = self.not_one(lambda, "9G9")?;
        let f = self.ctx.field();
        let x = self.x_of(l);
        let t = f.mul(f.neg(64), f.mul(x, f.mul(x, x)));
        self.gn_eval(params, t, n)
    }

    /// `p · ₃G₃(λ)` decoded as an integer of size at most `3p`.
    pub fn g3_times_p(&self, lambda: u64, normalized: bool) -> Result<Decoded> {
        let p = self.ctx.p();
        decode_with_escalation(p, DEFAULT_PRECISION, 3 * p as u128, |n| {
            let g = if normalized {
                self.g3_normalized_eval(lambda, n)?
            } else {
                self.g3_eval(lambda, n)?
            };
            Ok(g.shift(1))
        })
    }

    /// `₉G₉(λ)` decoded as an integer of size at most `3p`.
    pub fn g9_decoded(&self, lambda: u64) -> Result<Decoded> {
        let p = self.ctx.p();
        decode_with_escalation(p, DEFAULT_PRECISION, 3 * p as u128, |n| {
            self.g9_eval(lambda, n)
        })
    }

    fn rhs_c_p(&self, l: u64, n: u32) -> Result<PadicNumber> {
        self.ctx.c_p_padic_value(self.x_of(l), n)
    }

    /// `ψ₆(-1) p² (p-1) ₃G₃(λ) = C_p(λ/(1-λ)²)` modulo `p^N`; with
    /// `normalized`, `₃G₃` is replaced by `-Γ_p(1/3)³ ₃G₃`.
    pub fn g3_surface_check(&self, lambda: u64, n: u32, normalized: bool) -> Result<Check> {
        let p = self.ctx.p();
        let l = self.not_one(lambda, "3G3")?;
        let g = if normalized {
            self.g3_normalized_eval(l, n)?
        } else {
            self.g3_eval(l, n)?
        };
        let k = psi6_minus_one(p) as i128 * (p as i128 - 1);
        let lhs = g.shift(2).mul(&PadicNumber::from_int(p, n, k)?)?;
        let rhs = self.rhs_c_p(l, n)?;
        let ok = lhs.congruent(&rhs)?;
        let name = if normalized {
            "g3_c_p_normalized"
        } else {
            "g3_c_p"
        };
        Ok(Check::new(
            name,
            format!("p={p} N={n} lambda={l}"),
            lhs,
            rhs,
            ok,
        ))
    }

    /// `p (p-1) φ(-1) ₉G₉(λ) = C_p(λ/(1-λ)²)` as exact integers.
    pub fn g9_surface_check(&self, lambda: u64) -> Result<Check> {
        let f = self.ctx.field();
        let p = f.p();
        let l = self.not_one(lambda, "9G9")?;
        let g = self.g9_decoded(l)?.value;
        let lhs = p as i128 * (p as i128 - 1) * f.phi(-1) as i128 * g;
        let rhs = self.ctx.c_p_padic(self.x_of(l), None)?;
        Ok(Check::equal(
            "g9_c_p",
            format!("p={p} lambda={l}"),
            lhs,
            rhs,
        ))
    }

    /// `p · ₃G₃(1-λ) = -A_p(λ)` as decoded integers.
    pub fn g3_chain_check(&self, lambda: u64, normalized: bool) -> Result<Check> {
        let f = self.ctx.field();
        let p = f.p();
        let l = lambda % p;
        let rhs = -(surface_a_direct(f, l)? as i128);
        let name = if normalized {
            "g3_surface_normalized"
        } else {
            "g3_surface"
        };
        let inputs = format!("p={p} lambda={l}");
        Ok(match self.g3_times_p(f.sub(1, l), normalized) {
            Ok(d) => Check::equal(name, inputs, d.value, rhs),
            Err(e @ (Error::NotIntegral(_) | Error::InsufficientPrecision(_))) => {
                Check::new(name, inputs, format!("undecodable: {e}"), rhs, false)
            }
            Err(e) => return Err(e),
        })
    }

    /// `₉G₉(1-λ) = -A_p(λ)` as decoded integers.
    pub fn g9_chain_check(&self, lambda: u64) -> Result<Check> {
        let f = self.ctx.field();
        let p = f.p();
        let l = lambda % p;
        let rhs = -(surface_a_direct(f, l)? as i128);
        let lhs = self.g9_decoded(f.sub(1, l))?.value;
        Ok(Check::equal(
            "g9_surface",
            format!("p={p} lambda={l}"),
            lhs,
            rhs,
        ))
    }

    /// `Γ_p(1/12)Γ_p(11/12)Γ_p(5/12)Γ_p(7/12)Γ_p(1/4)Γ_p(3/4) = -φ(-2)`.
    pub fn kappa_check(&self, n: u32) -> Result<Check> {
        let f = self.ctx.field();
        let p = f.p();
        let args = rats(&[(1, 12), (11, 12), (5, 12), (7, 12), (1, 4), (3, 4)]);
        let table = gamma_p_batch(p, n, &args)?;
        let mut lhs = PadicNumber::from_int(p, n, 1)?;
        for x in &args {
            lhs = lhs.mul(&table.get(x)?)?;
        }
        let rhs = PadicNumber::from_int(p, n, -(f.phi(-2) as i128))?;
        let ok = lhs.congruent(&rhs)?;
        Ok(Check::new("kappa", format!("p={p} N={n}"), lhs, rhs, ok))
    }

    /// `φ(-1) ψ₆(-1) = 1` for `p ≡ 1 (mod 3)`.
    pub fn sign_helper_check(&self) -> Result<Check> {
        self.require_class(1, "p ≡ 1 (mod 3)")?;
        let p = self.ctx.p();
        let v = self.ctx.field().phi(-1) * psi6_minus_one(p);
        Ok(Check::equal("sign_helper", format!("p={p}"), v, 1))
    }
}
