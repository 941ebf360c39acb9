//! Gauss and Jacobi sums, Greene binomials, Gross–Koblitz Gauss sums and the
//! five-fold character sum `C_p(λ)`.

mod approx;
pub mod floors;

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::Serialize;

pub use approx::ComplexApprox;

use crate::check::Check;
use crate::curves::surface_a_direct;
use crate::error::{Error, Result};
use crate::field::{CharIndex, PrimeField};
use crate::padic::{gamma_p_batch, mul_mod, prime_power, PadicNumber, ZpRational};

/// A Gauss sum `g(ω̄^e)` in Gross–Koblitz form `π^e · unit`, with `π^(p-1) = -p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussSumPadic {
    /// Exponent of `π`.
    pub e: u64,
    pub unit: PadicNumber,
}

impl GaussSumPadic {
    pub fn mul(&self, o: &Self) -> Result<Self> {
        Ok(GaussSumPadic {
            e: self.e + o.e,
            unit: self.unit.mul(&o.unit)?,
        })
    }

    /// Converts to a p-adic number once the `π`-exponent is a multiple of `p-1`.
    pub fn to_padic(&self) -> Result<PadicNumber> {
        let p = self.unit.p();
        let q = p - 1;
        if !self.e.is_multiple_of(q) {
            return Err(Error::PiExponent {
                exponent: self.e,
                modulus: q,
            });
        }
        let s = self.e / q;
        let v = self.unit.shift(s as i32);
        Ok(if s % 2 == 1 { v.neg() } else { v })
    }
}

/// Evaluation route for [`GaussContext::c_p`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CpMode {
    Numeric,
    Padic,
    ViaSurface,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum CpValue {
    Exact(i128),
    Numeric(ComplexApprox),
}

impl fmt::Display for CpValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CpValue::Exact(v) => write!(f, "{v}"),
            CpValue::Numeric(z) => write!(f, "{z}"),
        }
    }
}

/// `Γ_p(k/(p-1))` for `k ∈ [0, p-2]` and `ω(g)^k`, both modulo `p^N`.
#[derive(Debug)]
pub struct PadicTables {
    pub n: u32,
    pub modulus: u64,
    pub gamma: Vec<u64>,
    pub teich: Vec<u64>,
}

/// A prime field with roots-of-unity tables and lazily built sum tables.
#[derive(Debug)]
pub struct GaussContext {
    field: PrimeField,
    zeta_p: Vec<Complex64>,
    zeta_q: Vec<Complex64>,
    gauss: OnceLock<Vec<ComplexApprox>>,
    padic: Mutex<HashMap<u32, Arc<PadicTables>>>,
}

fn roots(n: u64) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let (s, c) = (TAU * k as f64 / n as f64).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

impl GaussContext {
    pub fn new(p: u64) -> Result<Self> {
        Ok(Self::from_field(PrimeField::new(p)?))
    }

    pub fn from_field(field: PrimeField) -> Self {
        let p = field.p();
        GaussContext {
            zeta_p: roots(p),
            zeta_q: roots(p - 1),
            field,
            gauss: OnceLock::new(),
            padic: Mutex::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    fn q(&self) -> u64 {
        self.field.p() - 1
    }

    fn idx(&self, j: i64) -> u64 {
        j.rem_euclid(self.q() as i64) as u64
    }

    /// `ω^j(x)` as a table root, or zero at `x = 0`.
    pub fn char_value(&self, j: i64, x: u64) -> ComplexApprox {
        match self.field.dlog(x) {
            None => ComplexApprox::zero(),
            Some(k) => {
                let e = (self.idx(j) * k as u64) % self.q();
                ComplexApprox::root(self.zeta_q[e as usize])
            }
        }
    }

    /// `ω^j(-1) = (-1)^j`.
    pub fn sign_at_minus_one(&self, j: i64) -> i64 {
        if j.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// `g(ω^j) = Σ_x ω^j(x) ζ_p^x`, computed directly in `O(p)`.
    pub fn gauss_sum_numeric(&self, j: CharIndex) -> ComplexApprox {
        let (p, q) = (self.p(), self.q());
        let jj = j.get();
        let mut acc = ComplexApprox::zero();
        for x in 1..p {
            let k = self.field.dlog(x).expect("nonzero") as u64;
            let z = self.zeta_q[(jj * k % q) as usize] * self.zeta_p[x as usize];
            acc = acc.add(&ComplexApprox::new(z.re, z.im, 8.0 * f64::EPSILON));
        }
        acc
    }

    /// `g(ω^j)` for every `j`, built on first use.
    pub fn gauss_table(&self) -> &[ComplexApprox] {
        self.gauss.get_or_init(|| {
            (0..self.q())
                .map(|j| self.gauss_sum_numeric(CharIndex::new(j as i64, self.p())))
                .collect()
        })
    }

    /// `g(ω^j)` for any integer `j`, from the table.
    pub fn gauss(&self, j: i64) -> ComplexApprox {
        self.gauss_table()[self.idx(j) as usize]
    }

    /// `J(ω^{j1}, ω^{j2}) = Σ_y ω^{j1}(y) ω^{j2}(1-y)`.
    pub fn jacobi_sum_numeric(&self, j1: CharIndex, j2: CharIndex) -> ComplexApprox {
        let (p, q) = (self.p(), self.q());
        let mut acc = ComplexApprox::zero();
        for y in 2..p {
            let a = self.field.dlog(y).expect("nonzero") as u64;
            let b = self.field.dlog(p + 1 - y).expect("nonzero") as u64;
            let e = (j1.get() * a + j2.get() * b) % q;
            acc = acc.add(&ComplexApprox::root(self.zeta_q[e as usize]));
        }
        acc
    }

    /// Greene's binomial `(A choose B) = B(-1)/p · J(A, B̄)` with `A = ω^top`, `B = ω^bottom`.
    pub fn binomial(&self, top: CharIndex, bottom: CharIndex) -> ComplexApprox {
        let p = self.p();
        let j = self.jacobi_sum_numeric(top, bottom.inverse(p));
        j.scale(self.sign_at_minus_one(bottom.get() as i64) as f64 / p as f64)
    }

    /// Gamma values at `k/(p-1)` and Teichmüller powers modulo `p^N`, cached per `N`.
    pub fn padic_tables(&self, n: u32) -> Result<Arc<PadicTables>> {
        let mut cache = self.padic.lock().expect("padic cache poisoned");
        if let Some(t) = cache.get(&n) {
            return Ok(t.clone());
        }
        let (p, q) = (self.p(), self.q());
        let modulus = prime_power(p, n)?;
        let args: Vec<ZpRational> = (0..q as i64)
            .map(|k| ZpRational::new(k, q as i64))
            .collect();
        let table = gamma_p_batch(p, n, &args)?;
        let gamma = args
            .iter()
            .map(|x| table.residue(x))
            .collect::<Result<Vec<_>>>()?;
        let w = crate::padic::teichmuller_residue(p, self.field.generator(), n)?;
        let mut teich = Vec::with_capacity(q as usize);
        let mut acc = 1u64;
        for _ in 0..q {
            teich.push(acc);
            acc = mul_mod(acc, w, modulus);
        }
        let t = Arc::new(PadicTables {
            n,
            modulus,
            gamma,
            teich,
        });
        cache.insert(n, t.clone());
        Ok(t)
    }

    /// `ω(x)^k` modulo `p^N` for `x != 0`.
    pub fn teichmuller_power(&self, tables: &PadicTables, x: u64, k: i64) -> Option<u64> {
        let d = self.field.dlog(x)? as u64;
        let e = (d * self.idx(k)) % self.q();
        Some(tables.teich[e as usize])
    }

    /// `g(ω̄^j) = -π^j Γ_p(j/(p-1))` for `j ∈ [0, p-2]`.
    pub fn gauss_sum_padic(&self, j: CharIndex, n: u32) -> Result<GaussSumPadic> {
        let t = self.padic_tables(n)?;
        self.gauss_padic_from(&t, j.get())
    }

    fn gauss_padic_from(&self, t: &PadicTables, j: u64) -> Result<GaussSumPadic> {
        let g = t.gamma[j as usize];
        let unit = PadicNumber::from_parts(self.p(), t.n, 0, (t.modulus - g) % t.modulus)?;
        Ok(GaussSumPadic { e: j, unit })
    }

    /// Smallest precision for which `C_p` decodes exactly.
    pub fn c_p_precision(&self) -> u32 {
        let p = self.p() as u128;
        let bound = 2 * c_p_bound(self.p());
        let mut n = 1;
        while p.pow(n) <= bound {
            n += 1;
        }
        n
    }

    pub fn c_p(&self, lambda_arg: u64, mode: CpMode) -> Result<CpValue> {
        match mode {
            CpMode::Numeric => Ok(CpValue::Numeric(self.c_p_numeric(lambda_arg))),
            CpMode::Padic => Ok(CpValue::Exact(self.c_p_padic(lambda_arg, None)?)),
            CpMode::ViaSurface => Ok(CpValue::Exact(self.c_p_via_surface(lambda_arg)?)),
        }
    }

    /// `Σ_j g(φω̄^{2j}) g(ω^j)³ g(φω̄^j) ω̄^j(λ)` in complex arithmetic.
    pub fn c_p_numeric(&self, lambda_arg: u64) -> ComplexApprox {
        let h = (self.q() / 2) as i64;
        let mut acc = ComplexApprox::zero();
        for j in 0..self.q() as i64 {
            let w = self.char_value(-j, lambda_arg);
            if w.abs() == 0.0 {
                continue;
            }
            let term = self
                .gauss(h - 2 * j)
                .mul(&self.gauss(j).powi(3))
                .mul(&self.gauss(h - j))
                .mul(&w);
            acc = acc.add(&term);
        }
        acc
    }

    /// `C_p(λ)` as an exact integer via Gross–Koblitz.
    ///
    /// `precision` defaults to [`c_p_precision`](Self::c_p_precision).
    pub fn c_p_padic(&self, lambda_arg: u64, precision: Option<u32>) -> Result<i128> {
        let n = precision.unwrap_or_else(|| self.c_p_precision());
        self.c_p_padic_value(lambda_arg, n)?
            .to_integer(c_p_bound(self.p()))
    }

    /// `C_p(λ)` as a p-adic number with units known modulo `p^N`.
    ///
    /// Every term's total `π`-exponent must be a multiple of `p-1`.
    pub fn c_p_padic_value(&self, lambda_arg: u64, n: u32) -> Result<PadicNumber> {
        let p = self.p();
        let q = self.q() as i64;
        let h = q / 2;
        let mut acc = PadicNumber::zero(p);
        if lambda_arg.is_multiple_of(p) {
            return Ok(acc);
        }
        let t = self.padic_tables(n)?;
        for j in 0..q {
            // g(ω^a) = g(ω̄^{-a}).
            let g1 = self.gauss_padic_from(&t, (2 * j - h).rem_euclid(q) as u64)?;
            let g2 = self.gauss_padic_from(&t, (-j).rem_euclid(q) as u64)?;
            let g3 = self.gauss_padic_from(&t, (j - h).rem_euclid(q) as u64)?;
            let prod = g1.mul(&g2)?.mul(&g2)?.mul(&g2)?.mul(&g3)?;
            let w = self
                .teichmuller_power(&t, lambda_arg, -j)
                .expect("nonzero argument");
            let w = PadicNumber::from_parts(p, n, 0, w)?;
            acc = acc.add(&prod.to_padic()?.mul(&w)?)?;
        }
        Ok(acc)
    }

    /// `-φ(-1) p (p-1) A_p(λ)` for the roots `λ` of `λarg = (1-λ)/λ²`.
    pub fn c_p_via_surface(&self, lambda_arg: u64) -> Result<i128> {
        let f = &self.field;
        let p = self.p();
        let a = lambda_arg % p;
        if a == 0 {
            return Err(Error::Precondition(
                "λarg = 0 corresponds to λ = 1, where the surface relation does not apply".into(),
            ));
        }
        // a λ² + λ - 1 = 0.
        let disc = f.add(1, f.mul(4, a));
        let roots = f.sqrt(disc);
        if roots.is_empty() {
            return Err(Error::Precondition(format!(
                "λarg = {a} is not of the form (1-λ)/λ² over F_{p}"
            )));
        }
        let inv2a = f.inv(f.mul(2, a)).expect("nonzero");
        let scale = -(f.phi(-1) as i128) * (p as i128) * (p as i128 - 1);
        let mut value = None;
        for r in roots {
            let lam = f.mul(f.sub(r, 1), inv2a);
            let v = scale * surface_a_direct(f, lam)? as i128;
            match value {
                None => value = Some(v),
                Some(w) if w != v => {
                    return Err(Error::Precondition(format!(
                        "roots of (1-λ)/λ² = {a} give different values {w} and {v}"
                    )))
                }
                _ => {}
            }
        }
        Ok(value.expect("at least one root"))
    }

    /// `g(χ) g(χ̄) = p χ(-1) - (p-1) δ(χ)` for `χ = ω^j`.
    pub fn gauss_inverse_check(&self, j: CharIndex) -> Check {
        let jj = j.get() as i64;
        let lhs = self.gauss(jj).mul(&self.gauss(-jj));
        let delta = if j.is_trivial() { 1 } else { 0 };
        let p = self.p() as i64;
        let rhs = p * self.sign_at_minus_one(jj) - (p - 1) * delta;
        let ok = lhs.matches_real(rhs as f64);
        Check::new("gauss_inverse", format!("p={p} j={jj}"), lhs, rhs, ok)
    }

    /// `J(χ1, χ2) = g(χ1) g(χ2) / g(χ1χ2) + (p-1) χ2(-1) δ(χ1χ2)`.
    pub fn gauss_jacobi_check(&self, j1: CharIndex, j2: CharIndex) -> Check {
        let (a, b) = (j1.get() as i64, j2.get() as i64);
        let lhs = self.jacobi_sum_numeric(j1, j2);
        let mut rhs = self.gauss(a).mul(&self.gauss(b)).div(&self.gauss(a + b));
        if self.idx(a + b) == 0 {
            let c = (self.p() as i64 - 1) * self.sign_at_minus_one(b);
            rhs = rhs.add(&ComplexApprox::exact(c as f64));
        }
        let tol = lhs.err + rhs.err;
        let diff = (lhs.value() - rhs.value()).norm();
        let ok = diff <= (1e-6 * rhs.abs()).max(tol);
        Check::new(
            "gauss_jacobi",
            format!("p={} j1={a} j2={b}", self.p()),
            lhs,
            rhs,
            ok,
        )
    }

    /// `g(ω̄^j) g(ω̄^{p-1-j})`, exchanged for `-p` times units, equals `p ω^j(-1)` for `j != 0`.
    pub fn gross_koblitz_check(&self, j: CharIndex, n: u32) -> Result<Check> {
        let p = self.p();
        let jj = j.get();
        let partner = CharIndex::new(-(jj as i64), p);
        let prod = self
            .gauss_sum_padic(j, n)?
            .mul(&self.gauss_sum_padic(partner, n)?)?;
        let rhs = if jj == 0 {
            1
        } else {
            p as i128 * self.sign_at_minus_one(jj as i64) as i128
        };
        let lhs = prod.to_padic()?.to_integer(p as u128)?;
        Ok(Check::equal(
            "gross_koblitz_pair",
            format!("p={p} N={n} j={jj}"),
            lhs,
            rhs,
        ))
    }
}

/// `|C_p(λ)| <= 3 p² (p-1)`.
pub fn c_p_bound(p: u64) -> u128 {
    3 * (p as u128) * (p as u128) * (p as u128 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::primes_between;

    #[test]
    fn gauss_sum_examples() {
        let ctx = GaussContext::new(5).unwrap();
        assert!(ctx
            .gauss_sum_numeric(CharIndex::trivial())
            .matches_real(-1.0));
        let g = ctx.gauss_sum_numeric(CharIndex::quadratic(5));
        assert!(g.matches_real(5f64.sqrt()), "{g}");
        for p in [7u64, 13, 101] {
            let ctx = GaussContext::new(p).unwrap();
            for j in 1..p - 1 {
                let g = ctx.gauss(j as i64);
                assert!((g.abs().powi(2) - p as f64).abs() <= 10.0 * g.err * g.abs() + 1e-9);
            }
        }
    }

    #[test]
    fn jacobi_examples() {
        for p in [5u64, 7, 11, 13] {
            let ctx = GaussContext::new(p).unwrap();
            let t = CharIndex::trivial();
            assert!(ctx.jacobi_sum_numeric(t, t).matches_real(p as f64 - 2.0));
            for a in 1..p - 1 {
                for b in 1..p - 1 {
                    if (a + b) % (p - 1) == 0 {
                        continue;
                    }
                    let j = ctx.jacobi_sum_numeric(
                        CharIndex::new(a as i64, p),
                        CharIndex::new(b as i64, p),
                    );
                    assert!((j.abs() - (p as f64).sqrt()).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn gauss_identities() {
        for p in primes_between(5, 47) {
            let ctx = GaussContext::new(p).unwrap();
            for a in 0..p - 1 {
                let ca = CharIndex::new(a as i64, p);
                assert!(ctx.gauss_inverse_check(ca).passed);
                for b in 0..p - 1 {
                    let c = ctx.gauss_jacobi_check(ca, CharIndex::new(b as i64, p));
                    assert!(c.passed, "{c:?}");
                }
            }
        }
    }

    #[test]
    fn padic_gauss_sums() {
        let ctx = GaussContext::new(5).unwrap();
        let g0 = ctx.gauss_sum_padic(CharIndex::trivial(), 3).unwrap();
        assert_eq!(g0.e, 0);
        assert_eq!(g0.unit.to_integer(10).unwrap(), -1);
        let gphi = ctx.gauss_sum_padic(CharIndex::quadratic(5), 3).unwrap();
        let sq = gphi.mul(&gphi).unwrap().to_padic().unwrap();
        assert_eq!(sq.to_integer(10).unwrap(), 5);
        assert!(matches!(gphi.to_padic(), Err(Error::PiExponent { .. })));
        for p in [5u64, 7, 11, 13, 31] {
            let ctx = GaussContext::new(p).unwrap();
            for j in 0..p - 1 {
                let c = ctx
                    .gross_koblitz_check(CharIndex::new(j as i64, p), 3)
                    .unwrap();
                assert!(c.passed, "{c:?}");
            }
        }
    }

    #[test]
    fn c_p_modes_agree() {
        for p in [5u64, 7, 11, 13] {
            let ctx = GaussContext::new(p).unwrap();
            for a in 0..p {
                let exact = ctx.c_p_padic(a, None).unwrap();
                let num = ctx.c_p_numeric(a);
                assert!(
                    num.matches_real(exact as f64),
                    "p={p} a={a}: {num} vs {exact}"
                );
                assert!(exact.unsigned_abs() <= c_p_bound(p));
                if a == 0 {
                    assert_eq!(exact, 0);
                    assert!(ctx.c_p_via_surface(a).is_err());
                    continue;
                }
                match ctx.c_p_via_surface(a) {
                    Ok(v) => assert_eq!(v, exact, "p={p} a={a}"),
                    Err(Error::Precondition(_)) => {
                        let disc = (1 + 4 * a) % p;
                        assert_eq!(ctx.field().quadratic_char(disc), -1);
                    }
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn c_p_at_higher_precision_is_stable() {
        let ctx = GaussContext::new(7).unwrap();
        for a in 1..7 {
            let base = ctx.c_p_padic(a, None).unwrap();
            assert_eq!(ctx.c_p_padic(a, Some(6)).unwrap(), base);
        }
        assert!(matches!(
            ctx.c_p_padic(3, Some(2)),
            Err(Error::InsufficientPrecision(_)) | Err(Error::NotIntegral(_))
        ));
    }
}
