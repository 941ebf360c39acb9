//! Morita's p-adic gamma function, evaluated in batches by one sweep over `1..=p^N`.

use std::collections::HashMap;

use super::montgomery::Montgomery;
use super::number::{inv_mod, mul_mod, prime_power, PadicNumber};
use super::rational::ZpRational;
use super::teichmuller;
use crate::check::Check;
use crate::error::{Error, Result};

/// `Γ_p` values modulo `p^N` for a fixed argument set.
#[derive(Clone, Debug)]
pub struct GammaTable {
    p: u64,
    n: u32,
    values: HashMap<ZpRational, u64>,
}

impl GammaTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains(&self, x: &ZpRational) -> bool {
        self.values.contains_key(x)
    }

    /// The unit `Γ_p(x) mod p^N` as a residue.
    pub fn residue(&self, x: &ZpRational) -> Result<u64> {
        self.values
            .get(x)
            .copied()
            .ok_or_else(|| Error::Precondition(format!("Γ_p({x}) was not included in the batch")))
    }

    pub fn get(&self, x: &ZpRational) -> Result<PadicNumber> {
        PadicNumber::from_parts(self.p, self.n, 0, self.residue(x)?)
    }
}

/// The representative of `x` in `(0, p^N]`.
pub fn representative(p: u64, n: u32, x: &ZpRational) -> Result<u64> {
    if !x.in_zp(p) {
        return Err(Error::NotInZp(x.to_string(), p));
    }
    let m = prime_power(p, n)?;
    let num = (x.numer() as i128).rem_euclid(m as i128) as u64;
    let den = (x.denom() as i128).rem_euclid(m as i128) as u64;
    let r = mul_mod(num, inv_mod(den, m).expect("denominator is a unit"), m);
    Ok(if r == 0 { m } else { r })
}

/// Evaluates `Γ_p` at every argument modulo `p^N`.
///
/// Each argument is replaced by its representative `m ∈ (0, p^N]` and
/// `Γ_p(m) = (-1)^m ∏_{0<j<m, p∤j} j` is read off a single running product.
pub fn gamma_p_batch<'a, I>(p: u64, n: u32, args: I) -> Result<GammaTable>
where
    I: IntoIterator<Item = &'a ZpRational>,
{
    let modulus = prime_power(p, n)?;
    let mut targets: Vec<(u64, ZpRational)> = Vec::new();
    for x in args {
        targets.push((representative(p, n, x)?, *x));
    }
    targets.sort_unstable();
    targets.dedup();

    let mont = Montgomery::new(modulus);
    let mut values = HashMap::with_capacity(targets.len());
    // `prod` holds the product over 0 < j < cur with p ∤ j, in Montgomery form.
    let mut prod = mont.one();
    let mut j_mont = mont.one();
    let one = mont.one();
    let mut cur: u64 = 1;
    for (m, x) in targets {
        while cur < m {
            if !cur.is_multiple_of(p) {
                prod = mont.mul(prod, j_mont);
            }
            j_mont = mont.add(j_mont, one);
            cur += 1;
        }
        let mut v = mont.from_mont(prod);
        if m % 2 == 1 {
            v = (modulus - v) % modulus;
        }
        values.insert(x, v);
    }
    Ok(GammaTable { p, n, values })
}

/// `a_0(x) ∈ {1, ..., p}` with `a_0(x) ≡ x (mod p)`.
pub fn a0(p: u64, x: &ZpRational) -> Result<u64> {
    representative(p, 1, x)
}

fn sign(p: u64, n: u32, negative: bool) -> Result<PadicNumber> {
    PadicNumber::from_int(p, n, if negative { -1 } else { 1 })
}

fn product(table: &GammaTable, xs: &[ZpRational]) -> Result<PadicNumber> {
    let mut acc = PadicNumber::from_int(table.p, table.n, 1)?;
    for x in xs {
        acc = acc.mul(&table.get(x)?)?;
    }
    Ok(acc)
}

/// `Γ_p(x) Γ_p(1-x) = (-1)^{a_0(x)}` modulo `p^N`.
pub fn gamma_reflection_check(p: u64, n: u32, x: ZpRational) -> Result<Check> {
    let y = ZpRational::one() - x;
    let table = gamma_p_batch(p, n, [&x, &y])?;
    let lhs = table.get(&x)?.mul(&table.get(&y)?)?;
    let rhs = sign(p, n, a0(p, &x)? % 2 == 1)?;
    let ok = lhs.congruent(&rhs)?;
    Ok(Check::new(
        "gamma_reflection",
        format!("p={p} N={n} x={x}"),
        lhs,
        rhs,
        ok,
    ))
}

/// The multiplication formula
/// `∏_{h=0}^{m-1} Γ_p((x+h)/m) = ω(m^{(1-x)(1-p)}) Γ_p(x) ∏_{h=1}^{m-1} Γ_p(h/m)`
/// for `x = r/(p-1)`, `0 <= r <= p-1`.
pub fn gamma_multiplication_check(p: u64, n: u32, m: u64, x: ZpRational) -> Result<Check> {
    if m == 0 || m.is_multiple_of(p) {
        return Err(Error::Precondition(format!(
            "multiplication formula needs a positive m prime to p, got m = {m}"
        )));
    }
    let r = x * ZpRational::integer(p as i64 - 1);
    if !r.is_integer() || r.numer() < 0 || r.numer() > p as i64 - 1 {
        return Err(Error::Precondition(format!(
            "multiplication formula needs x = r/(p-1) with 0 <= r <= p-1, got x = {x}"
        )));
    }
    let mi = m as i64;
    let left: Vec<ZpRational> = (0..mi)
        .map(|h| (x + ZpRational::integer(h)) * ZpRational::new(1, mi))
        .collect();
    let right: Vec<ZpRational> = (1..mi).map(|h| ZpRational::new(h, mi)).collect();
    let all: Vec<ZpRational> = left.iter().chain(&right).chain([&x]).copied().collect();
    let table = gamma_p_batch(p, n, &all)?;
    // (1-x)(1-p) = r - (p-1), and ω has order p-1, so the character value is ω(m)^r.
    let w = teichmuller(p, m % p, n)?.pow(r.numer())?;
    let lhs = product(&table, &left)?;
    let rhs = w.mul(&table.get(&x)?)?.mul(&product(&table, &right)?)?;
    let ok = lhs.congruent(&rhs)?;
    Ok(Check::new(
        "gamma_multiplication",
        format!("p={p} N={n} m={m} x={x}"),
        lhs,
        rhs,
        ok,
    ))
}

/// The product formula
/// `ω(t^{-tj}) Γ_p(⟨-tj/(p-1)⟩) ∏_{h=1}^{t-1} Γ_p(h/t) = ∏_{h=1}^{t} Γ_p(⟨h/t - j/(p-1)⟩)`
/// for `0 <= j <= p-2`.
pub fn gamma_prod2_check(p: u64, n: u32, t: u64, j: u64) -> Result<Check> {
    if t == 0 || t.is_multiple_of(p) {
        return Err(Error::Precondition(format!(
            "product formula needs a positive t prime to p, got t = {t}"
        )));
    }
    if j > p - 2 {
        return Err(Error::Precondition(format!(
            "product formula needs 0 <= j <= p-2, got j = {j}"
        )));
    }
    let (ti, ji, q) = (t as i64, j as i64, p as i64 - 1);
    let head = ZpRational::new(-ti * ji, q).frac_part();
    let mids: Vec<ZpRational> = (1..ti).map(|h| ZpRational::new(h, ti)).collect();
    let rights: Vec<ZpRational> = (1..=ti)
        .map(|h| (ZpRational::new(h, ti) - ZpRational::new(ji, q)).frac_part())
        .collect();
    let all: Vec<ZpRational> = mids.iter().chain(&rights).chain([&head]).copied().collect();
    let table = gamma_p_batch(p, n, &all)?;
    let w = teichmuller(p, t % p, n)?.pow(-ti * ji)?;
    let lhs = w.mul(&table.get(&head)?)?.mul(&product(&table, &mids)?)?;
    let rhs = product(&table, &rights)?;
    let ok = lhs.congruent(&rhs)?;
    Ok(Check::new(
        "gamma_prod2",
        format!("p={p} N={n} t={t} j={j}"),
        lhs,
        rhs,
        ok,
    ))
}
