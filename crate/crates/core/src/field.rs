//! Prime-field context: discrete-log and quadratic-character tables.
//!
//! Multiplicative characters of `F_p` are handled by exponent. With `g` the
//! chosen primitive root, the Teichmüller character `ω` sends `g` to a fixed
//! generator of the `(p-1)`-th roots of unity, so `ω^j(x)` is determined by
//! `j * dlog(x) mod (p-1)`. Complex or p-adic values are only produced where a
//! sum needs them.

use crate::error::{Error, Result};

/// Index `j` of the character `ω^j`, reduced into `[0, p-2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharIndex(u64);

impl CharIndex {
    /// Reduces an arbitrary integer exponent modulo `p - 1`.
    pub fn new(j: i64, p: u64) -> Self {
        CharIndex(j.rem_euclid((p - 1) as i64) as u64)
    }

    pub fn trivial() -> Self {
        CharIndex(0)
    }

    /// The quadratic character `φ = ω^((p-1)/2)`.
    pub fn quadratic(p: u64) -> Self {
        CharIndex((p - 1) / 2)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn is_trivial(self) -> bool {
        self.0 == 0
    }

    pub fn inverse(self, p: u64) -> Self {
        CharIndex::new(-(self.0 as i64), p)
    }

    pub fn mul(self, other: CharIndex, p: u64) -> Self {
        CharIndex((self.0 + other.0) % (p - 1))
    }

    /// Order of `ω^j` in the character group: `(p-1) / gcd(j, p-1)`.
    pub fn order(self, p: u64) -> u64 {
        (p - 1) / gcd(self.0, p - 1)
    }
}

/// Immutable tables for one odd prime `p >= 5`.
#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u64,
    g: u64,
    dlog: Vec<u32>,
    powers: Vec<u32>,
    quad: Vec<i8>,
}

const NO_LOG: u32 = u32::MAX;

impl PrimeField {
    /// Builds the tables for `p`. Rejects composites and `p < 5`.
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 {
            return Err(Error::PrimeTooSmall(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > u32::MAX as u64 {
            return Err(Error::PrimeTooLarge(p));
        }
        let g = primitive_root(p);
        let mut dlog = vec![NO_LOG; p as usize];
        let mut powers = Vec::with_capacity((p - 1) as usize);
        let mut x = 1u64;
        for k in 0..(p - 1) {
            dlog[x as usize] = k as u32;
            powers.push(x as u32);
            x = x * g % p;
        }
        let quad = dlog
            .iter()
            .map(|&k| match k {
                NO_LOG => 0,
                k if k % 2 == 0 => 1,
                _ => -1,
            })
            .collect();
        Ok(PrimeField {
            p,
            g,
            dlog,
            powers,
            quad,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The primitive root all discrete logs are taken to.
    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Canonical representative of an integer in `[0, p)`.
    #[inline]
    pub fn elem(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    /// Multiplicative inverse via the log tables; `None` at zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let k = self.dlog(a)?;
        let m = (self.p - 1) as u32;
        Some(self.powers[((m - k) % m) as usize] as u64)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a % self.p, e, self.p)
    }

    /// `dlog_g(x)` in `[0, p-2]`, or `None` for `x = 0`.
    #[inline]
    pub fn dlog(&self, x: u64) -> Option<u32> {
        match self.dlog[(x % self.p) as usize] {
            NO_LOG => None,
            k => Some(k),
        }
    }

    /// `g^k` for any `k`.
    #[inline]
    pub fn exp(&self, k: u64) -> u64 {
        self.powers[(k % (self.p - 1)) as usize] as u64
    }

    /// Legendre symbol `(x | p)`, with `φ(0) = 0`.
    #[inline]
    pub fn quadratic_char(&self, x: u64) -> i8 {
        self.quad[(x % self.p) as usize]
    }

    /// `φ` evaluated at a signed integer.
    #[inline]
    pub fn phi(&self, x: i64) -> i64 {
        self.quadratic_char(self.elem(x)) as i64
    }

    pub fn quadratic_table(&self) -> &[i8] {
        &self.quad
    }

    /// Exponent `e` with `ω^j(x) = ζ_{p-1}^e`; `None` encodes the value 0 at `x = 0`.
    #[inline]
    pub fn char_exponent(&self, j: CharIndex, x: u64) -> Option<u64> {
        self.dlog(x).map(|k| (j.get() * k as u64) % (self.p - 1))
    }

    /// Square roots of `a`, smallest first. Empty when `a` is a non-residue.
    pub fn sqrt(&self, a: u64) -> Vec<u64> {
        let a = a % self.p;
        if a == 0 {
            return vec![0];
        }
        match self.dlog(a) {
            Some(k) if k % 2 == 0 => {
                let r = self.exp((k / 2) as u64);
                let s = self.neg(r);
                vec![r.min(s), r.max(s)]
            }
            _ => Vec::new(),
        }
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut b = (base % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc as u64
}

/// Deterministic trial division; the desk-scale primes here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest primitive root, found by trial over 2, 3, 4, ...
pub fn primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// Primes in `[lo, hi]` that are at least 5.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(5)..=hi).filter(|&n| is_prime(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn p5_tables() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.generator(), 2);
        assert_eq!(f.dlog(4), Some(2));
        assert_eq!(f.dlog(0), None);
    }

    #[test]
    fn p7_quadratic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.quadratic_char(2), 1);
        assert_eq!(f.quadratic_char(3), -1);
        assert_eq!(f.quadratic_char(0), 0);
        assert_eq!(f.quadratic_char(1), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(PrimeField::new(9), Err(Error::NotPrime(9))));
        assert!(matches!(PrimeField::new(3), Err(Error::PrimeTooSmall(3))));
        assert!(matches!(PrimeField::new(2), Err(Error::PrimeTooSmall(2))));
        let msg = PrimeField::new(9).unwrap_err().to_string();
        assert!(msg.contains('9'));
    }

    #[test]
    fn tables_hold_for_small_primes() {
        for p in primes_between(5, 500) {
            let f = PrimeField::new(p).unwrap();
            let mut seen = vec![false; (p - 1) as usize];
            for x in 1..p {
                let k = f.dlog(x).unwrap() as u64;
                assert_eq!(pow_mod(f.generator(), k, p), x);
                assert!(!seen[k as usize]);
                seen[k as usize] = true;
            }
            let total: i64 = f.quadratic_table().iter().map(|&q| q as i64).sum();
            assert_eq!(total, 0);
            for x in 0..p {
                let euler = pow_mod(x, (p - 1) / 2, p);
                let expected = match euler {
                    0 => 0,
                    1 => 1,
                    e if e == p - 1 => -1,
                    _ => unreachable!(),
                };
                assert_eq!(f.quadratic_char(x), expected, "p={p} x={x}");
            }
        }
    }

    #[test]
    fn character_orthogonality() {
        for p in [5u64, 7, 11, 13, 31, 101] {
            let f = PrimeField::new(p).unwrap();
            for x in 1..p {
                let (mut re, mut im) = (0.0f64, 0.0f64);
                for j in 0..p - 1 {
                    let e = f.char_exponent(CharIndex::new(j as i64, p), x).unwrap();
                    let th = std::f64::consts::TAU * e as f64 / (p - 1) as f64;
                    re += th.cos();
                    im += th.sin();
                }
                let target = if x == 1 { (p - 1) as f64 } else { 0.0 };
                assert!((re - target).abs() < 1e-8 * (p - 1) as f64);
                assert!(im.abs() < 1e-8 * (p - 1) as f64);
            }
        }
    }

    #[test]
    fn char_exponent_edges() {
        let f = PrimeField::new(13).unwrap();
        for j in 0..12 {
            assert_eq!(f.char_exponent(CharIndex::new(j, 13), 1), Some(0));
            assert_eq!(f.char_exponent(CharIndex::new(j, 13), 0), None);
        }
        for x in 1..13 {
            assert_eq!(f.char_exponent(CharIndex::trivial(), x), Some(0));
        }
        assert_eq!(CharIndex::quadratic(13).order(13), 2);
        assert_eq!(CharIndex::new(4, 13).order(13), 3);
        assert_eq!(CharIndex::new(-1, 13).get(), 11);
    }

    #[test]
    fn sqrt_roots() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.sqrt(2), vec![3, 4]);
        assert!(f.sqrt(3).is_empty());
        assert_eq!(f.inv(3), Some(5));
        assert_eq!(f.inv(0), None);
    }

    proptest! {
        #[test]
        fn exponent_is_multiplicative(pi in 0usize..6, x in 1u64..1000, y in 1u64..1000, j in 0i64..1000) {
            let p = [5u64, 7, 13, 101, 499, 997][pi];
            let f = PrimeField::new(p).unwrap();
            let (x, y) = (x % p, y % p);
            prop_assume!(x != 0 && y != 0);
            let j = CharIndex::new(j, p);
            let lhs = f.char_exponent(j, f.mul(x, y)).unwrap();
            let rhs = (f.char_exponent(j, x).unwrap() + f.char_exponent(j, y).unwrap()) % (p - 1);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
