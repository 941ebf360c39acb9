use std::fmt;

use serde::Serialize;

use super::rational::ZpRational;
use crate::error::{Error, Result};

/// `p^n`, or an error when it does not fit in 63 bits.
pub fn prime_power(p: u64, n: u32) -> Result<u64> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc
            .checked_mul(p)
            .filter(|&v| v < (1 << 63))
            .ok_or(Error::ModulusTooLarge { p, n })?;
    }
    Ok(acc)
}

fn pow_u128(p: u64, n: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(p as u128)?;
    }
    Some(acc)
}

/// Inverse of `a` modulo `m` for `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// `v_p(x)` and the cofactor, for `x != 0`.
fn split_valuation(mut x: u128, p: u64) -> (u32, u128) {
    let mut v = 0;
    while x.is_multiple_of(p as u128) {
        x /= p as u128;
        v += 1;
    }
    (v, x)
}

/// A p-adic number `p^val * unit`, with the unit known modulo `p^prec`.
///
/// Zero is a distinguished marker and carries no digits. Precision is
/// relative: adding two numbers with equal leading digits drops the
/// cancelled digits from `prec`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PadicNumber {
    p: u64,
    /// `None` is the zero marker.
    val: Option<i32>,
    unit: u64,
    prec: u32,
}

impl PadicNumber {
    pub fn zero(p: u64) -> Self {
        PadicNumber {
            p,
            val: None,
            unit: 0,
            prec: 0,
        }
    }

    /// Builds `p^val * unit` after stripping any factors of `p` from `unit`.
    pub fn from_parts(p: u64, prec: u32, val: i32, unit: u64) -> Result<Self> {
        let m = prime_power(p, prec)?;
        let u = unit % m;
        if u == 0 {
            return Ok(Self::zero(p));
        }
        let (k, u) = split_valuation(u as u128, p);
        Ok(PadicNumber {
            p,
            val: Some(val + k as i32),
            unit: u as u64,
            prec: prec - k,
        })
    }

    pub fn from_int(p: u64, prec: u32, x: i128) -> Result<Self> {
        if x == 0 {
            return Ok(Self::zero(p));
        }
        let (v, u) = split_valuation(x.unsigned_abs(), p);
        let m = prime_power(p, prec)?;
        let mut u = (u % m as u128) as u64;
        if x < 0 {
            u = (m - u) % m;
        }
        Ok(PadicNumber {
            p,
            val: Some(v as i32),
            unit: u,
            prec,
        })
    }

    pub fn from_rational(p: u64, prec: u32, x: &ZpRational) -> Result<Self> {
        if !x.in_zp(p) {
            return Err(Error::NotInZp(x.to_string(), p));
        }
        let num = Self::from_int(p, prec, x.numer() as i128)?;
        let den = Self::from_int(p, prec, x.denom() as i128)?;
        num.div(&den)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_none()
    }

    /// Valuation; `None` for the zero marker.
    pub fn valuation(&self) -> Option<i32> {
        self.val
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    /// Relative precision in base-`p` digits.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Absolute precision `val + prec`; `None` for zero.
    pub fn absolute_precision(&self) -> Option<i32> {
        self.val.map(|v| v + self.prec as i32)
    }

    fn check_same_prime(&self, o: &Self) -> Result<()> {
        if self.p != o.p {
            return Err(Error::PadicMismatch(format!(
                "primes {} and {}",
                self.p, o.p
            )));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        match self.val {
            None => *self,
            Some(_) => {
                let m = prime_power(self.p, self.prec).expect("existing modulus");
                PadicNumber {
                    unit: (m - self.unit) % m,
                    ..*self
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same_prime(o)?;
        let (va, vb) = match (self.val, o.val) {
            (None, _) => return Ok(*o),
            (_, None) => return Ok(*self),
            (Some(a), Some(b)) => (a, b),
        };
        let p = self.p;
        let abs = (va + self.prec as i32).min(vb + o.prec as i32);
        let v = va.min(vb);
        let digits = (abs - v) as u32;
        let m = prime_power(p, digits)?;
        let shifted = |unit: u64, shift: i32| -> Result<u64> {
            if shift as u32 >= digits {
                return Ok(0);
            }
            let scale = prime_power(p, shift as u32)?;
            Ok(mul_mod(unit % m, scale, m))
        };
        let s = (shifted(self.unit, va - v)? + shifted(o.unit, vb - v)?) % m;
        if s == 0 {
            return Ok(Self::zero(p));
        }
        let (k, u) = split_valuation(s as u128, p);
        Ok(PadicNumber {
            p,
            val: Some(v + k as i32),
            unit: u as u64,
            prec: digits - k,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_same_prime(o)?;
        match (self.val, o.val) {
            (Some(va), Some(vb)) => {
                let prec = self.prec.min(o.prec);
                let m = prime_power(self.p, prec)?;
                Ok(PadicNumber {
                    p: self.p,
                    val: Some(va + vb),
                    unit: mul_mod(self.unit % m, o.unit % m, m),
                    prec,
                })
            }
            _ => Ok(Self::zero(self.p)),
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.check_same_prime(o)?;
        let vb = o.val.ok_or(Error::DivisionByZero)?;
        match self.val {
            None => Ok(*self),
            Some(va) => {
                let prec = self.prec.min(o.prec);
                let m = prime_power(self.p, prec)?;
                let inv = inv_mod(o.unit % m, m).expect("units are invertible");
                Ok(PadicNumber {
                    p: self.p,
                    val: Some(va - vb),
                    unit: mul_mod(self.unit % m, inv, m),
                    prec,
                })
            }
        }
    }

    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i32) -> Self {
        match self.val {
            None => *self,
            Some(v) => PadicNumber {
                val: Some(v + k),
                ..*self
            },
        }
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 {
            Self::from_int(self.p, self.prec.max(1), 1)?.div(self)?
        } else {
            *self
        };
        let mut e = e.unsigned_abs();
        let mut acc = Self::from_int(self.p, self.prec.max(1), 1)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// True when `self - o` vanishes to the precision both operands carry.
    pub fn congruent(&self, o: &Self) -> Result<bool> {
        Ok(self.sub(o)?.is_zero())
    }

    /// Decodes the integer `V` with `|V| <= bound` that this number represents.
    ///
    /// The residue is lifted to the balanced range `(-M/2, M/2]`, where
    /// `M = p^(val + prec)`; fails when `M <= 2 * bound` or when the value
    /// has negative valuation.
    pub fn to_integer(&self, bound: u128) -> Result<i128> {
        let (v, prec) = match self.val {
            None => return Ok(0),
            Some(v) => (v, self.prec),
        };
        if v < 0 {
            return Err(Error::NotIntegral(format!(
                "valuation {v} < 0 for p = {}",
                self.p
            )));
        }
        let scale = match pow_u128(self.p, v as u32) {
            Some(s) if s <= bound => s,
            _ => {
                return Err(Error::NotIntegral(format!(
                    "p^{v} exceeds the bound {bound}"
                )))
            }
        };
        let modulus = pow_u128(self.p, v as u32 + prec)
            .ok_or_else(|| Error::InsufficientPrecision("modulus overflow".into()))?;
        if modulus <= 2 * bound {
            return Err(Error::InsufficientPrecision(format!(
                "modulus p^{} = {modulus} cannot resolve |V| <= {bound}",
                v as u32 + prec
            )));
        }
        let r = scale * self.unit as u128 % modulus;
        let x = if r > modulus / 2 {
            r as i128 - modulus as i128
        } else {
            r as i128
        };
        if x.unsigned_abs() > bound {
            return Err(Error::NotIntegral(format!(
                "balanced residue {x} exceeds the bound {bound}"
            )));
        }
        Ok(x)
    }

    /// Like [`to_integer`](Self::to_integer), but also reports how close the
    /// decoded value sits to the balanced-residue boundary, as a fraction of `M/2`.
    pub fn to_integer_with_margin(&self, bound: u128) -> Result<(i128, f64)> {
        let x = self.to_integer(bound)?;
        let half = match self.absolute_precision() {
            None => return Ok((0, 0.0)),
            Some(a) => pow_u128(self.p, a as u32).map(|m| m as f64 / 2.0),
        };
        Ok((x, half.map_or(0.0, |h| x.unsigned_abs() as f64 / h)))
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.val {
            None => write!(f, "0"),
            Some(v) => write!(
                f,
                "{}^{} * {} (mod {}^{})",
                self.p, v, self.unit, self.p, self.prec
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cancellation_to_zero() {
        let one = PadicNumber::from_int(5, 4, 1).unwrap();
        let minus = PadicNumber::from_int(5, 4, -1).unwrap();
        assert!(one.add(&minus).unwrap().is_zero());
    }

    #[test]
    fn partial_cancellation_loses_digits() {
        let a = PadicNumber::from_int(5, 4, 1).unwrap();
        let b = PadicNumber::from_int(5, 4, 24).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.valuation(), Some(2));
        assert_eq!(s.precision(), 2);
        assert_eq!(s.unit(), 1);
    }

    #[test]
    fn valuations_add() {
        let a = PadicNumber::from_parts(7, 3, 1, 1).unwrap();
        let b = PadicNumber::from_parts(7, 3, 2, 1).unwrap();
        let c = a.mul(&b).unwrap();
        assert_eq!(c.valuation(), Some(3));
        assert_eq!(c.unit(), 1);
    }

    #[test]
    fn geometric_series() {
        // 1/(1-p) = 1 + p + p^2 + ... ; with N = 4 digits, 1 + 5 + 25 + 125 = 156.
        let one = PadicNumber::from_int(5, 4, 1).unwrap();
        let d = PadicNumber::from_int(5, 4, 1 - 5).unwrap();
        let q = one.div(&d).unwrap();
        assert_eq!(q.valuation(), Some(0));
        assert_eq!(q.unit(), 156);
    }

    #[test]
    fn division_by_zero() {
        let one = PadicNumber::from_int(5, 3, 1).unwrap();
        assert_eq!(one.div(&PadicNumber::zero(5)), Err(Error::DivisionByZero));
    }

    #[test]
    fn mixed_primes_rejected() {
        let a = PadicNumber::from_int(5, 3, 1).unwrap();
        let b = PadicNumber::from_int(7, 3, 1).unwrap();
        assert!(matches!(a.add(&b), Err(Error::PadicMismatch(_))));
    }

    #[test]
    fn rational_requires_zp() {
        let r = PadicNumber::from_rational(5, 3, &ZpRational::new(1, 10));
        assert!(matches!(r, Err(Error::NotInZp(_, 5))));
        let half = PadicNumber::from_rational(5, 3, &ZpRational::new(1, 2)).unwrap();
        assert_eq!(half.unit(), 63);
    }

    #[test]
    fn decode_balanced() {
        let x = PadicNumber::from_int(7, 3, -21).unwrap();
        assert_eq!(x.to_integer(100).unwrap(), -21);
        assert!(matches!(
            x.to_integer(2000),
            Err(Error::InsufficientPrecision(_))
        ));
        let y = PadicNumber::from_parts(7, 3, -1, 3).unwrap();
        assert!(matches!(y.to_integer(10), Err(Error::NotIntegral(_))));
    }

    proptest! {
        #[test]
        fn integer_ring_ops(a in -10_000i64..10_000, b in -10_000i64..10_000, pi in 0usize..3) {
            let (p, n) = [(5u64, 13u32), (7, 11), (13, 9)][pi];
            let pa = PadicNumber::from_int(p, n, a as i128).unwrap();
            let pb = PadicNumber::from_int(p, n, b as i128).unwrap();
            let bound = 100_000_000u128;
            let sum = pa.add(&pb).unwrap();
            if !sum.is_zero() {
                prop_assert_eq!(sum.to_integer(bound).unwrap(), (a + b) as i128);
            } else {
                prop_assert_eq!(a + b, 0);
            }
            let prod = pa.mul(&pb).unwrap();
            if a != 0 && b != 0 {
                prop_assert_eq!(prod.to_integer(bound).unwrap(), (a as i128) * (b as i128));
            }
            if b != 0 {
                let q = pa.mul(&pb).unwrap().div(&pb).unwrap();
                prop_assert!(q.congruent(&pa).unwrap());
            }
        }
    }
}
