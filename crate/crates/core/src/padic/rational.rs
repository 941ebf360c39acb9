use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Zero};

/// An exact rational number, reduced, with positive denominator.
///
/// Membership in `Z_p` is a property relative to a prime; see [`ZpRational::in_zp`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZpRational(Ratio<i64>);

impl ZpRational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        ZpRational(Ratio::new(numer, denom))
    }

    pub fn integer(n: i64) -> Self {
        ZpRational(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        ZpRational(Ratio::zero())
    }

    pub fn one() -> Self {
        ZpRational(Ratio::one())
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn in_zp(&self, p: u64) -> bool {
        self.denom() % p as i64 != 0
    }

    /// `⌊x⌋`.
    pub fn floor_part(&self) -> i64 {
        self.numer().div_euclid(self.denom())
    }

    /// `⟨x⟩ = x - ⌊x⌋`, in `[0, 1)`.
    pub fn frac_part(&self) -> ZpRational {
        ZpRational(self.0 - Ratio::from_integer(self.floor_part()))
    }

    pub fn is_integer(&self) -> bool {
        self.denom() == 1
    }
}

impl Add for ZpRational {
    type Output = ZpRational;
    fn add(self, o: ZpRational) -> ZpRational {
        ZpRational(self.0 + o.0)
    }
}

impl Sub for ZpRational {
    type Output = ZpRational;
    fn sub(self, o: ZpRational) -> ZpRational {
        ZpRational(self.0 - o.0)
    }
}

impl Mul for ZpRational {
    type Output = ZpRational;
    fn mul(self, o: ZpRational) -> ZpRational {
        ZpRational(self.0 * o.0)
    }
}

impl Neg for ZpRational {
    type Output = ZpRational;
    fn neg(self) -> ZpRational {
        ZpRational(-self.0)
    }
}

impl fmt::Display for ZpRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_and_frac() {
        let x = ZpRational::new(-1, 6);
        assert_eq!(x.floor_part(), -1);
        assert_eq!(x.frac_part(), ZpRational::new(5, 6));

        let y = ZpRational::new(11, 12);
        assert_eq!(y.floor_part(), 0);
        assert_eq!(y.frac_part(), y);

        let z = ZpRational::new(7, 3);
        assert_eq!(z.floor_part(), 2);
        assert_eq!(z.frac_part(), ZpRational::new(1, 3));

        assert_eq!(ZpRational::integer(-4).frac_part(), ZpRational::zero());
        assert_eq!(ZpRational::new(4, -6), ZpRational::new(-2, 3));
    }

    #[test]
    fn zp_membership() {
        assert!(ZpRational::new(1, 12).in_zp(7));
        assert!(!ZpRational::new(1, 14).in_zp(7));
        assert!(ZpRational::new(3, 5).in_zp(7));
    }
}
