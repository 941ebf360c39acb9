use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

const EPS: f64 = f64::EPSILON;

/// A complex number together with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl ComplexApprox {
    pub fn new(re: f64, im: f64, err: f64) -> Self {
        debug_assert!(err >= 0.0);
        ComplexApprox { re, im, err }
    }

    pub fn exact(re: f64) -> Self {
        ComplexApprox::new(re, 0.0, 0.0)
    }

    pub fn zero() -> Self {
        Self::exact(0.0)
    }

    /// A table root of unity: `err` covers the library's `sin_cos` rounding.
    pub fn root(z: Complex64) -> Self {
        ComplexApprox::new(z.re, z.im, 4.0 * EPS)
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.value().norm()
    }

    pub fn conj(&self) -> Self {
        ComplexApprox::new(self.re, -self.im, self.err)
    }

    pub fn add(&self, o: &Self) -> Self {
        let z = self.value() + o.value();
        ComplexApprox::new(z.re, z.im, self.err + o.err + 2.0 * EPS * z.norm())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        ComplexApprox::new(-self.re, -self.im, self.err)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let z = self.value() * o.value();
        let err = self.abs() * o.err + o.abs() * self.err + self.err * o.err + 4.0 * EPS * z.norm();
        ComplexApprox::new(z.re, z.im, err)
    }

    /// Division; the bound assumes `|o| > o.err`.
    pub fn div(&self, o: &Self) -> Self {
        let z = self.value() / o.value();
        let d = o.abs();
        let slack = (d - o.err).max(f64::MIN_POSITIVE);
        let err = (self.err + z.norm() * o.err) / slack + 4.0 * EPS * z.norm();
        ComplexApprox::new(z.re, z.im, err)
    }

    pub fn scale(&self, s: f64) -> Self {
        let z = self.value() * s;
        ComplexApprox::new(z.re, z.im, self.err * s.abs() + 2.0 * EPS * z.norm())
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = ComplexApprox::exact(1.0);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Sums in the given order, tracking the error bound.
    pub fn sum<I: IntoIterator<Item = ComplexApprox>>(terms: I) -> Self {
        terms
            .into_iter()
            .fold(ComplexApprox::zero(), |acc, t| acc.add(&t))
    }

    /// `|self - exact| <= max(1e-6 |exact|, err)`.
    pub fn matches(&self, exact: Complex64) -> bool {
        let diff = (self.value() - exact).norm();
        diff <= (1e-6 * exact.norm()).max(self.err)
    }

    pub fn matches_real(&self, exact: f64) -> bool {
        self.matches(Complex64::new(exact, 0.0))
    }

    /// Nearest integer to the real part, provided the value lies within
    /// `guard` of it and the imaginary part within `guard` of zero.
    pub fn round_guarded(&self, guard: f64) -> Option<i128> {
        let r = self.re.round();
        if (self.re - r).abs() <= guard && self.im.abs() <= guard {
            Some(r as i128)
        } else {
            None
        }
    }
}

impl fmt::Display for ComplexApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.9}{:+.9}i (±{:.1e})", self.re, self.im, self.err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_bounds_propagate() {
        let a = ComplexApprox::new(1.0, 1.0, 1e-12);
        let b = ComplexApprox::new(2.0, 0.0, 1e-12);
        let c = a.mul(&b);
        assert!(c.err >= 2.0 * 1e-12);
        let d = c.div(&b);
        assert!(d.matches(Complex64::new(1.0, 1.0)));
        assert_eq!(a.add(&b).re, 3.0);
        assert_eq!(a.conj().im, -1.0);
    }

    #[test]
    fn guarded_rounding() {
        assert_eq!(
            ComplexApprox::new(4.02, 0.01, 0.0).round_guarded(0.1),
            Some(4)
        );
        assert_eq!(ComplexApprox::new(4.3, 0.0, 0.0).round_guarded(0.1), None);
        assert_eq!(ComplexApprox::new(-2.0, 0.5, 0.0).round_guarded(0.1), None);
    }
}
