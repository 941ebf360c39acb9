//! Montgomery multiplication modulo an odd `m < 2^63`.

#[derive(Clone, Copy, Debug)]
pub struct Montgomery {
    m: u64,
    /// `-m^{-1} mod 2^64`
    neg_inv: u64,
    /// `2^128 mod m`
    r2: u64,
    /// `2^64 mod m`, the Montgomery form of 1.
    one: u64,
}

impl Montgomery {
    pub fn new(m: u64) -> Self {
        assert!(
            m % 2 == 1 && m < (1 << 63),
            "modulus must be odd and < 2^63"
        );
        // Newton iteration for m^{-1} mod 2^64.
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(inv)));
        }
        let one = ((1u128 << 64) % m as u128) as u64;
        let r2 = ((one as u128 * one as u128) % m as u128) as u64;
        Montgomery {
            m,
            neg_inv: inv.wrapping_neg(),
            r2,
            one,
        }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.m
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let k = (t as u64).wrapping_mul(self.neg_inv);
        let s = (t + k as u128 * self.m as u128) >> 64;
        let s = s as u64;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.redc((a % self.m) as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn one(&self) -> u64 {
        self.one
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_u128_reference(a in any::<u64>(), b in any::<u64>(), m in 1u64..(1 << 62)) {
            let m = m | 1;
            let mont = Montgomery::new(m);
            let got = mont.from_mont(mont.mul(mont.to_mont(a), mont.to_mont(b)));
            let want = ((a % m) as u128 * (b % m) as u128 % m as u128) as u64;
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn one_round_trips() {
        let mont = Montgomery::new(5u64.pow(3));
        assert_eq!(mont.from_mont(mont.one()), 1);
        assert_eq!(mont.from_mont(mont.add(mont.one(), mont.one())), 2);
    }
}
