//! `gn_eval` with the `₃G₃` parameter list against a single-purpose evaluator
//! written from the defining sum with plain integer arithmetic.

use surfpoints::char_sums::GaussContext;
use surfpoints::gn_hyper::{GnEvaluator, GnParameters};
use surfpoints::padic::PadicNumber;

fn pow_mod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

struct Oracle {
    p: u128,
    n: u32,
    m: u128,
}

impl Oracle {
    fn new(p: u64, n: u32) -> Self {
        let p = p as u128;
        Oracle { p, n, m: p.pow(n) }
    }

    fn inv(&self, x: u128) -> u128 {
        // Euler: the unit group mod p^N has order p^{N-1}(p-1).
        pow_mod(x, self.p.pow(self.n - 1) * (self.p - 1) - 1, self.m)
    }

    /// `Γ_p(x)` for `x = num/den ∈ [0, 1)` from the restricted factorial at the
    /// representative of `x` in `(0, p^N]`.
    fn gamma(&self, num: i128, den: i128) -> u128 {
        let m = self.m as i128;
        let r = (num.rem_euclid(m) * self.inv(den.rem_euclid(m) as u128) as i128).rem_euclid(m);
        let k = if r == 0 { m } else { r } as u128;
        let mut acc = 1u128;
        for j in 1..k {
            if j % self.p != 0 {
                acc = acc * j % self.m;
            }
        }
        if k % 2 == 1 {
            (self.m - acc) % self.m
        } else {
            acc
        }
    }

    /// `⟨num/den⟩` as a fraction with denominator `den`.
    fn frac(num: i128, den: i128) -> (i128, i128) {
        (num.rem_euclid(den), den)
    }

    /// `p² · ₃G₃[1/3,1/3,1/3; 1/12,7/12,5/6 | t]` modulo `p^N`.
    fn g3_times_p2(&self, t: u64) -> u128 {
        let (p, m) = (self.p, self.m);
        let q = (p - 1) as i128;
        let top = [(1i128, 3i128); 3];
        let bottom = [(1i128, 12i128), (7, 12), (5, 6)];
        let omega_t = pow_mod(t as u128, p.pow(self.n - 1), m);
        let omega_t_inv = self.inv(omega_t);
        let mut total: u128 = 0;
        for a in 0..q {
            let mut unit = 1u128;
            let mut e: i128 = 0;
            for &(n, d) in &top {
                // ⌊⟨a_k⟩ - a/q⌋ and ⟨a_k - a/q⟩.
                let (fnum, fden) = Self::frac(n, d);
                let num = fnum * q - a * fden;
                let den = fden * q;
                e -= num.div_euclid(den);
                let (gn, gd) = Self::frac(num, den);
                unit = unit * self.gamma(gn, gd) % m * self.inv(self.gamma(fnum, fden)) % m;
            }
            for &(n, d) in &bottom {
                let (fnum, fden) = Self::frac(-n, d);
                let num = fnum * q + a * fden;
                let den = fden * q;
                e -= num.div_euclid(den);
                let (gn, gd) = Self::frac(num, den);
                unit = unit * self.gamma(gn, gd) % m * self.inv(self.gamma(fnum, fden)) % m;
            }
            assert!(e >= -2);
            // (-1)^{3a} (-p)^e p² = (-1)^{a+e} p^{e+2}.
            let mut term = unit * p.pow((e + 2) as u32) % m;
            term = term * pow_mod(omega_t_inv, a as u128, m) % m;
            if (a + e).rem_euclid(2) == 1 {
                term = (m - term) % m;
            }
            total = (total + term) % m;
        }
        // Times -1/(p-1).
        let scale = (m - self.inv(p - 1)) % m;
        total * scale % m
    }
}

#[test]
fn gn_eval_matches_single_purpose_g3() {
    for p in [7u64, 11, 13] {
        let n = 3;
        let ctx = GaussContext::new(p).unwrap();
        let ev = GnEvaluator::new(&ctx);
        let oracle = Oracle::new(p, n);
        for t in 1..p {
            let got = ev.gn_eval(&GnParameters::g3(), t, n).unwrap().shift(2);
            let want = PadicNumber::from_int(p, n, oracle.g3_times_p2(t) as i128).unwrap();
            // The oracle is exact modulo p^N only.
            let diff = got.sub(&want).unwrap();
            let ok = diff.valuation().is_none_or(|v| v >= n as i32);
            assert!(ok, "p={p} t={t}: {got} vs {want}");
        }
    }
}
