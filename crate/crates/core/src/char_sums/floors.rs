//! Floor-function identities for the `(-p)`-exponents of hypergeometric terms.
//!
//! All quantities are exact: `⌊a/b + j/(p-1)⌋` is computed with rational floors.

use crate::check::Check;
use crate::padic::ZpRational;

fn fl(x: ZpRational) -> i64 {
    x.floor_part()
}

fn r(n: i64, d: i64) -> ZpRational {
    ZpRational::new(n, d)
}

/// `1 + ⌊-1/6 + 2j/(p-1)⌋ = ⌊11/12 + j/(p-1)⌋ + ⌊5/12 + j/(p-1)⌋`, `0 <= j <= p-2`.
pub fn exponent_identity_4(p: u64, j: u64) -> Check {
    let (q, j) = (p as i64 - 1, j as i64);
    let t = r(j, q);
    let lhs = 1 + fl(r(-1, 6) + r(2 * j, q));
    let rhs = fl(r(11, 12) + t) + fl(r(5, 12) + t);
    Check::equal("exponent_identity_4", format!("p={p} j={j}"), lhs, rhs)
}

/// `⌊1/2 + 3j/(p-1)⌋ = ⌊1/6 + j/(p-1)⌋ + ⌊5/6 + j/(p-1)⌋ + ⌊1/2 + j/(p-1)⌋`, `0 <= j <= p-2`.
pub fn exponent_identity_1(p: u64, j: u64) -> Check {
    let (q, j) = (p as i64 - 1, j as i64);
    let t = r(j, q);
    let lhs = fl(r(1, 2) + r(3 * j, q));
    let rhs = fl(r(1, 6) + t) + fl(r(5, 6) + t) + fl(r(1, 2) + t);
    Check::equal("exponent_identity_1", format!("p={p} j={j}"), lhs, rhs)
}

/// `⌊1/2 + 6j/(p-1)⌋ = Σ_{c ∈ {1/12, 5/12, 7/12, 11/12, 1/4, 3/4}} ⌊c + j/(p-1)⌋`, `0 <= j <= p-2`.
pub fn exponent_identity_2(p: u64, j: u64) -> Check {
    let (q, j) = (p as i64 - 1, j as i64);
    let t = r(j, q);
    let lhs = fl(r(1, 2) + r(6 * j, q));
    let rhs: i64 = [(1, 12), (5, 12), (7, 12), (11, 12), (1, 4), (3, 4)]
        .iter()
        .map(|&(a, b)| fl(r(a, b) + t))
        .sum();
    Check::equal("exponent_identity_2", format!("p={p} j={j}"), lhs, rhs)
}

/// `⌊-3j/(p-1)⌋ = -1 + ⌊1/3 - j/(p-1)⌋ + ⌊2/3 - j/(p-1)⌋`, `1 <= j <= p-2`.
pub fn exponent_identity_3(p: u64, j: u64) -> Check {
    let (q, j) = (p as i64 - 1, j as i64);
    let t = r(j, q);
    let lhs = fl(r(-3 * j, q));
    let rhs = -1 + fl(r(1, 3) - t) + fl(r(2, 3) - t);
    Check::equal("exponent_identity_3", format!("p={p} j={j}"), lhs, rhs)
}

/// All four identities over their full `j` ranges.
pub fn exponent_identities(p: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for j in 0..=p - 2 {
        out.push(exponent_identity_1(p, j));
        out.push(exponent_identity_2(p, j));
        if j >= 1 {
            out.push(exponent_identity_3(p, j));
        }
        out.push(exponent_identity_4(p, j));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::primes_between;

    #[test]
    fn hold_for_primes_up_to_500() {
        for p in primes_between(5, 500) {
            for c in exponent_identities(p) {
                assert!(c.passed, "{c:?}");
            }
        }
    }

    #[test]
    fn identity_3_needs_positive_j() {
        // At j = 0 the left side is 0 and the right side is -1.
        assert!(!exponent_identity_3(7, 0).passed);
    }
}
