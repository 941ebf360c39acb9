//! Truncated p-adic numbers, Teichmüller lifts and Morita's `Γ_p`.

mod gamma;
pub mod montgomery;
mod number;
mod rational;

pub use gamma::{
    a0, gamma_multiplication_check, gamma_p_batch, gamma_prod2_check, gamma_reflection_check,
    representative, GammaTable,
};
pub use number::{inv_mod, mul_mod, prime_power, PadicNumber};
pub use rational::ZpRational;

use crate::error::{Error, Result};
use crate::field::pow_mod;

/// Default number of base-`p` digits carried by units.
pub const DEFAULT_PRECISION: u32 = 3;

/// Residue of the Teichmüller lift `ω(t)` modulo `p^N`.
pub fn teichmuller_residue(p: u64, t: u64, n: u32) -> Result<u64> {
    let m = prime_power(p, n)?;
    let mut x = t % p;
    if x == 0 {
        return Err(Error::TeichmullerOfZero);
    }
    // Each step x -> x^p gains one correct digit.
    for _ in 1..n {
        x = pow_mod(x, p, m);
    }
    Ok(x)
}

/// The Teichmüller lift `ω(t)`: the `(p-1)`-th root of unity congruent to `t` mod `p`.
pub fn teichmuller(p: u64, t: u64, n: u32) -> Result<PadicNumber> {
    PadicNumber::from_parts(p, n, 0, teichmuller_residue(p, t, n)?)
}
