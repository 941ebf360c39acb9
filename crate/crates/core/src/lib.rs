//! Point counts, character sums and p-adic hypergeometric functions for the
//! surface family `z² = xy(1+x+y)(xy + (1-λ)/λ²)` over prime fields.

pub mod arithstat;
pub mod char_sums;
pub mod check;
pub mod curves;
pub mod error;
pub mod field;
pub mod gn_hyper;
pub mod padic;

pub use error::{Error, Result};
