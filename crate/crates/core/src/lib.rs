//! The binary Euclidean algorithm and its average-case constants.
//!
//! * [`gcd`]: Algorithm B, Algorithm V and the extended binary GCD over big integers.
//! * [`cf`]: binary continued fractions induced by Algorithm V.
//! * [`density`]: extended-precision iteration of the distribution recurrence and the
//!   constants `K`, `λ`, `E∞` with Richardson extrapolation.

pub mod cf;
pub mod cli;
pub mod density;
pub mod empirics;
pub mod error;
pub mod gcd;
pub mod mellin;
pub mod natural;
pub mod operators;
pub mod real;

pub use error::{Error, Result};
pub use natural::{val2, Natural};
pub use real::{BigReal, Real};
