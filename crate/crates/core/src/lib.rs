//! Circle-method machinery for cubic forms over imaginary quadratic fields.
//!
//! The crate covers exact field and ideal arithmetic, cubic forms, exponential
//! sums, lattice lemmas, the arc dissection with its singular series and
//! integral, and the constructive line and almost-prime search.

pub mod error;
pub mod exec;
pub mod field;
pub mod forms;
pub mod grid;
pub mod baselines;
pub mod circle;
pub mod hnf;
pub mod lattices;
pub mod lines;
pub mod primes;
pub mod sums;
pub mod verify;

pub use error::{Error, Result};
pub use exec::{Ctx, Exec};
