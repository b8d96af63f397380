//! Exact generalized Dedekind sums, Todd-series coefficients of plane lattice
//! cones, integrality constants, and generalized Kloosterman sums.
//!
//! Everything that is a rational number is computed exactly; only exponential
//! sums are evaluated in floating point, and then with the angle reduced
//! exactly before the single `exp(2πi·)` call per term.

pub mod arith;
pub mod bernoulli;
pub mod cones;
pub mod dedekind;
pub mod equidist;
pub mod error;
pub mod expsums;
pub mod integrality;

pub use error::{Error, Result};
