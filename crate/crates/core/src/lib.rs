//! Exact computations around real division algebras: K-groups of real and
//! complex projective spaces from integer presentations, Cayley-Dickson
//! algebras and their zero divisors, Stiefel frames on spheres, pointwise
//! checks of the map identifying `RP^{2n+1}` with the sphere bundle of the
//! squared Hopf bundle, and the divisibility argument that leaves only the
//! dimensions 1, 2, 4 and 8.
//!
//! Nothing in the verification paths uses floating point.

pub mod cdalgebra;
pub mod cli;
pub mod error;
pub mod exactcore;
pub mod frobenius;
pub mod hopf;
pub mod ktheory;
pub mod stiefel;

pub use error::{Error, Result};
