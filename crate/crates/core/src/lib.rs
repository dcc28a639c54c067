//! Exact sl2-equivariant homology of `(2, k)` torus links.
//!
//! The crate builds the collapsed chain complex of `T(2, k)` over the ring of
//! symmetric polynomials `R = Q[E1, E2]`, computes its homology both as
//! presentations and slice by slice over the rationals, and decomposes every
//! cohomology group as an sl2-module.

pub mod cli;
pub mod complex;
pub mod error;
pub mod homology;
pub mod linalg;
pub mod polyring;
pub mod sl2mod;
pub mod statespace;

pub use error::{Error, Result};
