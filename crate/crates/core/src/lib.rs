//! Cone spectral radii and nonlinear eigenpairs of order-preserving,
//! positively homogeneous maps of the standard orthant `R^n_+`.
//!
//! The solver approximates `h` by the regularized maps
//! `h_s(x) = h(x) + s q(h(x)) u`, whose normalized versions are strict
//! Hilbert-metric contractions with a unique interior eigenvector, and lets
//! `s` decrease to zero. Every answer comes with a Collatz-Wielandt bracket
//! `m(h(x)/x) <= r <= M(h(x)/x)` and can be re-checked by the independent
//! references in [`oracles`] and the verifiers in [`certificates`].

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod certificates;
pub mod cli;
pub mod cone;
pub mod error;
pub mod operators;
pub mod oracles;
pub mod solver;

pub use cone::{ConeVector, ExtendedRatio, Gauge, SliceConfig};
pub use error::{Error, Result};
pub use operators::{NonnegMatrix, OperatorSpec, SelectionWitness};
