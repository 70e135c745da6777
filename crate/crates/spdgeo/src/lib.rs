//! Geometry of the symmetric positive definite cone built on extreme
//! generalized eigenvalues: Thompson, Hilbert, and affine-invariant
//! Riemannian distances, their geodesics, determinant behavior along
//! interpolations, and a structure-preserving inductive mean.
//!
//! The crate favors operations that touch only matrix-vector products and
//! linear solves, so sparse operands keep their sparsity: the distinguished
//! Thompson geodesic and the inductive mean built from it are linear
//! combinations of their inputs and never leave the inputs' linear span.
//!
//! Start with the runnable examples (`cargo run --example distances`) or the
//! `spdgeo` command-line driver.

pub mod analysis;
pub mod dense;
pub mod error;
pub mod experiments;
pub mod geneig;
pub mod geometry;
pub mod io;
pub mod means;
pub mod sparse;

pub use dense::DenseSpd;
pub use error::{Result, SpdError};
pub use geneig::{ExtremePair, Spectrum};
pub use io::SpdMatrix;
pub use sparse::SparseSpd;
