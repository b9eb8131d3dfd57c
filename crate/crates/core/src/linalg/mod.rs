//! Dense symmetric and tridiagonal linear algebra primitives.
//!
//! Vectors are plain `Vec<f64>` / `&[f64]`; the helpers in [`vector`] provide
//! the BLAS-1 style operations. Tolerances are module-level constants; every
//! routine that uses one also has a `*_with` variant taking it explicitly.

mod dense;
mod eigen;
mod orthonormal;
mod reflector;
mod tridiag;
pub mod vector;

pub use dense::DenseSymmetric;
pub use eigen::{sym_tridiag_eigen, tridiag_eigen_rows, EigenDecomposition};
pub use orthonormal::{orthonormalize, orthonormalize_with, Orthonormalized, DROP_TOL};
pub use reflector::Reflector;
pub use tridiag::SymTridiagonal;

/// Tolerance used when checking unit norms.
pub const UNIT_NORM_TOL: f64 = 1e-12;
