//! Matrix-free Krylov subspace methods together with the adversarial
//! constructions used in worst-case (information-based) complexity arguments.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] holds the small dense and tridiagonal kernels.
//! * [`krylov`] exposes a hidden operator through matrix-vector products and
//!   builds Krylov information and Lanczos factorizations from it.
//! * [`linear`] contains the minimal-residual, Galerkin (CG) and Chebyshev
//!   solvers for `Ax = b`.
//! * [`eigen`] contains Rayleigh-Ritz and the generalized minimal residual
//!   (GMR) eigenpair algorithm.
//! * [`adversary`] builds matrices that are indistinguishable from `A` given
//!   the Krylov information and certifies what they witness.
//! * [`harness`] generates test matrices, runs experiments and reads and
//!   writes the flat-file formats used by the CLI.

pub mod adversary;
pub mod eigen;
pub mod error;
pub mod harness;
pub mod krylov;
pub mod linalg;
pub mod linear;

pub use error::{Error, Result};
