//! Krylov information and Lanczos factorizations built from a hidden operator.
//!
//! The operator is only reachable through [`LinearOperator::matvec`]; every
//! call is one unit of cost. [`CountingOperator`] makes that accounting
//! assertable.

mod info;
mod lanczos;
mod operator;

pub use info::{krylov_info, KrylovInfo};
pub use lanczos::{
    expand_in_basis, lanczos_factorize, LanczosFactorization, LanczosProcess, BREAKDOWN_TOL,
};
pub use operator::{
    check_symmetric_action, dense_from_operator, CountingOperator, FnOperator, LinearOperator,
    SYMMETRY_TOL,
};

use crate::error::{Error, Result};
use crate::linalg::{vector::norm, UNIT_NORM_TOL};

pub(crate) fn check_start(b: &[f64], n: usize) -> Result<()> {
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let nrm = norm(b);
    if (nrm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::NonUnitStart { norm: nrm });
    }
    Ok(())
}
