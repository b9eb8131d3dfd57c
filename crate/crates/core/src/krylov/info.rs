use super::{check_start, LinearOperator};
use crate::error::{Error, Result};

/// Krylov information `N_j(A, b) = {b, Ab, ..., A^j b}`; it costs `j` units.
#[derive(Debug, Clone, PartialEq)]
pub struct KrylovInfo {
    pub powers: Vec<Vec<f64>>,
}

impl KrylovInfo {
    pub fn start(&self) -> &[f64] {
        &self.powers[0]
    }

    /// Number of operator applications that produced this record.
    pub fn steps(&self) -> usize {
        self.powers.len() - 1
    }
}

/// Collects `{b, Ab, ..., A^j b}` with exactly `j` operator applications.
pub fn krylov_info<O: LinearOperator + ?Sized>(op: &O, b: &[f64], j: usize) -> Result<KrylovInfo> {
    let n = op.dim();
    check_start(b, n)?;
    if j > n {
        return Err(Error::StepOutOfRange { step: j, order: n });
    }
    let mut powers = Vec::with_capacity(j + 1);
    powers.push(b.to_vec());
    for i in 0..j {
        let next = op.matvec(&powers[i]);
        powers.push(next);
    }
    Ok(KrylovInfo { powers })
}
