use super::dense::DenseSymmetric;
use super::eigen::{sym_tridiag_eigen, tridiag_eigen_rows, EigenDecomposition};
use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix with diagonal `α_1..α_n` and off-diagonal
/// `β_1..β_{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidParameter("tridiagonal order must be positive".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                found: offdiag.len(),
            });
        }
        Ok(Self { diag, offdiag })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.abs_diff(j) {
            0 => self.diag[i],
            1 => self.offdiag[i.min(j)],
            _ => 0.0,
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                found: v.len(),
            });
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &[f64]) -> Vec<f64> {
        let n = self.order();
        let mut out: Vec<f64> = self.diag.iter().zip(v).map(|(d, x)| d * x).collect();
        for i in 0..n.saturating_sub(1) {
            let b = self.offdiag[i];
            out[i] += b * v[i + 1];
            out[i + 1] += b * v[i];
        }
        out
    }

    /// Leading `j x j` block.
    pub fn leading(&self, j: usize) -> Result<Self> {
        if j == 0 || j > self.order() {
            return Err(Error::StepOutOfRange {
                step: j,
                order: self.order(),
            });
        }
        Ok(Self {
            diag: self.diag[..j].to_vec(),
            offdiag: self.offdiag[..j - 1].to_vec(),
        })
    }

    pub fn to_dense(&self) -> DenseSymmetric {
        DenseSymmetric::from_fn(self.order(), |i, j| self.get(i, j))
    }

    pub fn eigen(&self) -> EigenDecomposition {
        sym_tridiag_eigen(self)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        tridiag_eigen_rows(self, &[]).0
    }

    pub fn norm2(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0, |m, v| f64::max(m, v.abs()))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.offdiag)
            .fold(0.0, |m, v| f64::max(m, v.abs()))
    }
}
