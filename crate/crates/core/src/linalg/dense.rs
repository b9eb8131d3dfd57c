use super::eigen::{householder_eigen, EigenDecomposition};
use super::vector::dot;
use crate::error::{Error, Result};

/// A dense real symmetric matrix.
///
/// Storage is full row-major, but every mutation writes both `(i, j)` and
/// `(j, i)`, so `get(i, j) == get(j, i)` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetric {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymmetric {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.n + i] = d;
        }
        m
    }

    /// Builds the matrix from `f(i, j)` evaluated on the lower triangle only.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds the matrix from rows, rejecting non-square or asymmetric input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Builds a symmetric matrix from a nearly symmetric one by averaging
    /// `(i, j)` and `(j, i)`.
    pub fn symmetrized(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        Ok(Self::from_fn(n, |i, j| 0.5 * (rows[i][j] + rows[j][i])))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|a| alpha * a).collect(),
        }
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn frobenius_norm(&self) -> f64 {
        super::vector::norm(&self.data)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| f64::max(m, a.abs()))
    }

    /// Full eigendecomposition (Householder tridiagonalization followed by
    /// implicit-shift QL).
    pub fn eigen(&self) -> EigenDecomposition {
        householder_eigen(self)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigen().values
    }

    /// Spectral norm `max |λ|`.
    pub fn norm2(&self) -> f64 {
        let vals = self.eigenvalues();
        vals.iter().fold(0.0, |m, v| f64::max(m, v.abs()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(f64::NAN)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.n > 0 && self.min_eigenvalue() > 0.0
    }

    /// `Wᵗ A W` for a set of columns `W` (each of length `n`).
    pub fn project(&self, columns: &[Vec<f64>]) -> Result<DenseSymmetric> {
        for c in columns {
            if c.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: c.len(),
                });
            }
        }
        let aw: Vec<Vec<f64>> = columns.iter().map(|c| self.apply_unchecked(c)).collect();
        Ok(DenseSymmetric::from_fn(columns.len(), |i, j| {
            0.5 * (dot(&columns[i], &aw[j]) + dot(&columns[j], &aw[i]))
        }))
    }

    /// `W M Wᵗ`, where `W` has the given columns (each of length `dim`) and
    /// `M` is `self` (order = number of columns).
    pub fn congruence(&self, columns: &[Vec<f64>], dim: usize) -> Result<DenseSymmetric> {
        if columns.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: columns.len(),
            });
        }
        // rows of W, then P = W M (dim x m)
        let rows_w: Vec<Vec<f64>> = (0..dim)
            .map(|i| columns.iter().map(|c| c[i]).collect())
            .collect();
        let p: Vec<Vec<f64>> = rows_w.iter().map(|r| self.apply_unchecked(r)).collect();
        Ok(DenseSymmetric::from_fn(dim, |i, j| {
            0.5 * (dot(&p[i], &rows_w[j]) + dot(&p[j], &rows_w[i]))
        }))
    }
}
