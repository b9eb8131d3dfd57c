use super::dense::DenseSymmetric;
use super::vector::{axpy, dot, norm, scale};
use crate::error::{Error, Result};

/// The reflector `H = I - 2 w wᵗ / ‖w‖²` that reverses its axis `w`.
///
/// `H` is symmetric and orthogonal: `Hw = -w` and `Hx = x` for `x ⊥ w`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflector {
    unit_axis: Vec<f64>,
}

impl Reflector {
    pub fn new(axis: &[f64]) -> Result<Self> {
        let nrm = norm(axis);
        if nrm == 0.0 || !nrm.is_finite() {
            return Err(Error::ZeroAxis);
        }
        Ok(Self {
            unit_axis: scale(1.0 / nrm, axis),
        })
    }

    pub fn dim(&self) -> usize {
        self.unit_axis.len()
    }

    /// Unit vector along the reversed axis.
    pub fn axis(&self) -> &[f64] {
        &self.unit_axis
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let mut out = x.to_vec();
        axpy(-2.0 * dot(&self.unit_axis, x), &self.unit_axis, &mut out);
        Ok(out)
    }

    pub fn to_dense(&self) -> DenseSymmetric {
        let v = &self.unit_axis;
        DenseSymmetric::from_fn(self.dim(), |i, j| {
            let delta = if i == j { 1.0 } else { 0.0 };
            delta - 2.0 * v[i] * v[j]
        })
    }

    /// The orthogonal similarity `H A H`.
    pub fn conjugate(&self, a: &DenseSymmetric) -> Result<DenseSymmetric> {
        if a.order() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.order(),
            });
        }
        // HAH = A - v wᵗ - w vᵗ with u = Av, gamma = vᵗu, w = 2u - 2 gamma v
        let v = &self.unit_axis;
        let u = a.apply_unchecked(v);
        let gamma = dot(v, &u);
        let w: Vec<f64> = u.iter().zip(v).map(|(ui, vi)| 2.0 * ui - 2.0 * gamma * vi).collect();
        Ok(DenseSymmetric::from_fn(a.order(), |i, j| {
            a.get(i, j) - v[i] * w[j] - w[i] * v[j]
        }))
    }
}
