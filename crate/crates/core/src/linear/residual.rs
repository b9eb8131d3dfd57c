use crate::error::{Error, Result};
use crate::krylov::LinearOperator;
use crate::linalg::vector::dot;

/// Exponent `p` of the generalized residual `‖A^p(x − A⁻¹b)‖`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualPower {
    /// Error norm `‖x − A⁻¹b‖`.
    Zero,
    /// Energy norm of the error; requires SPD `A`.
    Half,
    /// Ordinary residual `‖b − Ax‖`.
    One,
}

impl ResidualPower {
    pub fn exponent(self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Half => 0.5,
            Self::One => 1.0,
        }
    }
}

/// Stopping requirement `‖A^p(x − A⁻¹b)‖ ≤ ε ‖A^{p−1}b‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSpec {
    epsilon: f64,
    power: ResidualPower,
}

impl ToleranceSpec {
    pub fn new(epsilon: f64, power: ResidualPower) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in [0, 1), got {epsilon}"
            )));
        }
        Ok(Self { epsilon, power })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn power(&self) -> ResidualPower {
        self.power
    }

    pub fn is_met(&self, r: &GeneralizedResidual) -> bool {
        r.value <= self.epsilon * r.reference
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedResidual {
    /// `‖A^p(x − A⁻¹b)‖`
    pub value: f64,
    /// `‖A^{p−1}b‖`
    pub reference: f64,
}

/// Evaluates the generalized residual through the dense oracle view of `A`.
///
/// This is a verification tool: it needs `A⁻¹b`, which no Krylov algorithm
/// has access to.
pub fn generalized_residual<O: LinearOperator + ?Sized>(
    op: &O,
    x: &[f64],
    b: &[f64],
    p: ResidualPower,
) -> Result<GeneralizedResidual> {
    let a = op.oracle_view().ok_or(Error::NoOracleView)?;
    for v in [x, b] {
        if v.len() != a.order() {
            return Err(Error::DimensionMismatch {
                expected: a.order(),
                found: v.len(),
            });
        }
    }
    let eig = a.eigen();
    let scale = eig.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if eig.values.iter().any(|l| l.abs() <= 1e-14 * scale) || scale == 0.0 {
        return Err(Error::Singular);
    }
    if p == ResidualPower::Half && eig.values[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    let weight = |lambda: f64| match p {
        ResidualPower::Zero => 1.0,
        ResidualPower::Half => lambda.sqrt(),
        ResidualPower::One => lambda,
    };
    let (mut value, mut reference) = (0.0, 0.0);
    for (lambda, u) in eig.values.iter().zip(&eig.vectors) {
        let bu = dot(u, b);
        let err = dot(u, x) - bu / lambda;
        let w = weight(*lambda);
        value += (w * err).powi(2);
        reference += (w * bu / lambda).powi(2);
    }
    Ok(GeneralizedResidual {
        value: value.sqrt(),
        reference: reference.sqrt(),
    })
}
