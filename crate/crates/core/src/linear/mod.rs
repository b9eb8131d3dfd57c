//! Krylov-information solvers for `Ax = b`.
//!
//! Every driver indexes its trace by information cost: entry `j` is the
//! output an algorithm can form from `N_j = {b, Ab, ..., A^j b}`.

mod chebyshev;
mod minres;
mod residual;

pub use chebyshev::{
    chebyshev_residual_coefficients, chebyshev_run, q_epsilon, ChebyshevParams,
};
pub use minres::{cg_run, cg_step, mr_run, mr_step, Projected};
pub use residual::{generalized_residual, GeneralizedResidual, ResidualPower, ToleranceSpec};

/// Iterates and residual norms of one solver run.
///
/// `iterates[j]` and `residual_norms[j]` belong to information cost `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace {
    pub iterates: Vec<Vec<f64>>,
    pub residual_norms: Vec<f64>,
    pub stop_step: Option<usize>,
}

impl SolveTrace {
    pub(crate) fn new() -> Self {
        Self {
            iterates: Vec::new(),
            residual_norms: Vec::new(),
            stop_step: None,
        }
    }

    pub(crate) fn record(&mut self, x: Vec<f64>, residual: f64, threshold: f64) {
        if self.stop_step.is_none() && residual <= threshold {
            self.stop_step = Some(self.iterates.len());
        }
        self.iterates.push(x);
        self.residual_norms.push(residual);
    }

    /// Number of recorded entries (the last index is `len() - 1`).
    pub fn len(&self) -> usize {
        self.residual_norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residual_norms.is_empty()
    }

    /// First index whose residual is at most `threshold`.
    pub fn first_below(&self, threshold: f64) -> Option<usize> {
        self.residual_norms.iter().position(|&r| r <= threshold)
    }
}
