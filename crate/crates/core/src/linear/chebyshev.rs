use super::SolveTrace;
use crate::error::{Error, Result};
use crate::krylov::{check_start, LinearOperator};
use crate::linalg::vector::{axpy, norm, sub};

/// Spectral enclosure `σ(A) ⊂ [1 − ρ, 1 + ρ]` for the Chebyshev iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevParams {
    rho: f64,
}

impl ChebyshevParams {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidParameter(format!("rho must lie in (0, 1), got {rho}")));
        }
        Ok(Self { rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Weights `ω_2, ω_3, ...` of the three-term recurrence.
    fn omegas(&self) -> impl Iterator<Item = f64> {
        let r2 = self.rho * self.rho;
        let mut omega = 0.0;
        std::iter::from_fn(move || {
            omega = if omega == 0.0 {
                1.0 / (1.0 - r2 / 2.0)
            } else {
                1.0 / (1.0 - r2 * omega / 4.0)
            };
            Some(omega)
        })
    }
}

/// Chebyshev semi-iteration for `A ∈ {I − B : ‖B‖ ≤ ρ}`:
///
/// ```text
/// x_0 = 0,  x_1 = b
/// x_{k+1} = x_{k-1} + ω_{k+1} (r_k + x_k − x_{k-1})
/// r_{k+1} = ω_{k+1} (r_k − A r_k) − (ω_{k+1} − 1) r_{k-1}
/// ω_2 = 1 / (1 − ρ²/2),   ω_{k+1} = 1 / (1 − ρ² ω_k / 4)
/// ```
///
/// so that `r_k = C_k((I − A)/ρ) b / C_k(1/ρ)`. Since `x_{k+1} ∈ K^{k+1}`
/// needs only `r_k`, it is formed from `N_k`; the trace therefore stores
/// `x_{j+1}` at index `j`. Its residual is kept for reporting and costs one
/// application beyond `N_j`.
pub fn chebyshev_run<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    params: ChebyshevParams,
    eps: f64,
    max_steps: usize,
) -> Result<SolveTrace> {
    check_start(b, op.dim())?;
    let threshold = eps * norm(b);
    let mut trace = SolveTrace::new();

    let mut x_prev = vec![0.0; b.len()];
    let mut x = b.to_vec();
    let mut r_prev = b.to_vec();
    let mut r = sub(b, &op.matvec(b));
    trace.record(x.clone(), norm(&r), threshold);

    for omega in params.omegas().take(max_steps) {
        let mut x_next = x_prev;
        let mut step = r.clone();
        axpy(1.0, &x, &mut step);
        axpy(-1.0, &x_next, &mut step);
        axpy(omega, &step, &mut x_next);

        let ar = op.matvec(&r);
        let r_next: Vec<f64> = r
            .iter()
            .zip(&ar)
            .zip(&r_prev)
            .map(|((ri, ari), rp)| omega * (ri - ari) - (omega - 1.0) * rp)
            .collect();

        x_prev = std::mem::replace(&mut x, x_next);
        r_prev = std::mem::replace(&mut r, r_next);
        trace.record(x.clone(), norm(&r), threshold);
    }
    Ok(trace)
}

/// Monomial coefficients (lowest degree first) of the residual polynomial
/// `P_k(λ) = C_k((1 − λ)/ρ) / C_k(1/ρ)` produced by [`chebyshev_run`].
pub fn chebyshev_residual_coefficients(params: ChebyshevParams, k: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![1.0, -1.0];
    for omega in params.omegas().take(k - 1) {
        let mut next = vec![0.0; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i] += omega * c;
            next[i + 1] -= omega * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= (omega - 1.0) * c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `q(ε) = ⌊ln((1 + √(1 − ε²))/ε) / ln((1 + √(1 − ρ²))/ρ)⌋`.
pub fn q_epsilon(eps: f64, rho: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    ChebyshevParams::new(rho)?;
    let acosh_inv = |t: f64| ((1.0 + (1.0 - t * t).sqrt()) / t).ln();
    Ok((acosh_inv(eps) / acosh_inv(rho)).floor() as usize)
}
