use super::gmr::gmr_projected;
use crate::krylov::{LanczosProcess, LinearOperator};
use crate::linalg::tridiag_eigen_rows;
use crate::Result;

/// First steps at which each algorithm meets a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsStops {
    pub eps: f64,
    pub lanczos: Option<usize>,
    pub gmr: Option<usize>,
}

/// Residual histories of the minimal-residual Ritz pair and of GMR.
///
/// Entry `k` of each history belongs to step `j = k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigRunTrace {
    pub ritz_min: Vec<f64>,
    pub gmr: Vec<f64>,
    pub gmr_rho: Vec<f64>,
    pub stops: Vec<EpsStops>,
    /// Step at which the Krylov space became invariant, if it did.
    pub invariant_at: Option<usize>,
}

impl EigRunTrace {
    pub fn steps(&self) -> usize {
        self.gmr.len()
    }
}

fn first_step(history: &[f64], eps: f64) -> Option<usize> {
    history.iter().position(|&r| r <= eps).map(|k| k + 1)
}

/// Runs Lanczos from `b` and records, at every step, the smallest
/// Rayleigh–Ritz residual `r^L_j` and the GMR residual `r^G_j`.
pub fn eig_race<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    eps_list: &[f64],
    max_steps: usize,
) -> Result<EigRunTrace> {
    let mut process = LanczosProcess::new(op, b)?;
    let (mut ritz_min, mut gmr, mut gmr_rho) = (Vec::new(), Vec::new(), Vec::new());
    while process.steps() < max_steps && process.step() {
        let t = process.tridiagonal().expect("stepped");
        let beta = process.beta_next();
        let (theta, rows) = tridiag_eigen_rows(&t, &[t.order() - 1]);
        let s = &rows[0];
        let rl = s.iter().fold(f64::INFINITY, |m, x| m.min(beta * x.abs()));
        let hints: Vec<f64> = gmr_rho.last().copied().into_iter().collect();
        let sol = gmr_projected(&theta, s, beta, &hints);
        ritz_min.push(rl);
        gmr.push(sol.residual);
        gmr_rho.push(sol.rho);
    }
    let stops = eps_list
        .iter()
        .map(|&eps| EpsStops {
            eps,
            lanczos: first_step(&ritz_min, eps),
            gmr: first_step(&gmr, eps),
        })
        .collect();
    Ok(EigRunTrace {
        ritz_min,
        gmr,
        gmr_rho,
        stops,
        invariant_at: process.is_invariant().then(|| process.steps()),
    })
}
