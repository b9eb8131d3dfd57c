use crate::krylov::{LanczosFactorization, LanczosProcess, LinearOperator};
use crate::linalg::vector::combine;
use crate::linalg::{tridiag_eigen_rows, SymTridiagonal};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct RitzPair {
    pub theta: f64,
    /// Unit Ritz vector `Q g`.
    pub z: Vec<f64>,
    /// `‖A z − z θ‖ = β_j |g_j|`.
    pub residual_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RitzSet {
    /// Sorted by ascending `theta`.
    pub pairs: Vec<RitzPair>,
    pub step: usize,
    /// The Krylov space is invariant, so every pair is exact.
    pub exact: bool,
}

/// All Rayleigh–Ritz pairs from the Krylov space of the factorization.
pub fn rayleigh_ritz(fact: &LanczosFactorization) -> RitzSet {
    let eig = fact.tridiag().eigen();
    let beta = fact.beta_next();
    let j = fact.steps();
    let pairs = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .map(|(&theta, g)| RitzPair {
            theta,
            z: combine(fact.basis(), g, fact.dim()),
            residual_norm: beta * g[j - 1].abs(),
        })
        .collect();
    RitzSet {
        pairs,
        step: j,
        exact: fact.is_invariant(),
    }
}

/// Ritz values and residual norms without forming Ritz vectors. Only the
/// last row of the eigenvector matrix of `T` is computed.
pub fn ritz_residuals(t: &SymTridiagonal, beta: f64) -> (Vec<f64>, Vec<f64>) {
    let (theta, rows) = tridiag_eigen_rows(t, &[t.order() - 1]);
    let res = rows[0].iter().map(|s| beta * s.abs()).collect();
    (theta, res)
}

/// The pair with the smallest residual; ties go to the smaller `theta`.
pub fn min_residual_pair(rs: &RitzSet) -> Option<&RitzPair> {
    rs.pairs.iter().fold(None, |best: Option<&RitzPair>, p| match best {
        Some(b) if b.residual_norm <= p.residual_norm => Some(b),
        _ => Some(p),
    })
}

/// Number of good Ritz values.
///
/// A Ritz value is good when its residual is at most `eps` and it lies within
/// `eps` of a true eigenvalue not already claimed by another Ritz value.
/// Candidate (Ritz value, eigenvalue) pairs are matched greedily in order of
/// increasing distance, so each eigenvalue is matched at most once.
pub fn match_good_ritz(theta: &[f64], residuals: &[f64], spectrum: &[f64], eps: f64) -> usize {
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, (&t, &r)) in theta.iter().zip(residuals).enumerate() {
        if r > eps {
            continue;
        }
        let start = spectrum.partition_point(|&l| l < t - eps);
        for (k, &l) in spectrum.iter().enumerate().skip(start) {
            if l > t + eps {
                break;
            }
            candidates.push(((t - l).abs(), i, k));
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut ritz_used = vec![false; theta.len()];
    let mut eig_used = vec![false; spectrum.len()];
    let mut count = 0;
    for (_, i, k) in candidates {
        if !ritz_used[i] && !eig_used[k] {
            ritz_used[i] = true;
            eig_used[k] = true;
            count += 1;
        }
    }
    count
}

/// Good-Ritz counts for a sequence of factorizations. `spectrum` must be
/// sorted ascending.
pub fn count_good_ritz(facts: &[LanczosFactorization], eps: f64, spectrum: &[f64]) -> Vec<usize> {
    facts
        .iter()
        .map(|f| {
            let (theta, res) = ritz_residuals(f.tridiag(), f.beta_next());
            match_good_ritz(&theta, &res, spectrum, eps)
        })
        .collect()
}

/// Runs Lanczos for up to `max_steps` steps and returns, for each step, the
/// good-Ritz count at every tolerance in `eps_list`.
pub fn count_good_ritz_trace<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    eps_list: &[f64],
    spectrum: &[f64],
    max_steps: usize,
) -> Result<Vec<Vec<usize>>> {
    let mut process = LanczosProcess::new(op, b)?;
    let mut out = Vec::new();
    while process.steps() < max_steps && process.step() {
        let t = process.tridiagonal().expect("stepped");
        let (theta, res) = ritz_residuals(&t, process.beta_next());
        out.push(
            eps_list
                .iter()
                .map(|&e| match_good_ritz(&theta, &res, spectrum, e))
                .collect(),
        );
    }
    Ok(out)
}
