//! GMR: the unit `x ∈ K^j` and real `ρ` minimizing `‖Ax − xρ‖`.
//!
//! Write `x = Q G a` with `T = G Θ Gᵗ` and let `s` be the last row of `G`.
//! Then
//!
//! ```text
//! ‖Ax − xρ‖² = ‖(Θ − ρ) a‖² + β² (sᵗa)²
//! ```
//!
//! and for fixed `ρ` the minimum over unit `a` is the smallest eigenvalue
//! `φ(ρ)` of `(Θ − ρ)² + β² s sᵗ`, a diagonal-plus-rank-one matrix whose
//! lowest eigenpair comes from a one-dimensional secular equation. The
//! outer problem `min φ(ρ)` is solved by a candidate scan followed by
//! golden-section refinement and Rayleigh-quotient polishing.

use crate::krylov::LanczosFactorization;
use crate::linalg::vector::{combine, dot};
use crate::linalg::tridiag_eigen_rows;

const GRID_POINTS: usize = 64;
const MAX_REFINED: usize = 8;
const GOLDEN_ITERS: usize = 80;
const SECULAR_ITERS: usize = 200;
const POLISH_ITERS: usize = 50;

/// Minimizer in Ritz coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GmrSolution {
    /// Rayleigh quotient of the minimizing vector.
    pub rho: f64,
    /// Unit coefficient vector `a` in the Ritz basis.
    pub coords: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GmrEigenpair {
    pub x: Vec<f64>,
    pub rho: f64,
    pub residual: f64,
}

/// Lowest eigenpair of `diag((θ_i − ρ)²) + w wᵗ`.
fn lowest_pair(theta: &[f64], w: &[f64], rho: f64) -> (f64, Vec<f64>) {
    let j = theta.len();
    let m = (0..j)
        .min_by(|&a, &b| (theta[a] - rho).abs().total_cmp(&(theta[b] - rho).abs()))
        .expect("nonempty");
    let dm = (theta[m] - rho).powi(2);
    let delta: Vec<f64> = theta
        .iter()
        .map(|&t| ((t - theta[m]) * (t + theta[m] - 2.0 * rho)).max(0.0))
        .collect();
    let wm2 = w[m] * w[m];
    if wm2 == 0.0 {
        let mut a = vec![0.0; j];
        a[m] = 1.0;
        return (dm, a);
    }

    let mut upper = wm2;
    for i in (0..j).filter(|&i| i != m && w[i] != 0.0) {
        if delta[i] == 0.0 {
            // a tie at the pole: a combination of e_m and e_i avoids w
            let mut a = vec![0.0; j];
            let h = w[i].hypot(w[m]);
            a[m] = w[i] / h;
            a[i] = -w[m] / h;
            return (dm, a);
        }
        upper = upper.min(delta[i]);
    }

    // h(μ) = μ (1 + Σ_{i≠m} w_i² / (δ_i − μ)) − w_m², increasing and convex
    // on (0, min δ_i), with its root at the eigenvalue shift.
    let h = |mu: f64| {
        let (mut sum, mut dsum) = (0.0, 0.0);
        for i in (0..j).filter(|&i| i != m) {
            let q = w[i] * w[i] / (delta[i] - mu);
            sum += q;
            dsum += q / (delta[i] - mu);
        }
        (mu * (1.0 + sum) - wm2, 1.0 + sum + mu * dsum)
    };
    let (mut lo, mut hi) = (0.0, upper);
    let mut mu = if wm2 < upper { wm2 } else { 0.5 * upper };
    for _ in 0..SECULAR_ITERS {
        let (val, der) = h(mu);
        if val == 0.0 {
            break;
        }
        if val > 0.0 {
            hi = mu;
        } else {
            lo = mu;
        }
        let mut next = mu - val / der;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - mu).abs() <= 4.0 * f64::EPSILON * mu.abs() || next == mu {
            mu = next;
            break;
        }
        mu = next;
    }

    let mut a: Vec<f64> = (0..j)
        .map(|i| if i == m { w[m] / mu } else { w[i] / (mu - delta[i]) })
        .collect();
    let nrm = crate::linalg::vector::norm(&a);
    a.iter_mut().for_each(|x| *x /= nrm);
    (dm + mu, a)
}

fn evaluate(theta: &[f64], w: &[f64], a: Vec<f64>) -> GmrSolution {
    let rho: f64 = theta.iter().zip(&a).map(|(t, x)| t * x * x).sum();
    let spread: f64 = theta.iter().zip(&a).map(|(t, x)| ((t - rho) * x).powi(2)).sum();
    let coupling = dot(w, &a);
    GmrSolution {
        rho,
        residual: (spread + coupling * coupling).sqrt(),
        coords: a,
    }
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if (b - a).abs() <= 1e-10 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        c
    } else {
        d
    }
}

/// GMR in Ritz coordinates.
///
/// `theta` are the Ritz values (ascending), `s` the last components of the
/// corresponding eigenvectors of `T`, and `beta = β_j`. Extra trial shifts
/// may be passed in `hints`; they are scanned along with the built-in
/// candidates.
pub fn gmr_projected(theta: &[f64], s: &[f64], beta: f64, hints: &[f64]) -> GmrSolution {
    let j = theta.len();
    assert!(j > 0 && s.len() == j, "need at least one Ritz value");
    let w: Vec<f64> = s.iter().map(|x| beta * x).collect();
    if beta == 0.0 {
        let mut a = vec![0.0; j];
        a[0] = 1.0;
        return GmrSolution {
            rho: theta[0],
            coords: a,
            residual: 0.0,
        };
    }

    if j == 1 {
        return GmrSolution {
            rho: theta[0],
            coords: vec![1.0],
            residual: w[0].abs(),
        };
    }

    let (lo, hi) = (theta[0] - beta.abs(), theta[j - 1] + beta.abs());
    let mut cands: Vec<f64> = theta.to_vec();
    cands.extend(theta.windows(2).map(|p| 0.5 * (p[0] + p[1])));
    cands.extend((0..=GRID_POINTS).map(|k| lo + (hi - lo) * k as f64 / GRID_POINTS as f64));
    cands.extend(hints.iter().filter(|h| h.is_finite()).map(|h| h.clamp(lo, hi)));
    cands.sort_by(f64::total_cmp);
    cands.dedup();

    let phi = |rho: f64| lowest_pair(theta, &w, rho).0;
    let mut best: Option<GmrSolution> = None;
    let mut consider = |sol: GmrSolution| {
        if best.as_ref().is_none_or(|b| sol.residual < b.residual) {
            best = Some(sol);
        }
    };

    let values: Vec<f64> = cands.iter().map(|&r| phi(r)).collect();
    let floor = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    for &k in order.iter().take(MAX_REFINED) {
        if values[k] > 4.0 * floor && k != order[0] {
            break;
        }
        let left = cands[k.saturating_sub(1)];
        let right = cands[(k + 1).min(cands.len() - 1)];
        let rho = golden_section(phi, left, right);
        let candidate = if phi(rho) <= values[k] { rho } else { cands[k] };
        consider(evaluate(theta, &w, lowest_pair(theta, &w, candidate).1));
    }
    for &k in order.iter().take(MAX_REFINED) {
        consider(evaluate(theta, &w, lowest_pair(theta, &w, cands[k]).1));
    }

    // alternate between the best vector for a shift and the best shift
    // (Rayleigh quotient) for a vector; each half-step can only lower the
    // residual
    let mut cur = best.expect("at least one candidate");
    for _ in 0..POLISH_ITERS {
        let next = evaluate(theta, &w, lowest_pair(theta, &w, cur.rho).1);
        if next.residual < cur.residual {
            cur = next;
        } else {
            break;
        }
    }
    cur
}

/// GMR eigenpair approximation from `K^j`.
///
/// At breakdown or `j = n` the residual is zero and an exact eigenpair is
/// returned.
pub fn gmr_eigenpair(fact: &LanczosFactorization) -> GmrEigenpair {
    let t = fact.tridiag();
    let j = t.order();
    let rows: Vec<usize> = (0..j).collect();
    let (theta, g) = tridiag_eigen_rows(t, &rows);
    let sol = gmr_projected(&theta, &g[j - 1], fact.beta_next(), &[]);
    let c: Vec<f64> = g.iter().map(|row| dot(row, &sol.coords)).collect();
    GmrEigenpair {
        x: combine(fact.basis(), &c, fact.dim()),
        rho: sol.rho,
        residual: sol.residual,
    }
}
