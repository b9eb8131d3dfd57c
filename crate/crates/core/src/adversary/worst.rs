use crate::eigen::gmr_eigenpair;
use crate::error::{Error, Result};
use crate::krylov::lanczos_factorize;
use crate::linalg::vector::normalized;
use crate::linalg::DenseSymmetric;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const CLIMB_ITERS: usize = 400;
const MIN_STEP: f64 = 1e-7;

/// Best start vector found by [`worst_start_search`] and the bracket
/// `[‖A‖/(2j), ‖A‖/j]` it is compared against.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstStart {
    pub b: Vec<f64>,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl WorstStart {
    /// `value` lies in `[lower − slack_low, upper + slack_high]`.
    pub fn within(&self, slack_low: f64, slack_high: f64) -> bool {
        self.value >= self.lower - slack_low && self.value <= self.upper + slack_high
    }
}

/// Step-`j` GMR residual from the start `b` (zero once the Krylov space is
/// invariant).
pub fn gmr_residual_from(a: &DenseSymmetric, b: &[f64], j: usize) -> Result<f64> {
    let fact = lanczos_factorize(a, b, j)?;
    if fact.steps() < j {
        return Ok(0.0);
    }
    Ok(gmr_eigenpair(&fact).residual)
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(u) = normalized(&v) {
            return u;
        }
    }
}

/// Heuristic search for the start vector that maximizes the step-`j` GMR
/// residual: `budget` random restarts, each followed by a (1+1) evolution
/// strategy on the unit sphere with a one-fifth success rule. The result is
/// a lower estimate of the true maximum.
pub fn worst_start_search(
    a: &DenseSymmetric,
    j: usize,
    budget: usize,
    seed: u64,
) -> Result<WorstStart> {
    let n = a.order();
    if j == 0 || j > n {
        return Err(Error::StepOutOfRange { step: j, order: n });
    }
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be positive".into()));
    }
    let norm_a = a.norm2();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_b = crate::linalg::vector::unit(n, 0);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..budget {
        let mut b = random_unit(&mut rng, n);
        let mut val = gmr_residual_from(a, &b, j)?;
        let mut sigma = 0.3;
        for _ in 0..CLIMB_ITERS {
            if sigma < MIN_STEP {
                break;
            }
            let dir = random_unit(&mut rng, n);
            let trial: Vec<f64> = b.iter().zip(&dir).map(|(x, d)| x + sigma * d).collect();
            let Some(trial) = normalized(&trial) else {
                continue;
            };
            let tv = gmr_residual_from(a, &trial, j)?;
            if tv > val {
                b = trial;
                val = tv;
                sigma *= 1.5;
            } else {
                sigma *= 0.9;
            }
        }
        if val > best {
            best = val;
            best_b = b;
        }
    }
    Ok(WorstStart {
        b: best_b,
        value: best,
        lower: norm_a / (2.0 * j as f64),
        upper: norm_a / j as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_dimension_is_exact() {
        let a = DenseSymmetric::from_diagonal(&[1.0, -2.0, 3.0]);
        let w = worst_start_search(&a, 3, 2, 1).unwrap();
        assert!(w.value < 1e-12);
    }

    #[test]
    fn two_by_two_optimum() {
        let a = DenseSymmetric::from_diagonal(&[-1.0, 1.0]);
        let w = worst_start_search(&a, 1, 4, 3).unwrap();
        assert!((w.value - 1.0).abs() < 1e-6, "{w:?}");
        assert!((w.b[0].abs() - w.b[1].abs()).abs() < 1e-3);
        assert!(w.within(0.0, 1e-9));
    }
}
