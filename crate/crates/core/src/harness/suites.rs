use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::recipe::{generate_matrix, generate_start, MatrixKind, MatrixRecipe, StartKind, StartVectorRecipe};
use crate::adversary::{adversarial_blowup, distinguished_form, projection_lemma_check, reflect_twin};
use crate::error::{Error, Result};
use crate::linalg::vector::{dot, norm, sub};
use crate::linalg::DenseSymmetric;
use crate::linear::{chebyshev_run, mr_run, q_epsilon, ChebyshevParams};

/// Pass/fail tally of a randomized verification suite.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    /// Cases where the checked implication had a false premise.
    pub vacuous: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            ..Self::default()
        }
    }

    fn record(&mut self, ok: bool, vacuous: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if vacuous {
            self.vacuous += 1;
        }
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.failures.push(describe());
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn solve_dense(a: &DenseSymmetric, b: &[f64]) -> Vec<f64> {
    let eig = a.eigen();
    let mut x = vec![0.0; b.len()];
    for (l, u) in eig.values.iter().zip(&eig.vectors) {
        let c = dot(u, b) / l;
        x.iter_mut().zip(u).for_each(|(xi, ui)| *xi += c * ui);
    }
    x
}

fn random_case(rng: &mut ChaCha8Rng, kind: MatrixKind, n: usize) -> Result<(DenseSymmetric, Vec<f64>)> {
    let recipe = MatrixRecipe::new(kind, n).with_seed(rng.random());
    let a = generate_matrix(&recipe)?.to_dense();
    let b = generate_start(&StartVectorRecipe::new(StartKind::RandomUnit, rng.random()), &a)?;
    Ok((a, b))
}

/// Randomized check of the projection lemma on `cases` random symmetric
/// systems with `n ≤ 20` and `j < n − 1`.
///
/// Each case perturbs the exact solution by a random relative amount in
/// `[1e−8, 1]`. Half the cases use the smallest `ε` for which both
/// hypotheses hold, so the implication is exercised; the rest draw `ε`
/// log-uniformly from `[1e−6, 1]`. A case also fails when the reflector
/// twin does not re-verify.
pub fn projection_lemma_suite(cases: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("projection-lemma");
    for k in 0..cases {
        let n = rng.random_range(3..=20);
        let j = rng.random_range(1..=n - 2);
        let (a, b) = random_case(&mut rng, MatrixKind::RandomSymmetric, n)?;
        let x = solve_dense(&a, &b);
        let delta = 10f64.powf(rng.random_range(-8.0..0.0)) * norm(&x);
        let g = generate_start(&StartVectorRecipe::new(StartKind::RandomUnit, rng.random()), &a)?;
        let y: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + delta * gi).collect();

        let twin = reflect_twin(&a, &b, j, &y)?;
        let check = twin.verify()?;
        let eps = if k % 2 == 0 {
            twin.norms.original.max(twin.norms.twin) / norm(&b) * (1.0 + 1e-12)
        } else {
            10f64.powf(rng.random_range(-6.0..0.0))
        };
        let verdict = projection_lemma_check(&a, &b, j, eps, &y)?;
        report.record(verdict.passed() && check.passed(), !verdict.hypotheses_hold, || {
            format!("case {k}: n={n} j={j} eps={eps:e} {verdict:?} {check:?}")
        });
    }
    Ok(report)
}

/// Randomized adversary certificates on random SPD matrices (`n ≤ 16`),
/// random outputs `v` and targets log-uniform in `[1, 10³]`.
pub fn adversary_suite(cases: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("adversary-certificate");
    for k in 0..cases {
        let n = rng.random_range(2..=16);
        let j = rng.random_range(1..n);
        let (a, b) = random_case(&mut rng, MatrixKind::RandomSpd, n)?;
        let v = generate_start(&StartVectorRecipe::new(StartKind::RandomUnit, rng.random()), &a)?;
        let v: Vec<f64> = v.iter().map(|x| x * rng.random_range(0.1..10.0)).collect();
        let target = 10f64.powf(rng.random_range(0.0..3.0));
        let outcome = distinguished_form(&a, &b, j).and_then(|df| adversarial_blowup(&df, &v, target));
        match outcome {
            Ok(cert) => {
                let check = cert.verify(&a);
                report.record(check.passed(target), false, || {
                    format!("case {k}: n={n} j={j} target={target:e} {check:?}")
                });
            }
            Err(Error::Breakdown { .. } | Error::NoAdversary) => report.record(true, true, String::new),
            Err(e) => report.record(false, false, || format!("case {k}: n={n} j={j}: {e}")),
        }
    }
    Ok(report)
}

/// Chebyshev stop step against `q(ε)` on a worst-case member of the
/// `ρ`-class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevCase {
    pub n: usize,
    pub rho: f64,
    pub eps: f64,
    pub q: usize,
    pub stop: Option<usize>,
}

impl ChebyshevCase {
    pub fn matches(&self) -> bool {
        self.stop == Some(self.q)
    }
}

/// Runs Chebyshev from `e_1` on the `ftilde_rho_member` recipe, where `e_1`
/// weights only the eigenvalues `1 ± ρ`.
pub fn chebyshev_worst_case(n: usize, rho: f64, eps: f64, seed: u64) -> Result<ChebyshevCase> {
    let q = q_epsilon(eps, rho)?;
    let recipe = MatrixRecipe::new(MatrixKind::FtildeRhoMember, n)
        .with_rho(rho)
        .with_seed(seed);
    let a = generate_matrix(&recipe)?;
    let b = generate_start(&StartVectorRecipe::new(StartKind::E1, seed), &a)?;
    let trace = chebyshev_run(&a, &b, ChebyshevParams::new(rho)?, eps, q + 5)?;
    Ok(ChebyshevCase {
        n,
        rho,
        eps,
        q,
        stop: trace.stop_step,
    })
}

/// Residuals of MR with `N_q`, Chebyshev with `N_q` and MR with `N_{q+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearWitness {
    pub n: usize,
    pub rho: f64,
    pub eps: f64,
    pub q: usize,
    pub seed: u64,
    pub mr_q: f64,
    pub cheb_q: f64,
    pub mr_q1: f64,
}

impl LinearWitness {
    /// MR with `N_q` is beaten by Chebyshev, which is beaten by MR with
    /// `N_{q+1}`.
    pub fn is_witness(&self) -> bool {
        self.mr_q > self.cheb_q && self.cheb_q > self.mr_q1
    }
}

/// Evaluates the three residuals for one `(n, ρ, ε, seed)` with a random
/// unit right-hand side. `None` when MR reaches an invariant subspace
/// before step `q + 1`.
pub fn linear_witness_case(
    n: usize,
    rho: f64,
    eps: f64,
    seed: u64,
    start: StartKind,
) -> Result<Option<LinearWitness>> {
    let q = q_epsilon(eps, rho)?;
    let recipe = MatrixRecipe::new(MatrixKind::FtildeRhoMember, n)
        .with_rho(rho)
        .with_seed(seed);
    let a = generate_matrix(&recipe)?;
    let b = generate_start(&StartVectorRecipe::new(start, seed), &a)?;
    let mr = mr_run(&a, &b, eps, q + 1)?;
    let cheb = chebyshev_run(&a, &b, ChebyshevParams::new(rho)?, eps, q)?;
    if mr.residual_norms.len() < q + 2 {
        return Ok(None);
    }
    Ok(Some(LinearWitness {
        n,
        rho,
        eps,
        q,
        seed,
        mr_q: mr.residual_norms[q],
        cheb_q: cheb.residual_norms[q],
        mr_q1: mr.residual_norms[q + 1],
    }))
}

/// Relative residual `‖b − Ax‖ / ‖b‖` computed densely.
pub fn relative_residual(a: &DenseSymmetric, x: &[f64], b: &[f64]) -> Result<f64> {
    Ok(norm(&sub(b, &a.apply(x)?)) / norm(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let p = projection_lemma_suite(20, 1).unwrap();
        assert_eq!(p.cases, 20);
        assert!(p.all_passed(), "{:?}", p.failures);
        assert!(p.vacuous < p.cases);
        let a = adversary_suite(20, 2).unwrap();
        assert!(a.all_passed(), "{:?}", a.failures);
        assert_eq!(a.vacuous, 0);
    }

    #[test]
    fn chebyshev_case_hits_q() {
        let c = chebyshev_worst_case(10, 0.5, 1e-4, 3).unwrap();
        assert!(c.matches(), "{c:?}");
    }

    #[test]
    fn solve_dense_solves() {
        let a = DenseSymmetric::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let b = [1.0, 2.0];
        assert!(relative_residual(&a, &solve_dense(&a, &b), &b).unwrap() < 1e-15);
    }
}
