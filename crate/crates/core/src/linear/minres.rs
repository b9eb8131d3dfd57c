use super::SolveTrace;
use crate::error::{Error, Result};
use crate::krylov::{check_start, LanczosFactorization, LanczosProcess, LinearOperator};
use crate::linalg::vector::{axpy, combine, norm};
use crate::linalg::SymTridiagonal;

const PIVOT_TOL: f64 = 1e-14;

/// An approximate solution from the Krylov space together with its residual,
/// both formed from the Lanczos vectors without further operator calls.
#[derive(Debug, Clone, PartialEq)]
pub struct Projected {
    pub x: Vec<f64>,
    /// Coordinates of `x` in the Lanczos basis.
    pub coeffs: Vec<f64>,
    /// `b - Ax`.
    pub residual: Vec<f64>,
}

impl Projected {
    pub fn residual_norm(&self) -> f64 {
        norm(&self.residual)
    }
}

struct Givens {
    c: f64,
    s: f64,
}

impl Givens {
    fn zeroing(a: f64, b: f64) -> (Self, f64) {
        let r = a.hypot(b);
        if r == 0.0 {
            (Self { c: 1.0, s: 0.0 }, 0.0)
        } else {
            (Self { c: a / r, s: b / r }, r)
        }
    }

    fn apply(&self, x: &mut f64, y: &mut f64) {
        let (a, b) = (*x, *y);
        *x = self.c * a + self.s * b;
        *y = -self.s * a + self.c * b;
    }
}

/// Least-squares solve of `min ‖bnorm·e₁ − B̄ y‖` where
/// `B̄ = [T; β e_jᵗ]` is `(j+1) × j`. Returns `y`.
fn hessenberg_least_squares(t: &SymTridiagonal, beta: f64, bnorm: f64) -> Result<Vec<f64>> {
    let j = t.order();
    let (a, off) = (t.diag(), t.offdiag());
    let scale = t.max_abs_entry().max(beta.abs());
    let mut rots: Vec<Givens> = Vec::with_capacity(j);
    let (mut top, mut mid, mut dia) = (vec![0.0; j], vec![0.0; j], vec![0.0; j]);
    let mut g = vec![0.0; j + 1];
    g[0] = bnorm;
    for k in 0..j {
        let mut c_top = 0.0;
        let mut c_mid = if k > 0 { off[k - 1] } else { 0.0 };
        let mut c_dia = a[k];
        let c_sub = if k + 1 < j { off[k] } else { beta };
        if k >= 2 {
            rots[k - 2].apply(&mut c_top, &mut c_mid);
        }
        if k >= 1 {
            rots[k - 1].apply(&mut c_mid, &mut c_dia);
        }
        let (rot, r) = Givens::zeroing(c_dia, c_sub);
        c_dia = r;
        let (mut gk, mut gk1) = (g[k], g[k + 1]);
        rot.apply(&mut gk, &mut gk1);
        g[k] = gk;
        g[k + 1] = gk1;
        rots.push(rot);
        top[k] = c_top;
        mid[k] = c_mid;
        dia[k] = c_dia;
        if dia[k].abs() <= PIVOT_TOL * scale {
            return Err(Error::SingularProjection { step: j });
        }
    }
    let mut y = vec![0.0; j];
    for k in (0..j).rev() {
        let mut acc = g[k];
        if k + 1 < j {
            acc -= mid[k + 1] * y[k + 1];
        }
        if k + 2 < j {
            acc -= top[k + 2] * y[k + 2];
        }
        y[k] = acc / dia[k];
    }
    Ok(y)
}

/// Solves `T y = rhs` by Gaussian elimination with partial pivoting.
fn tridiagonal_solve(t: &SymTridiagonal, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = t.order();
    let scale = t.max_abs_entry();
    let mut d = t.diag().to_vec();
    let mut du = t.offdiag().to_vec();
    let dl = t.offdiag().to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    let singular = || Error::SingularProjection { step: n };
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i].abs() <= PIVOT_TOL * scale {
                return Err(singular());
            }
            let f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            du[i] = tmp;
            let bi = b[i];
            b[i] = b[i + 1];
            b[i + 1] = bi - f * b[i + 1];
        }
    }
    if d[n - 1].abs() <= PIVOT_TOL * scale {
        return Err(singular());
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        if i + 1 < n {
            acc -= du[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= du2[i] * x[i + 2];
        }
        x[i] = acc / d[i];
    }
    Ok(x)
}

/// `b − A Q y` expressed through `A Q = Q T + β q_next e_jᵗ`.
fn residual_from_coeffs(fact: &LanczosFactorization, bnorm: f64, y: &[f64]) -> Vec<f64> {
    let t = fact.tridiag();
    let mut s: Vec<f64> = t.apply_unchecked(y).iter().map(|v| -v).collect();
    s[0] += bnorm;
    let mut r = combine(fact.basis(), &s, fact.dim());
    let tail = fact.beta_next() * y[y.len() - 1];
    if tail != 0.0 {
        axpy(-tail, fact.q_next(), &mut r);
    }
    r
}

/// Minimal-residual solution: minimizes `‖b − Av‖` over `v ∈ K^j`.
///
/// The factorization must come from `b` and carry `β_j` and `q_{j+1}`, which
/// is to say it consumes `N_j`.
pub fn mr_step(fact: &LanczosFactorization, b: &[f64]) -> Result<Projected> {
    let bnorm = check_rhs(fact, b)?;
    let y = hessenberg_least_squares(fact.tridiag(), fact.beta_next(), bnorm)?;
    let residual = residual_from_coeffs(fact, bnorm, &y);
    Ok(Projected {
        x: combine(fact.basis(), &y, fact.dim()),
        coeffs: y,
        residual,
    })
}

/// Galerkin solution: `x ∈ K^j` with `Qᵗ(b − Ax) = 0`. For SPD `A` this is
/// the conjugate gradient iterate.
pub fn cg_step(fact: &LanczosFactorization, b: &[f64]) -> Result<Projected> {
    let bnorm = check_rhs(fact, b)?;
    let mut rhs = vec![0.0; fact.steps()];
    rhs[0] = bnorm;
    let y = tridiagonal_solve(fact.tridiag(), &rhs)?;
    let residual = residual_from_coeffs(fact, bnorm, &y);
    Ok(Projected {
        x: combine(fact.basis(), &y, fact.dim()),
        coeffs: y,
        residual,
    })
}

fn check_rhs(fact: &LanczosFactorization, b: &[f64]) -> Result<f64> {
    if b.len() != fact.dim() {
        return Err(Error::DimensionMismatch {
            expected: fact.dim(),
            found: b.len(),
        });
    }
    Ok(norm(b))
}

fn run<O, F>(op: &O, b: &[f64], eps: f64, max_steps: usize, solve: F) -> Result<SolveTrace>
where
    O: LinearOperator + ?Sized,
    F: Fn(&LanczosFactorization, &[f64]) -> Result<Projected>,
{
    check_start(b, op.dim())?;
    let mut trace = SolveTrace::new();
    trace.record(vec![0.0; b.len()], norm(b), eps * norm(b));
    let mut process = LanczosProcess::new(op, b)?;
    while process.steps() < max_steps.min(op.dim()) && process.step() {
        let fact = process.factorization().expect("stepped at least once");
        let p = solve(&fact, b)?;
        let r = p.residual_norm();
        trace.record(p.x, r, eps * norm(b));
    }
    Ok(trace)
}

/// MR trace: entry `j` minimizes the residual over `K^j` using `N_j`.
/// Stops early once the Krylov space becomes invariant.
pub fn mr_run<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    eps: f64,
    max_steps: usize,
) -> Result<SolveTrace> {
    run(op, b, eps, max_steps, mr_step)
}

/// Galerkin (CG) trace with the same indexing as [`mr_run`].
pub fn cg_run<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    eps: f64,
    max_steps: usize,
) -> Result<SolveTrace> {
    run(op, b, eps, max_steps, cg_step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krylov::lanczos_factorize;
    use crate::linalg::DenseSymmetric;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn diag12() -> (DenseSymmetric, Vec<f64>) {
        (
            DenseSymmetric::from_diagonal(&[1.0, 2.0]),
            vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2],
        )
    }

    #[test]
    fn identity_is_solved_in_one_step() {
        let a = DenseSymmetric::identity(3);
        let b = vec![0.0, 0.6, 0.8];
        let f = lanczos_factorize(&a, &b, 1).unwrap();
        for p in [mr_step(&f, &b).unwrap(), cg_step(&f, &b).unwrap()] {
            assert!(crate::linalg::vector::max_abs_diff(&p.x, &b) < 1e-15);
            assert!(p.residual_norm() < 1e-15);
        }
    }

    #[test]
    fn scalar_minimal_residual() {
        let (a, b) = diag12();
        let f = lanczos_factorize(&a, &b, 1).unwrap();
        let p = mr_step(&f, &b).unwrap();
        assert!((p.x[0] - 0.6 * b[0]).abs() < 1e-14);
        assert!((p.x[1] - 0.6 * b[1]).abs() < 1e-14);
        assert!((p.residual_norm().powi(2) - 0.1).abs() < 1e-14);
    }

    #[test]
    fn scalar_galerkin() {
        let (a, b) = diag12();
        let f = lanczos_factorize(&a, &b, 1).unwrap();
        let p = cg_step(&f, &b).unwrap();
        assert!((p.x[0] - 2.0 / 3.0 * b[0]).abs() < 1e-14);
        assert!((p.x[1] - 2.0 / 3.0 * b[1]).abs() < 1e-14);
    }

    #[test]
    fn pivoted_solve_handles_zero_leading_entry() {
        let t = SymTridiagonal::new(vec![0.0, 0.0, 1.0], vec![1.0, 2.0]).unwrap();
        let x = tridiagonal_solve(&t, &[1.0, 2.0, 3.0]).unwrap();
        let back = t.apply(&x).unwrap();
        assert!(crate::linalg::vector::max_abs_diff(&back, &[1.0, 2.0, 3.0]) < 1e-14);
        let singular = SymTridiagonal::new(vec![0.0, 0.0], vec![0.0]).unwrap();
        assert!(matches!(
            tridiagonal_solve(&singular, &[1.0, 0.0]),
            Err(Error::SingularProjection { .. })
        ));
    }

    #[test]
    fn indefinite_galerkin_can_be_singular() {
        let a = DenseSymmetric::from_diagonal(&[-1.0, 1.0]);
        let b = vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2];
        let f = lanczos_factorize(&a, &b, 1).unwrap();
        assert!(cg_step(&f, &b).is_err());
        let p = mr_step(&f, &b).unwrap();
        assert!((p.residual_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mr_trace_is_monotone_and_exact_at_full_dimension() {
        let t = SymTridiagonal::new(vec![2.0, -1.0, 0.5, 3.0, 1.5], vec![0.7, 0.4, 1.1, 0.2])
            .unwrap();
        let b = crate::linalg::vector::unit(5, 0);
        let trace = mr_run(&t, &b, 1e-10, 5).unwrap();
        assert_eq!(trace.len(), 6);
        for w in trace.residual_norms.windows(2) {
            assert!(w[1] <= w[0] + 1e-14);
        }
        assert!(trace.residual_norms[5] < 1e-12);
        assert_eq!(trace.stop_step, Some(5));
    }
}
