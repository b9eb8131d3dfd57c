//! Symmetric eigensolvers: implicit-shift QL on tridiagonal matrices and a
//! Householder reduction that brings dense symmetric matrices to that form.

use super::dense::DenseSymmetric;
use super::tridiag::SymTridiagonal;
use super::vector::{dot, norm};

const MAX_QL_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// (`vectors[i]` belongs to `values[i]`).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `U diag(λ) Uᵗ`.
    pub fn reconstruct(&self) -> DenseSymmetric {
        let n = self.vectors.first().map_or(0, Vec::len);
        DenseSymmetric::from_fn(n, |i, j| {
            self.values
                .iter()
                .zip(&self.vectors)
                .map(|(l, u)| l * u[i] * u[j])
                .sum()
        })
    }
}

/// Full eigendecomposition of a symmetric tridiagonal matrix.
pub fn sym_tridiag_eigen(t: &SymTridiagonal) -> EigenDecomposition {
    let n = t.order();
    let mut z: Vec<Vec<f64>> = (0..n).map(|i| super::vector::unit(n, i)).collect();
    let mut d = t.diag().to_vec();
    let mut e = extended_offdiag(t.offdiag());
    implicit_ql(&mut d, &mut e, &mut z);
    sorted(d, &z)
}

/// Eigenvalues of `t` (ascending) together with the requested rows of the
/// eigenvector matrix: `out[r][i]` is component `rows[r]` of eigenvector `i`.
///
/// Only the requested rows are carried through the QL rotations, so asking
/// for the last row costs `O(n²)` instead of `O(n³)`.
pub fn tridiag_eigen_rows(t: &SymTridiagonal, rows: &[usize]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = t.order();
    let mut z: Vec<Vec<f64>> = rows.iter().map(|&r| super::vector::unit(n, r)).collect();
    let mut d = t.diag().to_vec();
    let mut e = extended_offdiag(t.offdiag());
    implicit_ql(&mut d, &mut e, &mut z);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let rows_out = z
        .iter()
        .map(|row| order.iter().map(|&i| row[i]).collect())
        .collect();
    (values, rows_out)
}

pub(crate) fn householder_eigen(a: &DenseSymmetric) -> EigenDecomposition {
    let n = a.order();
    if n == 0 {
        return EigenDecomposition {
            values: vec![],
            vectors: vec![],
        };
    }
    let (mut d, offdiag, q) = householder_tridiagonalize(a);
    let mut e = extended_offdiag(&offdiag);
    // rows of Q: component index k, column index = tridiagonal basis index
    let mut z = q;
    implicit_ql(&mut d, &mut e, &mut z);
    sorted(d, &z)
}

fn extended_offdiag(offdiag: &[f64]) -> Vec<f64> {
    let mut e = offdiag.to_vec();
    e.push(0.0);
    e
}

/// Gathers eigenpairs in ascending order. `z` holds eigenvectors as columns
/// (`z[k][i]` = component `k` of vector `i`).
fn sorted(d: Vec<f64>, z: &[Vec<f64>]) -> EigenDecomposition {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    EigenDecomposition {
        values: order.iter().map(|&i| d[i]).collect(),
        vectors: order
            .iter()
            .map(|&i| z.iter().map(|row| row[i]).collect())
            .collect(),
    }
}

/// Implicit-shift QL iteration (Wilkinson shift) on the tridiagonal matrix
/// with diagonal `d` and off-diagonal `e[0..n-1]` (`e[n-1]` is scratch).
///
/// On return `d` holds the (unsorted) eigenvalues. Every rotation is applied
/// to the columns of each row in `z`, so rows of the identity become the
/// corresponding rows of the eigenvector matrix.
fn implicit_ql(d: &mut [f64], e: &mut [f64], z: &mut [Vec<f64>]) {
    let n = d.len();
    if n <= 1 {
        return;
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m] == 0.0 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                // Converged to working precision in practice; bail out
                // rather than loop forever on pathological input.
                e[l] = 0.0;
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Householder reduction `A = Q T Qᵗ`. Returns the diagonal and off-diagonal
/// of `T` and `Q` stored by rows.
fn householder_tridiagonalize(a: &DenseSymmetric) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let n = a.order();
    let mut m = a.to_rows();
    let mut q: Vec<Vec<f64>> = (0..n).map(|i| super::vector::unit(n, i)).collect();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<f64> = (k + 1..n).map(|i| m[i][k]).collect();
        let xnorm = norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let alpha = -xnorm.copysign(x[0]);
        let mut v = x;
        v[0] -= alpha;
        let vnorm = norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|vi| *vi /= vnorm);
        let size = n - k - 1;
        // u = A22 v, gamma = vᵗ u, w = 2u - 2 gamma v
        let u: Vec<f64> = (0..size)
            .map(|i| dot(&m[k + 1 + i][k + 1..], &v))
            .collect();
        let gamma = dot(&v, &u);
        let w: Vec<f64> = u.iter().zip(&v).map(|(ui, vi)| 2.0 * ui - 2.0 * gamma * vi).collect();
        for i in 0..size {
            for j in 0..size {
                m[k + 1 + i][k + 1 + j] -= v[i] * w[j] + w[i] * v[j];
            }
        }
        for i in k + 1..n {
            m[i][k] = 0.0;
            m[k][i] = 0.0;
        }
        m[k + 1][k] = alpha;
        m[k][k + 1] = alpha;
        // Q <- Q H on columns k+1..n
        for row in q.iter_mut() {
            let proj = 2.0 * dot(&row[k + 1..], &v);
            for (rj, vj) in row[k + 1..].iter_mut().zip(&v) {
                *rj -= proj * vj;
            }
        }
    }
    let d = (0..n).map(|i| m[i][i]).collect();
    let e = (0..n.saturating_sub(1)).map(|i| 0.5 * (m[i + 1][i] + m[i][i + 1])).collect();
    (d, e, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector::{max_abs_diff, sub};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Number of eigenvalues of `t` strictly less than `x` (Sturm count).
    fn sturm_count(t: &SymTridiagonal, x: f64) -> usize {
        let (d, e) = (t.diag(), t.offdiag());
        let mut count = 0;
        let mut q = d[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..d.len() {
            let denom = if q == 0.0 { f64::EPSILON * (e[i - 1].abs() + 1e-300) } else { q };
            q = d[i] - x - e[i - 1] * e[i - 1] / denom;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bisection_eigenvalues(t: &SymTridiagonal) -> Vec<f64> {
        let bound = t.max_abs_entry() * 3.0 + 1.0;
        (0..t.order())
            .map(|k| {
                let (mut lo, mut hi) = (-bound, bound);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if sturm_count(t, mid) > k {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }

    fn random_tridiag(n: usize, seed: u64) -> SymTridiagonal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SymTridiagonal::new(
            (0..n).map(|_| rng.random_range(-1.0..1.0)).collect(),
            (0..n - 1).map(|_| rng.random_range(-1.0..1.0)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn decoupled_diagonal() {
        let t = SymTridiagonal::new(vec![3.0, 1.0, 2.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(t.eigen().values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_swap() {
        let t = SymTridiagonal::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let v = t.eigen().values;
        assert!(max_abs_diff(&v, &[-1.0, 1.0]) < 1e-15);
    }

    #[test]
    fn ql_matches_sturm_bisection() {
        for seed in 0..5 {
            let t = random_tridiag(12, seed);
            let ql = t.eigen().values;
            let oracle = bisection_eigenvalues(&t);
            assert!(max_abs_diff(&ql, &oracle) <= 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn tridiagonal_pairs_and_reconstruction() {
        let t = random_tridiag(15, 42);
        let eig = t.eigen();
        let scale = t.norm2();
        for (l, u) in eig.values.iter().zip(&eig.vectors) {
            let au = t.apply(u).unwrap();
            let r = sub(&au, &crate::linalg::vector::scale(*l, u));
            assert!(norm(&r) <= 1e-10 * scale);
        }
        for i in 0..15 {
            for j in 0..15 {
                let g = dot(&eig.vectors[i], &eig.vectors[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g - want).abs() <= 1e-10);
            }
        }
        let diff = eig.reconstruct().sub(&t.to_dense()).unwrap();
        assert!(diff.frobenius_norm() <= 1e-10 * t.to_dense().frobenius_norm());
    }

    #[test]
    fn selected_rows_match_full_vectors() {
        let t = random_tridiag(20, 3);
        let full = t.eigen();
        let (vals, rows) = tridiag_eigen_rows(&t, &[0, 19]);
        assert!(max_abs_diff(&vals, &full.values) < 1e-13);
        for i in 0..20 {
            assert!((rows[0][i].abs() - full.vectors[i][0].abs()).abs() < 1e-12);
            assert!((rows[1][i].abs() - full.vectors[i][19].abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_eigen_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = DenseSymmetric::from_fn(10, |_, _| rng.random_range(-1.0..1.0));
        let eig = a.eigen();
        let scale = a.norm2();
        for (l, u) in eig.values.iter().zip(&eig.vectors) {
            let r = sub(&a.apply(u).unwrap(), &crate::linalg::vector::scale(*l, u));
            assert!(norm(&r) <= 1e-10 * scale);
            assert!((norm(u) - 1.0).abs() < 1e-12);
        }
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn one_by_one_and_empty() {
        let t = SymTridiagonal::new(vec![-2.5], vec![]).unwrap();
        let e = t.eigen();
        assert_eq!(e.values, vec![-2.5]);
        assert_eq!(e.vectors, vec![vec![1.0]]);
        assert!(DenseSymmetric::zeros(0).eigen().is_empty());
    }
}
