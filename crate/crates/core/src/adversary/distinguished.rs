use crate::error::{Error, Result};
use crate::krylov::{lanczos_factorize, LinearOperator};
use crate::linalg::vector::{dot, unit};
use crate::linalg::{orthonormalize, DenseSymmetric, SymTridiagonal};

/// `A` written in an orthonormal basis `W = [q_1..q_j, q_{j+1}, c_1..]`
/// whose first `j` columns span `K^j`:
///
/// ```text
/// Wᵗ A W = [ T  Eᵗ ]      E = β e₁ e_jᵗ
///          [ E  U  ]
/// ```
///
/// `T` and `β` are fixed by the Krylov information `N_j`; the block `U` is
/// invisible to it.
#[derive(Debug, Clone, PartialEq)]
pub struct DistinguishedForm {
    t: SymTridiagonal,
    beta: f64,
    basis: Vec<Vec<f64>>,
    u: DenseSymmetric,
}

impl DistinguishedForm {
    pub fn t(&self) -> &SymTridiagonal {
        &self.t
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Columns of `W`.
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// The hidden block `U` of the original matrix.
    pub fn u(&self) -> &DenseSymmetric {
        &self.u
    }

    pub fn steps(&self) -> usize {
        self.t.order()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates `Wᵗ v`.
    pub fn coords(&self, v: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|w| dot(w, v)).collect()
    }

    /// The block matrix `[[T, Eᵗ], [E, Ũ]]` in basis coordinates.
    pub fn block_matrix(&self, u_tilde: &DenseSymmetric) -> Result<DenseSymmetric> {
        let (n, j) = (self.dim(), self.steps());
        if u_tilde.order() != n - j {
            return Err(Error::DimensionMismatch {
                expected: n - j,
                found: u_tilde.order(),
            });
        }
        Ok(DenseSymmetric::from_fn(n, |r, c| match (r < j, c < j) {
            (true, true) => self.t.get(r, c),
            (false, false) => u_tilde.get(r - j, c - j),
            _ if r == j && c == j - 1 => self.beta,
            _ => 0.0,
        }))
    }
}

/// Builds the distinguished form of `A` for the start `b` at degree `j`.
///
/// Needs `β_j ≠ 0`; a Krylov space that is invariant at or before step `j`
/// has no such form and is reported as [`Error::Breakdown`]. Computing `U`
/// applies the operator to the `n − j` trailing basis vectors.
pub fn distinguished_form<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    j: usize,
) -> Result<DistinguishedForm> {
    let n = op.dim();
    if j == 0 || j >= n {
        return Err(Error::StepOutOfRange { step: j, order: n });
    }
    let fact = lanczos_factorize(op, b, j)?;
    if fact.steps() < j || fact.is_invariant() {
        return Err(Error::Breakdown {
            step: fact.steps(),
        });
    }
    let mut seeds: Vec<Vec<f64>> = fact.basis().to_vec();
    seeds.push(fact.q_next().to_vec());
    seeds.extend((0..n).map(|i| unit(n, i)));
    let basis = orthonormalize(&seeds).basis;
    debug_assert_eq!(basis.len(), n);

    let trailing = &basis[j..];
    let images: Vec<Vec<f64>> = trailing.iter().map(|w| op.matvec(w)).collect();
    let u = DenseSymmetric::from_fn(n - j, |r, c| {
        0.5 * (dot(&trailing[r], &images[c]) + dot(&trailing[c], &images[r]))
    });
    Ok(DistinguishedForm {
        t: fact.tridiag().clone(),
        beta: fact.beta_next(),
        basis,
        u,
    })
}

/// `Ã = W [[T, Eᵗ], [E, Ũ]] Wᵗ`, a matrix with the same Krylov information
/// `N_j` as `A`.
pub fn complete_with(df: &DistinguishedForm, u_tilde: &DenseSymmetric) -> Result<DenseSymmetric> {
    df.block_matrix(u_tilde)?.congruence(&df.basis, df.dim())
}

/// Largest relative defect `‖Ã A^{i−1}b − A^i b‖ / ‖A^i b‖` over
/// `i = 1..=j`.
///
/// By induction this vanishes exactly when `Ã^i b = A^i b` for `i ≤ j`, but
/// unlike iterating `Ã` it does not amplify rounding errors by `‖Ã‖^i`.
pub fn information_defect<O: LinearOperator + ?Sized>(
    a: &O,
    a_tilde: &DenseSymmetric,
    b: &[f64],
    j: usize,
) -> f64 {
    let mut prev = b.to_vec();
    let mut worst = 0.0_f64;
    for _ in 0..j {
        let exact = a.matvec(&prev);
        let other = a_tilde.apply_unchecked(&prev);
        let scale = crate::linalg::vector::norm(&exact).max(f64::MIN_POSITIVE);
        worst = worst.max(crate::linalg::vector::max_abs_diff(&exact, &other) / scale);
        prev = exact;
    }
    worst
}

/// Dense check of the distinguished basis for a nonsymmetric matrix.
///
/// With Arnoldi vectors `q_1..q_{j+1}` completed to an orthonormal basis
/// `W`, the first `j` columns of `Wᵗ A W` vanish below row `j + 1`, and only
/// `h_{j+1,j}` couples them to the rest of the space.
#[derive(Debug, Clone, PartialEq)]
pub struct NonsymmetricForm {
    /// Upper Hessenberg `(j+1) × j` block.
    pub hessenberg: Vec<Vec<f64>>,
    /// Largest entry of the first `j` columns below row `j + 1`.
    pub pattern_defect: f64,
}

pub fn nonsymmetric_form(rows: &[Vec<f64>], b: &[f64], j: usize) -> Result<NonsymmetricForm> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) || b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    if j == 0 || j >= n {
        return Err(Error::StepOutOfRange { step: j, order: n });
    }
    crate::krylov::check_start(b, n)?;
    let apply = |v: &[f64]| -> Vec<f64> { rows.iter().map(|r| dot(r, v)).collect() };

    let mut q: Vec<Vec<f64>> = vec![b.to_vec()];
    for k in 0..j {
        let w = apply(&q[k]);
        let mut next = orthonormalize(&[q.clone(), vec![w]].concat()).basis;
        if next.len() <= q.len() {
            return Err(Error::Breakdown { step: k + 1 });
        }
        q.push(next.swap_remove(q.len()));
    }
    let mut seeds = q.clone();
    seeds.extend((0..n).map(|i| unit(n, i)));
    let basis = orthonormalize(&seeds).basis;

    let mut hessenberg = vec![vec![0.0; j]; j + 1];
    let mut pattern_defect = 0.0_f64;
    for c in 0..j {
        let aw = apply(&basis[c]);
        for (r, w) in basis.iter().enumerate() {
            let v = dot(w, &aw);
            if r <= j {
                hessenberg[r][c] = v;
            } else {
                pattern_defect = pattern_defect.max(v.abs());
            }
        }
        for (r, row) in hessenberg.iter().enumerate().take(j + 1) {
            if r > c + 1 {
                pattern_defect = pattern_defect.max(row[c].abs());
            }
        }
    }
    Ok(NonsymmetricForm {
        hessenberg,
        pattern_defect,
    })
}
