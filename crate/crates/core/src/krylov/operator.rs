use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::vector::{dot, norm};
use crate::linalg::{DenseSymmetric, SymTridiagonal};

/// Default tolerance for [`check_symmetric_action`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// A square operator known only through its action on vectors.
///
/// Implementations must be reentrant: `matvec` may be called concurrently.
pub trait LinearOperator: Send + Sync {
    fn dim(&self) -> usize;

    /// `A v`. Callers guarantee `v.len() == self.dim()`.
    fn matvec(&self, v: &[f64]) -> Vec<f64>;

    /// Explicit dense form, for verification code only.
    fn oracle_view(&self) -> Option<DenseSymmetric> {
        None
    }
}

impl LinearOperator for DenseSymmetric {
    fn dim(&self) -> usize {
        self.order()
    }

    fn matvec(&self, v: &[f64]) -> Vec<f64> {
        self.apply_unchecked(v)
    }

    fn oracle_view(&self) -> Option<DenseSymmetric> {
        Some(self.clone())
    }
}

impl LinearOperator for SymTridiagonal {
    fn dim(&self) -> usize {
        self.order()
    }

    fn matvec(&self, v: &[f64]) -> Vec<f64> {
        self.apply_unchecked(v)
    }

    fn oracle_view(&self) -> Option<DenseSymmetric> {
        Some(self.to_dense())
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (**self).matvec(v)
    }

    fn oracle_view(&self) -> Option<DenseSymmetric> {
        (**self).oracle_view()
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (**self).matvec(v)
    }

    fn oracle_view(&self) -> Option<DenseSymmetric> {
        (**self).oracle_view()
    }
}

type MatVec = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// Matrix-free operator backed by a closure.
pub struct FnOperator {
    dim: usize,
    f: Box<MatVec>,
}

impl FnOperator {
    pub fn new(dim: usize, f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Self { dim, f: Box::new(f) }
    }
}

impl std::fmt::Debug for FnOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnOperator").field("dim", &self.dim).finish()
    }
}

impl LinearOperator for FnOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (self.f)(v)
    }
}

/// Wraps an operator and counts matrix-vector products.
#[derive(Debug)]
pub struct CountingOperator<O> {
    inner: O,
    count: AtomicUsize,
}

impl<O: LinearOperator> CountingOperator<O> {
    pub fn new(inner: O) -> Self {
        Self {
            inner,
            count: AtomicUsize::new(0),
        }
    }

    pub fn count(&self) -> usize {
        self.count.load(Ordering::SeqCst)
    }

    pub fn reset(&self) {
        self.count.store(0, Ordering::SeqCst);
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: LinearOperator> LinearOperator for CountingOperator<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn matvec(&self, v: &[f64]) -> Vec<f64> {
        self.count.fetch_add(1, Ordering::SeqCst);
        self.inner.matvec(v)
    }

    fn oracle_view(&self) -> Option<DenseSymmetric> {
        self.inner.oracle_view()
    }
}

/// Self-test: checks `⟨Av, u⟩ = ⟨v, Au⟩` on `samples` random pairs, relative
/// to `‖Av‖‖u‖ + ‖v‖‖Au‖`.
pub fn check_symmetric_action<O: LinearOperator + ?Sized>(
    op: &O,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<()> {
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..samples {
        let u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let au = op.matvec(&u);
        let av = op.matvec(&v);
        let scale = norm(&av) * norm(&u) + norm(&v) * norm(&au);
        if scale > 0.0 {
            worst = worst.max((dot(&av, &u) - dot(&v, &au)).abs() / scale);
        }
    }
    if worst > tol {
        return Err(Error::AsymmetricOperator { defect: worst });
    }
    Ok(())
}

/// Dense form of an operator: the oracle view when present, otherwise
/// assembled column by column (`n` products) and symmetrized.
pub fn dense_from_operator<O: LinearOperator + ?Sized>(op: &O) -> DenseSymmetric {
    if let Some(a) = op.oracle_view() {
        return a;
    }
    let n = op.dim();
    let cols: Vec<Vec<f64>> = (0..n)
        .map(|i| op.matvec(&crate::linalg::vector::unit(n, i)))
        .collect();
    DenseSymmetric::from_fn(n, |i, j| 0.5 * (cols[j][i] + cols[i][j]))
}
