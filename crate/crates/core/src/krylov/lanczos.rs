use super::{check_start, LinearOperator};
use crate::error::{Error, Result};
use crate::linalg::vector::{axpy, combine, dot, norm, scale};
use crate::linalg::SymTridiagonal;

/// A new Lanczos vector whose norm is at most this fraction of the largest
/// `‖A q_i‖` seen so far signals an invariant subspace.
pub const BREAKDOWN_TOL: f64 = 1e-12;

/// Result of `j` Lanczos steps: `A Q = Q T + β q_next e_jᵗ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LanczosFactorization {
    basis: Vec<Vec<f64>>,
    tridiag: SymTridiagonal,
    beta_next: f64,
    q_next: Vec<f64>,
    breakdown: bool,
}

impl LanczosFactorization {
    /// Orthonormal columns `q_1..q_j`.
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// `T_j = Qᵗ A Q`.
    pub fn tridiag(&self) -> &SymTridiagonal {
        &self.tridiag
    }

    /// `β_j ≥ 0`, zero once the Krylov space is invariant.
    pub fn beta_next(&self) -> f64 {
        self.beta_next
    }

    /// `q_{j+1}`; the zero vector when `β_j = 0`.
    pub fn q_next(&self) -> &[f64] {
        &self.q_next
    }

    pub fn steps(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.q_next.len()
    }

    /// An invariant subspace was found before the space was exhausted.
    pub fn breakdown(&self) -> bool {
        self.breakdown
    }

    /// `β_j = 0`: the Krylov space is invariant under `A` (breakdown, or
    /// `j = n`).
    pub fn is_invariant(&self) -> bool {
        self.beta_next == 0.0
    }
}

/// Incremental Lanczos recurrence with full reorthogonalization.
///
/// Each [`step`](Self::step) costs exactly one operator application.
pub struct LanczosProcess<'a, O: ?Sized> {
    op: &'a O,
    basis: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    next: Vec<f64>,
    scale: f64,
    invariant: bool,
}

impl<'a, O: LinearOperator + ?Sized> LanczosProcess<'a, O> {
    pub fn new(op: &'a O, b: &[f64]) -> Result<Self> {
        check_start(b, op.dim())?;
        Ok(Self {
            op,
            basis: Vec::new(),
            alpha: Vec::new(),
            beta: Vec::new(),
            next: b.to_vec(),
            scale: 0.0,
            invariant: false,
        })
    }

    pub fn steps(&self) -> usize {
        self.basis.len()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn is_invariant(&self) -> bool {
        self.invariant
    }

    pub fn breakdown(&self) -> bool {
        self.invariant && self.steps() < self.dim()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// `β_k` for the current step `k` (zero before the first step).
    pub fn beta_next(&self) -> f64 {
        self.beta.last().copied().unwrap_or(0.0)
    }

    /// Running estimate of `‖A‖` (largest `‖A q_i‖`).
    pub fn norm_estimate(&self) -> f64 {
        self.scale
    }

    /// Extends the factorization by one step. Returns `false` (doing nothing)
    /// once the Krylov space is invariant.
    pub fn step(&mut self) -> bool {
        let n = self.dim();
        if self.invariant || self.steps() == n {
            return false;
        }
        let q = std::mem::take(&mut self.next);
        let mut w = self.op.matvec(&q);
        self.scale = self.scale.max(norm(&w));
        let mut alpha = dot(&q, &w);
        axpy(-alpha, &q, &mut w);
        if let (Some(prev), Some(&b)) = (self.basis.last(), self.beta.last()) {
            axpy(-b, prev, &mut w);
        }
        self.basis.push(q);
        let k = self.basis.len();
        for _pass in 0..2 {
            for (i, qi) in self.basis.iter().enumerate() {
                let c = dot(qi, &w);
                axpy(-c, qi, &mut w);
                if i + 1 == k {
                    alpha += c;
                }
            }
        }
        let mut beta = norm(&w);
        if k == n || beta <= BREAKDOWN_TOL * self.scale {
            beta = 0.0;
            self.invariant = true;
            self.next = vec![0.0; n];
        } else {
            self.next = scale(1.0 / beta, &w);
        }
        self.alpha.push(alpha);
        self.beta.push(beta);
        true
    }

    /// `T_k` for the current step, or `None` before the first step.
    pub fn tridiagonal(&self) -> Option<SymTridiagonal> {
        let k = self.steps();
        if k == 0 {
            return None;
        }
        SymTridiagonal::new(self.alpha.clone(), self.beta[..k - 1].to_vec()).ok()
    }

    pub fn factorization(&self) -> Option<LanczosFactorization> {
        Some(LanczosFactorization {
            tridiag: self.tridiagonal()?,
            basis: self.basis.clone(),
            beta_next: self.beta_next(),
            q_next: self.next.clone(),
            breakdown: self.breakdown(),
        })
    }
}

/// Runs `j` Lanczos steps from the unit vector `b`.
///
/// If `β_i = 0` for some `i < j` the result is truncated at step `i` and
/// flagged as a breakdown: the Krylov space is then invariant and every task
/// can be solved exactly inside it.
pub fn lanczos_factorize<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    j: usize,
) -> Result<LanczosFactorization> {
    let n = op.dim();
    if j == 0 || j > n {
        return Err(Error::StepOutOfRange { step: j, order: n });
    }
    let mut process = LanczosProcess::new(op, b)?;
    while process.steps() < j && process.step() {}
    Ok(process.factorization().expect("at least one step was taken"))
}

/// `Q c` for coefficients in the Lanczos basis. Forming linear combinations
/// is free under the cost model: no operator applications happen here.
pub fn expand_in_basis(fact: &LanczosFactorization, coeffs: &[f64]) -> Result<Vec<f64>> {
    if coeffs.len() > fact.steps() {
        return Err(Error::DimensionMismatch {
            expected: fact.steps(),
            found: coeffs.len(),
        });
    }
    Ok(combine(fact.basis(), coeffs, fact.dim()))
}
