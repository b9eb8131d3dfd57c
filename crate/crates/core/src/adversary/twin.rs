use super::distinguished::{complete_with, distinguished_form};
use super::record::{Record, RecordReader};
use crate::error::{Error, Result};
use crate::krylov::{dense_from_operator, lanczos_factorize, LinearOperator};
use crate::linalg::vector::{axpy, combine, max_abs_diff, norm, project_coords, sub};
use crate::linalg::{DenseSymmetric, Reflector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative size below which the part of `y` outside `K^{j+1}` is zero.
pub const TWIN_AXIS_TOL: f64 = 1e-12;

/// `Â = H A H`, where `H` reverses the part `w` of `y` orthogonal to
/// `K^{j+1}`. `Â` shares `N_j` with `A`, and `Hy = z − w`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwinCertificate {
    /// `None` when `y ∈ K^{j+1}`, in which case `Â = A`.
    pub reflector: Option<Reflector>,
    pub a: DenseSymmetric,
    pub a_hat: DenseSymmetric,
    pub b: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    pub degree: usize,
    pub norms: TwinNorms,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinNorms {
    /// `‖b − Ây‖`
    pub twin: f64,
    /// `‖b − Ay‖`
    pub original: f64,
    /// `‖b − Az‖`
    pub projected: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinCheck {
    /// `‖Â − HAH‖_max`
    pub conjugation_defect: f64,
    /// Largest relative gap between `Â^i b` and `A^i b`, `i ≤ j`.
    pub information_defect: f64,
    /// `|‖Ây − b‖ − ‖Az − b − Aw‖|`. This and `triangle_excess` are
    /// divided by `max(‖b − Ây‖, ‖b − Ay‖, 1)`.
    pub norm_identity_defect: f64,
    /// `‖b − Az‖ − ½(‖b − Ây‖ + ‖b − Ay‖)`, nonpositive in exact arithmetic.
    pub triangle_excess: f64,
    /// `|z·w|`, the distance of `z` from `K^{j+1}` and `‖z + w − y‖`,
    /// relative to `max(‖y‖, 1)` (squared for the inner product).
    pub split_defect: f64,
}

impl TwinCheck {
    pub fn passed(&self) -> bool {
        self.conjugation_defect <= 1e-10
            && self.information_defect <= 1e-9
            && self.norm_identity_defect <= 1e-10
            && self.triangle_excess <= 1e-10
            && self.split_defect <= 1e-10
    }
}

impl TwinCertificate {
    /// Recomputes every claimed relation from `A`, `b`, `y` and the stored
    /// matrices.
    pub fn verify(&self) -> Result<TwinCheck> {
        let a = &self.a;
        let j = self.degree;
        let expected_hat = match &self.reflector {
            Some(h) => h.conjugate(a)?,
            None => a.clone(),
        };
        let conjugation_defect = self.a_hat.sub(&expected_hat)?.max_abs_entry();

        let (mut p, mut q) = (self.b.clone(), self.b.clone());
        let mut information_defect = 0.0_f64;
        for _ in 0..j {
            p = a.apply(&p)?;
            q = self.a_hat.apply(&q)?;
            let scale = norm(&p).max(f64::MIN_POSITIVE);
            information_defect = information_defect.max(max_abs_diff(&p, &q) / scale);
        }

        let az = a.apply(&self.z)?;
        let aw = a.apply(&self.w)?;
        let mut lhs = sub(&az, &self.b);
        axpy(-1.0, &aw, &mut lhs);
        let twin = norm(&sub(&self.b, &self.a_hat.apply(&self.y)?));
        let original = norm(&sub(&self.b, &a.apply(&self.y)?));
        let projected = norm(&sub(&self.b, &az));

        let fact = lanczos_factorize(a, &self.b, (j + 1).min(a.order()))?;
        let zc = project_coords(fact.basis(), &self.z);
        let z_in = combine(fact.basis(), &zc, a.order());
        let ys = norm(&self.y).max(1.0);
        let split_defect = crate::linalg::vector::dot(&self.z, &self.w).abs() / (ys * ys)
            + (norm(&sub(&self.z, &z_in))
                + norm(&sub(&crate::linalg::vector::add(&self.z, &self.w), &self.y)))
                / ys;

        let scale = twin.max(original).max(1.0);
        Ok(TwinCheck {
            conjugation_defect,
            information_defect,
            norm_identity_defect: (twin - norm(&lhs)).abs() / scale,
            triangle_excess: (projected - 0.5 * (twin + original)) / scale,
            split_defect,
        })
    }

    pub fn to_record(&self) -> String {
        let mut rec = Record::new("twin-certificate");
        rec.usize("degree", self.degree)
            .vector("b", &self.b)
            .vector("y", &self.y)
            .vector("z", &self.z)
            .vector("w", &self.w)
            .scalar("twin", self.norms.twin)
            .scalar("original", self.norms.original)
            .scalar("projected", self.norms.projected)
            .usize("reflected", usize::from(self.reflector.is_some()))
            .matrix("a", &self.a)
            .matrix("a_hat", &self.a_hat);
        rec.finish()
    }

    pub fn from_record(text: &str) -> Result<Self> {
        let mut r = RecordReader::new(text, "twin-certificate")?;
        let degree = r.usize("degree")?;
        let b = r.vector("b")?;
        let y = r.vector("y")?;
        let z = r.vector("z")?;
        let w = r.vector("w")?;
        let norms = TwinNorms {
            twin: r.scalar("twin")?,
            original: r.scalar("original")?,
            projected: r.scalar("projected")?,
        };
        let reflected = r.flag("reflected")?;
        let a = r.matrix("a")?;
        let a_hat = r.matrix("a_hat")?;
        r.end()?;
        let reflector = if reflected {
            Some(Reflector::new(&w)?)
        } else {
            None
        };
        Ok(Self {
            reflector,
            a,
            a_hat,
            b,
            y,
            z,
            w,
            degree,
            norms,
        })
    }
}

/// Splits `y = z + w` with `z` the orthogonal projection onto `K^{j+1}` and
/// builds the reflector twin `Â = H A H`.
pub fn reflect_twin<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    j: usize,
    y: &[f64],
) -> Result<TwinCertificate> {
    let n = op.dim();
    if j + 1 > n {
        return Err(Error::StepOutOfRange { step: j + 1, order: n });
    }
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: y.len(),
        });
    }
    let a = dense_from_operator(op);
    let fact = lanczos_factorize(op, b, j + 1)?;
    let z = combine(fact.basis(), &project_coords(fact.basis(), y), n);
    let w = sub(y, &z);
    let reflector = if norm(&w) > TWIN_AXIS_TOL * norm(y).max(1.0) {
        Some(Reflector::new(&w)?)
    } else {
        None
    };
    let a_hat = match &reflector {
        Some(h) => h.conjugate(&a)?,
        None => a.clone(),
    };
    let norms = TwinNorms {
        twin: norm(&sub(b, &a_hat.apply(y)?)),
        original: norm(&sub(b, &a.apply(y)?)),
        projected: norm(&sub(b, &a.apply(&z)?)),
    };
    Ok(TwinCertificate {
        reflector,
        a,
        a_hat,
        b: b.to_vec(),
        y: y.to_vec(),
        z,
        w,
        degree: j,
        norms,
    })
}

/// Outcome of one projection-lemma check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionVerdict {
    pub eps: f64,
    pub norms: TwinNorms,
    /// Both `‖b − Ay‖ ≤ ε‖b‖` and `‖b − Ây‖ ≤ ε‖b‖`.
    pub hypotheses_hold: bool,
    /// `‖b − Az‖ ≤ ε‖b‖ + 1e−10`.
    pub conclusion_holds: bool,
}

impl ProjectionVerdict {
    /// False only when the hypotheses hold and the conclusion does not.
    pub fn passed(&self) -> bool {
        !self.hypotheses_hold || self.conclusion_holds
    }
}

/// If `y` solves `Ax = b` to tolerance `ε` for both `A` and its twin, then
/// so does the projection `z` of `y` onto `K^{j+1}`. When the hypotheses
/// fail the verdict says so; that is not a failure of the lemma.
pub fn projection_lemma_check<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    j: usize,
    eps: f64,
    y: &[f64],
) -> Result<ProjectionVerdict> {
    let twin = reflect_twin(op, b, j, y)?;
    let bound = eps * norm(b);
    let n = twin.norms;
    Ok(ProjectionVerdict {
        eps,
        norms: n,
        hypotheses_hold: n.original <= bound && n.twin <= bound,
        conclusion_holds: n.projected <= bound + 1e-10,
    })
}

/// `‖Ãz − Az‖ / ‖Az‖` for a random `Ã` sharing `N_degree` with `A`.
///
/// Vectors of `K^{degree}` are acted on identically by every such `Ã`; for
/// `z ∈ K^{j+1}` this needs `degree ≥ j + 1`.
pub fn completion_agreement<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[f64],
    degree: usize,
    z: &[f64],
    seed: u64,
) -> Result<f64> {
    let df = distinguished_form(op, b, degree)?;
    let m = df.dim() - degree;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u_tilde = DenseSymmetric::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
    let a_tilde = complete_with(&df, &u_tilde)?;
    let az = op.matvec(z);
    let diff = norm(&sub(&a_tilde.apply(z)?, &az));
    Ok(diff / norm(&az).max(f64::MIN_POSITIVE))
}
