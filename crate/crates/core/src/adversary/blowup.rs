use super::distinguished::{complete_with, information_defect, DistinguishedForm};
use super::record::{Record, RecordReader};
use crate::error::{Error, Result};
use crate::krylov::LinearOperator;
use crate::linalg::vector::{dot, norm, sub};
use crate::linalg::DenseSymmetric;

/// Below this size the component of `v` outside `K^j` counts as zero.
pub const MIN_OUTSIDE_NORM: f64 = 1e-8;
const TARGET_MARGIN: f64 = 1.01;

/// A matrix `Ã` indistinguishable from `A` through `N_j`, for which a given
/// output `v` has a residual above a requested target.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryCertificate {
    pub a_tilde: DenseSymmetric,
    pub b: Vec<f64>,
    pub v: Vec<f64>,
    pub residual: f64,
    pub target: f64,
    pub degree: usize,
    /// Scale `t` of the free block `Ũ = t I`.
    pub scale: f64,
}

/// Outcome of re-validating a certificate from its raw data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateCheck {
    pub min_eigenvalue: f64,
    pub information_defect: f64,
    pub residual: f64,
    pub residual_mismatch: f64,
}

impl CertificateCheck {
    pub fn passed(&self, target: f64) -> bool {
        self.min_eigenvalue > 0.0
            && self.information_defect <= 1e-9
            && self.residual_mismatch <= 1e-10 * self.residual.max(1.0)
            && self.residual > target
    }
}

impl AdversaryCertificate {
    /// Re-checks every claim against the original operator without trusting
    /// the stored values.
    pub fn verify<O: LinearOperator + ?Sized>(&self, a: &O) -> CertificateCheck {
        let r = norm(&sub(&self.b, &self.a_tilde.apply_unchecked(&self.v)));
        CertificateCheck {
            min_eigenvalue: self.a_tilde.min_eigenvalue(),
            information_defect: information_defect(a, &self.a_tilde, &self.b, self.degree),
            residual: r,
            residual_mismatch: (r - self.residual).abs(),
        }
    }

    pub fn to_record(&self) -> String {
        let mut rec = Record::new("adversary-certificate");
        rec.usize("degree", self.degree)
            .scalar("target", self.target)
            .scalar("scale", self.scale)
            .scalar("residual", self.residual)
            .vector("b", &self.b)
            .vector("v", &self.v)
            .matrix("a_tilde", &self.a_tilde);
        rec.finish()
    }

    pub fn from_record(text: &str) -> Result<Self> {
        let mut r = RecordReader::new(text, "adversary-certificate")?;
        let degree = r.usize("degree")?;
        let target = r.scalar("target")?;
        let scale = r.scalar("scale")?;
        let residual = r.scalar("residual")?;
        let b = r.vector("b")?;
        let v = r.vector("v")?;
        let a_tilde = r.matrix("a_tilde")?;
        r.end()?;
        Ok(Self {
            a_tilde,
            b,
            v,
            residual,
            target,
            degree,
            scale,
        })
    }
}

/// Coordinates `(f, g)` of `v` and the pieces of the residual that do not
/// depend on the scale `t`:
///
/// ```text
/// ‖b − Ãv‖² = ‖T f + β g₁ e_j − e₁‖² + ‖β f_j e₁ + t g‖²
/// ```
struct Split {
    g: Vec<f64>,
    head2: f64,
    c: Vec<f64>,
}

fn split(df: &DistinguishedForm, v: &[f64]) -> Result<Split> {
    if v.len() != df.dim() {
        return Err(Error::DimensionMismatch {
            expected: df.dim(),
            found: v.len(),
        });
    }
    let j = df.steps();
    let coords = df.coords(v);
    let (f, g) = coords.split_at(j);
    let mut head = df.t().apply_unchecked(f);
    head[j - 1] += df.beta() * g[0];
    head[0] -= 1.0;
    let mut c = vec![0.0; g.len()];
    c[0] = df.beta() * f[j - 1];
    Ok(Split {
        g: g.to_vec(),
        head2: dot(&head, &head),
        c,
    })
}

/// `‖b − Ãv‖` for `Ũ = t I`, from the closed form.
pub fn blowup_residual(df: &DistinguishedForm, v: &[f64], t: f64) -> Result<f64> {
    let s = split(df, v)?;
    let tail: f64 = s.c.iter().zip(&s.g).map(|(c, g)| (c + t * g).powi(2)).sum();
    Ok((s.head2 + tail).sqrt())
}

/// The residual is increasing in `t` to the right of this point.
pub fn blowup_threshold(df: &DistinguishedForm, v: &[f64]) -> Result<f64> {
    let s = split(df, v)?;
    Ok(-dot(&s.c, &s.g) / dot(&s.g, &s.g))
}

/// Smallest `t` for which `[[T, Eᵗ], [E, t I]]` is positive definite, or an
/// error when `T` is not.
pub fn spd_threshold(df: &DistinguishedForm) -> Result<f64> {
    let t = df.t().to_dense();
    if !t.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let eig = t.eigen();
    let j = df.steps();
    let tinv_jj: f64 = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .map(|(l, u)| u[j - 1] * u[j - 1] / l)
        .sum();
    Ok(df.beta() * df.beta() * tinv_jj)
}

/// Picks `Ũ = t I` with `t` large enough that `Ã` is SPD and
/// `‖b − Ãv‖ > target`.
///
/// Fails with [`Error::NoAdversary`] when `v ∈ K^j`: every indistinguishable
/// matrix then gives `v` the same residual.
pub fn adversarial_blowup(
    df: &DistinguishedForm,
    v: &[f64],
    target: f64,
) -> Result<AdversaryCertificate> {
    let s = split(df, v)?;
    let gg = dot(&s.g, &s.g);
    if gg.sqrt() <= MIN_OUTSIDE_NORM {
        return Err(Error::NoAdversary);
    }
    let t_spd = spd_threshold(df)?;

    // ‖c + t g‖² + head² = goal²  ⇔  gg t² + 2 cg t + (cc + head² − goal²) = 0
    let goal = TARGET_MARGIN * target;
    let cg = dot(&s.c, &s.g);
    let cc = dot(&s.c, &s.c);
    let disc = cg * cg - gg * (cc + s.head2 - goal * goal);
    let t_goal = if disc > 0.0 {
        (-cg + disc.sqrt()) / gg
    } else {
        -cg / gg
    };
    let floor = 2.0 * t_spd + f64::EPSILON * df.t().max_abs_entry().max(1.0);
    let t = t_goal.max(floor) * TARGET_MARGIN;

    let n = df.dim();
    let j = df.steps();
    let u_tilde = DenseSymmetric::from_diagonal(&vec![t; n - j]);
    let a_tilde = complete_with(df, &u_tilde)?;
    let b = df.basis()[0].clone();
    let residual = norm(&sub(&b, &a_tilde.apply_unchecked(v)));
    Ok(AdversaryCertificate {
        a_tilde,
        b,
        v: v.to_vec(),
        residual,
        target,
        degree: j,
        scale: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::distinguished_form;
    use crate::linalg::vector::unit;

    fn two_by_two() -> DenseSymmetric {
        DenseSymmetric::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap()
    }

    #[test]
    fn two_by_two_closed_form() {
        let a = two_by_two();
        let df = distinguished_form(&a, &unit(2, 0), 1).unwrap();
        for t in [0.0, 1.0, 5.0] {
            assert!((blowup_residual(&df, &unit(2, 1), t).unwrap() - t.abs()).abs() < 1e-15);
        }
        assert!((spd_threshold(&df).unwrap() - 0.5).abs() < 1e-15);
        let cert = adversarial_blowup(&df, &unit(2, 1), 1.0).unwrap();
        assert!(cert.residual > 1.0);
        assert_eq!(cert.a_tilde.get(0, 0), 2.0);
        assert_eq!(cert.a_tilde.get(0, 1), 1.0);
        assert!((cert.a_tilde.get(1, 1) - cert.scale).abs() < 1e-15);
        assert!(cert.verify(&a).passed(1.0));
    }

    #[test]
    fn krylov_vectors_have_no_adversary() {
        let a = two_by_two();
        let df = distinguished_form(&a, &unit(2, 0), 1).unwrap();
        assert!(matches!(
            adversarial_blowup(&df, &unit(2, 0), 1.0),
            Err(Error::NoAdversary)
        ));
    }

    #[test]
    fn record_round_trip() {
        let a = two_by_two();
        let df = distinguished_form(&a, &unit(2, 0), 1).unwrap();
        let cert = adversarial_blowup(&df, &[0.6, 0.8], 3.0).unwrap();
        let back = AdversaryCertificate::from_record(&cert.to_record()).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_record(), cert.to_record());
    }
}
