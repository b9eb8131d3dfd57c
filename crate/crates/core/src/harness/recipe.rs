use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::krylov::LinearOperator;
use crate::linalg::vector::{normalized, unit};
use crate::linalg::{orthonormalize, DenseSymmetric, SymTridiagonal};

/// Off-diagonal growth constant of the `scott_like` family: `β_i = c √i`.
pub const SCOTT_LIKE_SCALE: f64 = 0.035;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// Uniform entries on `[−1/3, 1/3]`, off-diagonals nonzero.
    RandomTridiag,
    /// Zero diagonal, off-diagonal `β_i = 0.035 √i`: spectrum symmetric
    /// about zero, norm near one, dense near the origin.
    ScottLike,
    /// Zero diagonal, off-diagonal `β_i = i / n`.
    IncreasingOffdiag,
    /// `I − B` with `‖B‖ = ρ` attained at both ends of the spectrum.
    FtildeRhoMember,
    /// Dense symmetric with standard normal entries scaled by `1/√n`.
    RandomSymmetric,
    /// `GᵗG / n + I/10`.
    RandomSpd,
    ExplicitFile,
}

impl MatrixKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::RandomTridiag => "random_tridiag",
            Self::ScottLike => "scott_like",
            Self::IncreasingOffdiag => "increasing_offdiag",
            Self::FtildeRhoMember => "ftilde_rho_member",
            Self::RandomSymmetric => "random_symmetric",
            Self::RandomSpd => "random_spd",
            Self::ExplicitFile => "explicit_file",
        }
    }

    fn default_order(self) -> Option<usize> {
        match self {
            Self::ScottLike => Some(201),
            Self::IncreasingOffdiag => Some(501),
            Self::RandomTridiag => Some(100),
            Self::FtildeRhoMember | Self::RandomSymmetric | Self::RandomSpd => Some(20),
            Self::ExplicitFile => None,
        }
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "random_tridiag" => Self::RandomTridiag,
            "scott_like" | "scott_like_201" => Self::ScottLike,
            "increasing_offdiag" | "increasing_offdiag_501" => Self::IncreasingOffdiag,
            "ftilde_rho_member" => Self::FtildeRhoMember,
            "random_symmetric" => Self::RandomSymmetric,
            "random_spd" => Self::RandomSpd,
            "explicit_file" => Self::ExplicitFile,
            other => return Err(Error::InvalidParameter(format!("unknown matrix kind {other:?}"))),
        })
    }
}

/// How to build a test matrix: `kind:key=value,...`.
///
/// Recognised keys are `n`, `rho`, `scale` and `path`. The seed is supplied
/// separately so one recipe string can be swept over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRecipe {
    pub kind: MatrixKind,
    pub n: usize,
    pub seed: u64,
    pub rho: Option<f64>,
    pub scale: f64,
    pub path: Option<PathBuf>,
}

impl MatrixRecipe {
    pub fn new(kind: MatrixKind, n: usize) -> Self {
        Self {
            kind,
            n,
            seed: 0,
            rho: None,
            scale: 1.0,
            path: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let kind: MatrixKind = kind.trim().parse()?;
        let mut params = BTreeMap::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got {item:?}")))?;
            if params.insert(k.trim(), v.trim()).is_some() {
                return Err(Error::InvalidParameter(format!("repeated key {k:?}")));
            }
        }
        let bad = |k: &str, v: &str| Error::InvalidParameter(format!("bad value {v:?} for {k}"));
        let mut recipe = Self::new(kind, kind.default_order().unwrap_or(0));
        for (k, v) in params {
            match k {
                "n" => recipe.n = v.parse().map_err(|_| bad(k, v))?,
                "rho" => recipe.rho = Some(v.parse().map_err(|_| bad(k, v))?),
                "scale" => recipe.scale = v.parse().map_err(|_| bad(k, v))?,
                "path" => recipe.path = Some(PathBuf::from(v)),
                "seed" => recipe.seed = v.parse().map_err(|_| bad(k, v))?,
                _ => return Err(Error::InvalidParameter(format!("unknown key {k:?}"))),
            }
        }
        recipe.validate()?;
        Ok(recipe)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(Error::InvalidParameter(m));
        if self.kind == MatrixKind::ExplicitFile {
            if self.path.is_none() {
                return invalid("explicit_file needs path=<file>".into());
            }
            return Ok(());
        }
        if self.n == 0 {
            return invalid("matrix order must be positive".into());
        }
        if !(self.scale.is_finite() && self.scale != 0.0) {
            return invalid(format!("scale must be finite and nonzero, got {}", self.scale));
        }
        match (self.kind, self.rho) {
            (MatrixKind::FtildeRhoMember, None) => invalid("ftilde_rho_member needs rho".into()),
            (MatrixKind::FtildeRhoMember, Some(r)) if !(0.0..1.0).contains(&r) => {
                invalid(format!("rho must lie in [0, 1), got {r}"))
            }
            (MatrixKind::FtildeRhoMember, Some(r)) if r > 0.0 && self.n < 2 => {
                invalid("ftilde_rho_member with rho > 0 needs n >= 2".into())
            }
            (k, Some(_)) if k != MatrixKind::FtildeRhoMember => {
                invalid(format!("rho is not a parameter of {}", k.name()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for MatrixRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.kind.name())?;
        if let Some(p) = &self.path {
            return write!(f, "path={}", p.display());
        }
        write!(f, "n={}", self.n)?;
        if let Some(r) = self.rho {
            write!(f, ",rho={r}")?;
        }
        if self.scale != 1.0 {
            write!(f, ",scale={}", self.scale)?;
        }
        Ok(())
    }
}

/// A generated matrix in its natural storage.
#[derive(Debug, Clone, PartialEq)]
pub enum Matrix {
    Dense(DenseSymmetric),
    Tridiagonal(SymTridiagonal),
}

impl Matrix {
    pub fn order(&self) -> usize {
        match self {
            Self::Dense(a) => a.order(),
            Self::Tridiagonal(t) => t.order(),
        }
    }

    pub fn to_dense(&self) -> DenseSymmetric {
        match self {
            Self::Dense(a) => a.clone(),
            Self::Tridiagonal(t) => t.to_dense(),
        }
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev = match self {
            Self::Dense(a) => a.eigenvalues(),
            Self::Tridiagonal(t) => t.eigenvalues(),
        };
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn norm2(&self) -> f64 {
        match self {
            Self::Dense(a) => a.norm2(),
            Self::Tridiagonal(t) => t.norm2(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Dense(_) => "dense",
            Self::Tridiagonal(_) => "tridiagonal",
        }
    }
}

impl LinearOperator for Matrix {
    fn dim(&self) -> usize {
        self.order()
    }

    fn matvec(&self, v: &[f64]) -> Vec<f64> {
        match self {
            Self::Dense(a) => a.matvec(v),
            Self::Tridiagonal(t) => t.matvec(v),
        }
    }

    fn oracle_view(&self) -> Option<DenseSymmetric> {
        Some(self.to_dense())
    }
}

fn uniform_nonzero(rng: &mut ChaCha8Rng, half_width: f64) -> f64 {
    loop {
        let x = rng.random_range(-half_width..=half_width);
        if x != 0.0 {
            return x;
        }
    }
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        if let Some(u) = normalized(&gaussian_vector(rng, n)) {
            return u;
        }
    }
}

/// `I − V M Vᵗ` with `M = diag(−ρ, ρ, μ_3, …)`, `μ_i` uniform in `[−ρ, ρ]`,
/// and `V` orthogonal with `v_1, v_2 = (e_1 ∓ u)/√2` for a random unit
/// `u ⊥ e_1`. The start `e_1` then sees only the two extreme eigenvalues
/// `1 ± ρ`.
fn ftilde_member(rng: &mut ChaCha8Rng, n: usize, rho: f64) -> Result<DenseSymmetric> {
    if rho == 0.0 {
        return Ok(DenseSymmetric::identity(n));
    }
    let mut u = gaussian_vector(rng, n);
    u[0] = 0.0;
    let u = loop {
        if let Some(u) = normalized(&u) {
            break u;
        }
        u = gaussian_vector(rng, n);
        u[0] = 0.0;
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let e1 = unit(n, 0);
    let mut cols: Vec<Vec<f64>> = vec![
        e1.iter().zip(&u).map(|(e, x)| h * (e - x)).collect(),
        e1.iter().zip(&u).map(|(e, x)| h * (e + x)).collect(),
    ];
    cols.extend((0..n).map(|_| gaussian_vector(rng, n)));
    let v = orthonormalize(&cols).basis;
    if v.len() != n {
        return Err(Error::InvalidParameter("failed to complete an orthonormal basis".into()));
    }
    let mut mu = vec![-rho, rho];
    mu.extend((2..n).map(|_| rng.random_range(-rho..=rho)));
    Ok(DenseSymmetric::from_fn(n, |i, j| {
        let b: f64 = v.iter().zip(&mu).map(|(c, m)| m * c[i] * c[j]).sum();
        if i == j {
            1.0 - b
        } else {
            -b
        }
    }))
}

/// Builds the matrix described by `recipe`. Deterministic in the seed.
pub fn generate_matrix(recipe: &MatrixRecipe) -> Result<Matrix> {
    recipe.validate()?;
    let n = recipe.n;
    let mut rng = ChaCha8Rng::seed_from_u64(recipe.seed);
    let matrix = match recipe.kind {
        MatrixKind::RandomTridiag => {
            let third = 1.0 / 3.0;
            let diag = (0..n).map(|_| rng.random_range(-third..=third)).collect();
            let off = (1..n).map(|_| uniform_nonzero(&mut rng, third)).collect();
            Matrix::Tridiagonal(SymTridiagonal::new(diag, off)?)
        }
        MatrixKind::ScottLike => {
            let off = (1..n).map(|i| SCOTT_LIKE_SCALE * (i as f64).sqrt()).collect();
            Matrix::Tridiagonal(SymTridiagonal::new(vec![0.0; n], off)?)
        }
        MatrixKind::IncreasingOffdiag => {
            let off = (1..n).map(|i| i as f64 / n as f64).collect();
            Matrix::Tridiagonal(SymTridiagonal::new(vec![0.0; n], off)?)
        }
        MatrixKind::FtildeRhoMember => {
            Matrix::Dense(ftilde_member(&mut rng, n, recipe.rho.unwrap_or(0.0))?)
        }
        MatrixKind::RandomSymmetric => {
            let g: Vec<f64> = gaussian_vector(&mut rng, n * n);
            let s = 1.0 / (2.0 * n as f64).sqrt();
            Matrix::Dense(DenseSymmetric::from_fn(n, |i, j| s * (g[i * n + j] + g[j * n + i])))
        }
        MatrixKind::RandomSpd => {
            let g: Vec<f64> = gaussian_vector(&mut rng, n * n);
            Matrix::Dense(DenseSymmetric::from_fn(n, |i, j| {
                let c: f64 = (0..n).map(|k| g[k * n + i] * g[k * n + j]).sum();
                c / n as f64 + if i == j { 0.1 } else { 0.0 }
            }))
        }
        MatrixKind::ExplicitFile => {
            let path = recipe.path.as_ref().expect("validated");
            return super::io::read_matrix(path);
        }
    };
    Ok(if recipe.scale == 1.0 {
        matrix
    } else {
        scale_matrix(matrix, recipe.scale)?
    })
}

fn scale_matrix(m: Matrix, s: f64) -> Result<Matrix> {
    Ok(match m {
        Matrix::Dense(a) => Matrix::Dense(a.scaled(s)),
        Matrix::Tridiagonal(t) => Matrix::Tridiagonal(SymTridiagonal::new(
            t.diag().iter().map(|x| x * s).collect(),
            t.offdiag().iter().map(|x| x * s).collect(),
        )?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartKind {
    E1,
    RandomUnit,
    /// `A r / ‖A r‖` with `r` uniform on `[−1, 1]^n`.
    ATimesRandom,
}

impl FromStr for StartKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "e1" => Self::E1,
            "random_unit" => Self::RandomUnit,
            "a_times_random" | "A_times_random" => Self::ATimesRandom,
            other => return Err(Error::InvalidParameter(format!("unknown start {other:?}"))),
        })
    }
}

impl fmt::Display for StartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::E1 => "e1",
            Self::RandomUnit => "random_unit",
            Self::ATimesRandom => "a_times_random",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StartVectorRecipe {
    pub kind: StartKind,
    pub seed: u64,
}

impl StartVectorRecipe {
    pub fn new(kind: StartKind, seed: u64) -> Self {
        Self { kind, seed }
    }
}

/// Unit start vector for `op`. Random starts draw from a stream separate
/// from the one used for the matrix, so equal seeds do not correlate them.
pub fn generate_start<O: LinearOperator + ?Sized>(
    recipe: &StartVectorRecipe,
    op: &O,
) -> Result<Vec<f64>> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::InvalidParameter("empty operator".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(recipe.seed);
    rng.set_stream(1);
    match recipe.kind {
        StartKind::E1 => Ok(unit(n, 0)),
        StartKind::RandomUnit => Ok(random_unit_vector(&mut rng, n)),
        StartKind::ATimesRandom => {
            for _ in 0..100 {
                let r: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                if let Some(b) = normalized(&op.matvec(&r)) {
                    return Ok(b);
                }
            }
            Err(Error::InvalidParameter("A r vanished for every trial r".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector::norm;

    #[test]
    fn parse_and_display() {
        let r = MatrixRecipe::parse("ftilde_rho_member:n=12,rho=0.5").unwrap();
        assert_eq!(r.n, 12);
        assert_eq!(r.rho, Some(0.5));
        assert_eq!(MatrixRecipe::parse(&r.to_string()).unwrap(), r);
        assert_eq!(MatrixRecipe::parse("scott_like_201").unwrap().n, 201);
        assert_eq!(MatrixRecipe::parse("increasing_offdiag_501").unwrap().n, 501);
        for bad in [
            "nope",
            "random_tridiag:n=0",
            "random_tridiag:n=x",
            "random_tridiag:n=3,n=4",
            "random_tridiag:rho=0.1",
            "ftilde_rho_member:n=4",
            "ftilde_rho_member:n=4,rho=1",
            "explicit_file",
            "random_spd:colour=red",
        ] {
            assert!(MatrixRecipe::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn zero_rho_is_identity() {
        let r = MatrixRecipe::parse("ftilde_rho_member:n=5,rho=0").unwrap();
        assert_eq!(generate_matrix(&r).unwrap().to_dense(), DenseSymmetric::identity(5));
    }

    #[test]
    fn ftilde_spectrum_and_start() {
        let r = MatrixRecipe::parse("ftilde_rho_member:n=9,rho=0.6").unwrap().with_seed(4);
        let m = generate_matrix(&r).unwrap();
        let ev = m.eigenvalues();
        assert!((ev[0] - 0.4).abs() < 1e-12 && (ev[8] - 1.6).abs() < 1e-12);
        // e1 lies in the span of the two extreme eigenvectors
        let a = m.to_dense();
        let e1 = unit(9, 0);
        let ae1 = a.apply(&e1).unwrap();
        let a2e1 = a.apply(&ae1).unwrap();
        let resid: Vec<f64> = (0..9).map(|i| a2e1[i] - 2.0 * ae1[i] + 0.64 * e1[i]).collect();
        assert!(norm(&resid) < 1e-12);
    }

    #[test]
    fn generators_are_deterministic() {
        let r = MatrixRecipe::parse("random_tridiag:n=10").unwrap().with_seed(1);
        let a = generate_matrix(&r).unwrap();
        assert_eq!(a, generate_matrix(&r).unwrap());
        let Matrix::Tridiagonal(t) = &a else { panic!() };
        assert!(t.diag().iter().chain(t.offdiag()).all(|x| x.abs() <= 1.0 / 3.0));
        assert!(t.offdiag().iter().all(|&x| x != 0.0));
        assert_ne!(a, generate_matrix(&r.clone().with_seed(2)).unwrap());
    }

    #[test]
    fn increasing_offdiag_shape() {
        let r = MatrixRecipe::parse("increasing_offdiag:n=51").unwrap();
        let Matrix::Tridiagonal(t) = generate_matrix(&r).unwrap() else { panic!() };
        assert!(t.diag().iter().all(|&d| d == 0.0));
        assert!(t.offdiag().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn spd_recipe_is_spd() {
        let r = MatrixRecipe::parse("random_spd:n=8").unwrap().with_seed(3);
        assert!(generate_matrix(&r).unwrap().to_dense().min_eigenvalue() >= 0.1 - 1e-12);
    }

    #[test]
    fn starts_are_unit() {
        let a = generate_matrix(&MatrixRecipe::parse("scott_like:n=30").unwrap()).unwrap();
        for kind in [StartKind::E1, StartKind::RandomUnit, StartKind::ATimesRandom] {
            let b = generate_start(&StartVectorRecipe::new(kind, 5), &a).unwrap();
            assert!((norm(&b) - 1.0).abs() < 1e-12);
        }
    }
}
