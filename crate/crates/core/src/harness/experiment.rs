use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::io::{write_table, Cell, ResultTable};
use super::recipe::{generate_matrix, generate_start, MatrixKind, MatrixRecipe, StartKind, StartVectorRecipe};
use super::suites::{adversary_suite, linear_witness_case, projection_lemma_suite, SuiteReport};
use crate::eigen::{count_good_ritz_trace, eig_race};
use crate::error::{Error, Result};
use crate::linalg::vector::norm;
use crate::linear::{chebyshev_run, mr_run, q_epsilon, ChebyshevParams};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    RitzTable,
    EigRace,
    LinearRace,
    VerifyLemmas,
    Witness,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::RitzTable => "ritz-table",
            Self::EigRace => "eig-race",
            Self::LinearRace => "linear-race",
            Self::VerifyLemmas => "verify-lemmas",
            Self::Witness => "witness",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Self::RitzTable,
            Self::EigRace,
            Self::LinearRace,
            Self::VerifyLemmas,
            Self::Witness,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown experiment {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub recipe: MatrixRecipe,
    pub start: StartVectorRecipe,
    pub eps: Vec<f64>,
    pub max_steps: usize,
    /// Row spacing of `ritz-table`.
    pub stride: usize,
    /// Random cases for `verify-lemmas`; seeds searched by `witness`.
    pub cases: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl ExperimentSpec {
    /// A spec with the seed propagated to the recipe and the start.
    pub fn new(kind: ExperimentKind, recipe: MatrixRecipe, start: StartKind, seed: u64) -> Self {
        Self {
            kind,
            recipe: recipe.with_seed(seed),
            start: StartVectorRecipe::new(start, seed),
            eps: vec![1e-6],
            max_steps: 1000,
            stride: 10,
            cases: 100,
            seed,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(Error::InvalidParameter(m));
        self.recipe.validate()?;
        if self.eps.is_empty() {
            return invalid("at least one eps is required".into());
        }
        if let Some(e) = self.eps.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
            return invalid(format!("eps must lie in (0, 1), got {e}"));
        }
        if self.max_steps == 0 {
            return invalid("max-steps must be positive".into());
        }
        if self.stride == 0 {
            return invalid("stride must be positive".into());
        }
        if self.cases == 0 {
            return invalid("cases must be positive".into());
        }
        if matches!(self.kind, ExperimentKind::LinearRace | ExperimentKind::Witness) {
            match self.recipe.rho {
                Some(r) if r > 0.0 => {}
                _ => return invalid(format!("{} needs a recipe with rho in (0, 1)", self.kind)),
            }
        }
        if self.kind == ExperimentKind::Witness && self.recipe.kind != MatrixKind::FtildeRhoMember {
            return invalid("witness searches ftilde_rho_member matrices".into());
        }
        if let Some(dir) = self.out.as_ref().and_then(|p| p.parent()) {
            if !dir.as_os_str().is_empty() && !dir.is_dir() {
                return invalid(format!("output directory {} does not exist", dir.display()));
            }
        }
        Ok(())
    }

    fn base_table(&self, columns: &[&str]) -> ResultTable {
        let mut t = ResultTable::new(columns);
        t.meta("experiment", self.kind)
            .meta("version", ARTIFACT_VERSION)
            .meta("seed", self.seed)
            .meta("recipe", &self.recipe)
            .meta("start", self.start.kind)
            .meta("eps", join(&self.eps))
            .meta("max_steps", self.max_steps);
        t
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|e| format!("{e:e}")).collect::<Vec<_>>().join(" ")
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "none".to_string(), |s| s.to_string())
}

/// Validates `spec` and produces its table.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ResultTable> {
    spec.validate()?;
    match spec.kind {
        ExperimentKind::RitzTable => ritz_table(spec),
        ExperimentKind::EigRace => eig_race_table(spec),
        ExperimentKind::LinearRace => linear_race_table(spec),
        ExperimentKind::VerifyLemmas => verify_table(spec),
        ExperimentKind::Witness => witness_table(spec),
    }
}

/// Runs the experiment and writes the table to `spec.out` (standard output
/// when unset).
pub fn execute(spec: &ExperimentSpec) -> Result<ResultTable> {
    let table = run_experiment(spec)?;
    write_table(&table, spec.out.as_deref())?;
    Ok(table)
}

fn ritz_table(spec: &ExperimentSpec) -> Result<ResultTable> {
    let a = generate_matrix(&spec.recipe)?;
    let b = generate_start(&spec.start, &a)?;
    let spectrum = a.eigenvalues();
    let counts = count_good_ritz_trace(&a, &b, &spec.eps, &spectrum, spec.max_steps)?;
    let mut t = spec.base_table(&["step", "epsilon", "good_ritz"]);
    t.meta("stride", spec.stride).meta("order", a.order());
    let last = counts.len();
    for (k, row) in counts.iter().enumerate() {
        let step = k + 1;
        if step % spec.stride != 0 && step != last {
            continue;
        }
        for (&eps, &c) in spec.eps.iter().zip(row) {
            t.push(vec![step.into(), eps.into(), c.into()]);
        }
    }
    Ok(t)
}

fn eig_race_table(spec: &ExperimentSpec) -> Result<ResultTable> {
    let a = generate_matrix(&spec.recipe)?;
    let b = generate_start(&spec.start, &a)?;
    let spectrum = a.eigenvalues();
    let trace = eig_race(&a, &b, &spec.eps, spec.max_steps)?;
    let mut t = spec.base_table(&["step", "r_lanczos", "r_gmr", "gmr_rho", "eigenvalues_below_rho"]);
    t.meta("order", a.order())
        .meta("invariant_at", opt(trace.invariant_at));
    for s in &trace.stops {
        t.meta(
            &format!("stop eps={:e}", s.eps),
            format!("lanczos={} gmr={}", opt(s.lanczos), opt(s.gmr)),
        );
    }
    for k in 0..trace.steps() {
        let rho = trace.gmr_rho[k];
        t.push(vec![
            (k + 1).into(),
            trace.ritz_min[k].into(),
            trace.gmr[k].into(),
            rho.into(),
            spectrum.partition_point(|&l| l < rho).into(),
        ]);
    }
    Ok(t)
}

fn linear_race_table(spec: &ExperimentSpec) -> Result<ResultTable> {
    let rho = spec.recipe.rho.expect("validated");
    let a = generate_matrix(&spec.recipe)?;
    let b = generate_start(&spec.start, &a)?;
    let eps0 = spec.eps[0];
    let mr = mr_run(&a, &b, eps0, spec.max_steps)?;
    let cheb = chebyshev_run(&a, &b, ChebyshevParams::new(rho)?, eps0, spec.max_steps)?;
    let mut t = spec.base_table(&["step", "r_mr", "r_chebyshev"]);
    t.meta("order", a.order()).meta("rho", rho);
    let bn = norm(&b);
    for &eps in &spec.eps {
        t.meta(
            &format!("stop eps={eps:e}"),
            format!(
                "mr={} chebyshev={} q={}",
                opt(mr.first_below(eps * bn)),
                opt(cheb.first_below(eps * bn)),
                q_epsilon(eps, rho)?
            ),
        );
    }
    let at = |v: &[f64], k: usize| v.get(k).copied().map_or(Cell::Missing, Cell::Real);
    for k in 0..mr.len().max(cheb.len()) {
        t.push(vec![k.into(), at(&mr.residual_norms, k), at(&cheb.residual_norms, k)]);
    }
    Ok(t)
}

/// Tally table for the two randomized suites, in the order
/// projection lemma, adversary certificates.
pub fn verify_reports(cases: usize, seed: u64) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        projection_lemma_suite(cases, seed)?,
        adversary_suite(cases, seed.wrapping_add(1))?,
    ])
}

fn verify_table(spec: &ExperimentSpec) -> Result<ResultTable> {
    let mut t = ResultTable::new(&["suite", "cases", "passed", "failed", "vacuous"]);
    t.meta("experiment", spec.kind)
        .meta("version", ARTIFACT_VERSION)
        .meta("seed", spec.seed)
        .meta("cases", spec.cases);
    for r in verify_reports(spec.cases, spec.seed)? {
        t.push(vec![
            r.name.as_str().into(),
            r.cases.into(),
            r.passed.into(),
            r.failed.into(),
            r.vacuous.into(),
        ]);
    }
    Ok(t)
}

fn witness_table(spec: &ExperimentSpec) -> Result<ResultTable> {
    let rho = spec.recipe.rho.expect("validated");
    let mut t = spec.base_table(&["n", "rho", "eps", "q", "seed", "r_mr_q", "r_cheb_q", "r_mr_q1"]);
    let mut searched = 0;
    for &eps in &spec.eps {
        for s in 0..spec.cases as u64 {
            let seed = spec.seed.wrapping_add(s);
            searched += 1;
            let Some(w) = linear_witness_case(spec.recipe.n, rho, eps, seed, spec.start.kind)? else {
                continue;
            };
            if w.is_witness() {
                t.push(vec![
                    w.n.into(),
                    w.rho.into(),
                    w.eps.into(),
                    w.q.into(),
                    Cell::Int(w.seed as i64),
                    w.mr_q.into(),
                    w.cheb_q.into(),
                    w.mr_q1.into(),
                ]);
            }
        }
    }
    let found = t.rows.len();
    t.meta("searched", searched).meta("found", found);
    Ok(t)
}
