//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line straight to
//! stderr, so the verdicts show up even when test output is captured.

use std::io::Write;
use std::time::Instant;

use krylov_ibc::adversary::worst_start_search;
use krylov_ibc::eigen::eig_race;
use krylov_ibc::harness::{
    adversary_suite, chebyshev_worst_case, generate_matrix, generate_start, projection_lemma_suite,
    run_experiment, ExperimentKind, ExperimentSpec, MatrixKind, MatrixRecipe, StartKind,
    StartVectorRecipe,
};
use krylov_ibc::krylov::lanczos_factorize;
use krylov_ibc::linalg::vector::{combine, norm, sub};
use krylov_ibc::linalg::DenseSymmetric;
use krylov_ibc::linear::{cg_run, mr_run};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: usize, title: &str, ok: bool, detail: &str) {
    let line = format!(
        "criterion {id} [{title}]: {} ({detail})\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "{}", line.trim_end());
}

fn case(kind: MatrixKind, n: usize, seed: u64, start: StartKind) -> (DenseSymmetric, Vec<f64>) {
    let a = generate_matrix(&MatrixRecipe::new(kind, n).with_seed(seed)).unwrap();
    let b = generate_start(&StartVectorRecipe::new(start, seed), &a).unwrap();
    (a.to_dense(), b)
}

fn to_na(a: &DenseSymmetric) -> DMatrix<f64> {
    let n = a.order();
    DMatrix::from_fn(n, n, |i, j| a.get(i, j))
}

#[test]
fn c1_projection_lemma_suite() {
    let t = Instant::now();
    let r = projection_lemma_suite(500, 20_241_001).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let exercised = r.cases - r.vacuous;
    let ok = r.cases == 500 && r.failed == 0 && exercised > 0 && secs < 10.0;
    verdict(
        1,
        "projection lemma",
        ok,
        &format!(
            "{} cases, {} failures, {exercised} with hypotheses holding, {secs:.2}s; first failure {:?}",
            r.cases,
            r.failed,
            r.failures.first()
        ),
    );
}

#[test]
fn c2_adversary_suite() {
    let r = adversary_suite(200, 20_241_002).unwrap();
    let ok = r.cases == 200 && r.failed == 0 && r.vacuous == 0;
    verdict(
        2,
        "adversary certificates",
        ok,
        &format!(
            "{} cases, {} failures, {} without certificate; first failure {:?}",
            r.cases,
            r.failed,
            r.vacuous,
            r.failures.first()
        ),
    );
}

/// Orthonormal basis of `K^j` from Householder QR of `[b, Ab, …]`.
fn krylov_qr(a: &DMatrix<f64>, b: &DVector<f64>, j: usize) -> DMatrix<f64> {
    let n = b.len();
    let mut k = DMatrix::zeros(n, j);
    let mut v = b.clone();
    for c in 0..j {
        k.set_column(c, &v);
        v = a * &v;
        let s = v.norm();
        v /= s;
    }
    k.qr().q()
}

fn textbook_cg(a: &DMatrix<f64>, b: &DVector<f64>, steps: usize) -> Vec<DVector<f64>> {
    let mut x = DVector::zeros(b.len());
    let mut r = b.clone();
    let mut p = r.clone();
    let mut out = vec![x.clone()];
    for _ in 0..steps {
        let ap = a * &p;
        let rr = r.dot(&r);
        let alpha = rr / p.dot(&ap);
        x += alpha * &p;
        r -= alpha * &ap;
        p = &r + (r.dot(&r) / rr) * &p;
        out.push(x.clone());
    }
    out
}

/// Absolute slack for comparing two residuals of a unit right-hand side
/// that were computed independently in floating point.
const ROUNDOFF: f64 = 1e-14;

#[test]
fn c3_mr_optimality_and_cg() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_241_003);
    let (mut worst_ls, mut worst_cg) = (0.0_f64, 0.0_f64);
    let mut sample_violations = 0;
    let mut worst_undercut = f64::NEG_INFINITY;
    for seed in 0..100 {
        let n = rng.random_range(4..=10);
        let j = rng.random_range(1..=(n - 1).min(6));
        let (a, b) = case(MatrixKind::RandomSpd, n, seed, StartKind::RandomUnit);
        let mr = mr_run(&a, &b, 0.0, j).unwrap();
        let r_mr = mr.residual_norms[j];

        let an = to_na(&a);
        let bn = DVector::from_column_slice(&b);
        let q = krylov_qr(&an, &bn, j);
        let aq = &an * &q;
        let c = aq.clone().svd(true, true).solve(&bn, 1e-14).unwrap();
        let r_ls = (&bn - &aq * &c).norm();
        worst_ls = worst_ls.max((r_mr - r_ls).abs());

        let fact = lanczos_factorize(&a, &b, j).unwrap();
        let x_mr = &mr.iterates[j];
        let r_direct = norm(&sub(&b, &a.apply(x_mr).unwrap()));
        let coeffs: Vec<f64> = fact.basis().iter().map(|v| krylov_ibc::linalg::vector::dot(v, x_mr)).collect();
        for _ in 0..1000 {
            let scale = 10f64.powf(rng.random_range(-6.0..0.0));
            let trial: Vec<f64> = coeffs.iter().map(|c| c + scale * rng.random_range(-1.0..1.0)).collect();
            let v = combine(fact.basis(), &trial, n);
            let r = norm(&sub(&b, &a.apply(&v).unwrap()));
            worst_undercut = worst_undercut.max(r_direct - r);
            if r < r_direct - ROUNDOFF {
                sample_violations += 1;
            }
        }

        let cg = cg_run(&a, &b, 0.0, n - 1).unwrap();
        let reference = textbook_cg(&an, &bn, cg.len() - 1);
        for (x, y) in cg.iterates.iter().zip(&reference) {
            let d = (DVector::from_column_slice(x) - y).norm() / y.norm().max(1.0);
            worst_cg = worst_cg.max(d);
        }
    }
    let ok = worst_ls <= 1e-9 && sample_violations == 0 && worst_cg <= 1e-9;
    verdict(
        3,
        "MR optimality and CG",
        ok,
        &format!(
            "100 SPD cases: |MR - least squares| <= {worst_ls:.1e}, {sample_violations} of 100000 sampled vectors beat MR by more than {ROUNDOFF:.0e} (largest margin {worst_undercut:.1e}), CG vs textbook <= {worst_cg:.1e}"
        ),
    );
}

#[test]
fn c4_chebyshev_q_and_witness() {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for rho in [0.3, 0.5, 0.7, 0.9] {
        for eps in [1e-2, 1e-4, 1e-6] {
            for n in [10, 30] {
                let c = chebyshev_worst_case(n, rho, eps, n as u64).unwrap();
                checked += 1;
                if !c.matches() {
                    mismatches.push(c);
                }
            }
        }
    }
    let mut found = 0;
    let mut first = None;
    for rho in [0.3, 0.5] {
        let recipe = MatrixRecipe::parse(&format!("ftilde_rho_member:n=20,rho={rho}")).unwrap();
        let mut spec = ExperimentSpec::new(ExperimentKind::Witness, recipe, StartKind::RandomUnit, 40);
        spec.eps = vec![1e-2, 1e-4];
        spec.cases = 5;
        let table = run_experiment(&spec).unwrap();
        found += table.rows.len();
        if first.is_none() {
            first = table.rows.first().map(|r| {
                r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
            });
        }
    }
    let ok = checked >= 20 && mismatches.is_empty() && found >= 1;
    verdict(
        4,
        "Chebyshev stop = q(eps) and ordering witness",
        ok,
        &format!(
            "{checked} combinations, mismatches {mismatches:?}; {found} witnesses, first [n rho eps q seed mr_q cheb_q mr_q1] = {first:?}"
        ),
    );
}

#[test]
fn c5_gmr_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_241_005);
    let mut problems = Vec::new();
    let (mut worst_gap, mut worst_rise, mut worst_bound) = (f64::NEG_INFINITY, 0.0_f64, f64::NEG_INFINITY);
    for seed in 0..100 {
        let n = rng.random_range(3..=16);
        let (a, b) = case(MatrixKind::RandomSymmetric, n, seed, StartKind::RandomUnit);
        let na = a.norm2();
        let tr = eig_race(&a, &b, &[1e-6], n - 1).unwrap();
        let g = &tr.gmr;
        for k in 0..tr.steps() {
            let j = (k + 1) as f64;
            worst_gap = worst_gap.max(g[k] - tr.ritz_min[k]);
            worst_bound = worst_bound.max(g[k] - na / j);
            if g[k] > tr.ritz_min[k] + 1e-14 * na || g[k] > na / j + 1e-9 {
                problems.push(format!("seed {seed} step {}", k + 1));
            }
            if k >= 1 {
                worst_rise = worst_rise.max(g[k] - g[k - 1]);
                if g[k] > g[k - 1] + 1e-14 * na {
                    problems.push(format!("seed {seed} step {} rises", k + 1));
                }
            }
            if k >= 2 && g[k - 2] > 1e-10 * na && g[k] >= g[k - 2] {
                problems.push(format!("seed {seed} step {} not below step {}", k + 1, k - 1));
            }
        }
    }
    verdict(
        5,
        "GMR properties",
        problems.is_empty(),
        &format!(
            "100 random symmetric cases: max(rG - rL) = {worst_gap:.1e}, max rise = {worst_rise:.1e}, max(rG - |A|/j) = {worst_bound:.2e}; problems {problems:?}"
        ),
    );
}

#[test]
fn c6_bad_start_phenomenon() {
    let t = Instant::now();
    let n = 501;
    let a = generate_matrix(&MatrixRecipe::new(MatrixKind::IncreasingOffdiag, n)).unwrap();
    let b = generate_start(&StartVectorRecipe::new(StartKind::E1, 0), &a).unwrap();
    let probe = eig_race(&a, &b, &[], 1).unwrap();
    let eps = 0.99 * probe.gmr[0];
    let tr = eig_race(&a, &b, &[eps], n).unwrap();
    let stops = &tr.stops[0];
    let race_ok = stops.gmr.is_some_and(|s| s <= 5) && stops.lanczos == Some(n);
    let race_secs = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let mut table_notes = Vec::new();
    let mut tables_ok = true;
    for recipe in ["scott_like:n=201", "increasing_offdiag:n=201"] {
        let mut spec = ExperimentSpec::new(
            ExperimentKind::RitzTable,
            MatrixRecipe::parse(recipe).unwrap(),
            StartKind::ATimesRandom,
            6,
        );
        spec.eps = vec![1e-5];
        spec.stride = 1;
        spec.max_steps = 201;
        let table = run_experiment(&spec).unwrap();
        let counts: Vec<f64> = table.rows.iter().map(|r| r[2].as_f64().unwrap()).collect();
        let monotone = counts.windows(2).all(|w| w[0] <= w[1]);
        let at = (3 * 201) / 4;
        let reached = counts.get(at - 1).copied().unwrap_or(0.0);
        let ok = monotone && reached >= 201.0 / 5.0;
        tables_ok &= ok;
        table_notes.push(format!("{recipe}: monotone {monotone}, {reached} good at step {at}"));
    }
    let table_secs = t.elapsed().as_secs_f64();
    verdict(
        6,
        "bad start vs A*random start",
        race_ok && tables_ok && table_secs < 120.0,
        &format!(
            "e1 on increasing_offdiag n={n}, eps={eps:.3e}: GMR stop {:?}, Lanczos stop {:?} ({race_secs:.1}s); {} ({table_secs:.1}s)",
            stops.gmr,
            stops.lanczos,
            table_notes.join("; ")
        ),
    );
}

#[test]
fn c7_random_batch_agreement() {
    let n = 100;
    let mut agree = 0;
    let mut max_diff = 0;
    let mut pairs = Vec::new();
    for seed in 0..20 {
        let a = generate_matrix(&MatrixRecipe::new(MatrixKind::RandomTridiag, n).with_seed(seed)).unwrap();
        let b = generate_start(&StartVectorRecipe::new(StartKind::E1, seed), &a).unwrap();
        let tr = eig_race(&a, &b, &[1e-6], n).unwrap();
        let s = &tr.stops[0];
        let (l, g) = (s.lanczos.unwrap_or(n + 1), s.gmr.unwrap_or(n + 1));
        agree += usize::from(l == g);
        max_diff = max_diff.max(l.abs_diff(g));
        pairs.push((l, g));
    }
    verdict(
        7,
        "random tridiagonal batch",
        agree >= 15 && max_diff <= 2,
        &format!("{agree}/20 agree, max difference {max_diff}; (lanczos, gmr) stops {pairs:?}"),
    );
}

#[test]
fn c8_worst_start_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut outside = Vec::new();
    let mut ratios = Vec::new();
    for k in 0..20 {
        let n = rng.random_range(3..=10);
        let j = rng.random_range(1..=(n - 1).min(4));
        let a = generate_matrix(&MatrixRecipe::new(MatrixKind::RandomSymmetric, n).with_seed(100 + k)).unwrap();
        let a = a.to_dense();
        let w = worst_start_search(&a, j, 20, k).unwrap();
        let na = a.norm2();
        ratios.push(format!("{:.3}", w.value * j as f64 / na));
        if !w.within(0.05 * na, 1e-6) {
            outside.push(format!("case {k}: n={n} j={j} value={} bracket=[{}, {}]", w.value, w.lower, w.upper));
        }
    }
    verdict(
        8,
        "worst start bracket",
        outside.is_empty(),
        &format!("20 cases, j*value/|A| = [{}]; outside {outside:?}", ratios.join(" ")),
    );
}
