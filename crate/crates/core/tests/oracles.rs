// Cross-checks against nalgebra, which shares no code with the crate.

use krylov_ibc::adversary::{adversarial_blowup, distinguished_form};
use krylov_ibc::eigen::{gmr_eigenpair, rayleigh_ritz};
use krylov_ibc::harness::{generate_matrix, generate_start, MatrixKind, MatrixRecipe, StartKind, StartVectorRecipe};
use krylov_ibc::krylov::lanczos_factorize;
use krylov_ibc::linalg::{DenseSymmetric, Reflector};
use krylov_ibc::linear::{chebyshev_run, generalized_residual, ChebyshevParams, ResidualPower};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

fn sample(kind: MatrixKind, n: usize, seed: u64) -> (DenseSymmetric, Vec<f64>, DMatrix<f64>) {
    let a = generate_matrix(&MatrixRecipe::new(kind, n).with_seed(seed)).unwrap().to_dense();
    let b = generate_start(&StartVectorRecipe::new(StartKind::RandomUnit, seed), &a).unwrap();
    let na = DMatrix::from_fn(n, n, |i, j| a.get(i, j));
    (a, b, na)
}

fn krylov_qr(a: &DMatrix<f64>, b: &[f64], j: usize) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(b.len(), j);
    let mut v = DVector::from_column_slice(b);
    for c in 0..j {
        k.set_column(c, &v);
        v = a * &v;
        let s = v.norm();
        v /= s;
    }
    k.qr().q()
}

fn basis_matrix(cols: &[Vec<f64>]) -> DMatrix<f64> {
    DMatrix::from_fn(cols[0].len(), cols.len(), |i, j| cols[j][i])
}

#[test]
fn lanczos_spans_the_krylov_space() {
    for seed in 0..10 {
        let (a, b, na) = sample(MatrixKind::RandomSymmetric, 9, seed);
        let j = 5;
        let f = lanczos_factorize(&a, &b, j).unwrap();
        let q = basis_matrix(f.basis());
        let reference = krylov_qr(&na, &b, j);
        let leak = &reference - &q * (q.transpose() * &reference);
        assert!(leak.norm() < 1e-10, "seed {seed}: {}", leak.norm());
        let t = q.transpose() * &na * &q;
        for r in 0..j {
            for c in 0..j {
                assert!((t[(r, c)] - f.tridiag().get(r, c)).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn ritz_values_are_projected_eigenvalues() {
    let (a, b, na) = sample(MatrixKind::RandomSymmetric, 12, 3);
    let f = lanczos_factorize(&a, &b, 6).unwrap();
    let q = krylov_qr(&na, &b, 6);
    let mut expected: Vec<f64> = SymmetricEigen::new(q.transpose() * &na * &q)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    expected.sort_by(f64::total_cmp);
    let ritz = rayleigh_ritz(&f);
    for (p, e) in ritz.pairs.iter().zip(&expected) {
        assert!((p.theta - e).abs() < 1e-10);
        let z = DVector::from_column_slice(&p.z);
        assert!(((&na * &z - p.theta * &z).norm() - p.residual_norm).abs() < 1e-10);
    }
}

/// `min_{x ∈ K^j, ‖x‖=1} ‖(A − ρ)x‖ = σ_min((A − ρ)Q)`, minimized over `ρ`
/// by a fine scan and golden-section refinement.
fn gmr_oracle(na: &DMatrix<f64>, q: &DMatrix<f64>) -> f64 {
    let n = na.nrows();
    let sigma = |rho: f64| {
        let m = (na - DMatrix::<f64>::identity(n, n) * rho) * q;
        m.singular_values().min()
    };
    let bound = na.norm();
    let grid = 4000;
    let step = 2.0 * bound / grid as f64;
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..=grid {
        let rho = -bound + step * k as f64;
        let s = sigma(rho);
        if s < best.0 {
            best = (s, rho);
        }
    }
    let (mut lo, mut hi) = (best.1 - step, best.1 + step);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let c = hi - g * (hi - lo);
        let d = lo + g * (hi - lo);
        if sigma(c) < sigma(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    best.0.min(sigma(0.5 * (lo + hi)))
}

#[test]
fn gmr_matches_singular_value_oracle() {
    for seed in 0..8 {
        let (a, b, na) = sample(MatrixKind::RandomSymmetric, 8, seed);
        for j in 1..=4 {
            let f = lanczos_factorize(&a, &b, j).unwrap();
            let p = gmr_eigenpair(&f);
            let oracle = gmr_oracle(&na, &krylov_qr(&na, &b, j));
            assert!(
                (p.residual - oracle).abs() < 1e-8,
                "seed {seed} j {j}: {} vs {oracle}",
                p.residual
            );
        }
    }
}

#[test]
fn chebyshev_residuals_follow_the_polynomial() {
    let rho = 0.6;
    let recipe = MatrixRecipe::parse("ftilde_rho_member:n=10,rho=0.6").unwrap().with_seed(2);
    let a = generate_matrix(&recipe).unwrap();
    let dense = a.to_dense();
    let b = generate_start(&StartVectorRecipe::new(StartKind::RandomUnit, 2), &a).unwrap();
    let trace = chebyshev_run(&a, &b, ChebyshevParams::new(rho).unwrap(), 0.0, 8).unwrap();

    let eig = SymmetricEigen::new(DMatrix::from_fn(10, 10, |i, j| dense.get(i, j)));
    let bv = DVector::from_column_slice(&b);
    let coeff = eig.eigenvectors.transpose() * &bv;
    let cheb = |k: usize, x: f64| {
        if x.abs() <= 1.0 {
            (k as f64 * x.acos()).cos()
        } else {
            x.signum().powi(k as i32) * (k as f64 * x.abs().acosh()).cosh()
        }
    };
    for (idx, r) in trace.residual_norms.iter().enumerate() {
        let k = idx + 1;
        let scale = cheb(k, 1.0 / rho);
        let expected: f64 = eig
            .eigenvalues
            .iter()
            .zip(coeff.iter())
            .map(|(l, c)| (c * cheb(k, (1.0 - l) / rho) / scale).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!((r - expected).abs() < 1e-12, "index {idx}: {r} vs {expected}");
    }
}

#[test]
fn generalized_residual_powers() {
    let (a, b, na) = sample(MatrixKind::RandomSpd, 7, 5);
    let x: Vec<f64> = (0..7).map(|i| 0.1 * i as f64 - 0.2).collect();
    let eig = SymmetricEigen::new(na.clone());
    let xs = na.clone().lu().solve(&DVector::from_column_slice(&b)).unwrap();
    let e = DVector::from_column_slice(&x) - xs;
    let power = |p: f64, v: &DVector<f64>| {
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.powf(p)));
        (&eig.eigenvectors * d * eig.eigenvectors.transpose() * v).norm()
    };
    let bv = DVector::from_column_slice(&b);
    for (p, rp) in [(0.0, ResidualPower::Zero), (0.5, ResidualPower::Half), (1.0, ResidualPower::One)] {
        let g = generalized_residual(&a, &x, &b, rp).unwrap();
        assert!((g.value - power(p, &e)).abs() < 1e-10 * g.value.max(1.0));
        assert!((g.reference - power(p - 1.0, &bv)).abs() < 1e-10 * g.reference.max(1.0));
    }
}

#[test]
fn reflector_conjugation() {
    let (a, _, na) = sample(MatrixKind::RandomSymmetric, 6, 8);
    let w = [0.3, -1.0, 0.2, 0.0, 0.5, 0.1];
    let wv = DVector::from_column_slice(&w);
    let h = DMatrix::<f64>::identity(6, 6) - (2.0 / wv.dot(&wv)) * &wv * wv.transpose();
    let expected = &h * &na * &h;
    let got = Reflector::new(&w).unwrap().conjugate(&a).unwrap();
    for i in 0..6 {
        for j in 0..6 {
            assert!((got.get(i, j) - expected[(i, j)]).abs() < 1e-13);
        }
    }
}

#[test]
fn adversary_matrix_is_spd_per_nalgebra() {
    let (a, b, _) = sample(MatrixKind::RandomSpd, 8, 13);
    let df = distinguished_form(&a, &b, 3).unwrap();
    let v: Vec<f64> = (0..8).map(|i| (i as f64).sin()).collect();
    let cert = adversarial_blowup(&df, &v, 500.0).unwrap();
    let at = &cert.a_tilde;
    let m = DMatrix::from_fn(8, 8, |i, j| at.get(i, j));
    assert!(SymmetricEigen::new(m.clone()).eigenvalues.min() > 0.0);
    let r = DVector::from_column_slice(&b) - m * DVector::from_column_slice(&v);
    assert!(r.norm() > 500.0);
}
