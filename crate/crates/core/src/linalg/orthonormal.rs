use super::vector::{axpy, dot, norm, scale};

/// Default relative drop tolerance for [`orthonormalize`].
pub const DROP_TOL: f64 = 1e-10;

/// Result of [`orthonormalize`]: an orthonormal basis for the span of the
/// inputs and its numerical rank.
#[derive(Debug, Clone, PartialEq)]
pub struct Orthonormalized {
    pub basis: Vec<Vec<f64>>,
    pub rank: usize,
}

pub fn orthonormalize(vectors: &[Vec<f64>]) -> Orthonormalized {
    orthonormalize_with(vectors, DROP_TOL)
}

/// Modified Gram-Schmidt with one full reorthogonalization pass.
///
/// A vector is dropped when, after both passes, its remaining norm is at most
/// `drop_tol` times its input norm.
pub fn orthonormalize_with(vectors: &[Vec<f64>], drop_tol: f64) -> Orthonormalized {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let input_norm = norm(v);
        if input_norm == 0.0 {
            continue;
        }
        let mut x = v.clone();
        for _pass in 0..2 {
            for q in &basis {
                let c = dot(q, &x);
                axpy(-c, q, &mut x);
            }
        }
        let rest = norm(&x);
        if rest <= drop_tol * input_norm {
            continue;
        }
        basis.push(scale(1.0 / rest, &x));
    }
    let rank = basis.len();
    Orthonormalized { basis, rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vector::unit;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orthonormal_input_is_kept() {
        let input = vec![unit(3, 1), unit(3, 0)];
        let out = orthonormalize(&input);
        assert_eq!(out.rank, 2);
        assert_eq!(out.basis, input);
    }

    #[test]
    fn exact_dependence_is_dropped() {
        let out = orthonormalize(&[unit(3, 0), unit(3, 0)]);
        assert_eq!(out.rank, 1);
        assert_eq!(out.basis, vec![unit(3, 0)]);
    }

    #[test]
    fn all_zero_gives_rank_zero() {
        assert_eq!(orthonormalize(&[vec![0.0; 4], vec![0.0; 4]]).rank, 0);
    }

    #[test]
    fn overcomplete_random_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let input: Vec<Vec<f64>> = (0..6)
            .map(|_| (0..4).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let out = orthonormalize(&input);
        assert_eq!(out.rank, 4);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&out.basis[i], &out.basis[j]) - want).abs() <= 1e-12);
            }
        }
    }
}
