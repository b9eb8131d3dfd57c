//! Level-1 operations on `f64` slices.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm, scaled to avoid overflow for large entries.
pub fn norm(a: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let ssq: f64 = a.iter().map(|x| (x / scale) * (x / scale)).sum();
    scale * ssq.sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| alpha * v).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Returns `v / ‖v‖`, or `None` for the zero vector.
pub fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let nrm = norm(v);
    if nrm == 0.0 || !nrm.is_finite() {
        None
    } else {
        Some(scale(1.0 / nrm, v))
    }
}

/// The `i`-th coordinate vector of length `n`.
pub fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs()))
}

/// `sum_k coeffs[k] * columns[k]`; the result has length `dim`.
pub fn combine(columns: &[Vec<f64>], coeffs: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (col, &c) in columns.iter().zip(coeffs) {
        if c != 0.0 {
            axpy(c, col, &mut out);
        }
    }
    out
}

/// Coordinates of `v` against orthonormal `columns`: `Qᵗ v`.
pub fn project_coords(columns: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    columns.iter().map(|q| dot(q, v)).collect()
}
