//! Small real linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// Orthogonalizes `v` against an orthonormal list (two Gram-Schmidt passes).
/// Returns the residual and the projection coefficients.
pub(crate) fn orthogonalize(basis: &[Vec<f64>], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut r = v.to_vec();
    let mut coeffs = vec![0.0; basis.len()];
    for _ in 0..2 {
        for (q, c) in basis.iter().zip(coeffs.iter_mut()) {
            let h = dot(q, &r);
            *c += h;
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri -= h * qi;
            }
        }
    }
    (r, coeffs)
}

/// Appends the normalized residual of `v` when its relative size exceeds `tol`.
pub(crate) fn push_if_independent(basis: &mut Vec<Vec<f64>>, v: &[f64], tol: f64) -> bool {
    push_if_independent_scaled(basis, v, 0.0, tol)
}

/// As [`push_if_independent`], measuring the residual against
/// `max(‖v‖, scale)`; a product whose entries cancel to rounding noise is
/// then not mistaken for a new direction.
pub(crate) fn push_if_independent_scaled(basis: &mut Vec<Vec<f64>>, v: &[f64], scale: f64, tol: f64) -> bool {
    let nv = norm(v);
    if nv == 0.0 {
        return false;
    }
    let (r, _) = orthogonalize(basis, v);
    let nr = norm(&r);
    if nr <= tol * nv.max(scale) {
        return false;
    }
    basis.push(r.into_iter().map(|x| x / nr).collect());
    true
}

/// Orthonormal basis of the null space of `m`, with singular values at or
/// below `tol · σ_max` treated as zero (everything, when `m = 0`).
pub(crate) fn null_space(m: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    null_space_scaled(m, tol, 0.0)
}

/// As [`null_space`] with threshold `tol · max(σ_max, scale)`, so a system
/// that is pure rounding noise relative to `scale` counts as zero.
pub(crate) fn null_space_scaled(m: &DMatrix<f64>, tol: f64, scale: f64) -> Vec<DVector<f64>> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Vec::new();
    }
    let padded;
    let a = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded = p;
        &padded
    } else {
        m
    };
    // Thin SVD of a tall matrix carries the full right singular basis.
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.max();
    let thresh = tol * smax.max(scale);
    if smax <= thresh {
        return (0..cols)
            .map(|j| DVector::from_fn(cols, |i, _| if i == j { 1.0 } else { 0.0 }))
            .collect();
    }
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= thresh)
        .map(|(k, _)| vt.row(k).transpose())
        .collect()
}

/// Orthonormal basis of the column space of `m`.
pub(crate) fn column_space(m: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return Vec::new();
    }
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s > tol * smax)
        .map(|(k, _)| u.column(k).into_owned())
        .collect()
}

/// Numerical rank with threshold `tol · σ_max`.
pub(crate) fn real_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * smax).count()
}

/// Ratio of extreme singular values; infinite for singular input.
pub(crate) fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.singular_values();
    let (hi, lo) = (sv.max(), sv.min());
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Row-major vectorization.
pub(crate) fn vec_row_major(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            v.push(m[(i, j)]);
        }
    }
    v
}

/// `ln C(n, k)` through a running sum of logarithms.
pub(crate) fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n, "binomial C({n}, {k}) undefined");
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = null_space(&m, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&m * v).norm() < 1e-12);
        }
    }

    #[test]
    fn rank_of_outer_product() {
        let x = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let y = DVector::from_vec(vec![-1.0, 0.5, 4.0]);
        assert_eq!(real_rank(&(&x * y.transpose()), 1e-9), 1);
        assert_eq!(real_rank(&DMatrix::<f64>::zeros(3, 3), 1e-9), 0);
    }

    #[test]
    fn log_binomials() {
        assert!((ln_binomial(10, 3) - 120f64.ln()).abs() < 1e-12);
        assert_eq!(ln_binomial(5, 0), 0.0);
        assert!((ln_binomial(6, 6)).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_rejects_dependent_vectors() {
        let mut basis = Vec::new();
        assert!(push_if_independent(&mut basis, &[1.0, 0.0, 0.0], 1e-9));
        assert!(push_if_independent(&mut basis, &[1.0, 1.0, 0.0], 1e-9));
        assert!(!push_if_independent(&mut basis, &[3.0, -2.0, 0.0], 1e-9));
        assert_eq!(basis.len(), 2);
        assert!(!push_if_independent_scaled(&mut basis, &[0.0, 0.0, 1e-17], 1.0, 1e-9));
        assert!(push_if_independent(&mut basis, &[0.0, 0.0, 1e-17], 1e-9));
    }
}
