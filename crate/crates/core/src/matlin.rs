//! Rank, spectra, minimal polynomials, primary decomposition and commutants
//! for matrices over `R`, `C` and `H`.

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraBasis;
use crate::error::{Error, Result};
use crate::mat::{complex_adjoint, Domain, Mat};
use crate::numeric::{condition_number, norm, null_space_scaled, orthogonalize, real_rank};
use crate::poly::Polynomial;
use crate::scalar::{ComplexScalar, Quaternion};

/// (shift relative to the norm, deflation tolerance) per attempt.
const SCHUR_ATTEMPTS: [(f64, f64); 4] = [
    (0.0, f64::EPSILON),
    (0.618_033_988_749_9, f64::EPSILON),
    (0.0, 64.0 * f64::EPSILON),
    (-0.414_213_562_373_1, 1024.0 * f64::EPSILON),
];
const SCHUR_MAX_ITER: usize = 10_000;

/// Relative gap below which eigenvalues are merged into one cluster.
pub const CLUSTER_GAP: f64 = 1e-5;

/// Eigenvalues (or right-eigenvalue representatives over `H`) with the
/// spectral radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub values: Vec<ComplexScalar>,
    pub radius: f64,
}

impl Spectrum {
    fn from_values(mut values: Vec<ComplexScalar>) -> Spectrum {
        values.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        let radius = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Spectrum { values, radius }
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Numerical rank by Gaussian elimination with full pivoting, performed on the
/// matrix itself. Pivots at or below `tol·‖A‖_F` count as zero. Over `H` this
/// is the dimension of the right column space.
pub fn rank(a: &Mat, tol: f64) -> usize {
    let (rows, cols) = (a.rows(), a.cols());
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return 0;
    }
    let thresh = tol * scale;
    let mut m: Vec<Quaternion> = a.entries().to_vec();
    let mut r = 0;
    while r < rows.min(cols) {
        let mut best = (r, r, 0.0);
        for i in r..rows {
            for j in r..cols {
                let v = m[i * cols + j].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= thresh {
            break;
        }
        let (pi, pj, _) = best;
        if pi != r {
            for j in 0..cols {
                m.swap(pi * cols + j, r * cols + j);
            }
        }
        if pj != r {
            for i in 0..rows {
                m.swap(i * cols + pj, i * cols + r);
            }
        }
        let pivot_inv = m[r * cols + r].inv().expect("nonzero pivot");
        for i in r + 1..rows {
            let f = m[i * cols + r] * pivot_inv;
            if f == Quaternion::ZERO {
                continue;
            }
            for j in r..cols {
                let t = f * m[r * cols + j];
                m[i * cols + j] = m[i * cols + j] - t;
            }
        }
        r += 1;
    }
    r
}

/// Rank over the scalar domain computed from the real representation
/// (real rank divided by the domain's real dimension).
pub fn rank_realified(a: &Mat, tol: f64) -> usize {
    real_rank(&a.realify(), tol) / a.domain().real_dim()
}

/// Two-sided inverse through the real representation.
pub fn inverse(a: &Mat) -> Result<Mat> {
    a.require_square()?;
    let r = a.realify();
    let inv = r
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("matrix is singular".into()))?;
    if !inv.iter().all(|x| x.is_finite()) || condition_number(&r) > 1e14 {
        return Err(Error::Numerical("matrix is numerically singular".into()));
    }
    Mat::unrealify(a.domain(), &inv)
}

fn real_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<ComplexScalar>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let n = m.nrows();
    let scale = m.norm().max(f64::MIN_POSITIVE);
    // Exactly structured inputs (nilpotent blocks) occasionally stall the
    // QR sweep; a spectral shift breaks the symmetry.
    for (shift, eps) in SCHUR_ATTEMPTS {
        let s = shift * scale;
        let shifted = m + DMatrix::<f64>::identity(n, n) * s;
        if let Some(schur) = Schur::try_new(shifted, eps, SCHUR_MAX_ITER) {
            return Ok(schur.complex_eigenvalues().iter().map(|z| z - s).collect());
        }
    }
    Err(Error::Numerical("real Schur iteration did not converge".into()))
}

fn complex_eigenvalues(m: &DMatrix<ComplexScalar>) -> Result<Vec<ComplexScalar>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let n = m.nrows();
    let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for (shift, eps) in SCHUR_ATTEMPTS {
        let s = ComplexScalar::new(shift * scale, 0.0);
        let shifted = m + DMatrix::<ComplexScalar>::identity(n, n) * s;
        if let Some(schur) = Schur::try_new(shifted, eps, SCHUR_MAX_ITER) {
            let (_, t) = schur.unpack();
            return Ok(t.diagonal().iter().map(|z| z - s).collect());
        }
    }
    Err(Error::Numerical("complex Schur iteration did not converge".into()))
}

/// Eigenvalues with multiplicity of a real or complex square matrix.
pub fn eigenvalues(a: &Mat) -> Result<Spectrum> {
    a.require_square()?;
    let values = match a.domain() {
        Domain::R => real_eigenvalues(&a.realify())?,
        Domain::C => complex_eigenvalues(&a.to_complex_dmatrix()?)?,
        Domain::H => {
            return Err(Error::Domain {
                expected: Domain::C,
                found: Domain::H,
            })
        }
    };
    Ok(Spectrum::from_values(values))
}

/// Eigenvalues of the real representation (`ε_n`/`ε″_n` image); the root set
/// of the real minimal polynomial.
pub fn realified_eigenvalues(a: &Mat) -> Result<Vec<ComplexScalar>> {
    a.require_square()?;
    real_eigenvalues(&a.realify())
}

/// One complex representative with nonnegative imaginary part per similarity
/// class of right eigenvalues, `n` in total.
pub fn right_eigenvalue_representatives(a: &Mat) -> Result<Spectrum> {
    let n = a.require_square()?;
    if a.domain() != Domain::H {
        return Err(Error::Domain {
            expected: Domain::H,
            found: a.domain(),
        });
    }
    let adj = complex_adjoint(a)?;
    let mut all = complex_eigenvalues(&adj.to_complex_dmatrix()?)?;
    let radius = all.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let band = 1e-6 * radius.max(1.0);
    all.sort_by(|x, y| y.im.total_cmp(&x.im));
    let upper: Vec<ComplexScalar> = all.iter().copied().filter(|z| z.im > band).collect();
    let mut real_band: Vec<ComplexScalar> =
        all.iter().copied().filter(|z| z.im.abs() <= band).collect();
    // Real eigenvalues of the adjoint come in equal pairs; keep one of each.
    real_band.sort_by(|x, y| x.re.total_cmp(&y.re));
    let mut values = upper;
    values.extend(
        real_band
            .iter()
            .step_by(2)
            .map(|z| ComplexScalar::new(z.re, z.im.abs())),
    );
    if values.len() != n {
        return Err(Error::Numerical(format!(
            "adjoint spectrum is not conjugation-symmetric ({} representatives for n = {n})",
            values.len()
        )));
    }
    Ok(Spectrum::from_values(values))
}

/// Spectrum for any domain: eigenvalues over `R`/`C`, representatives over `H`.
pub fn spectrum(a: &Mat) -> Result<Spectrum> {
    match a.domain() {
        Domain::H => right_eigenvalue_representatives(a),
        _ => eigenvalues(a),
    }
}

/// Every spectral value has `|Im| ≤ tol·max(1, ρ)`.
pub fn has_real_spectrum(a: &Mat, tol: f64) -> Result<bool> {
    let s = spectrum(a)?;
    Ok(s.max_abs_imag() <= tol * s.radius.max(1.0))
}

/// Monic minimal polynomial with real coefficients.
///
/// Vectorized powers `I, Â, Â², …` of `Â = A/‖A‖_F` are orthogonalized in
/// turn; the first power whose relative residual falls below `tol` fixes the
/// degree, and the coefficients are rescaled back to `A`.
pub fn minimal_polynomial(a: &Mat, tol: f64) -> Result<Polynomial> {
    let n = a.require_square()?;
    let cap = match a.domain() {
        Domain::R => n,
        Domain::C | Domain::H => 2 * n,
    };
    let s = a.frobenius_norm();
    if s == 0.0 {
        return Ok(Polynomial::linear(0.0));
    }
    let a_hat = a.scale(1.0 / s);
    let mut q: Vec<Vec<f64>> = Vec::new();
    // r[k] holds the coefficients of power k in the orthonormal basis q.
    let mut r_cols: Vec<Vec<f64>> = Vec::new();
    let mut power = Mat::identity(a.domain(), n);
    for k in 0..=cap {
        let v = power.coefficients();
        let nv = norm(&v);
        let (res, coeffs) = orthogonalize(&q, &v);
        let nr = norm(&res);
        // ‖Â^k‖ ≤ 1, so rounding leaves at most a few ulps·k behind.
        let floor = 64.0 * f64::EPSILON * (k + 1) as f64;
        // At k == cap the degree bound forces dependence.
        if nr <= tol * nv + floor || k == cap {
            // Solve R c = coeffs (upper triangular, size k).
            let mut c = vec![0.0; k];
            for i in (0..k).rev() {
                let mut acc = coeffs[i];
                for j in i + 1..k {
                    acc -= r_cols[j][i] * c[j];
                }
                c[i] = acc / r_cols[i][i];
            }
            // m̂(x) = x^k − Σ c_i x^i, then m(x) = s^k m̂(x/s).
            let mut out = vec![0.0; k + 1];
            for (i, ci) in c.iter().enumerate() {
                out[i] = -ci * s.powi((k - i) as i32);
            }
            out[k] = 1.0;
            return Ok(Polynomial::new(out));
        }
        if nr <= 100.0 * tol * nv + floor {
            return Err(Error::AmbiguousDegree { low: k, high: k + 1 });
        }
        let mut col = coeffs;
        col.push(nr);
        r_cols.push(col);
        q.push(res.into_iter().map(|x| x / nr).collect());
        power = power.mul_unchecked(&a_hat);
    }
    unreachable!("loop returns at k == cap")
}

/// Outcome of the triangularizability test with its numerical margin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangularizabilityReport {
    pub triangularizable: bool,
    /// Largest `|Im|` among the roots, relative to `max(1, ρ)`.
    pub max_relative_imag: f64,
    /// True when some root sits within a factor 100 of its threshold.
    pub borderline: bool,
}

/// Decides whether the real minimal polynomial splits over `R`.
///
/// The roots are the eigenvalues of the real representation. A root lying in
/// a cluster of `m` nearby roots is accepted as real when
/// `|Im| ≤ tol^(1/m)·max(1, ρ)`, which allows for the `ε^(1/m)` splitting of
/// defective eigenvalues.
pub fn triangularizability_report(a: &Mat, tol: f64) -> Result<TriangularizabilityReport> {
    let roots = realified_eigenvalues(a)?;
    let radius = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = radius.max(1.0);
    let mut ok = true;
    let mut borderline = false;
    let mut worst: f64 = 0.0;
    for z in &roots {
        let near = roots
            .iter()
            .filter(|w| (**w - *z).norm() <= 1e-3 * scale)
            .count()
            .max(1);
        let thresh = tol.powf(1.0 / near as f64);
        let rel = z.im.abs() / scale;
        worst = worst.max(rel);
        if rel > thresh {
            ok = false;
        }
        if rel > thresh / 100.0 && rel <= 100.0 * thresh {
            borderline = true;
        }
    }
    Ok(TriangularizabilityReport {
        triangularizable: ok,
        max_relative_imag: worst,
        borderline,
    })
}

/// The minimal polynomial splits into real linear factors.
pub fn is_triangularizable_central(a: &Mat, tol: f64) -> Result<bool> {
    Ok(triangularizability_report(a, tol)?.triangularizable)
}

/// A real eigenvalue cluster: mean value and algebraic multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cluster {
    pub value: f64,
    pub multiplicity: usize,
}

fn cluster_real(eigs: &[ComplexScalar], gap: f64) -> Vec<Cluster> {
    let mut sorted: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for x in sorted {
        match out.last_mut() {
            Some((sum, m)) if x - last < gap => {
                *sum += x;
                *m += 1;
            }
            _ => out.push((x, 1)),
        }
        last = x;
    }
    out.into_iter()
        .map(|(sum, m)| Cluster {
            value: sum / m as f64,
            multiplicity: m,
        })
        .collect()
}

/// Taylor coefficients of `p` at `x0`.
fn taylor_shift(p: &Polynomial, x0: f64) -> Vec<f64> {
    let mut c = p.coefficients().to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            c[j] += x0 * c[j + 1];
        }
    }
    c
}

/// `A = D + N` with `D` diagonalizable, `N` nilpotent, `DN = ND`.
///
/// `D = Σ λ_c·P_c` where the spectral projector `P_c = h_c(A)·u_c(A)` is built
/// from `h_c = Π_{c'≠c} (x − λ_{c'})^{m_{c'}}` and the truncated Taylor inverse
/// `u_c ≡ 1/h_c mod (x − λ_c)^{m_c}`.
pub fn primary_decomposition(a: &Mat, tol: f64) -> Result<(Mat, Mat)> {
    let n = a.require_square()?;
    if a.domain() != Domain::R {
        return Err(Error::Domain {
            expected: Domain::R,
            found: a.domain(),
        });
    }
    if !is_triangularizable_central(a, tol)? {
        return Err(Error::Precondition(
            "primary decomposition needs an all-real spectrum".into(),
        ));
    }
    let eigs = realified_eigenvalues(a)?;
    let radius = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if radius == 0.0 {
        return Ok((Mat::zeros(Domain::R, n, n), a.clone()));
    }
    let clusters = cluster_real(&eigs, CLUSTER_GAP * radius);
    let id = Mat::identity(Domain::R, n);
    let mut d = Mat::zeros(Domain::R, n, n);
    for (ci, c) in clusters.iter().enumerate() {
        let mut h = Polynomial::one();
        for (cj, other) in clusters.iter().enumerate() {
            if cj != ci {
                h = h.mul(&Polynomial::linear(other.value).pow(other.multiplicity));
            }
        }
        let ht = taylor_shift(&h, c.value);
        let h0 = ht[0];
        if h0.abs() < f64::MIN_POSITIVE {
            return Err(Error::Numerical("ill-conditioned eigenvalue split".into()));
        }
        let m = c.multiplicity;
        let mut tau = vec![0.0; m];
        tau[0] = 1.0 / h0;
        for t in 1..m {
            let mut acc = 0.0;
            for i in 1..=t.min(ht.len() - 1) {
                acc += ht[i] * tau[t - i];
            }
            tau[t] = -acc / h0;
        }
        let shifted = a.mat_sub(&id.scale(c.value))?;
        let mut u = Mat::zeros(Domain::R, n, n);
        let mut pw = id.clone();
        for tt in &tau {
            u = u.mat_add(&pw.scale(*tt))?;
            pw = pw.mul_unchecked(&shifted);
        }
        let proj = h.eval_mat(a)?.mul_unchecked(&u);
        d = d.mat_add(&proj.scale(c.value))?;
    }
    let nil = a.mat_sub(&d)?;
    let scale = 1.0 + a.frobenius_norm();
    let comm = d.mul_unchecked(&nil).mat_sub(&nil.mul_unchecked(&d))?;
    let nil_pow = nil.pow(n as u32)?;
    let split_tol = tol.max(1e-12) * 1e3;
    if comm.frobenius_norm() > split_tol * scale * scale
        || nil_pow.frobenius_norm() > split_tol * scale.powi(n as i32)
    {
        return Err(Error::Numerical(
            "ill-conditioned split: eigenvalue clusters too close".into(),
        ));
    }
    Ok((d, nil))
}

/// Basis of `{X : XA = AX for every A in the family}` as an `R`-subspace of
/// `M_n(D)`, from the null space of the real commutation system.
pub fn commutant(family: &[Mat], tol: f64) -> Result<AlgebraBasis> {
    let first = family
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty family".into()))?;
    let (domain, n) = (first.domain(), first.require_square()?);
    for a in family {
        if a.domain() != domain {
            return Err(Error::Domain {
                expected: domain,
                found: a.domain(),
            });
        }
        if a.rows() != n || a.cols() != n {
            return Err(Error::Shape("family members must share a size".into()));
        }
    }
    let dim = domain.real_dim() * n * n;
    let mut sys = DMatrix::zeros(family.len() * dim, dim);
    for t in 0..dim {
        let mut e = vec![0.0; dim];
        e[t] = 1.0;
        let x = Mat::from_coefficients(domain, n, n, &e)?;
        for (k, a) in family.iter().enumerate() {
            let c = x.mul_unchecked(a).mat_sub(&a.mul_unchecked(&x))?;
            for (i, v) in c.coefficients().into_iter().enumerate() {
                sys[(k * dim + i, t)] = v;
            }
        }
    }
    // A commutator of unit-size matrices that is pure rounding noise must
    // not define the null space.
    let scale = family.iter().map(|a| a.frobenius_norm()).fold(0.0, f64::max);
    let vecs = null_space_scaled(&sys, tol, scale)
        .into_iter()
        .map(|v| v.iter().copied().collect())
        .collect();
    Ok(AlgebraBasis::from_orthonormal_vectors(domain, n, vecs))
}
