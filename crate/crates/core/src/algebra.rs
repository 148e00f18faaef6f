//! Real subspaces of `M_n(D)` held as orthonormal bases.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::mat::{normal, Domain, Mat};
use crate::numeric::{norm, orthogonalize, push_if_independent_scaled};

/// An `R`-linearly independent family of `n×n` matrices over `D`.
///
/// Elements are orthonormal with respect to the real inner product on
/// coefficient vectors; `gram` caches those vectors.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    domain: Domain,
    n: usize,
    elements: Vec<Mat>,
    gram: Vec<Vec<f64>>,
}

impl AlgebraBasis {
    pub fn empty(domain: Domain, n: usize) -> AlgebraBasis {
        AlgebraBasis {
            domain,
            n,
            elements: Vec::new(),
            gram: Vec::new(),
        }
    }

    /// Orthonormalizes a spanning list, dropping dependent members.
    pub fn from_spanning(domain: Domain, n: usize, mats: &[Mat], tol: f64) -> Result<AlgebraBasis> {
        let mut basis = AlgebraBasis::empty(domain, n);
        for m in mats {
            basis.try_push(m, tol)?;
        }
        Ok(basis)
    }

    pub(crate) fn from_orthonormal_vectors(domain: Domain, n: usize, vecs: Vec<Vec<f64>>) -> AlgebraBasis {
        let elements = vecs
            .iter()
            .map(|v| Mat::from_coefficients(domain, n, n, v).expect("coefficient length"))
            .collect();
        AlgebraBasis {
            domain,
            n,
            elements,
            gram: vecs,
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Ambient size `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn gram(&self) -> &[Vec<f64>] {
        &self.gram
    }

    /// Largest possible dimension, `d·n²`.
    pub fn ambient_dim(&self) -> usize {
        self.domain.real_dim() * self.n * self.n
    }

    fn check(&self, m: &Mat) -> Result<()> {
        if m.domain() != self.domain {
            return Err(Error::Domain {
                expected: self.domain,
                found: m.domain(),
            });
        }
        if m.rows() != self.n || m.cols() != self.n {
            return Err(Error::Shape(format!(
                "expected {n}x{n}, found {}x{}",
                m.rows(),
                m.cols(),
                n = self.n
            )));
        }
        Ok(())
    }

    /// Adjoins `m` when it lies outside the span (relative residual > `tol`).
    pub fn try_push(&mut self, m: &Mat, tol: f64) -> Result<bool> {
        self.try_push_scaled(m, 0.0, tol)
    }

    /// Adjoins `m` when its residual exceeds `tol·max(‖m‖, scale)`. For a
    /// product `a·b`, pass `scale = ‖a‖·‖b‖`.
    pub fn try_push_scaled(&mut self, m: &Mat, scale: f64, tol: f64) -> Result<bool> {
        self.check(m)?;
        let before = self.gram.len();
        if push_if_independent_scaled(&mut self.gram, &m.coefficients(), scale, tol) {
            let v = &self.gram[before];
            self.elements
                .push(Mat::from_coefficients(self.domain, self.n, self.n, v)?);
            Ok(true)
        } else {
            Ok(false)
        }
    }

    /// Relative distance of `m` from the span, `‖m − proj(m)‖ / ‖m‖`
    /// (zero for `m = 0`).
    pub fn residual(&self, m: &Mat) -> f64 {
        let v = m.coefficients();
        let nv = norm(&v);
        if nv == 0.0 {
            return 0.0;
        }
        let (r, _) = orthogonalize(&self.gram, &v);
        norm(&r) / nv
    }

    pub fn contains(&self, m: &Mat, tol: f64) -> bool {
        self.residual(m) <= tol
    }

    /// Gaussian combination of the basis elements.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat {
        let mut acc = Mat::zeros(self.domain, self.n, self.n);
        for e in &self.elements {
            acc = acc.mat_add(&e.scale(normal(rng))).expect("same shape");
        }
        acc
    }

    /// Largest relative residual of pairwise products; closed when below `tol`.
    pub fn closure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.elements {
            for b in &self.elements {
                worst = worst.max(self.residual(&a.mul_unchecked(b)));
            }
        }
        worst
    }

    pub fn realified(&self) -> Vec<DMatrix<f64>> {
        self.elements.iter().map(Mat::realify).collect()
    }

    /// Conjugates every element, `P⁻¹·A·P`, and re-orthonormalizes.
    pub fn conjugate(&self, p: &Mat, tol: f64) -> Result<AlgebraBasis> {
        let p_inv = crate::matlin::inverse(p)?;
        let mats: Vec<Mat> = self
            .elements
            .iter()
            .map(|a| p_inv.mul_unchecked(a).mul_unchecked(p))
            .collect();
        AlgebraBasis::from_spanning(self.domain, self.n, &mats, tol)
    }
}
