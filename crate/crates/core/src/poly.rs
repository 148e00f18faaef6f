//! Real polynomials, lowest degree first.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::Result;
use crate::mat::Mat;
use crate::scalar::ComplexScalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Trailing zero coefficients are trimmed.
    pub fn new(mut coeffs: Vec<f64>) -> Polynomial {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Polynomial {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Polynomial {
        Polynomial::new(vec![1.0])
    }

    /// `x − r`
    pub fn linear(r: f64) -> Polynomial {
        Polynomial::new(vec![-r, 1.0])
    }

    /// `(x − z)(x − z̄)` for a complex root `z`.
    pub fn conjugate_quadratic(z: ComplexScalar) -> Polynomial {
        Polynomial::new(vec![z.norm_sqr(), -2.0 * z.re, 1.0])
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: ComplexScalar) -> ComplexScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(ComplexScalar::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_mat(&self, a: &Mat) -> Result<Mat> {
        let n = a.require_square()?;
        let id = Mat::identity(a.domain(), n);
        let mut acc = Mat::zeros(a.domain(), n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mat_mul(a)?.mat_add(&id.scale(*c))?;
        }
        Ok(acc)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn pow(&self, k: usize) -> Polynomial {
        (0..k).fold(Polynomial::one(), |acc, _| acc.mul(self))
    }

    /// Complex roots via the eigenvalues of the companion matrix.
    pub fn roots(&self) -> Vec<ComplexScalar> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        let lead = self.coeffs[deg];
        let mut comp = DMatrix::zeros(deg, deg);
        for i in 1..deg {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..deg {
            comp[(i, deg - 1)] = -self.coeffs[i] / lead;
        }
        comp.complex_eigenvalues().iter().copied().collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0.0 {
                continue;
            }
            let term = match k {
                0 => format!("{c}"),
                1 => format!("{c}·x"),
                _ => format!("{c}·x^{k}"),
            };
            terms.push(term);
        }
        f.write_str(&terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::Domain;

    #[test]
    fn roots_of_quadratic() {
        // x^2 - 3x + 2
        let p = Polynomial::new(vec![2.0, -3.0, 1.0]);
        let mut r: Vec<f64> = p.roots().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 2.0).abs() < 1e-12);
        assert_eq!(p.degree(), Some(2));
        assert!(p.is_monic());
    }

    #[test]
    fn conjugate_quadratic_has_root() {
        let z = ComplexScalar::new(0.5, -2.0);
        let q = Polynomial::conjugate_quadratic(z);
        assert!(q.eval_complex(z).norm() < 1e-12);
        assert!(q.eval_complex(z.conj()).norm() < 1e-12);
    }

    #[test]
    fn matrix_evaluation() {
        let j = Mat::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let p = Polynomial::new(vec![1.0, 0.0, 1.0]);
        assert!(p.eval_mat(&j).unwrap().is_zero());
        let x3 = Polynomial::linear(0.0).pow(3);
        assert_eq!(x3.coefficients(), &[0.0, 0.0, 0.0, 1.0]);
        let id = Mat::identity(Domain::H, 2);
        assert!(Polynomial::linear(1.0).eval_mat(&id).unwrap().is_zero());
    }
}
