//! Dense matrices over `R`, `C` and `H`.
//!
//! Every entry is stored as a [`Quaternion`]; the [`Domain`] tag restricts
//! which coefficients may be nonzero (`R`: `a` only, `C`: `a, b`). Complex
//! numbers sit inside `H` as `a + b·i`, so a single product routine serves all
//! three domains. Matrices act on the left of column vectors; over `H` the
//! column space is a right vector space.

use std::fmt;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{embed_c_m2r, embed_h_m2c, embed_h_m4r, ComplexScalar, Quaternion};

/// Scalar domain of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Domain {
    R,
    C,
    H,
}

impl Domain {
    /// Real dimension of the scalar domain.
    pub fn real_dim(self) -> usize {
        match self {
            Domain::R => 1,
            Domain::C => 2,
            Domain::H => 4,
        }
    }

    pub fn from_real_dim(d: usize) -> Option<Domain> {
        match d {
            1 => Some(Domain::R),
            2 => Some(Domain::C),
            4 => Some(Domain::H),
            _ => None,
        }
    }

    pub fn contains(self, q: Quaternion) -> bool {
        match self {
            Domain::R => q.is_real(),
            Domain::C => q.is_complex(),
            Domain::H => true,
        }
    }

    /// Drops coefficients outside the domain.
    pub fn project(self, q: Quaternion) -> Quaternion {
        match self {
            Domain::R => Quaternion::real(q.a),
            Domain::C => Quaternion::new(q.a, q.b, 0.0, 0.0),
            Domain::H => q,
        }
    }

    pub fn random_scalar<R: Rng + ?Sized>(self, rng: &mut R) -> Quaternion {
        self.project(Quaternion::random(rng))
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Domain::R => "R",
            Domain::C => "C",
            Domain::H => "H",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Domain> {
        match s {
            "R" | "r" => Ok(Domain::R),
            "C" | "c" => Ok(Domain::C),
            "H" | "h" => Ok(Domain::H),
            other => Err(Error::Parse(format!("unknown field tag {other:?}"))),
        }
    }
}

/// Block embedding targets: `ε_n` (C into real 2×2 blocks), `ε′_n` (H into
/// complex 2×2 blocks) and `ε″_n` (H into real 4×4 blocks).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EmbedTarget {
    M2R,
    M2C,
    M4R,
}

impl EmbedTarget {
    pub fn source(self) -> Domain {
        match self {
            EmbedTarget::M2R => Domain::C,
            EmbedTarget::M2C | EmbedTarget::M4R => Domain::H,
        }
    }

    pub fn output(self) -> Domain {
        match self {
            EmbedTarget::M2R | EmbedTarget::M4R => Domain::R,
            EmbedTarget::M2C => Domain::C,
        }
    }

    pub fn block(self) -> usize {
        match self {
            EmbedTarget::M2R | EmbedTarget::M2C => 2,
            EmbedTarget::M4R => 4,
        }
    }
}

impl std::str::FromStr for EmbedTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<EmbedTarget> {
        match s.to_ascii_uppercase().as_str() {
            "M2R" => Ok(EmbedTarget::M2R),
            "M2C" => Ok(EmbedTarget::M2C),
            "M4R" => Ok(EmbedTarget::M4R),
            other => Err(Error::Parse(format!("unknown embedding target {other:?}"))),
        }
    }
}

/// A dense matrix over one of `R`, `C`, `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    domain: Domain,
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl Mat {
    pub fn zeros(domain: Domain, rows: usize, cols: usize) -> Mat {
        Mat {
            domain,
            rows,
            cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(domain: Domain, n: usize) -> Mat {
        let mut m = Mat::zeros(domain, n, n);
        for i in 0..n {
            m.data[i * n + i] = Quaternion::ONE;
        }
        m
    }

    /// Matrix unit `E_ij` (zero-based indices).
    pub fn unit(domain: Domain, n: usize, i: usize, j: usize) -> Mat {
        let mut m = Mat::zeros(domain, n, n);
        m.data[i * n + j] = Quaternion::ONE;
        m
    }

    /// Builds from row-major entries; entries outside `domain` are rejected.
    pub fn from_entries(
        domain: Domain,
        rows: usize,
        cols: usize,
        data: Vec<Quaternion>,
    ) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(q) = data.iter().find(|q| !domain.contains(**q)) {
            return Err(Error::InvalidArgument(format!(
                "entry {q} does not lie in {domain}"
            )));
        }
        Ok(Mat {
            domain,
            rows,
            cols,
            data,
        })
    }

    /// Builds from row-major entries, dropping coefficients outside `domain`.
    pub fn from_fn(
        domain: Domain,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Quaternion,
    ) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(domain.project(f(i, j)));
            }
        }
        Mat {
            domain,
            rows,
            cols,
            data,
        }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Mat::from_fn(Domain::R, r, c, |i, j| Quaternion::real(rows[i][j]))
    }

    pub fn from_complex_rows(rows: &[&[ComplexScalar]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Mat::from_fn(Domain::C, r, c, |i, j| Quaternion::from_complex(rows[i][j]))
    }

    pub fn from_quaternion_rows(rows: &[&[Quaternion]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Mat::from_fn(Domain::H, r, c, |i, j| rows[i][j])
    }

    pub fn from_dmatrix(m: &DMatrix<f64>) -> Mat {
        Mat::from_fn(Domain::R, m.nrows(), m.ncols(), |i, j| {
            Quaternion::real(m[(i, j)])
        })
    }

    pub fn from_complex_dmatrix(m: &DMatrix<ComplexScalar>) -> Mat {
        Mat::from_fn(Domain::C, m.nrows(), m.ncols(), |i, j| {
            Quaternion::from_complex(m[(i, j)])
        })
    }

    /// Diagonal matrix with real entries, viewed in `domain`.
    pub fn diag(domain: Domain, values: &[f64]) -> Mat {
        let n = values.len();
        Mat::from_fn(domain, n, n, |i, j| {
            if i == j {
                Quaternion::real(values[i])
            } else {
                Quaternion::ZERO
            }
        })
    }

    /// Entries are i.i.d. standard normal in every coefficient of the domain.
    pub fn random<R: Rng + ?Sized>(domain: Domain, rows: usize, cols: usize, rng: &mut R) -> Mat {
        Mat::from_fn(domain, rows, cols, |_, _| domain.random_scalar(rng))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        self.data[i * self.cols + j] = self.domain.project(q);
    }

    pub fn get_real(&self, i: usize, j: usize) -> f64 {
        self.get(i, j).a
    }

    pub fn get_complex(&self, i: usize, j: usize) -> ComplexScalar {
        let q = self.get(i, j);
        ComplexScalar::new(q.a, q.b)
    }

    /// Reinterprets the matrix over a larger domain (`R ⊂ C ⊂ H`).
    pub fn promote(&self, domain: Domain) -> Result<Mat> {
        if domain < self.domain {
            return Err(Error::Domain {
                expected: domain,
                found: self.domain,
            });
        }
        Ok(Mat {
            domain,
            ..self.clone()
        })
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.rows == self.cols {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn check_same(&self, other: &Mat) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::Domain {
                expected: self.domain,
                found: other.domain,
            });
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Mat) -> Result<Mat> {
        self.check_same(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    /// Product without domain or shape checks; callers guarantee both.
    pub(crate) fn mul_unchecked(&self, other: &Mat) -> Mat {
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = Mat::zeros(self.domain, n, p);
        match self.domain {
            Domain::R => {
                for i in 0..n {
                    for k in 0..m {
                        let a = self.data[i * m + k].a;
                        if a == 0.0 {
                            continue;
                        }
                        for j in 0..p {
                            out.data[i * p + j].a += a * other.data[k * p + j].a;
                        }
                    }
                }
            }
            Domain::C => {
                for i in 0..n {
                    for k in 0..m {
                        let x = self.data[i * m + k];
                        for j in 0..p {
                            let y = other.data[k * p + j];
                            let o = &mut out.data[i * p + j];
                            o.a += x.a * y.a - x.b * y.b;
                            o.b += x.a * y.b + x.b * y.a;
                        }
                    }
                }
            }
            Domain::H => {
                for i in 0..n {
                    for k in 0..m {
                        let x = self.data[i * m + k];
                        for j in 0..p {
                            let o = &mut out.data[i * p + j];
                            *o = *o + x * other.data[k * p + j];
                        }
                    }
                }
            }
        }
        out
    }

    pub fn mat_add(&self, other: &Mat) -> Result<Mat> {
        self.check_same(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| *x + *y)
            .collect();
        Ok(self.with_data(data))
    }

    pub fn mat_sub(&self, other: &Mat) -> Result<Mat> {
        self.mat_add(&other.scale(-1.0))
    }

    /// Multiplication by a real scalar, which is central in every domain.
    pub fn scale(&self, r: f64) -> Mat {
        self.with_data(self.data.iter().map(|q| q.scale(r)).collect())
    }

    /// Left scalar multiplication `q·A`.
    pub fn left_scalar(&self, q: Quaternion) -> Mat {
        Mat::from_fn(self.domain, self.rows, self.cols, |i, j| q * self.get(i, j))
    }

    /// Right scalar multiplication `A·q`.
    pub fn right_scalar(&self, q: Quaternion) -> Mat {
        Mat::from_fn(self.domain, self.rows, self.cols, |i, j| self.get(i, j) * q)
    }

    fn with_data(&self, data: Vec<Quaternion>) -> Mat {
        Mat {
            domain: self.domain,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.domain, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat {
        Mat::from_fn(self.domain, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|q| *q == Quaternion::ZERO)
    }

    pub fn trace(&self) -> Quaternion {
        (0..self.rows.min(self.cols)).fold(Quaternion::ZERO, |acc, i| acc + self.get(i, i))
    }

    /// Real part of the trace, `Re tr(A)`.
    pub fn real_trace(&self) -> f64 {
        self.trace().a
    }

    pub fn pow(&self, k: u32) -> Result<Mat> {
        let n = self.require_square()?;
        let mut result = Mat::identity(self.domain, n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(result)
    }

    /// Frobenius distance to another matrix of the same shape.
    pub fn distance(&self, other: &Mat) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| (*x - *y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Real coefficient vector, entry-major: `d` coefficients per entry.
    pub fn coefficients(&self) -> Vec<f64> {
        let d = self.domain.real_dim();
        let mut v = Vec::with_capacity(self.data.len() * d);
        for q in &self.data {
            v.extend_from_slice(&q.coeffs()[..d]);
        }
        v
    }

    pub fn from_coefficients(domain: Domain, rows: usize, cols: usize, v: &[f64]) -> Result<Mat> {
        let d = domain.real_dim();
        if v.len() != rows * cols * d {
            return Err(Error::Shape(format!(
                "{} coefficients for a {rows}x{cols} matrix over {domain}",
                v.len()
            )));
        }
        let data = v
            .chunks_exact(d)
            .map(|c| {
                let mut q = [0.0; 4];
                q[..d].copy_from_slice(c);
                Quaternion::from_coeffs(q)
            })
            .collect();
        Ok(Mat {
            domain,
            rows,
            cols,
            data,
        })
    }

    /// Real representation: identity on `R`, `ε_n` on `C`, `ε″_n` on `H`.
    pub fn realify(&self) -> DMatrix<f64> {
        match self.domain {
            Domain::R => DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).a),
            Domain::C => block_real(self, 2, |q| {
                let b = embed_c_m2r(ComplexScalar::new(q.a, q.b));
                b.iter().flatten().copied().collect()
            }),
            Domain::H => block_real(self, 4, |q| {
                embed_h_m4r(q).iter().flatten().copied().collect()
            }),
        }
    }

    /// Inverse of [`Mat::realify`]; reads the first column of every block.
    pub fn unrealify(domain: Domain, m: &DMatrix<f64>) -> Result<Mat> {
        let d = domain.real_dim();
        if !m.nrows().is_multiple_of(d) || !m.ncols().is_multiple_of(d) {
            return Err(Error::Shape(format!(
                "{}x{} is not a multiple of the block size {d}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Mat::from_fn(domain, m.nrows() / d, m.ncols() / d, |i, j| {
            let (r, c) = (i * d, j * d);
            match domain {
                Domain::R => Quaternion::real(m[(r, c)]),
                Domain::C => Quaternion::new(m[(r, c)], m[(r + 1, c)], 0.0, 0.0),
                // first column of ε″(a+bi+cj+dk) is (a, b, −c, d)
                Domain::H => Quaternion::new(
                    m[(r, c)],
                    m[(r + 1, c)],
                    -m[(r + 2, c)],
                    m[(r + 3, c)],
                ),
            }
        }))
    }

    /// Complex matrix as an `nalgebra` matrix; requires domain `R` or `C`.
    pub fn to_complex_dmatrix(&self) -> Result<DMatrix<ComplexScalar>> {
        if self.domain == Domain::H {
            return Err(Error::Domain {
                expected: Domain::C,
                found: Domain::H,
            });
        }
        Ok(DMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get_complex(i, j)
        }))
    }

    /// Real matrix as an `nalgebra` matrix; requires domain `R`.
    pub fn to_dmatrix(&self) -> Result<DMatrix<f64>> {
        if self.domain != Domain::R {
            return Err(Error::Domain {
                expected: Domain::R,
                found: self.domain,
            });
        }
        Ok(self.realify())
    }

    /// Column `j` as an `n×1` matrix.
    pub fn column(&self, j: usize) -> Mat {
        Mat::from_fn(self.domain, self.rows, 1, |i, _| self.get(i, j))
    }

    /// Concatenates column vectors (each `n×1`) into a matrix.
    pub fn from_columns(cols: &[Mat]) -> Result<Mat> {
        let first = cols
            .first()
            .ok_or_else(|| Error::InvalidArgument("no columns".into()))?;
        let (domain, n) = (first.domain, first.rows);
        if cols.iter().any(|c| c.domain != domain || c.rows != n || c.cols != 1) {
            return Err(Error::Shape("columns must share domain and length".into()));
        }
        Ok(Mat::from_fn(domain, n, cols.len(), |i, j| cols[j].get(i, 0)))
    }
}

fn block_real(m: &Mat, d: usize, f: impl Fn(Quaternion) -> Vec<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m.rows * d, m.cols * d);
    for i in 0..m.rows {
        for j in 0..m.cols {
            let block = f(m.get(i, j));
            for r in 0..d {
                for c in 0..d {
                    out[(i * d + r, j * d + c)] = block[r * d + c];
                }
            }
        }
    }
    out
}

/// Entrywise block embedding (`ε_n`, `ε′_n`, `ε″_n`), blocks in row-major
/// block order.
pub fn embed_block(m: &Mat, target: EmbedTarget) -> Result<Mat> {
    if m.domain != target.source() {
        return Err(Error::Domain {
            expected: target.source(),
            found: m.domain,
        });
    }
    match target {
        EmbedTarget::M2R | EmbedTarget::M4R => Ok(Mat::from_dmatrix(&m.realify())),
        EmbedTarget::M2C => {
            let mut out = Mat::zeros(Domain::C, 2 * m.rows, 2 * m.cols);
            for i in 0..m.rows {
                for j in 0..m.cols {
                    let b = embed_h_m2c(m.get(i, j));
                    for (r, row) in b.iter().enumerate() {
                        for (c, z) in row.iter().enumerate() {
                            out.set(2 * i + r, 2 * j + c, Quaternion::from_complex(*z));
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

/// `ε′_n(A)` for a square quaternionic matrix.
pub fn complex_adjoint(a: &Mat) -> Result<Mat> {
    a.require_square()?;
    embed_block(a, EmbedTarget::M2C)
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let q = self.get(i, j);
                    match self.domain {
                        Domain::R => format!("{:.6}", q.a),
                        Domain::C => format!("{:.6}{:+.6}i", q.a, q.b),
                        Domain::H => format!("{:.4}{:+.4}i{:+.4}j{:+.4}k", q.a, q.b, q.c, q.d),
                    }
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Random matrix with i.i.d. normal entries, resampled until its condition
/// number (of the real representation) is at most `max_cond`.
pub fn random_invertible<R: Rng + ?Sized>(domain: Domain, n: usize, max_cond: f64, rng: &mut R) -> Mat {
    loop {
        let p = Mat::random(domain, n, n, rng);
        let sv = p.realify().singular_values();
        let (hi, lo) = (sv.max(), sv.min());
        if lo > 0.0 && hi / lo <= max_cond {
            return p;
        }
    }
}

/// Normal sample helper shared by the generators.
pub(crate) fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}
