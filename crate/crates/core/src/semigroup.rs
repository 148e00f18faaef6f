//! Semigroup-generated real algebras: closure, irreducibility, singular
//! elements and instance generators.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::algebra::AlgebraBasis;
use crate::error::{Error, Result};
use crate::mat::{random_invertible, Domain, Mat};
use crate::matlin::{self, commutant, is_triangularizable_central, realified_eigenvalues};
use crate::numeric::{column_space, ln_binomial, null_space, push_if_independent, push_if_independent_scaled, vec_row_major};
use crate::scalar::Quaternion;

/// Relative residual accepted for an invariant-subspace witness.
pub const WITNESS_TOL: f64 = 1e-6;

/// Generators of a matrix semigroup in `M_n(D)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemigroupSpec {
    pub domain: Domain,
    pub n: usize,
    pub generators: Vec<Mat>,
    pub label: String,
}

impl SemigroupSpec {
    /// Validates that the list is nonempty and every generator is square of
    /// one size over one domain.
    pub fn new(generators: Vec<Mat>, label: impl Into<String>) -> Result<SemigroupSpec> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidArgument("generator list is empty".into()))?;
        let (domain, n) = (first.domain(), first.require_square()?);
        for g in &generators {
            if g.domain() != domain {
                return Err(Error::Domain {
                    expected: domain,
                    found: g.domain(),
                });
            }
            if g.rows() != n || g.cols() != n {
                return Err(Error::Shape(format!(
                    "generator is {}x{}, expected {n}x{n}",
                    g.rows(),
                    g.cols()
                )));
            }
        }
        Ok(SemigroupSpec {
            domain,
            n,
            generators,
            label: label.into(),
        })
    }

    /// `P⁻¹·G·P` for every generator.
    pub fn conjugate(&self, p: &Mat) -> Result<SemigroupSpec> {
        let p_inv = matlin::inverse(p)?;
        let gens = self
            .generators
            .iter()
            .map(|g| p_inv.mat_mul(g)?.mat_mul(p))
            .collect::<Result<Vec<_>>>()?;
        SemigroupSpec::new(gens, format!("{} (conjugated)", self.label))
    }

    /// Generators multiplied by `scales`, cycling through the list.
    pub fn rescaled(&self, scales: &[f64]) -> SemigroupSpec {
        let gens = self
            .generators
            .iter()
            .zip(scales.iter().cycle())
            .map(|(g, s)| g.scale(*s))
            .collect();
        SemigroupSpec {
            generators: gens,
            label: format!("{} (rescaled)", self.label),
            ..self.clone()
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.domain.real_dim() * self.n * self.n
    }
}

/// Outcome of [`algebra_closure`].
#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub basis: AlgebraBasis,
    /// Depth of the longest product chain that was processed.
    pub rounds: usize,
    pub products_tested: usize,
    /// False when the dimension cap stopped the iteration early.
    pub saturated: bool,
}

/// Smallest real algebra containing `mats`, by breadth-first products.
///
/// Each basis element, when processed, is multiplied on both sides by every
/// element before it (and itself); independent products are appended.
pub fn closure_of(domain: Domain, n: usize, mats: &[Mat], tol: f64, max_dim: usize) -> Result<ClosureReport> {
    if max_dim == 0 {
        return Err(Error::InvalidArgument("max_dim must be at least 1".into()));
    }
    let full = domain.real_dim() * n * n;
    let mut basis = AlgebraBasis::empty(domain, n);
    let mut depth: Vec<usize> = Vec::new();
    let report = |basis: AlgebraBasis, rounds, products_tested, saturated| ClosureReport {
        basis,
        rounds,
        products_tested,
        saturated,
    };
    for m in mats {
        if basis.try_push(m, tol)? {
            depth.push(0);
            if basis.dim() > max_dim {
                return Ok(report(basis, 0, 0, false));
            }
        }
    }
    let mut tested = 0;
    let mut rounds = 0;
    let mut p = 0;
    while p < basis.dim() && basis.dim() < full {
        let a = basis.elements()[p].clone();
        rounds = rounds.max(depth[p]);
        for q in 0..=p {
            let b = basis.elements()[q].clone();
            let products = [a.mul_unchecked(&b), b.mul_unchecked(&a)];
            let count = if p == q { 1 } else { 2 };
            for prod in &products[..count] {
                tested += 1;
                // basis elements have unit norm
                if basis.try_push_scaled(prod, 1.0, tol)? {
                    depth.push(depth[p].max(depth[q]) + 1);
                    if basis.dim() > max_dim {
                        return Ok(report(basis, rounds, tested, false));
                    }
                    if basis.dim() == full {
                        return Ok(report(basis, rounds + 1, tested, true));
                    }
                }
            }
        }
        p += 1;
    }
    Ok(report(basis, rounds, tested, true))
}

/// `Alg_R(S)`; `max_dim` defaults to `d·n²`.
pub fn algebra_closure(spec: &SemigroupSpec, tol: f64, max_dim: Option<usize>) -> Result<ClosureReport> {
    let cap = max_dim.unwrap_or_else(|| spec.ambient_dim());
    closure_of(spec.domain, spec.n, &spec.generators, tol, cap)
}

/// Over `R`: the generated algebra is all of `M_n(R)`.
pub fn is_absolutely_irreducible(spec: &SemigroupSpec, tol: f64) -> Result<bool> {
    if spec.domain != Domain::R {
        return Err(Error::Domain {
            expected: Domain::R,
            found: spec.domain,
        });
    }
    let report = algebra_closure(spec, tol, None)?;
    if !report.saturated {
        return Err(Error::Indeterminate("closure did not saturate".into()));
    }
    Ok(report.basis.dim() == spec.n * spec.n)
}

/// A nontrivial invariant right `D`-subspace, stored as an orthonormal real
/// basis (columns) of its image in `R^{d·n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantSubspace {
    pub domain: Domain,
    pub n: usize,
    pub basis: DMatrix<f64>,
}

impl InvariantSubspace {
    pub fn real_dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Dimension over `D`.
    pub fn dim(&self) -> usize {
        self.real_dim() / self.domain.real_dim()
    }

    /// Largest relative leak `‖(I − WWᵀ)·M·W‖ / ‖M‖` over the realified
    /// family and the right-scalar operators.
    pub fn residual(&self, family: &[Mat]) -> f64 {
        let w = &self.basis;
        let proj = w * w.transpose();
        let mut ops: Vec<DMatrix<f64>> = family.iter().map(Mat::realify).collect();
        ops.extend(right_scalar_ops(self.domain, self.n));
        ops.iter()
            .map(|m| {
                let mw = m * w;
                let leak = &mw - &proj * &mw;
                let s = m.norm();
                if s == 0.0 {
                    0.0
                } else {
                    leak.norm() / s
                }
            })
            .fold(0.0, f64::max)
    }

    /// Vectors of the subspace as `n×1` matrices over `D` (one per real
    /// basis column, so a spanning set over `D`).
    pub fn vectors(&self) -> Vec<Mat> {
        self.basis
            .column_iter()
            .map(|c| vector_from_real(self.domain, c.as_slice()))
            .collect()
    }
}

impl fmt::Display for InvariantSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invariant subspace of dimension {} over {} (real dimension {})",
            self.dim(),
            self.domain,
            self.real_dim()
        )
    }
}

/// `n×1` matrix whose realified first column is `v`.
pub fn vector_from_real(domain: Domain, v: &[f64]) -> Mat {
    let d = domain.real_dim();
    let mut m = DMatrix::zeros(v.len(), d);
    m.column_mut(0).copy_from_slice(v);
    Mat::unrealify(domain, &m).expect("length is a multiple of d")
}

/// Realified right multiplication by `1, i, j, k` (as far as `D` reaches) on
/// `D^n`; these commute with every realified matrix over `D`.
pub fn right_scalar_ops(domain: Domain, n: usize) -> Vec<DMatrix<f64>> {
    let units: &[Quaternion] = match domain {
        Domain::R => &[Quaternion::ONE],
        Domain::C => &[Quaternion::ONE, Quaternion::I],
        Domain::H => &[Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K],
    };
    let big = domain.real_dim() * n;
    units
        .iter()
        .map(|q| {
            let mut op = DMatrix::zeros(big, big);
            for t in 0..big {
                let mut e = vec![0.0; big];
                e[t] = 1.0;
                let y = vector_from_real(domain, &e).right_scalar(*q);
                op.set_column(t, &y.realify().column(0));
            }
            op
        })
        .collect()
}

/// Three-valued irreducibility verdict.
#[derive(Clone, Debug, PartialEq)]
pub enum Irreducibility {
    Irreducible,
    Reducible(InvariantSubspace),
    Indeterminate(String),
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

/// Verdict plus the dimensions it was derived from.
#[derive(Clone, Debug)]
pub struct IrreducibilityReport {
    pub verdict: Irreducibility,
    pub closure_dim: usize,
    /// Real dimension of the commutant in `M_n(D)`; `None` on the
    /// full-algebra fast path.
    pub commutant_dim: Option<usize>,
    /// Real dimension of the algebra generated by the realified closure and
    /// the right-scalar operators; `None` on the fast path.
    pub envelope_dim: Option<usize>,
    pub seed: u64,
}

/// Decides whether the semigroup has a nontrivial invariant `D`-subspace.
///
/// Let `B ⊆ M_{dn}(R)` be spanned by the realified closure, the identity and
/// the right-scalar operators; its invariant subspaces are exactly the
/// realified invariant `D`-subspaces. With `C` the commutant of `S` in
/// `M_n(D)` (which is also the commutant of `B`), `B` is irreducible iff `C`
/// is a division algebra of dimension `δ` and `dim B = (dn)²/δ`. Otherwise a
/// witness comes from the image of the Jacobson radical of `B` or from the
/// kernel of a zero divisor in `C`.
pub fn is_irreducible(spec: &SemigroupSpec, tol: f64, seed: u64) -> Result<IrreducibilityReport> {
    let closure = algebra_closure(spec, tol, None)?;
    let (domain, n) = (spec.domain, spec.n);
    let mut report = IrreducibilityReport {
        verdict: Irreducibility::Irreducible,
        closure_dim: closure.basis.dim(),
        commutant_dim: None,
        envelope_dim: None,
        seed,
    };
    if !closure.saturated {
        report.verdict = Irreducibility::Indeterminate("closure did not saturate".into());
        return Ok(report);
    }
    if closure.basis.dim() == 0 {
        // Every vector is annihilated; the first coordinate line is invariant.
        let big = domain.real_dim() * n;
        let w = DMatrix::identity(big, domain.real_dim());
        report.verdict = Irreducibility::Reducible(InvariantSubspace { domain, n, basis: w });
        return Ok(report);
    }
    if closure.basis.dim() == spec.ambient_dim() {
        return Ok(report);
    }
    let family = if closure.basis.dim() < spec.generators.len() {
        closure.basis.elements()
    } else {
        &spec.generators[..]
    };
    let comm = commutant(family, tol)?;
    report.commutant_dim = Some(comm.dim());
    let envelope = envelope_basis(&closure.basis, tol);
    report.envelope_dim = Some(envelope.len());
    let big = domain.real_dim() * n;
    if let Some(delta) = division_dimension(&comm) {
        if envelope.len() * delta == big * big {
            return Ok(report);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates = radical_image(&envelope, big)
        .into_iter()
        .chain(zero_divisor_kernel(&comm, &mut rng));
    for w in candidates {
        let k = w.ncols();
        if k == 0 || k >= big || k % domain.real_dim() != 0 {
            continue;
        }
        let sub = InvariantSubspace { domain, n, basis: w };
        if sub.residual(closure.basis.elements()) <= WITNESS_TOL {
            report.verdict = Irreducibility::Reducible(sub);
            return Ok(report);
        }
    }
    report.verdict = Irreducibility::Indeterminate(format!(
        "no verified witness (closure dim {}, commutant dim {}, envelope dim {})",
        closure.basis.dim(),
        comm.dim(),
        envelope.len()
    ));
    Ok(report)
}

/// Orthonormal vectorized basis of `span{realify(a)·σ}` over the closure
/// basis plus the identity and the right-scalar operators `σ`.
fn envelope_basis(basis: &AlgebraBasis, tol: f64) -> Vec<Vec<f64>> {
    let (domain, n) = (basis.domain(), basis.n());
    let sigma = right_scalar_ops(domain, n);
    let mut reals = basis.realified();
    reals.push(DMatrix::identity(domain.real_dim() * n, domain.real_dim() * n));
    let mut out = Vec::new();
    for a in &reals {
        for s in &sigma {
            push_if_independent(&mut out, &vec_row_major(&(a * s)), tol);
        }
    }
    out
}

/// `δ ∈ {1, 2, 4}` when the algebra (which contains `I`) is `R`, `C` or `H`:
/// its traceless parts must satisfy `u_i u_j + u_j u_i = −2 G_ij I` with `G`
/// positive definite.
fn division_dimension(c: &AlgebraBasis) -> Option<usize> {
    const LOCAL_TOL: f64 = 1e-6;
    let delta = c.dim();
    if !matches!(delta, 1 | 2 | 4) {
        return None;
    }
    let (domain, n) = (c.domain(), c.n());
    let big = (domain.real_dim() * n) as f64;
    let id = Mat::identity(domain, n);
    let mut pure_vecs: Vec<Vec<f64>> = Vec::new();
    for e in c.elements() {
        let alpha = e.realify().trace() / big;
        let u = e.mat_sub(&id.scale(alpha)).ok()?;
        push_if_independent_scaled(&mut pure_vecs, &u.coefficients(), e.frobenius_norm(), LOCAL_TOL);
    }
    if pure_vecs.len() != delta - 1 {
        return None;
    }
    let pure: Vec<Mat> = pure_vecs
        .iter()
        .map(|v| Mat::from_coefficients(domain, n, n, v).expect("coefficient length"))
        .collect();
    let k = pure.len();
    let mut g = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let s = pure[i]
                .mul_unchecked(&pure[j])
                .mat_add(&pure[j].mul_unchecked(&pure[i]))
                .ok()?;
            let gij = -s.realify().trace() / (2.0 * big);
            let defect = s.mat_add(&id.scale(2.0 * gij)).ok()?.frobenius_norm();
            let scale = pure[i].frobenius_norm() * pure[j].frobenius_norm();
            if defect > LOCAL_TOL * scale.max(f64::MIN_POSITIVE) {
                return None;
            }
            g[(i, j)] = gij;
            g[(j, i)] = gij;
        }
    }
    if k > 0 {
        let ev = g.symmetric_eigenvalues();
        if ev.min() <= LOCAL_TOL * ev.max().abs().max(f64::MIN_POSITIVE) {
            return None;
        }
    }
    Some(delta)
}

/// Column space of the Jacobson radical of the envelope, found as the null
/// space of the trace form `tr(b_k·b_l)`.
fn radical_image(envelope: &[Vec<f64>], big: usize) -> Option<DMatrix<f64>> {
    let mats: Vec<DMatrix<f64>> = envelope
        .iter()
        .map(|v| DMatrix::from_row_slice(big, big, v))
        .collect();
    let m = mats.len();
    let form = DMatrix::from_fn(m, m, |k, l| (&mats[k] * &mats[l]).trace());
    let rad = null_space(&form, 1e-8);
    if rad.is_empty() {
        return None;
    }
    let mut stacked = DMatrix::zeros(big, big * rad.len());
    for (t, coeffs) in rad.iter().enumerate() {
        let mut r = DMatrix::zeros(big, big);
        for (c, b) in coeffs.iter().zip(&mats) {
            r += b * *c;
        }
        stacked.view_mut((0, t * big), (big, big)).copy_from(&r);
    }
    let cols = column_space(&stacked, 1e-8);
    Some(columns_to_matrix(big, &cols))
}

/// Kernel of a singular nonzero element `p(c)` of the commutant, where `p`
/// is a real or conjugate-quadratic factor of the minimal polynomial of a
/// random `c`.
fn zero_divisor_kernel(comm: &AlgebraBasis, rng: &mut ChaCha8Rng) -> Option<DMatrix<f64>> {
    let n = comm.n();
    let id = Mat::identity(comm.domain(), n);
    for _ in 0..16 {
        let c = comm.random_element(rng);
        let eigs = realified_eigenvalues(&c).ok()?;
        for lambda in eigs {
            let z = if lambda.im.abs() <= 1e-8 * lambda.norm().max(1.0) {
                c.mat_sub(&id.scale(lambda.re)).ok()?
            } else {
                c.mul_unchecked(&c)
                    .mat_sub(&c.scale(2.0 * lambda.re))
                    .ok()?
                    .mat_add(&id.scale(lambda.norm_sqr()))
                    .ok()?
            };
            if z.frobenius_norm() <= 1e-6 * c.frobenius_norm().max(1.0) {
                continue;
            }
            let ker = null_space(&z.realify(), 1e-7);
            if !ker.is_empty() {
                return Some(columns_to_matrix(z.realify().nrows(), &ker));
            }
        }
    }
    None
}

fn columns_to_matrix(rows: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

/// Words smaller than this fraction of the product of their factor norms are
/// rounding residue of a zero product.
pub const ZERO_WORD_TOL: f64 = 1e-12;

/// A random word in the generators, with geometric length of mean 6. A word
/// below [`ZERO_WORD_TOL`] times the product of its factor norms is returned
/// as exactly zero.
pub fn sample_word<R: Rng + ?Sized>(spec: &SemigroupSpec, rng: &mut R) -> (Mat, usize) {
    let geo = Geometric::new(1.0 / 6.0).expect("valid probability");
    let len = 1 + geo.sample(rng) as usize;
    let first = &spec.generators[rng.random_range(0..spec.generators.len())];
    let mut bound = first.frobenius_norm();
    let mut w = first.clone();
    for _ in 1..len {
        let g = &spec.generators[rng.random_range(0..spec.generators.len())];
        bound *= g.frobenius_norm();
        w = w.mul_unchecked(g);
    }
    if w.frobenius_norm() <= ZERO_WORD_TOL * bound {
        w = Mat::zeros(spec.domain, spec.n, spec.n);
    }
    (w, len)
}

/// `count` words from a seeded stream.
pub fn sample_words(spec: &SemigroupSpec, count: usize, seed: u64) -> Vec<Mat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_word(spec, &mut rng).0).collect()
}

/// How [`extract_singular`] obtained its matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtractionMethod {
    /// A sampled word was already singular.
    SingularWord { length: usize },
    /// Limit of `S₁^{2j+k} / C(2j+k, k)` for a word `S` with `S₁ = S/ρ(S)`.
    PowerLimit { length: usize, k: usize, exponent: u64 },
    /// `p(a)` for a real or quadratic factor `p` of the minimal polynomial
    /// of a random algebra element `a`.
    FactorTrick,
}

#[derive(Clone, Debug)]
pub struct ExtractionReport {
    /// Unit Frobenius norm, rank below `n`.
    pub matrix: Mat,
    pub method: ExtractionMethod,
    pub rank: usize,
    pub words_sampled: usize,
    /// Relative distance from the closure span.
    pub span_residual: f64,
    pub seed: u64,
}

const RANK_TOL: f64 = 1e-7;
/// Stricter threshold for calling a sampled word singular outright.
const EXACT_RANK_TOL: f64 = 1e-12;
const MAX_DOUBLINGS: usize = 60;

/// Finds a nonzero singular matrix in the closed cone `closure(R·S)`.
///
/// Requires an irreducible semigroup over `R` whose generators and sampled
/// words are triangularizable with real spectra. Words are sampled until one
/// is singular or has a normalized power limit that is singular; within
/// `max_iter` words without success the algebraic factor trick is used.
pub fn extract_singular(spec: &SemigroupSpec, tol: f64, max_iter: usize, seed: u64) -> Result<ExtractionReport> {
    if spec.domain != Domain::R {
        return Err(Error::Domain {
            expected: Domain::R,
            found: spec.domain,
        });
    }
    for g in &spec.generators {
        if !is_triangularizable_central(g, tol)? {
            return Err(Error::Precondition(
                "a generator is not triangularizable with real spectrum".into(),
            ));
        }
    }
    let irr = is_irreducible(spec, tol, seed)?;
    match irr.verdict {
        Irreducibility::Irreducible => {}
        Irreducibility::Reducible(w) => return Err(Error::Reducible(Box::new(w))),
        Irreducibility::Indeterminate(why) => return Err(Error::Indeterminate(why)),
    }
    let closure = algebra_closure(spec, tol, None)?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let finish = |m: Mat, method, words| -> Result<ExtractionReport> {
        let m = m.scale(1.0 / m.frobenius_norm());
        let rank = matlin::rank(&m, RANK_TOL);
        let span_residual = closure.basis.residual(&m);
        Ok(ExtractionReport {
            matrix: m,
            method,
            rank,
            words_sampled: words,
            span_residual,
            seed,
        })
    };
    for t in 1..=max_iter {
        let (w, length) = sample_word(spec, &mut rng);
        if w.frobenius_norm() == 0.0 || !w.frobenius_norm().is_finite() {
            continue;
        }
        if !is_triangularizable_central(&w, tol)? {
            return Err(Error::Precondition(format!(
                "sampled word of length {length} is not triangularizable with real spectrum"
            )));
        }
        if matlin::rank(&w, EXACT_RANK_TOL) < n {
            return finish(w, ExtractionMethod::SingularWord { length }, t);
        }
        if let Some((lim, k, exponent)) = power_limit(&w) {
            if matlin::rank(&lim, RANK_TOL) < n {
                return finish(lim, ExtractionMethod::PowerLimit { length, k, exponent }, t);
            }
        }
    }
    let z = factor_trick(&closure.basis, &mut rng)
        .ok_or_else(|| Error::Indeterminate("no singular element found within budget".into()))?;
    finish(z, ExtractionMethod::FactorTrick, max_iter)
}

/// `lim S₁^{2j+k} / C(2j+k, k)` over doubling `j`, for the least `k` whose
/// sequence settles (successive differences below `1e-8` three times).
fn power_limit(s: &Mat) -> Option<(Mat, usize, u64)> {
    let n = s.rows();
    let eigs = realified_eigenvalues(s).ok()?;
    let top = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return None;
    }
    // Average the moduli of the leading cluster for a stable radius.
    let lead: Vec<f64> = eigs
        .iter()
        .map(|z| z.norm())
        .filter(|r| *r >= top * (1.0 - 1e-5))
        .collect();
    let rho = lead.iter().sum::<f64>() / lead.len() as f64;
    let s1 = s.scale(1.0 / rho);
    let mut sk = Mat::identity(Domain::R, n);
    for k in 0..n {
        let mut q = s1.mul_unchecked(&s1);
        let mut j: u64 = 1;
        let mut prev: Option<Mat> = None;
        let mut streak = 0;
        for _ in 0..MAX_DOUBLINGS {
            let m = 2 * j + k as u64;
            let t = q.mul_unchecked(&sk).scale((-ln_binomial(m, k as u64)).exp());
            let norm = t.frobenius_norm();
            if !norm.is_finite() || norm > 1e8 {
                break;
            }
            if let Some(p) = &prev {
                if t.distance(p) < 1e-8 * norm.max(1.0) {
                    streak += 1;
                    if streak >= 3 && norm > 1e-8 {
                        return Some((t, k, m));
                    }
                } else {
                    streak = 0;
                }
            }
            prev = Some(t);
            q = q.mul_unchecked(&q);
            j = j.checked_mul(2)?;
        }
        sk = sk.mul_unchecked(&s1);
    }
    None
}

/// Singular nonzero `p(a)` for a random element `a` of the algebra.
fn factor_trick(basis: &AlgebraBasis, rng: &mut ChaCha8Rng) -> Option<Mat> {
    let n = basis.n();
    let id = Mat::identity(basis.domain(), n);
    for _ in 0..32 {
        let a = basis.random_element(rng);
        let eigs = realified_eigenvalues(&a).ok()?;
        let lambda = *eigs
            .iter()
            .min_by(|x, y| x.im.abs().total_cmp(&y.im.abs()))?;
        let z = if lambda.im.abs() <= 1e-8 * lambda.norm().max(1.0) {
            a.mat_sub(&id.scale(lambda.re)).ok()?
        } else {
            a.mul_unchecked(&a)
                .mat_sub(&a.scale(2.0 * lambda.re))
                .ok()?
                .mat_add(&id.scale(lambda.norm_sqr()))
                .ok()?
        };
        if z.frobenius_norm() > 1e-6 * a.frobenius_norm() && matlin::rank(&z, RANK_TOL) < n {
            return Some(z);
        }
    }
    None
}

/// Closure dimensions behind the operational span-invariance check.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    pub base_dim: usize,
    pub rescaled_dim: usize,
    pub with_words_dim: usize,
    /// `None` when no singular limit could be extracted.
    pub with_limit_dim: Option<usize>,
}

impl ScalingReport {
    pub fn holds(&self) -> bool {
        self.rescaled_dim == self.base_dim
            && self.with_words_dim == self.base_dim
            && self.with_limit_dim.is_none_or(|d| d == self.base_dim)
    }
}

/// Closure dimension is unchanged by rescaling generators with `2, −3, 0.5`,
/// by adjoining normalized words `S/‖S‖`, and by adjoining an extracted
/// singular limit.
pub fn closure_scaling_invariance_check(spec: &SemigroupSpec, tol: f64, seed: u64) -> Result<ScalingReport> {
    if spec.domain != Domain::R {
        return Err(Error::Domain {
            expected: Domain::R,
            found: spec.domain,
        });
    }
    let base_dim = algebra_closure(spec, tol, None)?.basis.dim();
    let rescaled_dim = algebra_closure(&spec.rescaled(&[2.0, -3.0, 0.5]), tol, None)?.basis.dim();
    // Sampled words carry rounding error that grows with their length and
    // with the conditioning of the generators.
    let word_tol = tol.max(WITNESS_TOL);
    let mut gens = spec.generators.clone();
    for w in sample_words(spec, 16, seed) {
        let s = w.frobenius_norm();
        if s > 0.0 && s.is_finite() {
            gens.push(w.scale(1.0 / s));
        }
    }
    let with_words_dim = closure_of(spec.domain, spec.n, &gens, word_tol, spec.ambient_dim())?
        .basis
        .dim();
    let with_limit_dim = match extract_singular(spec, tol, 64, seed) {
        Ok(ext) => {
            let mut g = spec.generators.clone();
            g.push(ext.matrix);
            Some(closure_of(spec.domain, spec.n, &g, word_tol, spec.ambient_dim())?.basis.dim())
        }
        Err(_) => None,
    };
    Ok(ScalingReport {
        base_dim,
        rescaled_dim,
        with_words_dim,
        with_limit_dim,
    })
}

/// `{x_i·y_jᵀ}` with `{x_i}`, `{y_j}` bases of `R^n` and every `y_jᵀ·x_i`
/// bounded away from zero. Every word has rank at most one and real trace.
pub fn gen_rank_one_family(n: usize, seed: u64) -> Result<SemigroupSpec> {
    if n < 2 {
        return Err(Error::InvalidArgument("rank-one family needs n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x, y) = loop {
        let x = random_invertible(Domain::R, n, 100.0, &mut rng);
        let y = random_invertible(Domain::R, n, 100.0, &mut rng);
        let ok = (0..n).all(|i| {
            (0..n).all(|j| {
                let (xi, yj) = (x.column(i), y.column(j));
                let dot: f64 = (0..n).map(|t| xi.get_real(t, 0) * yj.get_real(t, 0)).sum();
                dot.abs() >= 0.05 * xi.frobenius_norm() * yj.frobenius_norm()
            })
        });
        if ok {
            break (x, y);
        }
    };
    let mut gens = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            gens.push(x.column(i).mul_unchecked(&y.column(j).transpose()));
        }
    }
    SemigroupSpec::new(gens, format!("rank-one family n={n} seed={seed}"))
}

/// Real basis `1, i, j, k` of the division algebra, as far as `kind` reaches.
fn units(kind: Domain) -> &'static [Quaternion] {
    match kind {
        Domain::R => &[Quaternion::ONE],
        Domain::C => &[Quaternion::ONE, Quaternion::I],
        Domain::H => &[Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K],
    }
}

/// Block size of the standard embedding of `kind` into `ambient` matrices.
pub fn canonical_block(kind: Domain, ambient: Domain) -> usize {
    match (ambient, kind) {
        (Domain::R, Domain::C) | (Domain::C, Domain::H) => 2,
        (Domain::R, Domain::H) => 4,
        _ => 1,
    }
}

/// Generators of the canonical copy of `M_m(kind)` in `M_n(ambient)`:
/// adjacent matrix units `E_{i,i+1}`, `E_{i+1,i}` and `E_11·u` for the units
/// `u` of the division algebra, mapped by the standard block embedding.
pub fn canonical_generators(kind: Domain, ambient: Domain, n: usize) -> Result<Vec<Mat>> {
    let block = canonical_block(kind, ambient);
    if n == 0 || !n.is_multiple_of(block) {
        return Err(Error::InvalidArgument(format!(
            "kind {kind} in ambient {ambient} needs n divisible by {block}, got {n}"
        )));
    }
    let m = n / block;
    let mut small = Vec::new();
    for i in 0..m.saturating_sub(1) {
        small.push(Mat::unit(kind, m, i, i + 1));
        small.push(Mat::unit(kind, m, i + 1, i));
    }
    for u in units(kind) {
        small.push(Mat::unit(kind, m, 0, 0).left_scalar(*u));
    }
    small
        .iter()
        .map(|g| match (ambient, kind) {
            (Domain::R, Domain::C) => crate::mat::embed_block(g, crate::mat::EmbedTarget::M2R),
            (Domain::R, Domain::H) => crate::mat::embed_block(g, crate::mat::EmbedTarget::M4R),
            (Domain::C, Domain::H) => crate::mat::embed_block(g, crate::mat::EmbedTarget::M2C),
            _ if kind <= ambient => g.promote(ambient),
            _ => unreachable!("pairs with kind above ambient have block > 1"),
        })
        .collect()
}

/// Canonical generators conjugated by a random invertible `P` over the
/// ambient domain; returns the spec (generators `P⁻¹·G·P`) and `P`.
pub fn gen_conjugated_canonical_with(
    kind: Domain,
    ambient: Domain,
    n: usize,
    seed: u64,
) -> Result<(SemigroupSpec, Mat)> {
    let gens = canonical_generators(kind, ambient, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_invertible(ambient, n, 50.0, &mut rng);
    let canonical = SemigroupSpec::new(gens, "")?;
    let mut spec = canonical.conjugate(&p)?;
    spec.label = format!("canonical kind={kind} ambient={ambient} n={n} seed={seed}");
    Ok((spec, p))
}

pub fn gen_conjugated_canonical(kind: Domain, ambient: Domain, n: usize, seed: u64) -> Result<SemigroupSpec> {
    Ok(gen_conjugated_canonical_with(kind, ambient, n, seed)?.0)
}

/// Two totally positive Gaussian-kernel matrices `exp(−c·(x_i − y_j)²)` with
/// increasing, well separated nodes. Products of totally positive matrices
/// are totally positive, so every word has distinct positive eigenvalues.
/// Draws are repeated until the pair is irreducible.
pub fn gen_totally_positive(n: usize, seed: u64) -> Result<SemigroupSpec> {
    if n < 2 {
        return Err(Error::InvalidArgument("need n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let mut gens = Vec::new();
        for _ in 0..2 {
            let c = rng.random_range(0.5..1.5);
            let x: Vec<f64> = (0..n).map(|i| i as f64 + rng.random_range(0.0..0.4)).collect();
            let y: Vec<f64> = (0..n).map(|j| j as f64 + rng.random_range(0.0..0.4)).collect();
            gens.push(Mat::from_fn(Domain::R, n, n, |i, j| {
                Quaternion::real((-c * (x[i] - y[j]).powi(2)).exp())
            }));
        }
        let spec = SemigroupSpec::new(gens, format!("totally positive n={n} seed={seed}"))?;
        if is_irreducible(&spec, crate::DEFAULT_TOL, seed)?.verdict.is_irreducible() {
            return Ok(spec);
        }
    }
    Err(Error::Indeterminate("no irreducible totally positive pair drawn".into()))
}

/// Random `A·w·B` around a word `w`, with `A`, `B` random words: a sample of
/// the two-sided ideal generated by `w`.
pub fn sampled_ideal(spec: &SemigroupSpec, w: &Mat, count: usize, seed: u64) -> Result<SemigroupSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = (0..count)
        .map(|_| {
            let (a, _) = sample_word(spec, &mut rng);
            let (b, _) = sample_word(spec, &mut rng);
            let m = a.mul_unchecked(w).mul_unchecked(&b);
            let s = m.frobenius_norm();
            if s > ZERO_WORD_TOL * a.frobenius_norm() * w.frobenius_norm() * b.frobenius_norm() {
                m.scale(1.0 / s)
            } else {
                Mat::zeros(spec.domain, spec.n, spec.n)
            }
        })
        .collect();
    SemigroupSpec::new(gens, format!("{} (sampled ideal)", spec.label))
}
