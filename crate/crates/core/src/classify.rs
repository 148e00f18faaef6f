//! Minimal-rank elements, minimal idempotents, corner division algebras and
//! the `R`/`C`/`H` classification of irreducible real algebras.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::algebra::AlgebraBasis;
use crate::error::{Error, Result};
use crate::mat::{Domain, Mat};
use crate::matlin::{self, is_triangularizable_central, realified_eigenvalues};
use crate::numeric::{column_space, condition_number, push_if_independent};
use crate::scalar::ComplexScalar;
use crate::semigroup::{algebra_closure, is_irreducible, sample_words, vector_from_real, Irreducibility, SemigroupSpec};
use crate::verify::VerificationOutcome;

/// Relative pivot threshold for ranks of computed algebra elements.
pub const RANK_TOL: f64 = 1e-7;
/// Fresh samples that must fail to lower the rank before it is certified.
pub const CERT_SAMPLES: usize = 64;
/// Independent seeds tried before giving up.
pub const RETRY_SEEDS: u64 = 8;
/// Corner restrictions with a larger condition number count as singular.
const CORNER_COND_MAX: f64 = 1e8;

fn derive_seed(seed: u64, attempt: u64) -> u64 {
    seed ^ attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Whether some `δ ∈ {1, 2, 4}` gives `dim = δ·(n/r)²`.
pub fn dimension_table_allows(dim: usize, n: usize, r: usize) -> bool {
    r > 0 && n.is_multiple_of(r) && [1, 2, 4].iter().any(|d| d * (n / r) * (n / r) == dim)
}

/// Result of [`minimal_rank_element`].
#[derive(Clone, Debug)]
pub struct MinimalRank {
    /// Unit-norm element of minimal nonzero rank.
    pub element: Mat,
    pub rank: usize,
    /// Seed of the attempt that succeeded.
    pub seed: u64,
    pub iterations: usize,
}

/// Eigenvalue clusters of a real representation: real clusters and complex
/// clusters in the upper half plane, each with its size.
fn clusters(eigs: &[ComplexScalar], gap: f64) -> Vec<(ComplexScalar, usize)> {
    let mut out: Vec<(ComplexScalar, usize)> = Vec::new();
    for z in eigs {
        if z.im < -gap {
            continue;
        }
        let z = if z.im.abs() <= gap { ComplexScalar::new(z.re, 0.0) } else { *z };
        match out.iter_mut().find(|(c, _)| (*c - z).norm() < gap) {
            Some((c, m)) => {
                *c = (*c * *m as f64 + z) / (*m + 1) as f64;
                *m += 1;
            }
            None => out.push((z, 1)),
        }
    }
    out
}

/// Real factor of the minimal polynomial belonging to a cluster, raised to
/// the cluster size and evaluated at `c`.
fn cluster_factor(c: &Mat, center: ComplexScalar, mult: usize) -> Mat {
    let id = Mat::identity(c.domain(), c.rows());
    let f = if center.im == 0.0 {
        c.mat_sub(&id.scale(center.re)).expect("same shape")
    } else {
        c.mul_unchecked(c)
            .mat_sub(&c.scale(2.0 * center.re))
            .and_then(|m| m.mat_add(&id.scale(center.norm_sqr())))
            .expect("same shape")
    };
    let mut out = id;
    for _ in 0..mult {
        out = out.mul_unchecked(&f);
    }
    out
}

/// Spectral pieces of `c`: for each nonzero cluster, `c^p` times the factors
/// of all other nonzero clusters. Returns the lowest nonzero rank found
/// among these and `c` itself, when it is below `bound`.
fn lower_rank_piece(c: &Mat, bound: usize) -> Option<(Mat, usize)> {
    let n = c.rows();
    let d = c.domain().real_dim();
    let eigs = realified_eigenvalues(c).ok()?;
    let rho = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if rho == 0.0 {
        return None;
    }
    let c_hat = c.scale(1.0 / rho);
    let scaled: Vec<ComplexScalar> = eigs.iter().map(|z| z / rho).collect();
    let cl = clusters(&scaled, 1e-5);
    let zero_count = scaled.iter().filter(|z| z.norm() < 1e-6).count();
    let (nonzero, _): (Vec<_>, Vec<_>) = cl.into_iter().partition(|(z, _)| z.norm() >= 1e-6);
    let mut best: Option<(Mat, usize)> = None;
    let mut consider = |m: Mat| {
        let r = matlin::rank(&m, RANK_TOL);
        if r > 0 && r < bound && best.as_ref().is_none_or(|(_, br)| r < *br) {
            best = Some((m, r));
        }
    };
    consider(c_hat.clone());
    if nonzero.len() > 1 || zero_count > 0 {
        let p = zero_count.div_ceil(d).max(1);
        let mut head = Mat::identity(c.domain(), n);
        for _ in 0..p {
            head = head.mul_unchecked(&c_hat);
        }
        consider(head.clone());
        if nonzero.len() > 1 {
            for (t, _) in nonzero.iter().enumerate() {
                let mut m = head.clone();
                for (s, (z, k)) in nonzero.iter().enumerate() {
                    if s != t {
                        // cluster size bounds the index of every eigenvalue in it
                        m = m.mul_unchecked(&cluster_factor(&c_hat, *z, *k));
                    }
                }
                consider(m);
            }
        }
    }
    best
}

/// An element of minimal nonzero rank in an irreducible algebra.
///
/// Randomized descent: with `c = a·b·a` for random `b`, any spectral piece
/// of `c` of lower nonzero rank replaces `a`. The rank is certified when
/// [`CERT_SAMPLES`] consecutive samples give no descent and `(dim, n, r)`
/// fits the dimension table; otherwise a fresh seed is tried.
pub fn minimal_rank_element(basis: &AlgebraBasis, seed: u64, max_iter: usize) -> Result<MinimalRank> {
    if basis.dim() == 0 {
        return Err(Error::InvalidArgument("zero algebra has no nonzero rank".into()));
    }
    let n = basis.n();
    for attempt in 0..RETRY_SEEDS {
        let s = derive_seed(seed, attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut a = basis.random_element(&mut rng);
        a = a.scale(1.0 / a.frobenius_norm());
        let mut r = matlin::rank(&a, RANK_TOL);
        if r == 0 {
            continue;
        }
        let mut fails = 0;
        let mut iters = 0;
        while fails < CERT_SAMPLES && iters < max_iter {
            iters += 1;
            let b = basis.random_element(&mut rng);
            let c = a.mul_unchecked(&b).mul_unchecked(&a);
            match lower_rank_piece(&c, r) {
                Some((m, rm)) => {
                    a = m.scale(1.0 / m.frobenius_norm());
                    r = rm;
                    fails = 0;
                }
                None => fails += 1,
            }
        }
        if fails >= CERT_SAMPLES && dimension_table_allows(basis.dim(), n, r) {
            return Ok(MinimalRank {
                element: a,
                rank: r,
                seed: s,
                iterations: iters,
            });
        }
    }
    Err(Error::Indeterminate(
        "minimal rank could not be certified within the retry budget".into(),
    ))
}

/// `E·A·E` for a minimal idempotent `E`.
#[derive(Clone, Debug)]
pub struct CornerAlgebra {
    pub idempotent: Mat,
    /// Spans `E·A·E` (as matrices in `M_n(D)`).
    pub delta_basis: AlgebraBasis,
    pub delta_dim: usize,
    /// Orthonormal real basis of the realified range of `E`.
    pub range: DMatrix<f64>,
}

impl CornerAlgebra {
    /// Corner elements restricted to the range of `E`, in real coordinates.
    pub fn restricted(&self) -> Vec<DMatrix<f64>> {
        let u = &self.range;
        self.delta_basis
            .elements()
            .iter()
            .map(|x| u.transpose() * x.realify() * u)
            .collect()
    }
}

/// Idempotent of rank `r` from a minimal-rank element, with its corner.
///
/// For `d = a·b·a` the nonzero spectrum is one real value `μ` or one
/// conjugate pair. With `d̂ = d/|μ|`, `E = d̂^p·u(d̂)` where `u ≡ d̂^{-p}` on
/// the range: a constant for real `μ`, a linear polynomial otherwise. `E` is
/// polished by `E ← 3E² − 2E³`.
pub fn minimal_idempotent(a_min: &Mat, basis: &AlgebraBasis, tol: f64, seed: u64) -> Result<CornerAlgebra> {
    let n = a_min.require_square()?;
    let r = matlin::rank(a_min, RANK_TOL);
    if r == 0 {
        return Err(Error::InvalidArgument("element is zero".into()));
    }
    let domain = a_min.domain();
    let id = Mat::identity(domain, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = (n - r + 1) as i32;
    for _ in 0..16 {
        let b = basis.random_element(&mut rng);
        let d = a_min.mul_unchecked(&b).mul_unchecked(a_min);
        let eigs = realified_eigenvalues(&d)?;
        let rho = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if rho == 0.0 {
            continue;
        }
        let nonzero: Vec<ComplexScalar> = eigs.iter().filter(|z| z.norm() >= 1e-6 * rho).copied().collect();
        let cl = clusters(&nonzero.iter().map(|z| z / rho).collect::<Vec<_>>(), 1e-5);
        if cl.len() != 1 {
            return Err(Error::Numerical(
                "corner element has several eigenvalue classes; element was not of minimal rank".into(),
            ));
        }
        let mu = cl[0].0;
        let d_hat = d.scale(1.0 / rho);
        let mut e = d_hat.pow(p as u32)?;
        if mu.im == 0.0 {
            e = e.scale(mu.re.powi(-p));
        } else {
            let inv = mu.powi(-p);
            let alpha = inv.im / mu.im;
            let beta = inv.re - alpha * mu.re;
            e = e.mul_unchecked(&d_hat.scale(alpha).mat_add(&id.scale(beta))?);
        }
        for _ in 0..3 {
            let e2 = e.mul_unchecked(&e);
            if e2.distance(&e) < 1e-10 * e.frobenius_norm().max(1.0) {
                break;
            }
            let e3 = e2.mul_unchecked(&e);
            e = e2.scale(3.0).mat_sub(&e3.scale(2.0))?;
        }
        if e.mul_unchecked(&e).distance(&e) >= 1e-8 * e.frobenius_norm().max(1.0) {
            continue;
        }
        if matlin::rank(&e, RANK_TOL) != r {
            continue;
        }
        let mut corner = AlgebraBasis::empty(domain, n);
        for x in basis.elements() {
            corner.try_push_scaled(&e.mul_unchecked(x).mul_unchecked(&e), x.frobenius_norm(), tol.max(1e-9))?;
        }
        let cols = column_space(&e.realify(), RANK_TOL);
        let mut range = DMatrix::zeros(domain.real_dim() * n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            range.set_column(j, c);
        }
        let out = CornerAlgebra {
            idempotent: e,
            delta_dim: corner.dim(),
            delta_basis: corner,
            range,
        };
        if !matches!(out.delta_dim, 1 | 2 | 4) {
            return Err(Error::Numerical(format!(
                "corner dimension {} is not that of a division algebra",
                out.delta_dim
            )));
        }
        check_division(&out, &mut rng)?;
        return Ok(out);
    }
    Err(Error::Numerical("no corner element with nonzero spectrum found".into()))
}

/// Random nonzero corner elements must be invertible on the range of `E`.
fn check_division(corner: &CornerAlgebra, rng: &mut ChaCha8Rng) -> Result<()> {
    let restricted = corner.restricted();
    for _ in 0..CERT_SAMPLES {
        let mut x = DMatrix::zeros(corner.range.ncols(), corner.range.ncols());
        for m in &restricted {
            x += m * crate::mat::normal(rng);
        }
        if condition_number(&x) > CORNER_COND_MAX {
            return Err(Error::Numerical("corner has a singular nonzero element".into()));
        }
    }
    Ok(())
}

/// Classification of an irreducible real algebra `Alg_R(S) ⊆ M_n(D)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub ambient: Domain,
    pub n: usize,
    /// Real dimension of the algebra.
    pub dim: usize,
    pub minimal_rank: usize,
    pub kind: Domain,
    /// `m` with the algebra similar to `M_m(kind)` (embedded).
    pub block_count: usize,
    pub delta_dim: usize,
    /// Idempotent defect `‖E² − E‖`.
    pub residual: f64,
    pub seed: u64,
    pub attempts: u64,
}

/// Allowed `(kind, r)` pairs for each ambient domain.
pub fn table_allows(ambient: Domain, kind: Domain, r: usize) -> bool {
    match ambient {
        Domain::R => r == kind.real_dim(),
        Domain::C => matches!((kind, r), (Domain::C, 1) | (Domain::R, 1) | (Domain::H, 2)),
        Domain::H => r == 1,
    }
}

/// Classifies `Alg_R(S)` as real, complex or quaternionic type.
///
/// The kind comes from the corner dimension; the closure dimension and the
/// minimal rank must agree with it through `dim = δ·(n/r)²` and the
/// per-ambient table, or a fresh seed is tried.
pub fn classify(spec: &SemigroupSpec, tol: f64, seed: u64) -> Result<ClassificationReport> {
    match is_irreducible(spec, tol, seed)?.verdict {
        Irreducibility::Irreducible => {}
        Irreducibility::Reducible(w) => return Err(Error::Reducible(Box::new(w))),
        Irreducibility::Indeterminate(why) => return Err(Error::Indeterminate(why)),
    }
    let basis = algebra_closure(spec, tol, None)?.basis;
    let n = spec.n;
    let mut last = String::new();
    for attempt in 0..RETRY_SEEDS {
        let s = derive_seed(seed, attempt + 100);
        let mr = match minimal_rank_element(&basis, s, 4096) {
            Ok(m) => m,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let corner = match minimal_idempotent(&mr.element, &basis, tol, s) {
            Ok(c) => c,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let r = mr.rank;
        let delta = corner.delta_dim;
        let kind = Domain::from_real_dim(delta).expect("checked division dimension");
        let dim = basis.dim();
        if n.is_multiple_of(r) && delta * (n / r) * (n / r) == dim && table_allows(spec.domain, kind, r) {
            let e = &corner.idempotent;
            return Ok(ClassificationReport {
                ambient: spec.domain,
                n,
                dim,
                minimal_rank: r,
                kind,
                block_count: n / r,
                delta_dim: delta,
                residual: e.mul_unchecked(e).distance(e),
                seed: s,
                attempts: attempt + 1,
            });
        }
        last = format!("inconsistent triple: dim {dim}, r {r}, delta {delta}");
    }
    Err(Error::Numerical(format!("classification failed: {last}")))
}

/// Similarity recovered by [`canonical_similarity`].
#[derive(Clone, Debug)]
pub struct Similarity {
    pub p: Mat,
    /// Largest norm of the non-real part of `P⁻¹·A·P` over the unit-norm
    /// algebra basis.
    pub residual: f64,
}

/// Invertible `P` over the ambient domain with `P⁻¹·A·P` real for every
/// element of a kind-`R` algebra.
///
/// For a rank-one idempotent `E` with real corner and `v` in its range, the
/// real span `W` of `{A_i·v}` is `n`-dimensional and invariant; a real basis
/// of `W` forms the columns of `P`.
pub fn canonical_similarity(report: &ClassificationReport, basis: &AlgebraBasis, tol: f64, seed: u64) -> Result<Similarity> {
    if report.kind != Domain::R || report.minimal_rank != 1 {
        return Err(Error::Unsupported(format!(
            "explicit similarity is implemented for kind R only (got kind {})",
            report.kind
        )));
    }
    let (domain, n) = (basis.domain(), basis.n());
    if domain == Domain::R {
        return Ok(Similarity {
            p: Mat::identity(Domain::R, n),
            residual: 0.0,
        });
    }
    let mut last = String::new();
    for attempt in 0..RETRY_SEEDS {
        let s = derive_seed(seed, attempt + 200);
        let attempt_result = (|| -> Result<Similarity> {
            let mr = minimal_rank_element(basis, s, 4096)?;
            let corner = minimal_idempotent(&mr.element, basis, tol, s)?;
            if corner.delta_dim != 1 {
                return Err(Error::Numerical("corner is not real".into()));
            }
            let e = &corner.idempotent;
            let j = (0..n)
                .max_by(|x, y| e.column(*x).frobenius_norm().total_cmp(&e.column(*y).frobenius_norm()))
                .expect("n >= 1");
            let v = e.column(j);
            let mut w: Vec<Vec<f64>> = Vec::new();
            for a in basis.elements() {
                let av = a.mul_unchecked(&v);
                push_if_independent(&mut w, av.realify().column(0).as_slice(), 1e-8);
            }
            if w.len() != n {
                return Err(Error::Numerical(format!("orbit span has real dimension {} != {n}", w.len())));
            }
            let cols: Vec<Mat> = w.iter().map(|x| vector_from_real(domain, x)).collect();
            let p = Mat::from_columns(&cols)?;
            if matlin::rank(&p, RANK_TOL) != n {
                return Err(Error::Numerical("orbit basis is not independent over the ambient domain".into()));
            }
            let p_inv = matlin::inverse(&p)?;
            let residual = basis
                .elements()
                .iter()
                .map(|a| imaginary_part_norm(&p_inv.mul_unchecked(a).mul_unchecked(&p)))
                .fold(0.0, f64::max);
            Ok(Similarity { p, residual })
        })();
        match attempt_result {
            Ok(sim) => return Ok(sim),
            Err(e) => last = e.to_string(),
        }
    }
    Err(Error::Indeterminate(format!("similarity not recovered: {last}")))
}

/// Frobenius norm of the `i, j, k` coefficients.
pub fn imaginary_part_norm(m: &Mat) -> f64 {
    m.entries()
        .iter()
        .map(|q| q.b * q.b + q.c * q.c + q.d * q.d)
        .sum::<f64>()
        .sqrt()
}

/// Hypotheses: irreducible, and every generator and sampled word is
/// triangularizable with real spectrum. Conclusion: over `R` the closure is
/// `M_n(R)`; over `C`/`H` the algebra is of kind `R` and an explicit
/// similarity makes it real.
pub fn verify_burnside_theorem(spec: &SemigroupSpec, tol: f64, seed: u64) -> VerificationOutcome {
    let theorem = match spec.domain {
        Domain::R => "2.3",
        Domain::C => "2.4",
        Domain::H => "2.5",
    };
    let mut out = VerificationOutcome::new(theorem);
    out.note("ambient", json!(spec.domain.to_string()));
    out.note("n", json!(spec.n));
    out.note("seed", json!(seed));
    let irr = match is_irreducible(spec, tol, seed) {
        Ok(r) => r,
        Err(e) => return out.failed_hypothesis(&format!("irreducibility check failed: {e}")),
    };
    out.note("closure_dim", json!(irr.closure_dim));
    match &irr.verdict {
        Irreducibility::Irreducible => {}
        Irreducibility::Reducible(w) => {
            out.note("witness_dim", json!(w.dim()));
            return out.failed_hypothesis("semigroup is reducible");
        }
        Irreducibility::Indeterminate(why) => return out.failed_hypothesis(&format!("irreducibility indeterminate: {why}")),
    }
    let mut members = spec.generators.clone();
    members.extend(sample_words(spec, 64, seed));
    for (k, m) in members.iter().enumerate() {
        // Realified roots are real exactly when the right spectrum is real.
        match is_triangularizable_central(m, tol) {
            Ok(true) => {}
            Ok(false) => {
                let what = if k < spec.generators.len() { "generator" } else { "sampled word" };
                return out.failed_hypothesis(&format!("{what} {k} is not triangularizable with real spectrum"));
            }
            Err(e) => return out.failed_hypothesis(&format!("spectrum computation failed: {e}")),
        }
    }
    out.note("members_checked", json!(members.len()));
    out.hypotheses_hold = true;
    if spec.domain == Domain::R {
        out.conclusion_holds = Some(irr.closure_dim == spec.n * spec.n);
        return out;
    }
    let report = match classify(spec, tol, seed) {
        Ok(r) => r,
        Err(e) => {
            out.note("error", json!(e.to_string()));
            out.conclusion_holds = Some(false);
            return out;
        }
    };
    out.note("kind", json!(report.kind.to_string()));
    out.note("minimal_rank", json!(report.minimal_rank));
    if report.kind != Domain::R {
        out.conclusion_holds = Some(false);
        return out;
    }
    let basis = match algebra_closure(spec, tol, None) {
        Ok(c) => c.basis,
        Err(e) => {
            out.note("error", json!(e.to_string()));
            out.conclusion_holds = Some(false);
            return out;
        }
    };
    match canonical_similarity(&report, &basis, tol, seed) {
        Ok(sim) => {
            out.note("similarity_residual", json!(sim.residual));
            out.conclusion_holds = Some(sim.residual < 1e-6);
        }
        Err(e) => {
            out.note("error", json!(e.to_string()));
            out.conclusion_holds = Some(false);
        }
    }
    out
}
