//! Trace probes, exact reconstruction on integral fixtures, cardinality
//! bounds and boundedness of linear functionals on semigroups.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector, LU, Dyn};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat::{Domain, Mat};
use crate::matlin::{self, is_triangularizable_central};
use crate::numeric::{condition_number, real_rank, vec_row_major};
use crate::scalar::ComplexScalar;
use crate::semigroup::{algebra_closure, is_irreducible, SemigroupSpec};

/// Relative rank threshold for trace coefficient matrices.
const SYSTEM_RANK_TOL: f64 = 1e-10;

/// The linear functional `φ(X) = tr(T·X)` on `M_n(R)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalSpec {
    pub t: Mat,
}

impl FunctionalSpec {
    pub fn new(t: Mat) -> Result<Self> {
        t.require_square()?;
        if t.domain() != Domain::R {
            return Err(Error::Domain { expected: Domain::R, found: t.domain() });
        }
        Ok(Self { t })
    }

    /// `φ = trace`.
    pub fn trace(n: usize) -> Self {
        Self { t: Mat::identity(Domain::R, n) }
    }

    pub fn n(&self) -> usize {
        self.t.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_zero()
    }

    pub fn eval(&self, x: &Mat) -> f64 {
        self.t.mul_unchecked(x).real_trace()
    }

    /// `φ` in exact arithmetic on the binary values of the entries.
    pub fn eval_exact(&self, x: &Mat) -> BigRational {
        let (t, x) = (to_rational(&self.t), to_rational(x));
        let n = self.n();
        let mut acc = BigRational::zero();
        for i in 0..n {
            for k in 0..n {
                acc += &t[i][k] * &x[k][i];
            }
        }
        acc
    }
}

pub type Rational = BigRational;

/// The exact value of a finite `f64`.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    BigRational::from_float(v)
}

/// Exact rational copy of a real matrix (every `f64` is a dyadic rational).
pub fn to_rational(m: &Mat) -> Vec<Vec<BigRational>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| BigRational::from_float(m.get_real(i, j)).expect("finite entry"))
                .collect()
        })
        .collect()
}

fn rational_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let (n, m, p) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| (0..m).fold(BigRational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// `n²` trace functionals `X ↦ tr(L_i·X·R_i)` on `M_n(R)` and their
/// coefficient matrix.
#[derive(Clone, Debug)]
pub struct TraceSystem {
    pub n: usize,
    pub probes: Vec<(Mat, Mat)>,
    /// Row `i` holds the coefficients of functional `i` against the
    /// row-major entries of `X`.
    pub coefficient_matrix: DMatrix<f64>,
    pub condition: f64,
    lu: LU<f64, Dyn, Dyn>,
}

impl TraceSystem {
    fn assemble(n: usize, probes: Vec<(Mat, Mat)>) -> Result<TraceSystem> {
        let size = n * n;
        if probes.len() != size {
            return Err(Error::InvalidArgument(format!("need {size} probes, got {}", probes.len())));
        }
        let mut c = DMatrix::zeros(size, size);
        for (i, (l, r)) in probes.iter().enumerate() {
            for m in [l, r] {
                if m.domain() != Domain::R || m.rows() != n || m.cols() != n {
                    return Err(Error::Shape(format!("probe matrices must be real {n}x{n}")));
                }
            }
            // tr(L·X·R) = Σ_{jk} (R·L)_{kj} X_{jk}
            let rl = r.mul_unchecked(l).to_dmatrix()?;
            let row = vec_row_major(&rl.transpose());
            for (j, v) in row.into_iter().enumerate() {
                c[(i, j)] = v;
            }
        }
        let rank = real_rank(&c, SYSTEM_RANK_TOL);
        if rank < size {
            return Err(Error::Singular { rank, size });
        }
        let condition = condition_number(&c);
        let lu = c.clone().lu();
        Ok(TraceSystem { n, probes, coefficient_matrix: c, condition, lu })
    }

    /// Probe values `tr(L_i·X·R_i)`.
    pub fn probe(&self, x: &Mat) -> Result<Vec<f64>> {
        let xr = x.to_dmatrix()?;
        if xr.shape() != (self.n, self.n) {
            return Err(Error::Shape(format!("expected {0}x{0}", self.n)));
        }
        let v = DVector::from_vec(vec_row_major(&xr));
        Ok((&self.coefficient_matrix * v).iter().copied().collect())
    }

    /// Exact probe values on the binary values of the entries.
    pub fn probe_exact(&self, x: &Mat) -> Vec<BigRational> {
        let xr = to_rational(x);
        self.probes
            .iter()
            .map(|(l, r)| {
                let p = rational_mul(&rational_mul(&to_rational(l), &xr), &to_rational(r));
                (0..self.n).fold(BigRational::zero(), |acc, i| acc + &p[i][i])
            })
            .collect()
    }

    /// Exact coefficient matrix, from exact products `R_i·L_i`.
    pub fn exact_coefficients(&self) -> Vec<Vec<BigRational>> {
        let n = self.n;
        self.probes
            .iter()
            .map(|(l, r)| {
                let rl = rational_mul(&to_rational(r), &to_rational(l));
                let mut row = Vec::with_capacity(n * n);
                for j in 0..n {
                    row.extend(rl.iter().map(|rk| rk[j].clone()));
                }
                row
            })
            .collect()
    }
}

/// Plain system with functionals `X ↦ tr(S_i·X)`.
pub fn build_trace_system(basis: &[Mat]) -> Result<TraceSystem> {
    let n = basis.first().ok_or_else(|| Error::InvalidArgument("empty basis".into()))?.require_square()?;
    let id = Mat::identity(Domain::R, n);
    TraceSystem::assemble(n, basis.iter().map(|s| (s.clone(), id.clone())).collect())
}

/// Sandwich system with functionals `X ↦ tr(S_{i1}·T·S_{i2}·X)`, evaluated as
/// `tr(T·S_{i2}·X·S_{i1})`.
pub fn build_sandwich_system(pairs: &[(Mat, Mat)], t: &Mat) -> Result<TraceSystem> {
    let n = t.require_square()?;
    TraceSystem::assemble(
        n,
        pairs.iter().map(|(s1, s2)| (t.mul_unchecked(s2), s1.clone())).collect(),
    )
}

/// The unique `X` with the given probe values.
pub fn reconstruct(system: &TraceSystem, y: &[f64]) -> Result<Mat> {
    let n = system.n;
    if y.len() != n * n {
        return Err(Error::Shape(format!("expected {} probe values, got {}", n * n, y.len())));
    }
    let x = system
        .lu
        .solve(&DVector::from_column_slice(y))
        .ok_or(Error::Singular { rank: real_rank(&system.coefficient_matrix, SYSTEM_RANK_TOL), size: n * n })?;
    Mat::from_coefficients(Domain::R, n, n, x.as_slice())
}

/// Exact reconstruction by rational Gaussian elimination; returns the
/// row-major entries.
pub fn reconstruct_exact(system: &TraceSystem, y: &[BigRational]) -> Result<Vec<Vec<BigRational>>> {
    let n = system.n;
    let size = n * n;
    if y.len() != size {
        return Err(Error::Shape(format!("expected {size} probe values, got {}", y.len())));
    }
    let mut a = system.exact_coefficients();
    for (row, v) in a.iter_mut().zip(y) {
        row.push(v.clone());
    }
    for col in 0..size {
        let piv = (col..size)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::Singular { rank: col, size })?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..size {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (dst, src) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *dst -= &f * src;
                }
            }
        }
    }
    Ok((0..n).map(|i| (0..n).map(|j| a[i * n + j][size].clone()).collect()).collect())
}

/// Whether a rational matrix equals the binary values of a real matrix.
pub fn rational_equals(x: &[Vec<BigRational>], m: &Mat) -> bool {
    to_rational(m) == x
}

/// `k^{n²}`.
pub fn cardinality_bound(k: u64, n: u32) -> BigUint {
    BigUint::from(k).pow(n * n)
}

fn bit_key(m: &Mat) -> Vec<u64> {
    // -0.0 and 0.0 are the same element
    m.coefficients().iter().map(|x| (x + 0.0).to_bits()).collect()
}

/// All products of the generators, compared entrywise exactly. Fails when
/// more than `max_elements` distinct elements appear.
pub fn enumerate_semigroup(generators: &[Mat], max_elements: usize) -> Result<Vec<Mat>> {
    let mut seen = BTreeSet::new();
    let mut out: Vec<Mat> = Vec::new();
    for g in generators {
        if seen.insert(bit_key(g)) {
            out.push(g.clone());
        }
    }
    let mut next = 0;
    while next < out.len() {
        let s = out[next].clone();
        next += 1;
        for g in generators {
            let p = s.mat_mul(g)?;
            if seen.insert(bit_key(&p)) {
                out.push(p);
                if out.len() > max_elements {
                    return Err(Error::Indeterminate(format!("more than {max_elements} elements")));
                }
            }
        }
    }
    Ok(out)
}

/// `{E_ij}` in `M_n(R)`; the semigroup they generate adds `0`.
pub fn matrix_unit_generators(n: usize) -> Vec<Mat> {
    (0..n)
        .flat_map(|i| (0..n).map(move |j| Mat::unit(Domain::R, n, i, j)))
        .collect()
}

/// `{±E_ij}` in `M_n(R)`.
pub fn signed_unit_generators(n: usize) -> Vec<Mat> {
    matrix_unit_generators(n)
        .into_iter()
        .flat_map(|e| [e.scale(-1.0), e])
        .collect()
}

/// Cardinality against `k^{n²}` for a finite semigroup and a functional
/// taking `k` values on it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FinitenessReport {
    pub elements: usize,
    /// Distinct exact values of the functional.
    pub distinct_values: usize,
    pub bound: String,
    /// Real dimension of the span of the elements.
    pub span_dim: usize,
    pub holds: bool,
}

pub fn finiteness_check(elements: &[Mat], functional: &FunctionalSpec) -> Result<FinitenessReport> {
    let n = functional.n();
    let values: BTreeSet<BigRational> = elements.iter().map(|s| functional.eval_exact(s)).collect();
    let k = values.len() as u64;
    let bound = cardinality_bound(k, n as u32);
    let span_dim = crate::algebra::AlgebraBasis::from_spanning(Domain::R, n, elements, crate::DEFAULT_TOL)?.dim();
    Ok(FinitenessReport {
        elements: elements.len(),
        distinct_values: k as usize,
        holds: BigUint::from(elements.len()) <= bound,
        bound: bound.to_string(),
        span_dim,
    })
}

/// `ε(i)`, the real form of `i`.
fn eps_i() -> Mat {
    Mat::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]])
}

/// Largest scalar multiple of `ε(i)` in the truncated fixture.
pub const COUNTEREXAMPLE_MAX_SCALE: usize = 10;
/// Longest word sampled from the fixture.
pub const COUNTEREXAMPLE_MAX_LEN: usize = 5;

/// Generators `m·ε(i)`, `1 ≤ m ≤ 10`, with `T = [[1, 1], [1, −1]]`.
///
/// Every element is `±c·I` or `±c·ε(i)`, and `T` is trace-orthogonal to both,
/// so `φ` vanishes on the whole (unbounded) semigroup. The generators have
/// spectrum `±m·i` and are not triangularizable over `R`.
pub fn paper_counterexample() -> (SemigroupSpec, FunctionalSpec) {
    let e = eps_i();
    let gens = (1..=COUNTEREXAMPLE_MAX_SCALE).map(|m| e.scale(m as f64)).collect();
    let spec = SemigroupSpec::new(gens, "multiples of eps(i)").expect("valid fixture");
    let t = Mat::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]);
    (spec, FunctionalSpec { t })
}

/// `T = ε(i) + diag(1, −1)` as literally written; `tr(T·ε(i)) = −2`, so this
/// functional does not vanish on the semigroup.
pub fn counterexample_literal_functional() -> FunctionalSpec {
    FunctionalSpec {
        t: eps_i().mat_add(&Mat::diag(Domain::R, &[1.0, -1.0])).expect("2x2"),
    }
}

/// Words of uniform length in `1..=max_len` with uniform letters; rounding
/// residue of zero products is returned as zero.
pub fn sample_short_words(spec: &SemigroupSpec, count: usize, max_len: usize, seed: u64) -> Vec<Mat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = spec.generators.len();
    (0..count)
        .map(|_| {
            let len = rng.random_range(1..=max_len.max(1));
            let first = &spec.generators[rng.random_range(0..k)];
            let mut bound = first.frobenius_norm();
            let mut w = first.clone();
            for _ in 1..len {
                let g = &spec.generators[rng.random_range(0..k)];
                bound *= g.frobenius_norm();
                w = w.mul_unchecked(g);
            }
            if w.frobenius_norm() <= crate::semigroup::ZERO_WORD_TOL * bound {
                w = Mat::zeros(spec.domain, spec.n, spec.n);
            }
            w
        })
        .collect()
}

/// Word norms (and `|φ|`) above this count as unbounded growth.
pub const GROWTH_THRESHOLD: f64 = 1e3;

/// Sampling budget for [`boundedness_probe`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeBudget {
    pub words: usize,
    pub max_len: usize,
}

impl Default for ProbeBudget {
    fn default() -> Self {
        Self { words: 200, max_len: 24 }
    }
}

/// The normalized-limit object `S₀` and the sampled ideal around it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitCheck {
    /// Largest `|φ|` over ideal elements `S·S₀·S′` (unit norm).
    pub max_phi_on_ideal: f64,
    pub ideal_span_dim: usize,
    pub full_span: bool,
    /// `φ` vanishes on a spanning set: only possible if `φ = 0`.
    pub contradiction: bool,
}

/// Boundedness of a semigroup against boundedness of `φ` on it, sorted into
/// (hypotheses, conclusion) quadrants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundednessReport {
    pub hypotheses_hold: bool,
    pub hypothesis_failure: Option<String>,
    pub irreducible: bool,
    pub words_sampled: usize,
    pub max_norm: f64,
    pub max_abs_phi: f64,
    pub norm_unbounded: bool,
    pub phi_unbounded: bool,
    /// `φ` vanishes on every sampled word.
    pub phi_vanishes: bool,
    /// `φ` is nonzero somewhere on the closure basis.
    pub phi_nonvanishing_on_algebra: bool,
    pub limit: Option<LimitCheck>,
    /// Boundedness of `φ` implies boundedness of the sample.
    pub conclusion_holds: bool,
    /// A hypothesis fails or the conclusion holds.
    pub consistent: bool,
}

fn format_spectrum(eigs: &[ComplexScalar]) -> String {
    let parts: Vec<String> = eigs
        .iter()
        .map(|z| {
            if z.im.abs() < 1e-12 {
                format!("{}", z.re)
            } else {
                format!("{}{:+}i", z.re, z.im)
            }
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

/// Samples words and compares the growth of `‖S‖` with that of `φ(S)`.
///
/// When norms grow while `φ` stays at rounding level, `S₀` is the unit-norm
/// largest word and `φ` is evaluated on `S·S₀·S′`; vanishing on a spanning
/// ideal would force `φ = 0`. The report never asserts a theorem is false.
pub fn boundedness_probe(
    spec: &SemigroupSpec,
    functional: &FunctionalSpec,
    budget: ProbeBudget,
    tol: f64,
    seed: u64,
) -> Result<BoundednessReport> {
    if spec.domain != Domain::R {
        return Err(Error::Domain { expected: Domain::R, found: spec.domain });
    }
    if functional.n() != spec.n {
        return Err(Error::Shape(format!("functional is {0}x{0}, semigroup is {1}x{1}", functional.n(), spec.n)));
    }
    let words = sample_short_words(spec, budget.words, budget.max_len, seed);
    let mut failure = None;
    for (k, g) in spec.generators.iter().chain(words.iter().take(64)).enumerate() {
        if !is_triangularizable_central(g, tol)? {
            let what = if k < spec.generators.len() {
                format!("generator {k}")
            } else {
                format!("sampled word {}", k - spec.generators.len())
            };
            let spectrum = format_spectrum(&matlin::eigenvalues(g)?.values);
            failure = Some(format!("{what} not triangularizable over R (spectrum {spectrum})"));
            break;
        }
    }
    let irreducible = is_irreducible(spec, tol, seed)?.verdict.is_irreducible();
    if failure.is_none() && !irreducible {
        failure = Some("semigroup is reducible".into());
    }
    let max_norm = words.iter().map(Mat::frobenius_norm).fold(0.0, f64::max);
    let phis: Vec<f64> = words.iter().map(|w| functional.eval(w)).collect();
    let max_abs_phi = phis.iter().fold(0.0f64, |m, p| m.max(p.abs()));
    let norm_unbounded = max_norm > GROWTH_THRESHOLD;
    let phi_unbounded = max_abs_phi > GROWTH_THRESHOLD;
    let phi_vanishes = words
        .iter()
        .zip(&phis)
        .all(|(w, p)| p.abs() <= tol * w.frobenius_norm().max(1.0));
    let closure = algebra_closure(spec, tol, None)?.basis;
    let tn = functional.t.frobenius_norm();
    let phi_nonvanishing_on_algebra =
        closure.elements().iter().any(|b| functional.eval(b).abs() > 1e3 * tol * tn.max(f64::MIN_POSITIVE));
    let limit = if norm_unbounded && phi_vanishes {
        let top = words
            .iter()
            .max_by(|a, b| a.frobenius_norm().total_cmp(&b.frobenius_norm()))
            .expect("nonempty sample");
        let s0 = top.scale(1.0 / top.frobenius_norm());
        let ideal = crate::semigroup::sampled_ideal(spec, &s0, 64, seed)?;
        let max_phi_on_ideal = ideal.generators.iter().fold(0.0f64, |m, x| m.max(functional.eval(x).abs()));
        let span = crate::algebra::AlgebraBasis::from_spanning(Domain::R, spec.n, &ideal.generators, 1e-8)?;
        let full_span = span.dim() == spec.n * spec.n;
        Some(LimitCheck {
            max_phi_on_ideal,
            ideal_span_dim: span.dim(),
            full_span,
            contradiction: full_span && max_phi_on_ideal <= tol && !functional.is_zero(),
        })
    } else {
        None
    };
    let conclusion_holds = phi_unbounded || !norm_unbounded;
    let hypotheses_hold = failure.is_none();
    Ok(BoundednessReport {
        hypotheses_hold,
        hypothesis_failure: failure,
        irreducible,
        words_sampled: words.len(),
        max_norm,
        max_abs_phi,
        norm_unbounded,
        phi_unbounded,
        phi_vanishes,
        phi_nonvanishing_on_algebra,
        limit,
        conclusion_holds,
        consistent: !hypotheses_hold || conclusion_holds,
    })
}

/// Dihedral group of the square: a bounded irreducible semigroup.
pub fn dihedral_generators() -> Vec<Mat> {
    vec![eps_i(), Mat::diag(Domain::R, &[1.0, -1.0])]
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::gen_rank_one_family;

    const TOL: f64 = 1e-9;

    fn int_mat(rows: &[&[f64]]) -> Mat {
        Mat::from_real_rows(rows)
    }

    #[test]
    fn matrix_unit_system_is_a_permutation() {
        let sys = build_trace_system(&matrix_unit_generators(2)).unwrap();
        let c = &sys.coefficient_matrix;
        for i in 0..4 {
            assert_eq!(c.row(i).iter().filter(|v| **v == 1.0).count(), 1);
            assert_eq!(c.column(i).iter().filter(|v| **v == 1.0).count(), 1);
        }
        assert!((sys.condition - 1.0).abs() < 1e-12);
        // tr(E_12·X) = X_21
        let x = int_mat(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(sys.probe(&x).unwrap()[1], 3.0);
    }

    #[test]
    fn rank_one_closure_gives_invertible_system() {
        let spec = gen_rank_one_family(2, 7).unwrap();
        let basis = algebra_closure(&spec, TOL, None).unwrap().basis;
        let sys = build_trace_system(basis.elements()).unwrap();
        assert!(sys.condition.is_finite());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let x = Mat::random(Domain::R, 2, 2, &mut rng);
            let back = reconstruct(&sys, &sys.probe(&x).unwrap()).unwrap();
            assert!(back.distance(&x) <= 1e-8 * x.frobenius_norm());
        }
    }

    #[test]
    fn repeated_basis_element_is_singular() {
        let mut basis = matrix_unit_generators(2);
        basis[3] = basis[0].clone();
        assert_eq!(build_trace_system(&basis).unwrap_err(), Error::Singular { rank: 3, size: 4 });
    }

    #[test]
    fn reconstruct_identity_and_zero() {
        let sys = build_trace_system(&matrix_unit_generators(3)).unwrap();
        let id = Mat::identity(Domain::R, 3);
        assert!(reconstruct(&sys, &sys.probe(&id).unwrap()).unwrap().distance(&id) < 1e-14);
        assert!(reconstruct(&sys, &[0.0; 9]).unwrap().is_zero());
    }

    #[test]
    fn exact_round_trip_on_integers() {
        let sys = build_trace_system(&matrix_unit_generators(2)).unwrap();
        let x = int_mat(&[&[7.0, -3.0], &[12.0, 5.0]]);
        let exact = reconstruct_exact(&sys, &sys.probe_exact(&x)).unwrap();
        assert!(rational_equals(&exact, &x));
        // a non-permutation integer basis
        let basis = vec![
            int_mat(&[&[1.0, 1.0], &[0.0, 0.0]]),
            int_mat(&[&[0.0, 1.0], &[1.0, 0.0]]),
            int_mat(&[&[2.0, 0.0], &[0.0, 1.0]]),
            int_mat(&[&[0.0, 0.0], &[3.0, 1.0]]),
        ];
        let sys = build_trace_system(&basis).unwrap();
        let exact = reconstruct_exact(&sys, &sys.probe_exact(&x)).unwrap();
        assert!(rational_equals(&exact, &x));
    }

    #[test]
    fn sandwich_systems() {
        let units = matrix_unit_generators(2);
        let id = Mat::identity(Domain::R, 2);
        let plain: Vec<(Mat, Mat)> = units.iter().map(|u| (u.clone(), id.clone())).collect();
        let s = build_sandwich_system(&plain, &id).unwrap();
        let p = build_trace_system(&units).unwrap();
        assert_eq!(s.coefficient_matrix, p.coefficient_matrix);

        let e = |i, j| Mat::unit(Domain::R, 2, i, j);
        let pairs: Vec<(Mat, Mat)> = (0..2).flat_map(|i| (0..2).map(move |j| (e(i, 0), e(0, j)))).collect();
        let s = build_sandwich_system(&pairs, &e(0, 0)).unwrap();
        let x = int_mat(&[&[4.0, -1.0], &[2.0, 9.0]]);
        assert!(rational_equals(&reconstruct_exact(&s, &s.probe_exact(&x)).unwrap(), &x));

        let zero = Mat::zeros(Domain::R, 2, 2);
        assert!(matches!(build_sandwich_system(&pairs, &zero), Err(Error::Singular { rank: 0, .. })));
    }

    #[test]
    fn cyclic_trace_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let [s1, t, s2, s] = [0; 4].map(|_| Mat::random(Domain::R, 3, 3, &mut rng));
            let lhs = s1.mul_unchecked(&t).mul_unchecked(&s2).mul_unchecked(&s).real_trace();
            let rhs = t.mul_unchecked(&s2).mul_unchecked(&s).mul_unchecked(&s1).real_trace();
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn cardinality_bounds() {
        assert_eq!(cardinality_bound(2, 2), BigUint::from(16u32));
        assert_eq!(cardinality_bound(1, 5), BigUint::from(1u32));
        assert_eq!(cardinality_bound(3, 3), BigUint::from(19683u32));
    }

    #[test]
    fn matrix_unit_semigroup_is_within_bound() {
        let elems = enumerate_semigroup(&matrix_unit_generators(2), 100).unwrap();
        assert_eq!(elems.len(), 5);
        let rep = finiteness_check(&elems, &FunctionalSpec::trace(2)).unwrap();
        assert_eq!((rep.distinct_values, rep.bound.as_str(), rep.span_dim), (2, "16", 4));
        assert!(rep.holds);
        let elems = enumerate_semigroup(&signed_unit_generators(2), 100).unwrap();
        assert_eq!(elems.len(), 9);
        let rep = finiteness_check(&elems, &FunctionalSpec::trace(2)).unwrap();
        assert_eq!((rep.distinct_values, rep.bound.as_str()), (3, "81"));
        assert!(rep.holds);
    }

    #[test]
    fn counterexample_values() {
        let (spec, phi) = paper_counterexample();
        let e = &spec.generators[0];
        assert!(phi.eval_exact(e).is_zero());
        let prod = spec.generators[1].mul_unchecked(&spec.generators[2]);
        assert_eq!(prod, Mat::identity(Domain::R, 2).scale(-6.0));
        assert!(phi.eval_exact(&prod).is_zero());
        let cube = spec.generators[9].pow(3).unwrap();
        assert!((matlin::spectrum(&cube).unwrap().radius - 1000.0).abs() < 1e-9);
        let literal = counterexample_literal_functional();
        assert_eq!(literal.t, int_mat(&[&[1.0, -1.0], &[1.0, -1.0]]));
        assert_eq!(literal.eval_exact(e), BigRational::from_integer((-2).into()));
    }

    #[test]
    fn counterexample_probe_blames_generators() {
        let (spec, phi) = paper_counterexample();
        let budget = ProbeBudget { words: 200, max_len: COUNTEREXAMPLE_MAX_LEN };
        let rep = boundedness_probe(&spec, &phi, budget, TOL, 0).unwrap();
        assert!(!rep.hypotheses_hold);
        let why = rep.hypothesis_failure.unwrap();
        assert!(why.contains("generator 0 not triangularizable over R"), "{why}");
        assert!(why.contains("+1i") && why.contains("-1i"), "{why}");
        assert!(rep.norm_unbounded && rep.phi_vanishes && !rep.phi_unbounded);
        assert!(!rep.conclusion_holds && rep.consistent);
        let lim = rep.limit.unwrap();
        assert_eq!(lim.ideal_span_dim, 2);
        assert!(!lim.contradiction);
    }

    #[test]
    fn bounded_and_unbounded_instances_are_consistent() {
        let dihedral = SemigroupSpec::new(dihedral_generators(), "D4").unwrap();
        let rep = boundedness_probe(&dihedral, &FunctionalSpec::trace(2), ProbeBudget::default(), TOL, 1).unwrap();
        assert!(!rep.norm_unbounded && !rep.phi_unbounded && rep.consistent);

        let units = SemigroupSpec::new(matrix_unit_generators(3), "units").unwrap();
        let rep = boundedness_probe(&units, &FunctionalSpec::trace(3), ProbeBudget::default(), TOL, 1).unwrap();
        assert!(rep.hypotheses_hold && rep.phi_nonvanishing_on_algebra);
        assert!(!rep.norm_unbounded && rep.conclusion_holds);

        let family = gen_rank_one_family(3, 2).unwrap();
        let scaled = family.rescaled(&vec![2.0; family.generators.len()]);
        let rep = boundedness_probe(&scaled, &FunctionalSpec::trace(3), ProbeBudget::default(), TOL, 1).unwrap();
        assert!(rep.hypotheses_hold, "{:?}", rep.hypothesis_failure);
        assert!(rep.norm_unbounded && rep.phi_unbounded, "{rep:?}");
        assert!(rep.conclusion_holds && rep.consistent);
    }
}
