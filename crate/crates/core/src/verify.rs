//! Structured outcomes of theorem checks and the dispatcher behind
//! `verify`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::classify::verify_burnside_theorem;
use crate::error::{Error, Result};
use crate::io::RunConfig;
use crate::mat::{embed_block, Domain, EmbedTarget, Mat};
use crate::matlin::is_triangularizable_central;
use crate::numeric::push_if_independent;
use crate::scalar::{ComplexScalar, Quaternion};
use crate::semigroup::{
    closure_scaling_invariance_check, extract_singular, is_absolutely_irreducible, is_irreducible, sample_words,
    Irreducibility, SemigroupSpec,
};
use crate::trace::{self, FunctionalSpec, ProbeBudget};

/// Outcome of checking one theorem on one instance.
///
/// `conclusion_holds` is `None` when the hypotheses fail and the conclusion
/// was not evaluated.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationOutcome {
    pub theorem: String,
    pub hypotheses_hold: bool,
    pub conclusion_holds: Option<bool>,
    pub diagnostics: Map<String, Value>,
}

impl VerificationOutcome {
    pub fn new(theorem: &str) -> Self {
        Self {
            theorem: theorem.to_string(),
            hypotheses_hold: false,
            conclusion_holds: None,
            diagnostics: Map::new(),
        }
    }

    pub fn note(&mut self, key: &str, value: Value) {
        self.diagnostics.insert(key.to_string(), value);
    }

    pub(crate) fn failed_hypothesis(mut self, why: &str) -> Self {
        self.hypotheses_hold = false;
        self.conclusion_holds = None;
        self.note("hypothesis_failure", Value::String(why.to_string()));
        self
    }

    /// Hypotheses hold and the conclusion was confirmed.
    pub fn confirmed(&self) -> bool {
        self.hypotheses_hold && self.conclusion_holds == Some(true)
    }

    /// The conclusion was evaluated and found false although the hypotheses
    /// held.
    pub fn contradicted(&self) -> bool {
        self.hypotheses_hold && self.conclusion_holds == Some(false)
    }
}

/// Checkable statements, by their command-line identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremId {
    /// Irreducible non-scalar-free semigroups of triangularizable matrices
    /// contain nonzero singular elements.
    SingularElement,
    BurnsideReal,
    BurnsideComplex,
    BurnsideQuaternion,
    /// Finite trace set bounds the cardinality.
    FiniteTraces,
    /// Boundedness of a functional transfers to the semigroup.
    BoundedFunctional,
    /// Closure is unchanged by rescaling and normalized limits.
    ScalarClosure,
    /// The standard embeddings of `C` and `H` are irreducible.
    Embeddings,
}

impl TheoremId {
    pub const ALL: [TheoremId; 8] = [
        TheoremId::SingularElement,
        TheoremId::BurnsideReal,
        TheoremId::BurnsideComplex,
        TheoremId::BurnsideQuaternion,
        TheoremId::FiniteTraces,
        TheoremId::BoundedFunctional,
        TheoremId::ScalarClosure,
        TheoremId::Embeddings,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::SingularElement => "2.2",
            TheoremId::BurnsideReal => "2.3",
            TheoremId::BurnsideComplex => "2.4",
            TheoremId::BurnsideQuaternion => "2.5",
            TheoremId::FiniteTraces => "2.7",
            TheoremId::BoundedFunctional => "2.9",
            TheoremId::ScalarClosure => "lemma2.1",
            TheoremId::Embeddings => "exercise-embeddings",
        }
    }

    /// Whether a semigroup instance must be supplied.
    pub fn needs_instance(self) -> bool {
        self != TheoremId::Embeddings
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| {
            let ids: Vec<&str> = TheoremId::ALL.iter().map(|t| t.as_str()).collect();
            Error::InvalidArgument(format!("unknown theorem id {s:?}; expected one of {}", ids.join(", ")))
        })
    }
}

/// Input for [`verify_theorem`].
#[derive(Clone, Debug, Default)]
pub struct Instance {
    pub spec: Option<SemigroupSpec>,
    /// Defaults to the trace.
    pub functional: Option<FunctionalSpec>,
    /// Longest sampled word for boundedness probes.
    pub max_word_len: Option<usize>,
}

fn require_spec(id: TheoremId, inst: &Instance, domain: Option<Domain>) -> Result<&SemigroupSpec> {
    let spec = inst
        .spec
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument(format!("{id} needs a semigroup instance")))?;
    if let Some(d) = domain {
        if spec.domain != d {
            return Err(Error::Domain { expected: d, found: spec.domain });
        }
    }
    Ok(spec)
}

/// Irreducible, with generators and sampled words triangularizable over `R`.
fn real_triangular_hypotheses(spec: &SemigroupSpec, cfg: &RunConfig, out: &mut VerificationOutcome) -> Option<String> {
    match is_irreducible(spec, cfg.tol, cfg.seed) {
        Ok(r) => {
            out.note("closure_dim", json!(r.closure_dim));
            match r.verdict {
                Irreducibility::Irreducible => {}
                Irreducibility::Reducible(w) => {
                    out.note("witness_dim", json!(w.dim()));
                    return Some("semigroup is reducible".into());
                }
                Irreducibility::Indeterminate(why) => return Some(format!("irreducibility indeterminate: {why}")),
            }
        }
        Err(e) => return Some(format!("irreducibility check failed: {e}")),
    }
    let words = sample_words(spec, 64, cfg.seed);
    for (k, m) in spec.generators.iter().chain(&words).enumerate() {
        match is_triangularizable_central(m, cfg.tol) {
            Ok(true) => {}
            Ok(false) if k < spec.generators.len() => return Some(format!("generator {k} not triangularizable over R")),
            Ok(false) => return Some(format!("sampled word {} not triangularizable over R", k - spec.generators.len())),
            Err(e) => return Some(format!("spectrum computation failed: {e}")),
        }
    }
    None
}

fn verify_singular_element(spec: &SemigroupSpec, cfg: &RunConfig) -> VerificationOutcome {
    let mut out = VerificationOutcome::new(TheoremId::SingularElement.as_str());
    out.note("seed", json!(cfg.seed));
    if let Some(why) = real_triangular_hypotheses(spec, cfg, &mut out) {
        return out.failed_hypothesis(&why);
    }
    out.hypotheses_hold = true;
    match extract_singular(spec, cfg.tol, cfg.max_iter, cfg.seed) {
        Ok(rep) => {
            out.note("rank", json!(rep.rank));
            out.note("span_residual", json!(rep.span_residual));
            out.note("words_sampled", json!(rep.words_sampled));
            out.note("method", json!(format!("{:?}", rep.method)));
            out.conclusion_holds = Some(rep.rank >= 1 && rep.rank < spec.n && rep.span_residual < 1e-6);
        }
        Err(e) => out.note("indeterminate", json!(e.to_string())),
    }
    out
}

fn verify_finite_traces(spec: &SemigroupSpec, cfg: &RunConfig) -> VerificationOutcome {
    let mut out = VerificationOutcome::new(TheoremId::FiniteTraces.as_str());
    let elems = match trace::enumerate_semigroup(&spec.generators, 4096) {
        Ok(e) => e,
        Err(e) => return out.failed_hypothesis(&format!("semigroup could not be enumerated: {e}")),
    };
    match is_irreducible(spec, cfg.tol, cfg.seed) {
        Ok(r) if r.verdict.is_irreducible() => {}
        Ok(_) => return out.failed_hypothesis("semigroup is not irreducible"),
        Err(e) => return out.failed_hypothesis(&format!("irreducibility check failed: {e}")),
    }
    let phi = FunctionalSpec::trace(spec.n);
    let rep = match trace::finiteness_check(&elems, &phi) {
        Ok(r) => r,
        Err(e) => return out.failed_hypothesis(&e.to_string()),
    };
    out.hypotheses_hold = true;
    out.note("elements", json!(rep.elements));
    out.note("distinct_traces", json!(rep.distinct_values));
    out.note("bound", json!(rep.bound));
    // Independent elements form the probe basis; the round trip must be exact.
    let mut basis = Vec::new();
    let mut chosen = Vec::new();
    for e in &elems {
        if push_if_independent(&mut basis, &e.coefficients(), 1e-9) {
            chosen.push(e.clone());
        }
    }
    let exact = trace::build_trace_system(&chosen).map(|sys| {
        elems
            .iter()
            .all(|e| trace::reconstruct_exact(&sys, &sys.probe_exact(e)).is_ok_and(|x| trace::rational_equals(&x, e)))
    });
    out.note("exact_round_trip", json!(exact.as_ref().ok()));
    out.conclusion_holds = Some(rep.holds && exact.unwrap_or(false));
    out
}

fn verify_bounded_functional(spec: &SemigroupSpec, inst: &Instance, cfg: &RunConfig) -> Result<VerificationOutcome> {
    let mut out = VerificationOutcome::new(TheoremId::BoundedFunctional.as_str());
    let phi = inst.functional.clone().unwrap_or_else(|| FunctionalSpec::trace(spec.n));
    let budget = ProbeBudget {
        words: cfg.sample_budget,
        max_len: inst.max_word_len.unwrap_or(ProbeBudget::default().max_len),
    };
    let rep = trace::boundedness_probe(spec, &phi, budget, cfg.tol, cfg.seed)?;
    if let Value::Object(mut m) = serde_json::to_value(&rep).expect("report serializes") {
        m.remove("hypotheses_hold");
        m.remove("hypothesis_failure");
        if let Some(v) = m.remove("conclusion_holds") {
            m.insert("sample_consistent_with_transfer".into(), v);
        }
        out.diagnostics = m;
    }
    out.note("seed", json!(cfg.seed));
    if let Some(why) = &rep.hypothesis_failure {
        return Ok(out.failed_hypothesis(why));
    }
    out.hypotheses_hold = true;
    out.conclusion_holds = Some(rep.conclusion_holds);
    Ok(out)
}

fn verify_scalar_closure(spec: &SemigroupSpec, cfg: &RunConfig) -> Result<VerificationOutcome> {
    let mut out = VerificationOutcome::new(TheoremId::ScalarClosure.as_str());
    let rep = closure_scaling_invariance_check(spec, cfg.tol, cfg.seed)?;
    out.note("base_dim", json!(rep.base_dim));
    out.note("rescaled_dim", json!(rep.rescaled_dim));
    out.note("with_words_dim", json!(rep.with_words_dim));
    out.note("with_limit_dim", json!(rep.with_limit_dim));
    let scales: Vec<f64> = (0..spec.generators.len()).map(|k| [2.0, -3.0, 0.5][k % 3]).collect();
    let a = is_absolutely_irreducible(spec, cfg.tol)?;
    let b = is_absolutely_irreducible(&spec.rescaled(&scales), cfg.tol)?;
    out.note("absolutely_irreducible", json!(a));
    out.hypotheses_hold = true;
    out.conclusion_holds = Some(rep.holds() && a == b);
    Ok(out)
}

/// The three standard embeddings of division-algebra units.
pub fn embedding_exercise_specs() -> Vec<(&'static str, SemigroupSpec, usize)> {
    let complex: Vec<Mat> = [ComplexScalar::new(1.0, 0.0), ComplexScalar::new(0.0, 1.0)]
        .iter()
        .map(|z| embed_block(&Mat::from_complex_rows(&[&[*z]]), EmbedTarget::M2R).expect("1x1"))
        .collect();
    let quat = |t: EmbedTarget| -> Vec<Mat> {
        [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K]
            .iter()
            .map(|q| embed_block(&Mat::from_quaternion_rows(&[&[*q]]), t).expect("1x1"))
            .collect()
    };
    vec![
        ("eps(C) in M2(R)", SemigroupSpec::new(complex, "eps(C)").expect("valid"), 2),
        ("eps'(H) in M2(C)", SemigroupSpec::new(quat(EmbedTarget::M2C), "eps'(H)").expect("valid"), 2),
        ("eps''(H) in M4(R)", SemigroupSpec::new(quat(EmbedTarget::M4R), "eps''(H)").expect("valid"), 4),
    ]
}

pub fn verify_embeddings(cfg: &RunConfig) -> VerificationOutcome {
    let mut out = VerificationOutcome::new(TheoremId::Embeddings.as_str());
    out.hypotheses_hold = true;
    let mut all = true;
    for (name, spec, want) in embedding_exercise_specs() {
        let entry = match is_irreducible(&spec, cfg.tol, cfg.seed) {
            Ok(r) => {
                let ok = r.verdict.is_irreducible() && r.commutant_dim == Some(want);
                all &= ok;
                json!({
                    "irreducible": r.verdict.is_irreducible(),
                    "commutant_dim": r.commutant_dim,
                    "expected_commutant_dim": want,
                })
            }
            Err(e) => {
                all = false;
                json!({ "error": e.to_string() })
            }
        };
        out.note(name, entry);
    }
    out.conclusion_holds = Some(all);
    out
}

/// Runs the check for `id` on `inst`.
pub fn verify_theorem(id: TheoremId, inst: &Instance, cfg: &RunConfig) -> Result<VerificationOutcome> {
    cfg.validate()?;
    match id {
        TheoremId::SingularElement => Ok(verify_singular_element(require_spec(id, inst, Some(Domain::R))?, cfg)),
        TheoremId::BurnsideReal => Ok(verify_burnside_theorem(require_spec(id, inst, Some(Domain::R))?, cfg.tol, cfg.seed)),
        TheoremId::BurnsideComplex => Ok(verify_burnside_theorem(require_spec(id, inst, Some(Domain::C))?, cfg.tol, cfg.seed)),
        TheoremId::BurnsideQuaternion => {
            Ok(verify_burnside_theorem(require_spec(id, inst, Some(Domain::H))?, cfg.tol, cfg.seed))
        }
        TheoremId::FiniteTraces => Ok(verify_finite_traces(require_spec(id, inst, Some(Domain::R))?, cfg)),
        TheoremId::BoundedFunctional => verify_bounded_functional(require_spec(id, inst, Some(Domain::R))?, inst, cfg),
        TheoremId::ScalarClosure => verify_scalar_closure(require_spec(id, inst, None)?, cfg),
        TheoremId::Embeddings => Ok(verify_embeddings(cfg)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{gen_rank_one_family, gen_totally_positive};

    fn with(spec: SemigroupSpec) -> Instance {
        Instance { spec: Some(spec), ..Instance::default() }
    }

    #[test]
    fn ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
        }
        assert!("2.6".parse::<TheoremId>().is_err());
    }

    #[test]
    fn burnside_on_rank_one_family() {
        let cfg = RunConfig { seed: 7, ..RunConfig::default() };
        let out = verify_theorem(TheoremId::BurnsideReal, &with(gen_rank_one_family(4, 7).unwrap()), &cfg).unwrap();
        assert!(out.confirmed());
    }

    #[test]
    fn rotation_fails_hypotheses() {
        let rot = Mat::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let spec = SemigroupSpec::new(vec![rot], "rot").unwrap();
        let out = verify_theorem(TheoremId::BurnsideReal, &with(spec), &RunConfig::default()).unwrap();
        assert!(!out.hypotheses_hold && out.conclusion_holds.is_none());
    }

    #[test]
    fn wrong_domain_is_an_error() {
        let out = verify_theorem(TheoremId::BurnsideComplex, &with(gen_rank_one_family(2, 0).unwrap()), &RunConfig::default());
        assert!(matches!(out, Err(Error::Domain { .. })));
        assert!(verify_theorem(TheoremId::BurnsideReal, &Instance::default(), &RunConfig::default()).is_err());
    }

    #[test]
    fn singular_element_and_scalar_closure() {
        let cfg = RunConfig { seed: 3, ..RunConfig::default() };
        let tp = gen_totally_positive(3, 3).unwrap();
        assert!(verify_theorem(TheoremId::SingularElement, &with(tp.clone()), &cfg).unwrap().confirmed());
        assert!(verify_theorem(TheoremId::ScalarClosure, &with(tp), &cfg).unwrap().confirmed());
    }

    #[test]
    fn finite_traces_on_matrix_units() {
        let spec = SemigroupSpec::new(trace::matrix_unit_generators(2), "units").unwrap();
        let out = verify_theorem(TheoremId::FiniteTraces, &with(spec), &RunConfig::default()).unwrap();
        assert!(out.confirmed(), "{out:?}");
        assert_eq!(out.diagnostics["elements"], json!(5));
        assert_eq!(out.diagnostics["bound"], json!("16"));
    }

    #[test]
    fn counterexample_fails_hypotheses() {
        let (spec, phi) = trace::paper_counterexample();
        let inst = Instance { spec: Some(spec), functional: Some(phi), max_word_len: Some(trace::COUNTEREXAMPLE_MAX_LEN) };
        let out = verify_theorem(TheoremId::BoundedFunctional, &inst, &RunConfig::default()).unwrap();
        assert!(!out.hypotheses_hold);
        let why = out.diagnostics["hypothesis_failure"].as_str().unwrap();
        assert!(why.contains("not triangularizable"), "{why}");
    }

    #[test]
    fn embeddings_exercise() {
        let out = verify_embeddings(&RunConfig::default());
        assert!(out.confirmed(), "{out:?}");
    }
}
