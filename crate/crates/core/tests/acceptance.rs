//! Acceptance criteria with their tolerances and wall-clock budgets. Prints
//! one line per criterion and exits nonzero if any fails.

use std::time::Instant;

use burnside_core::classify::{canonical_similarity, classify};
use burnside_core::matlin::{self, is_triangularizable_central};
use burnside_core::semigroup::{
    algebra_closure, canonical_block, closure_scaling_invariance_check, extract_singular, gen_conjugated_canonical,
    gen_rank_one_family, gen_totally_positive, is_irreducible, sample_words,
};
use burnside_core::trace::{
    self, build_sandwich_system, build_trace_system, cardinality_bound, enumerate_semigroup, matrix_unit_generators,
    paper_counterexample, FunctionalSpec, ProbeBudget,
};
use burnside_core::verify::embedding_exercise_specs;
use burnside_core::{embed_block, embed_c_m2r, embed_h_m2c, embed_h_m4r, quat_mul};
use burnside_core::{ComplexScalar, Domain, EmbedTarget, Mat, Quaternion, DEFAULT_TOL};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    use rand::Rng;
    rng.sample(rand_distr::StandardNormal)
}

/// Additive and multiplicative homomorphism residuals of the scalar and block
/// embeddings.
fn ac1() -> Outcome {
    use nalgebra::{Matrix2, Matrix4};
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let r2 = |z: ComplexScalar| {
        let a = embed_c_m2r(z);
        Matrix2::new(a[0][0], a[0][1], a[1][0], a[1][1])
    };
    let c2 = |q: Quaternion| {
        let a = embed_h_m2c(q);
        Matrix2::new(a[0][0], a[0][1], a[1][0], a[1][1])
    };
    let r4 = |q: Quaternion| Matrix4::from_fn(|i, j| embed_h_m4r(q)[i][j]);
    let mut worst = [0.0f64; 3];
    for _ in 0..1000 {
        let (z, w) = (
            ComplexScalar::new(normal(&mut rng), normal(&mut rng)),
            ComplexScalar::new(normal(&mut rng), normal(&mut rng)),
        );
        worst[0] = worst[0].max((r2(z + w) - r2(z) - r2(w)).norm()).max((r2(z * w) - r2(z) * r2(w)).norm());
        let p = Quaternion::random(&mut rng);
        let q = Quaternion::random(&mut rng);
        worst[1] = worst[1].max((c2(p + q) - c2(p) - c2(q)).norm()).max((c2(quat_mul(p, q)) - c2(p) * c2(q)).norm());
        worst[2] = worst[2].max((r4(p + q) - r4(p) - r4(q)).norm()).max((r4(quat_mul(p, q)) - r4(p) * r4(q)).norm());
    }
    let mut block = [0.0f64; 3];
    for (k, target) in [EmbedTarget::M2R, EmbedTarget::M2C, EmbedTarget::M4R].into_iter().enumerate() {
        for n in 1..=4 {
            for _ in 0..100 {
                let a = Mat::random(target.source(), n, n, &mut rng);
                let b = Mat::random(target.source(), n, n, &mut rng);
                let e = |m: &Mat| embed_block(m, target).unwrap();
                let add = e(&a.mat_add(&b).unwrap()).distance(&e(&a).mat_add(&e(&b)).unwrap());
                let mul = e(&a.mat_mul(&b).unwrap()).distance(&e(&a).mat_mul(&e(&b)).unwrap());
                block[k] = block[k].max(add).max(mul);
            }
        }
    }
    let all = worst.iter().chain(&block).fold(0.0f64, |m, x| m.max(*x));
    check(all < 1e-12, || format!("scalar residuals {worst:?}, block residuals {block:?}"))?;
    Ok(format!("max residual {all:.1e} over 3000 scalar and 1200 matrix pairs"))
}

/// The three standard embeddings are irreducible with commutants of real
/// dimension 2, 2, 4.
fn ac2() -> Outcome {
    let mut dims = Vec::new();
    for (name, spec, want) in embedding_exercise_specs() {
        let rep = is_irreducible(&spec, DEFAULT_TOL, 0).map_err(|e| format!("{name}: {e}"))?;
        check(rep.verdict.is_irreducible(), || format!("{name}: {:?}", rep.verdict))?;
        check(rep.commutant_dim == Some(want), || format!("{name}: commutant {:?}, want {want}", rep.commutant_dim))?;
        dims.push(want);
    }
    Ok(format!("irreducible, commutant dims {dims:?}"))
}

/// Rank-one families: irreducible, sampled words triangularizable with real
/// spectrum, closure all of `M_n(R)`.
fn ac3() -> Outcome {
    let mut words = 0;
    for n in 2..=6 {
        for seed in 0..50 {
            let spec = gen_rank_one_family(n, seed).map_err(|e| e.to_string())?;
            let rep = is_irreducible(&spec, DEFAULT_TOL, seed).map_err(|e| e.to_string())?;
            check(rep.verdict.is_irreducible(), || format!("n={n} seed={seed}: {:?}", rep.verdict))?;
            check(rep.closure_dim == n * n, || format!("n={n} seed={seed}: closure dim {}", rep.closure_dim))?;
            for (k, w) in sample_words(&spec, 32, seed).iter().enumerate() {
                let ok = is_triangularizable_central(w, DEFAULT_TOL).map_err(|e| e.to_string())?
                    && matlin::has_real_spectrum(w, 1e-8).map_err(|e| e.to_string())?;
                check(ok, || format!("n={n} seed={seed}: word {k} has non-real spectrum"))?;
                words += 1;
            }
        }
    }
    Ok(format!("250 instances, {words} sampled words"))
}

/// Largest `n` per ambient domain for the classifier sweep.
fn max_n(ambient: Domain) -> usize {
    match ambient {
        Domain::R => 8,
        Domain::C => AMBIENT_C_MAX_N,
        Domain::H => 4,
    }
}

/// No range is stated for ambient `C`; `n ≤ 6` keeps the sweep well inside its
/// budget (`n ≤ 8` passes too, at roughly half the budget).
const AMBIENT_C_MAX_N: usize = 6;

/// Expected `(r, dim)` of the canonical `M_m(kind)` in `M_n(ambient)`.
fn expected_shape(kind: Domain, ambient: Domain, n: usize) -> (usize, usize) {
    let r = match (ambient, kind) {
        (Domain::R, k) => k.real_dim(),
        (Domain::C, Domain::H) => 2,
        _ => 1,
    };
    (r, kind.real_dim() * (n / r) * (n / r))
}

/// Classifier on every valid canonical triple, 25 seeds each.
fn ac4() -> Outcome {
    let mut count = 0;
    for ambient in [Domain::R, Domain::C, Domain::H] {
        for kind in [Domain::R, Domain::C, Domain::H] {
            let block = canonical_block(kind, ambient);
            for n in (block..=max_n(ambient)).step_by(block) {
                let (r, dim) = expected_shape(kind, ambient, n);
                if ambient == Domain::R {
                    let table = match kind {
                        Domain::R => n * n,
                        Domain::C => n * n / 2,
                        Domain::H => n * n / 4,
                    };
                    check(dim == table, || format!("table mismatch for {kind} n={n}"))?;
                }
                for seed in 0..25 {
                    let spec = gen_conjugated_canonical(kind, ambient, n, seed).map_err(|e| e.to_string())?;
                    let rep = classify(&spec, DEFAULT_TOL, seed)
                        .map_err(|e| format!("kind {kind} ambient {ambient} n={n} seed={seed}: {e}"))?;
                    let got = (rep.kind, rep.minimal_rank, rep.dim);
                    check(got == (kind, r, dim), || {
                        format!("kind {kind} ambient {ambient} n={n} seed={seed}: got {got:?}, want {:?}", (kind, r, dim))
                    })?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} instances classified correctly"))
}

/// Kind-`R` algebras in `M_n(C)` (n ≤ 5) and `M_n(H)` (n ≤ 3) are made real by
/// the recovered similarity.
fn ac5() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for (ambient, top) in [(Domain::C, 5), (Domain::H, 3)] {
        for n in 1..=top {
            for seed in 0..25 {
                let spec = gen_conjugated_canonical(Domain::R, ambient, n, seed).map_err(|e| e.to_string())?;
                let ctx = || format!("ambient {ambient} n={n} seed={seed}");
                let rep = classify(&spec, DEFAULT_TOL, seed).map_err(|e| format!("{}: {e}", ctx()))?;
                let basis = algebra_closure(&spec, DEFAULT_TOL, None).map_err(|e| e.to_string())?.basis;
                let sim = canonical_similarity(&rep, &basis, DEFAULT_TOL, seed).map_err(|e| format!("{}: {e}", ctx()))?;
                check(sim.residual < 1e-6, || format!("{}: residual {:.3e}", ctx(), sim.residual))?;
                worst = worst.max(sim.residual);
                count += 1;
            }
        }
    }
    Ok(format!("{count} instances, max imaginary residual {worst:.1e}"))
}

/// Singular elements from irreducible semigroups of matrices with real,
/// distinct spectra.
fn ac6() -> Outcome {
    let mut ranks = Vec::new();
    for seed in 0..20u64 {
        let n = 2 + (seed as usize % 3);
        let spec = gen_totally_positive(n, seed).map_err(|e| e.to_string())?;
        let ctx = || format!("n={n} seed={seed}");
        check(is_irreducible(&spec, DEFAULT_TOL, seed).map_err(|e| e.to_string())?.verdict.is_irreducible(), || {
            format!("{}: not irreducible", ctx())
        })?;
        for w in spec.generators.iter().chain(&sample_words(&spec, 32, seed)) {
            check(is_triangularizable_central(w, DEFAULT_TOL).map_err(|e| e.to_string())?, || {
                format!("{}: member not triangularizable", ctx())
            })?;
        }
        let rep = extract_singular(&spec, DEFAULT_TOL, 4096, seed).map_err(|e| format!("{}: {e}", ctx()))?;
        let m = &rep.matrix;
        let basis = algebra_closure(&spec, DEFAULT_TOL, None).map_err(|e| e.to_string())?.basis;
        let residual = basis.residual(m) / m.frobenius_norm();
        let rank = matlin::rank(m, 1e-7);
        check(m.frobenius_norm() > 0.0 && rank >= 1 && rank < n, || format!("{}: rank {rank}", ctx()))?;
        check(residual < 1e-6, || format!("{}: span residual {residual:.3e}", ctx()))?;
        ranks.push(rank);
    }
    Ok(format!("20 instances, ranks {ranks:?}"))
}

/// Matrix-unit semigroup: exact plain and sandwich round trips, and the
/// cardinality bound.
fn ac7() -> Outcome {
    let elems = enumerate_semigroup(&matrix_unit_generators(2), 64).map_err(|e| e.to_string())?;
    check(elems.len() == 5, || format!("{} elements", elems.len()))?;
    let rep = trace::finiteness_check(&elems, &FunctionalSpec::trace(2)).map_err(|e| e.to_string())?;
    check(rep.distinct_values == 2, || format!("k = {}", rep.distinct_values))?;
    check(cardinality_bound(2, 2) == BigUint::from(16u32) && rep.holds, || "bound".into())?;
    let plain = build_trace_system(&matrix_unit_generators(2)).map_err(|e| e.to_string())?;
    let e = |i, j| Mat::unit(Domain::R, 2, i, j);
    let pairs: Vec<(Mat, Mat)> = (0..2).flat_map(|i| (0..2).map(move |j| (e(i, 0), e(0, j)))).collect();
    let sandwich = build_sandwich_system(&pairs, &e(0, 0)).map_err(|e| e.to_string())?;
    check(sandwich.condition.is_finite(), || "sandwich system singular".into())?;
    for sys in [&plain, &sandwich] {
        for s in &elems {
            let x = trace::reconstruct_exact(sys, &sys.probe_exact(s)).map_err(|e| e.to_string())?;
            check(trace::rational_equals(&x, s), || format!("round trip failed on {s}"))?;
        }
    }
    Ok("|S| = 5 <= 2^4 = 16; plain and sandwich (T = E11) systems exact on all 5 elements".into())
}

/// The vanishing functional on the `m·ε(i)` semigroup, the failing hypothesis,
/// and an unbounded instance where the functional is unbounded too.
fn ac8() -> Outcome {
    let (spec, phi) = paper_counterexample();
    let words = trace::sample_short_words(&spec, 200, trace::COUNTEREXAMPLE_MAX_LEN, 8);
    let max_norm = words.iter().map(Mat::frobenius_norm).fold(0.0, f64::max);
    for w in &words {
        check(phi.eval_exact(w) == num_rational::BigRational::from_integer(0.into()), || format!("phi({w}) != 0"))?;
        check(phi.eval(w).abs() < 1e-12, || "floating phi nonzero".into())?;
    }
    check(max_norm > 1e3, || format!("max norm {max_norm}"))?;
    let budget = ProbeBudget { words: 200, max_len: trace::COUNTEREXAMPLE_MAX_LEN };
    let rep = trace::boundedness_probe(&spec, &phi, budget, DEFAULT_TOL, 8).map_err(|e| e.to_string())?;
    let why = rep.hypothesis_failure.clone().unwrap_or_default();
    check(!rep.hypotheses_hold && why.contains("generator 0 not triangularizable"), || format!("diagnostic {why:?}"))?;
    let eig = matlin::eigenvalues(&spec.generators[0]).map_err(|e| e.to_string())?.values;
    check(eig.iter().all(|z| z.re.abs() < 1e-12 && (z.im.abs() - 1.0).abs() < 1e-12), || format!("spectrum {eig:?}"))?;
    check(rep.norm_unbounded && !rep.phi_unbounded && rep.consistent, || format!("{rep:?}"))?;

    let family = gen_rank_one_family(3, 8).map_err(|e| e.to_string())?;
    let scaled = family.rescaled(&vec![2.0; family.generators.len()]);
    let rep2 = trace::boundedness_probe(&scaled, &FunctionalSpec::trace(3), ProbeBudget::default(), DEFAULT_TOL, 8)
        .map_err(|e| e.to_string())?;
    check(rep2.hypotheses_hold && rep2.norm_unbounded && rep2.phi_unbounded && rep2.consistent, || format!("{rep2:?}"))?;
    Ok(format!(
        "phi = 0 exactly on 200 words, max norm {max_norm:.3e}; {why}; scaled rank-one family: max |phi| {:.2e}",
        rep2.max_abs_phi
    ))
}

/// Closure dimension unchanged by rescaling generators and by adjoining
/// normalized words and singular limits.
fn ac9() -> Outcome {
    let mut limits = 0;
    for seed in 0..20u64 {
        let n = 2 + (seed as usize % 3);
        let spec = match seed % 4 {
            0 | 1 => gen_totally_positive(n, seed),
            2 => gen_rank_one_family(n, seed),
            _ => gen_conjugated_canonical(Domain::C, Domain::R, 4, seed),
        }
        .map_err(|e| e.to_string())?;
        let rep = closure_scaling_invariance_check(&spec, DEFAULT_TOL, seed).map_err(|e| format!("seed {seed}: {e}"))?;
        check(rep.holds(), || format!("seed {seed}: {rep:?}"))?;
        limits += usize::from(rep.with_limit_dim.is_some());
    }
    Ok(format!("20 instances invariant ({limits} with a singular limit adjoined)"))
}

type Criterion = (&'static str, &'static str, fn() -> Outcome, f64);

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1", "embedding homomorphisms", ac1, 5.0),
        ("AC2", "standard embeddings irreducible", ac2, 1.0),
        ("AC3", "rank-one families span M_n(R)", ac3, 60.0),
        ("AC4", "classifier on canonical instances", ac4, 120.0),
        ("AC5", "real-kind similarity", ac5, 120.0),
        ("AC6", "singular element extraction", ac6, 60.0),
        ("AC7", "trace systems on matrix units", ac7, 1.0),
        ("AC8", "vanishing functional regression", ac8, 5.0),
        ("AC9", "closure invariance", ac9, 10.0),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, name, run, budget) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| id.contains(f.as_str()) || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match result {
            Ok(d) if secs < budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "{id} {} {name} ({secs:.2} s, budget {budget} s): {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
