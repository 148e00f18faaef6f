//! `burnside`: command-line access to closures, irreducibility, classification,
//! trace reconstruction and theorem verifiers.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use burnside_core::classify::{canonical_similarity, classify};
use burnside_core::io::{self, GenParams, OutputFormat, RunConfig};
use burnside_core::matlin;
use burnside_core::semigroup::{algebra_closure, is_irreducible, Irreducibility, SemigroupSpec};
use burnside_core::trace::{self, FunctionalSpec};
use burnside_core::verify::{verify_theorem, Instance, TheoremId};
use burnside_core::{Domain, EmbedTarget, Error, Mat, MatrixFile, DEFAULT_TOL};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

const EXIT_USAGE: u8 = 1;
const EXIT_INDETERMINATE: u8 = 2;
const EXIT_INCONSISTENT: u8 = 3;

#[derive(Parser)]
#[command(name = "burnside", version, about = "Semigroup-generated real matrix algebras")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Global {
    /// Relative tolerance for rank and dependence decisions.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 4096)]
    max_iter: usize,
    /// Cap on the closure dimension.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// Number of sampled words for probes.
    #[arg(long, global = true, default_value_t = 200)]
    budget: usize,
    /// `text` or `json`.
    #[arg(long, global = true, default_value = "text")]
    output: OutputFormat,
}

/// A semigroup from matrix files, a named generator or a fixture.
#[derive(Args)]
struct Source {
    /// Matrix files (one matrix or an array of matrices each).
    files: Vec<PathBuf>,
    /// rank-one, canonical, totally-positive, matrix-units, signed-units, dihedral.
    #[arg(long, conflicts_with = "fixture")]
    gen: Option<String>,
    /// paper-counterexample or counterexample-literal.
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Division algebra of a canonical instance.
    #[arg(long, default_value = "R")]
    kind: Domain,
    /// Ambient domain of a canonical instance.
    #[arg(long, default_value = "R")]
    ambient: Domain,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a standard block embedding to a matrix file.
    Embed {
        file: PathBuf,
        /// M2R (C to real 2x2), M2C (H to complex 2x2) or M4R (H to real 4x4).
        #[arg(long)]
        target: EmbedTarget,
    },
    /// Eigenvalues (right eigenvalue representatives over H).
    Eigs { file: PathBuf },
    /// Real dimension of the algebra spanned by the semigroup.
    Closure {
        #[command(flatten)]
        source: Source,
        /// Also print an orthonormal basis.
        #[arg(long)]
        basis: bool,
    },
    /// Irreducibility verdict with an invariant-subspace witness.
    Irreducible {
        #[command(flatten)]
        source: Source,
    },
    /// Classify the algebra as real, complex or quaternionic type.
    Classify {
        #[command(flatten)]
        source: Source,
    },
    /// Similarity making a real-type algebra real.
    Canonicalize {
        #[command(flatten)]
        source: Source,
    },
    /// Reconstruct a matrix from trace probes against a basis.
    TraceRecon {
        #[command(flatten)]
        source: Source,
        /// Matrix whose probe values are reconstructed.
        #[arg(long, conflicts_with = "values")]
        probe: Option<PathBuf>,
        /// Probe values, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values: Vec<f64>,
        /// Rational arithmetic on the binary values of the inputs.
        #[arg(long)]
        exact: bool,
    },
    /// Check hypotheses and conclusion of a theorem on an instance.
    Verify {
        /// 2.2, 2.3, 2.4, 2.5, 2.7, 2.9, lemma2.1 or exercise-embeddings.
        theorem: TheoremId,
        #[command(flatten)]
        source: Source,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Indeterminate(_) | Error::Numerical(_) | Error::AmbiguousDegree { .. } | Error::Singular { .. } => {
                EXIT_INDETERMINATE
            }
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn read_matrices(path: &PathBuf) -> Result<Vec<Mat>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    io::parse_matrices(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_one(path: &PathBuf) -> Result<Mat, Failure> {
    let mut ms = read_matrices(path)?;
    if ms.len() != 1 {
        return Err(usage(format!("{}: expected one matrix, found {}", path.display(), ms.len())));
    }
    Ok(ms.remove(0))
}

/// The instance and, for fixtures, its functional.
fn load(source: &Source, seed: u64) -> Result<(SemigroupSpec, Option<FunctionalSpec>), Failure> {
    let chosen = [!source.files.is_empty(), source.gen.is_some(), source.fixture.is_some()];
    if chosen.iter().filter(|c| **c).count() != 1 {
        return Err(usage("give matrix files, --gen or --fixture (exactly one)"));
    }
    if let Some(name) = &source.fixture {
        let (spec, phi) = io::named_fixture(name)?;
        return Ok((spec, Some(phi)));
    }
    if let Some(name) = &source.gen {
        let p = GenParams { n: source.n, kind: source.kind, ambient: source.ambient, seed };
        return Ok((io::named_instance(name, p)?, None));
    }
    let mut gens = Vec::new();
    for f in &source.files {
        gens.extend(read_matrices(f)?);
    }
    let label = source.files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>().join(" ");
    Ok((SemigroupSpec::new(gens, label)?, None))
}

fn config(g: &Global) -> Result<RunConfig, Failure> {
    let cfg = RunConfig {
        tol: g.tol,
        seed: g.seed,
        max_iter: g.max_iter,
        max_dim: g.max_dim,
        sample_budget: g.budget,
        output: g.output,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Prints either the JSON value or the text rendering.
fn emit(cfg: &RunConfig, value: &Value, text: impl FnOnce() -> String) {
    match cfg.output {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable")),
        OutputFormat::Text => print!("{}", text()),
    }
}

fn matrix_json(m: &Mat) -> Value {
    serde_json::to_value(MatrixFile::from_mat(m)).expect("serializable")
}

fn cmd_embed(cfg: &RunConfig, file: &PathBuf, target: EmbedTarget) -> Result<u8, Failure> {
    let m = read_one(file)?;
    let out = burnside_core::embed_block(&m, target)?;
    emit(cfg, &matrix_json(&out), || format!("{out}\n"));
    Ok(0)
}

fn cmd_eigs(cfg: &RunConfig, file: &PathBuf) -> Result<u8, Failure> {
    let m = read_one(file)?;
    let s = matlin::spectrum(&m)?;
    let real = matlin::is_triangularizable_central(&m, cfg.tol)?;
    let value = json!({
        "field": m.domain(),
        "values": s.values.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "spectral_radius": s.radius,
        "real_spectrum": real,
    });
    emit(cfg, &value, || {
        let mut t = String::new();
        for z in &s.values {
            t += &format!("{:.12} {:+.12}i\n", z.re, z.im);
        }
        t + &format!("spectral radius {:.12}\nreal spectrum: {real}\n", s.radius)
    });
    Ok(0)
}

fn cmd_closure(cfg: &RunConfig, source: &Source, with_basis: bool) -> Result<u8, Failure> {
    let (spec, _) = load(source, cfg.seed)?;
    let rep = algebra_closure(&spec, cfg.tol, cfg.max_dim)?;
    let mut value = json!({
        "field": spec.domain,
        "n": spec.n,
        "dim": rep.basis.dim(),
        "ambient_dim": spec.ambient_dim(),
        "saturated": rep.saturated,
        "rounds": rep.rounds,
        "products_tested": rep.products_tested,
    });
    if with_basis {
        value["basis"] = rep.basis.elements().iter().map(matrix_json).collect();
    }
    emit(cfg, &value, || {
        let mut t = format!(
            "dim {} of {} (saturated: {}, rounds {}, products {})\n",
            rep.basis.dim(),
            spec.ambient_dim(),
            rep.saturated,
            rep.rounds,
            rep.products_tested
        );
        if with_basis {
            for b in rep.basis.elements() {
                t += &format!("{b}\n");
            }
        }
        t
    });
    Ok(if rep.saturated { 0 } else { EXIT_INDETERMINATE })
}

fn cmd_irreducible(cfg: &RunConfig, source: &Source) -> Result<u8, Failure> {
    let (spec, _) = load(source, cfg.seed)?;
    let rep = is_irreducible(&spec, cfg.tol, cfg.seed)?;
    let (verdict, detail, code) = match &rep.verdict {
        Irreducibility::Irreducible => ("irreducible", Value::Null, 0),
        Irreducibility::Reducible(w) => (
            "reducible",
            json!({
                "dim": w.dim(),
                "vectors": w.vectors().iter().map(matrix_json).collect::<Vec<_>>(),
                "residual": w.residual(&spec.generators),
            }),
            0,
        ),
        Irreducibility::Indeterminate(why) => ("indeterminate", json!(why), EXIT_INDETERMINATE),
    };
    let value = json!({
        "verdict": verdict,
        "closure_dim": rep.closure_dim,
        "commutant_dim": rep.commutant_dim,
        "envelope_dim": rep.envelope_dim,
        "seed": rep.seed,
        "witness": detail,
    });
    emit(cfg, &value, || {
        let mut t = format!("{verdict} (closure dim {}, commutant dim {:?})\n", rep.closure_dim, rep.commutant_dim);
        match &rep.verdict {
            Irreducibility::Reducible(w) => t += &format!("{w}\n"),
            Irreducibility::Indeterminate(why) => t += &format!("{why}\n"),
            Irreducibility::Irreducible => {}
        }
        t
    });
    Ok(code)
}

fn cmd_classify(cfg: &RunConfig, source: &Source, canonicalize: bool) -> Result<u8, Failure> {
    let (spec, _) = load(source, cfg.seed)?;
    let rep = classify(&spec, cfg.tol, cfg.seed)?;
    let mut value = serde_json::to_value(&rep).expect("serializable");
    let mut text = format!(
        "kind {} (r = {}, m = {}, dim {}, corner dim {}, seed {})\n",
        rep.kind, rep.minimal_rank, rep.block_count, rep.dim, rep.delta_dim, rep.seed
    );
    if canonicalize {
        let basis = algebra_closure(&spec, cfg.tol, None)?.basis;
        let sim = canonical_similarity(&rep, &basis, cfg.tol, cfg.seed)?;
        value["similarity"] = matrix_json(&sim.p);
        value["similarity_residual"] = json!(sim.residual);
        text += &format!("P =\n{}\nresidual {:.3e}\n", sim.p, sim.residual);
    }
    emit(cfg, &value, || text);
    Ok(0)
}

fn cmd_trace_recon(
    cfg: &RunConfig,
    source: &Source,
    probe: Option<&PathBuf>,
    values: &[f64],
    exact: bool,
) -> Result<u8, Failure> {
    let (spec, _) = load(source, cfg.seed)?;
    let sys = trace::build_trace_system(&spec.generators)?;
    let target = probe.map(read_one).transpose()?;
    let y = match &target {
        Some(x) => sys.probe(x)?,
        None if values.is_empty() => return Err(usage("give --probe or --values")),
        None => values.to_vec(),
    };
    let x = trace::reconstruct(&sys, &y)?;
    let mut value = json!({ "condition": sys.condition, "matrix": matrix_json(&x) });
    let mut text = format!("condition {:.6e}\n{x}\n", sys.condition);
    if let Some(t) = &target {
        let err = x.distance(t);
        value["round_trip_error"] = json!(err);
        text += &format!("round-trip error {err:.3e}\n");
    }
    if exact {
        let ye = match &target {
            Some(t) => sys.probe_exact(t),
            None => y
                .iter()
                .map(|v| exact_value(*v))
                .collect::<Result<Vec<_>, _>>()?,
        };
        let xe = trace::reconstruct_exact(&sys, &ye)?;
        let rows: Vec<Vec<String>> = xe.iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect();
        value["exact"] = json!(rows);
        text += "exact:\n";
        for r in &rows {
            text += &format!("{}\n", r.join(" "));
        }
        if let Some(t) = &target {
            let same = trace::rational_equals(&xe, t);
            value["round_trip_exact"] = json!(same);
            text += &format!("exact round trip: {same}\n");
        }
    }
    emit(cfg, &value, || text);
    Ok(0)
}

fn exact_value(v: f64) -> Result<burnside_core::trace::Rational, Failure> {
    burnside_core::trace::rational_from_f64(v).ok_or_else(|| usage(format!("non-finite probe value {v}")))
}

fn cmd_verify(cfg: &RunConfig, theorem: TheoremId, source: &Source) -> Result<u8, Failure> {
    let mut inst = Instance::default();
    if theorem.needs_instance() {
        let (spec, phi) = load(source, cfg.seed)?;
        if phi.is_some() {
            inst.max_word_len = Some(trace::COUNTEREXAMPLE_MAX_LEN);
        }
        inst.spec = Some(spec);
        inst.functional = phi;
    }
    let out = verify_theorem(theorem, &inst, cfg)?;
    let value = serde_json::to_value(&out).expect("serializable");
    emit(cfg, &value, || {
        let conclusion = match out.conclusion_holds {
            Some(b) => b.to_string(),
            None => "not evaluated".into(),
        };
        let mut t = format!("{theorem}: hypotheses hold: {}, conclusion holds: {conclusion}\n", out.hypotheses_hold);
        for (k, v) in &out.diagnostics {
            t += &format!("  {k}: {v}\n");
        }
        t
    });
    Ok(if out.contradicted() {
        EXIT_INCONSISTENT
    } else if out.hypotheses_hold && out.conclusion_holds.is_none() {
        EXIT_INDETERMINATE
    } else {
        0
    })
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = config(&cli.global)?;
    match &cli.cmd {
        Command::Embed { file, target } => cmd_embed(&cfg, file, *target),
        Command::Eigs { file } => cmd_eigs(&cfg, file),
        Command::Closure { source, basis } => cmd_closure(&cfg, source, *basis),
        Command::Irreducible { source } => cmd_irreducible(&cfg, source),
        Command::Classify { source } => cmd_classify(&cfg, source, false),
        Command::Canonicalize { source } => cmd_classify(&cfg, source, true),
        Command::TraceRecon { source, probe, values, exact } => {
            cmd_trace_recon(&cfg, source, probe.as_ref(), values, *exact)
        }
        Command::Verify { theorem, source } => cmd_verify(&cfg, *theorem, source),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
