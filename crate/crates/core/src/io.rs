//! JSON matrix files, run configuration and named instances.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::{Domain, Mat};
use crate::scalar::Quaternion;
use crate::semigroup::{self, SemigroupSpec};
use crate::trace;

/// One matrix entry; the arity must match the field tag.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
    Quaternion([f64; 4]),
}

impl Entry {
    fn arity(&self) -> usize {
        match self {
            Entry::Real(_) => 1,
            Entry::Complex(_) => 2,
            Entry::Quaternion(_) => 4,
        }
    }

    fn to_quaternion(self) -> Quaternion {
        match self {
            Entry::Real(a) => Quaternion::real(a),
            Entry::Complex([a, b]) => Quaternion::new(a, b, 0.0, 0.0),
            Entry::Quaternion([a, b, c, d]) => Quaternion::new(a, b, c, d),
        }
    }
}

/// `{"field": "R"|"C"|"H", "n_rows", "n_cols", "entries": [[...], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub field: Domain,
    pub n_rows: usize,
    pub n_cols: usize,
    pub entries: Vec<Vec<Entry>>,
}

impl MatrixFile {
    pub fn from_mat(m: &Mat) -> MatrixFile {
        let entries = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| {
                        let q = m.get(i, j);
                        match m.domain() {
                            Domain::R => Entry::Real(q.a),
                            Domain::C => Entry::Complex([q.a, q.b]),
                            Domain::H => Entry::Quaternion([q.a, q.b, q.c, q.d]),
                        }
                    })
                    .collect()
            })
            .collect();
        MatrixFile { field: m.domain(), n_rows: m.rows(), n_cols: m.cols(), entries }
    }

    pub fn to_mat(&self) -> Result<Mat> {
        if self.entries.len() != self.n_rows || self.entries.iter().any(|r| r.len() != self.n_cols) {
            return Err(Error::Parse(format!(
                "entries do not form a {}x{} array",
                self.n_rows, self.n_cols
            )));
        }
        let want = self.field.real_dim();
        let mut data = Vec::with_capacity(self.n_rows * self.n_cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if e.arity() != want {
                    return Err(Error::Parse(format!(
                        "entry ({i}, {j}) has {} components, field {} needs {want}",
                        e.arity(),
                        self.field
                    )));
                }
                data.push(e.to_quaternion());
            }
        }
        Mat::from_entries(self.field, self.n_rows, self.n_cols, data)
    }
}

/// Parses one matrix object or an array of them.
pub fn parse_matrices(text: &str) -> Result<Vec<Mat>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(MatrixFile),
        Many(Vec<MatrixFile>),
    }
    let parsed: OneOrMany = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match parsed {
        OneOrMany::One(f) => Ok(vec![f.to_mat()?]),
        OneOrMany::Many(fs) => fs.iter().map(MatrixFile::to_mat).collect(),
    }
}

pub fn to_json(m: &Mat) -> Result<String> {
    serde_json::to_string(&MatrixFile::from_mat(m)).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Parse(format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tol: f64,
    pub seed: u64,
    pub max_iter: usize,
    /// Cap on the closure dimension; `None` means the ambient dimension.
    pub max_dim: Option<usize>,
    pub sample_budget: usize,
    pub output: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: crate::DEFAULT_TOL,
            seed: 0,
            max_iter: 4096,
            max_dim: None,
            sample_budget: 200,
            output: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 || self.sample_budget == 0 || self.max_dim == Some(0) {
            return Err(Error::InvalidArgument("budgets must be positive".into()));
        }
        Ok(())
    }
}

/// Parameters for a named generator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub kind: Domain,
    pub ambient: Domain,
    pub seed: u64,
}

/// Generator names accepted by [`named_instance`].
pub const GENERATOR_NAMES: [&str; 6] = [
    "rank-one",
    "canonical",
    "totally-positive",
    "matrix-units",
    "signed-units",
    "dihedral",
];

/// Builds an instance from a generator name.
pub fn named_instance(name: &str, p: GenParams) -> Result<SemigroupSpec> {
    match name {
        "rank-one" => semigroup::gen_rank_one_family(p.n, p.seed),
        "canonical" => semigroup::gen_conjugated_canonical(p.kind, p.ambient, p.n, p.seed),
        "totally-positive" => semigroup::gen_totally_positive(p.n, p.seed),
        "matrix-units" => SemigroupSpec::new(trace::matrix_unit_generators(p.n), format!("matrix units n={}", p.n)),
        "signed-units" => SemigroupSpec::new(trace::signed_unit_generators(p.n), format!("signed units n={}", p.n)),
        "dihedral" => SemigroupSpec::new(trace::dihedral_generators(), "dihedral group of the square"),
        _ => Err(Error::InvalidArgument(format!(
            "unknown generator {name:?}; expected one of {}",
            GENERATOR_NAMES.join(", ")
        ))),
    }
}

/// Fixture names accepted by [`named_fixture`].
pub const FIXTURE_NAMES: [&str; 2] = ["paper-counterexample", "counterexample-literal"];

/// A fixture semigroup with its functional.
pub fn named_fixture(name: &str) -> Result<(SemigroupSpec, trace::FunctionalSpec)> {
    match name {
        "paper-counterexample" => Ok(trace::paper_counterexample()),
        "counterexample-literal" => Ok((trace::paper_counterexample().0, trace::counterexample_literal_functional())),
        _ => Err(Error::InvalidArgument(format!(
            "unknown fixture {name:?}; expected one of {}",
            FIXTURE_NAMES.join(", ")
        ))),
    }
}
