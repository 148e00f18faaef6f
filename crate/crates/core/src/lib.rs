//! Semigroup-generated real algebras of real, complex and quaternionic
//! matrices.
//!
//! The crate computes `Alg_R(S)` for a finitely generated matrix semigroup,
//! decides irreducibility, classifies irreducible real algebras as real,
//! complex or quaternionic type and recovers explicit similarities to
//! canonical form. Burnside-type spanning statements, trace reconstruction and
//! boundedness transfer are exposed as verifiers that check hypotheses and
//! conclusions on concrete instances.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod io;
pub mod mat;
pub mod matlin;
mod numeric;
pub mod poly;
pub mod scalar;
pub mod semigroup;
pub mod trace;
pub mod verify;

pub use algebra::AlgebraBasis;
pub use classify::{classify, ClassificationReport};
pub use error::{Error, Result};
pub use io::{MatrixFile, RunConfig};
pub use mat::{complex_adjoint, embed_block, Domain, EmbedTarget, Mat};
pub use matlin::Spectrum;
pub use poly::Polynomial;
pub use semigroup::{Irreducibility, SemigroupSpec};
pub use trace::{FunctionalSpec, TraceSystem};
pub use verify::{TheoremId, VerificationOutcome};
pub use scalar::{embed_c_m2r, embed_h_m2c, embed_h_m4r, quat_mul, ComplexScalar, Quaternion};

/// Default relative tolerance for rank, dependence and reality decisions.
pub const DEFAULT_TOL: f64 = 1e-9;
