//! Structure of a Hopf algebroid: primitives, grouplikes, the spectral
//! groupoid and its action on the primitives, the comparison map
//! `Θ: Gsp(A)⋉U(𝔟(Prim A)) → A`, and the decision whether `Θ` is an
//! isomorphism.

mod cgk;
mod grouplikes;
mod operators;
mod primitives;
mod propositions;
mod spectral;
mod theta;

use thiserror::Error;

pub use cgk::{
    cgk_decide, cgk_pipeline, CgkError, CgkOutcome, CgkReport, Hypothesis, SpectralSummary, Stage, ThetaSummary,
    Verdict, DEFAULT_THETA_SAMPLES,
};
pub use grouplikes::{is_grouplike_at, solve_grouplikes, solve_grouplikes_at, Grouplike, TABLE_SOLVER_DIM_LIMIT};
pub use operators::{build_prim_action, d_span, t_operator, GoodPair};
pub use primitives::{is_primitive, prim_bundle, solve_primitives, PrimBasis, PrimFlags};
pub use propositions::{proposition_suite, PropositionCheck, PropositionReport};
pub use spectral::{build_spectral_groupoid, spectral_from_grouplikes, SpectralGroupoid};
pub use theta::{build_theta, ThetaChecks, ThetaMap, ThetaPoint};

use crate::algebroid::AlgebroidError;
use crate::groupoid::{GroupoidError, GroupoidReport};
use crate::lie::{ActionViolation, LieError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("grouplike solver incomplete at {point}: {reason}")]
    SolverIncomplete { point: String, reason: String },
    #[error("not a good pair: {0}")]
    NotAGoodPair(String),
    #[error("rank mismatch along {arrow}: {detail}")]
    RankMismatch { arrow: String, detail: String },
    #[error("truncation N = {truncation} too small while {context}; N = {needed} suffices")]
    TruncationOverflow {
        needed: u32,
        truncation: u32,
        context: String,
    },
    #[error("the source of {element} is not determined by its anchor")]
    SourceUndetermined { element: String },
    #[error("the unit 1_{point} is not among the grouplikes at {point}")]
    MissingUnit { point: String },
    #[error("{g} * {h} = {product} is not a grouplike")]
    CompositionLeavesGrouplikes { g: String, h: String, product: String },
    #[error("Prim at {point} is not closed under the commutator")]
    PrimNotClosed { point: String },
    #[error("Θ sends a basis vector over {point} outside A_{point}")]
    ThetaOffFiber { point: String },
    #[error("spectral arrows violate the groupoid laws: {0}")]
    SpectralNotGroupoid(GroupoidReport),
    #[error("reconstructed action is invalid: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidAction(Vec<ActionViolation>),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Lie(#[from] LieError),
}
