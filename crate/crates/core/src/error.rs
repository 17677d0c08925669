use thiserror::Error;

use crate::phase::PhaseExp;

/// Everything that can go wrong in the engine, verifier, and oracles.
#[derive(Debug, Error)]
pub enum Error {
    #[error("a degree-of-freedom system needs at least one dof")]
    NoDofs,

    #[error("expected {expected} symplectic ratios, got {got}")]
    ThetaLength { expected: usize, got: usize },

    #[error("symplectic ratio of dof {dof} is zero; omit the generators instead")]
    ZeroTheta { dof: usize },

    #[error("invalid symplectic ratio {0:?}: expected a rational \"p/q\"")]
    BadTheta(String),

    #[error("monomials belong to different degree-of-freedom systems")]
    SystemMismatch,

    #[error("parse error in {input:?} at byte {pos}: {msg}")]
    Parse {
        input: String,
        pos: usize,
        msg: String,
    },

    #[error("context {} references unknown monomial {id:?}", .context + 1)]
    UnknownMonomial { context: usize, id: String },

    #[error("context {} lists {id:?} more than once", .context + 1)]
    DuplicateMember { context: usize, id: String },

    #[error(
        "context {}: members {a:?} and {b:?} do not commute (symplectic phase {phase})",
        .context + 1
    )]
    NonCommuting {
        context: usize,
        a: String,
        b: String,
        phase: PhaseExp,
    },

    #[error("operators {} and {} do not commute (symplectic phase {phase})", .a + 1, .b + 1)]
    NonCommutingFamily { a: usize, b: usize, phase: PhaseExp },

    #[error("dimension {dim} cannot realize symplectic ratio {theta} on dof {dof}")]
    Unrepresentable {
        dof: usize,
        theta: String,
        dim: usize,
    },

    #[error("oracle space of dimension {dim} exceeds the limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("{what} = {value} on dof {dof} is not commensurate with the grid")]
    Incommensurate {
        what: &'static str,
        dof: usize,
        value: f64,
    },

    #[error("binding on dof {dof} realizes a*b/pi = {got}, system requires {expected}")]
    BindingMismatch { dof: usize, got: f64, expected: f64 },

    #[error("grid: {0}")]
    Grid(String),

    #[error("simultaneous diagonalization failed: {0}")]
    Diagonalization(String),

    #[error("unknown builtin certificate {0:?} (expected peres2 or mermin3)")]
    UnknownBuiltin(String),

    #[error("invalid search parameters: {0}")]
    SearchParams(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
