use thiserror::Error;

use crate::rootsys::RootSystemId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown root system `{0}` (expected a4, d5, e6 or e7)")]
    UnknownSystem(String),

    #[error("degree {0} is out of range (expected 5, 4, 3 or 2)")]
    BadDegree(u32),

    #[error("{0} has no predecessor in the chain E7 > E6 > D5 > A4")]
    NoPredecessor(RootSystemId),

    #[error("{0} is the last system in the chain; it has no successor")]
    NoSuccessor(RootSystemId),

    #[error("variable x{0} is not bound at the evaluation point")]
    UnboundVariable(usize),

    #[error("no equivariant signed bijection between {succ} degree-1 weights and {pred}")]
    NoEquivariantBijection {
        succ: RootSystemId,
        pred: RootSystemId,
    },

    #[error("labelled graphs are not isomorphic")]
    NotIsomorphic,

    #[error("weight {0} is not in the orbit of the first fundamental weight")]
    NotInOrbit(String),

    #[error("highest weight space has dimension {found}, expected 1")]
    HighestWeightDimension { found: usize },

    #[error("ideal generation: {0}")]
    Ideal(String),

    #[error("no cone generator contains the bridging monomial for weight {0}")]
    MissingBridge(String),

    #[error("torus point has a zero coordinate at index {0}")]
    ZeroCoordinate(usize),

    #[error("point does not lie on the variety ({0} equations fail)")]
    NotOnVariety(usize),

    #[error("{what}: gave up after {attempts} attempts")]
    RetriesExhausted { what: &'static str, attempts: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("malformed rational `{0}`")]
    ParseRational(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
