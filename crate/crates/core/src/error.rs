//! Error types shared by the lattice kernel and the graph layer.

use thiserror::Error;

/// Errors reported by lattice operations, graph moves and the JSJ pipeline.
///
/// Precondition violations that indicate caller bugs (dimension mismatches on
/// internal arithmetic) panic instead; the variants here are the contractual
/// failure modes of the public operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A sublattice was expected to be contained in another but is not.
    #[error("sublattice is not contained in the ambient sublattice")]
    NotContained,

    /// A hyperplane argument does not have corank one.
    #[error("sublattice does not have corank one (rank {rank} in ambient rank {ambient})")]
    NotCorankOne { rank: usize, ambient: usize },

    /// A hyperplane argument is not saturated in its ambient lattice.
    #[error("sublattice is not saturated")]
    NotSaturated,

    /// A column falls outside the integer span of the given basis.
    #[error("column {col} is not representable in the given basis")]
    NotRepresentable { col: usize },

    /// A matrix expected to be unimodular has determinant other than +/-1.
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: String },

    /// Edge is not a 1-1 loop.
    #[error("edge `{0}` is not a 1-1 loop")]
    NotOneOneLoop(String),

    /// Edge is not a non-loop edge of type 2-2.
    #[error("edge `{0}` is not a 2-2 edge")]
    NotTwoTwoEdge(String),

    /// The attachments of a 2-2 edge do not define index-2 inclusions.
    #[error("attachment does not define an index-2 inclusion")]
    NotIndexTwo,

    /// A collapse witness failed one of its checkable conditions.
    #[error("witness invalid: {0}")]
    WitnessInvalid(String),

    /// Expansion requires the adjacent edge groups to span corank one.
    #[error("vertex `{0}` does not have adjacent-edge rank deficiency one")]
    NoDeficiencyOne(String),

    /// Expansion requires vertex rank at least two.
    #[error("vertex `{0}` has rank below two")]
    RankTooSmall(String),

    /// Operation applies only to abelian vertices.
    #[error("vertex `{0}` has an unsupported kind for this operation")]
    UnsupportedVertexKind(String),

    /// Operation requires a reduced graph of groups.
    #[error("graph is not reduced: edge `{0}` is contractible")]
    NotReduced(String),

    /// Unknown vertex id.
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    /// Unknown edge id.
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),

    /// The graph failed validation.
    #[error("graph validation failed: {0}")]
    InvalidGraph(String),

    /// Random generator parameters are inconsistent.
    #[error("invalid generator parameters: {0}")]
    ParamError(String),
}
