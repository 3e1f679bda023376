use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Boundary span not contained in cycle span; the witness is the
    /// offending column index of the boundary matrix.
    #[error("containment violation: boundary column {column} is not in the cycle span")]
    Containment { column: usize },

    /// A map does not descend to the requested subquotient; the witness is
    /// a vector (in ambient coordinates) whose image leaves the target span.
    #[error("map not well-defined on cosets: witness vector {witness}")]
    NotWellDefined { witness: String },

    #[error("chain map is not surjective in degree {degree}")]
    NotSurjective { degree: i64 },

    #[error("tower map is not strict: square at level {level} does not commute")]
    NotStrict { level: usize },

    #[error("ideal is not nilpotent")]
    NonNilpotent,

    #[error("computation budget exceeded: requires {required} cells (budget {budget})")]
    Budget { required: u128, budget: u128 },

    #[error("quotient is infinite-dimensional: variable {var} has no pure-power bound")]
    Infinite { var: String },

    #[error("invalid input: {0}")]
    Input(String),

    /// A structural identity failed where the construction requires it.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
