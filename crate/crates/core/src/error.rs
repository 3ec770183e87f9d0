use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// The CLI maps [`Error::Parse`] to exit code 2 and every other variant to
/// exit code 3 (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid weight system: {0}")]
    InvalidWeightSystem(String),

    #[error("invalid support: index {index} out of range for {len} weights")]
    InvalidSupport { index: usize, len: usize },

    #[error("polarization lies on a wall: {0}")]
    Wall(String),

    #[error("infinite inertia: semistable support {support} has rank {rank} < {expected}")]
    InfiniteInertia {
        support: String,
        rank: usize,
        expected: usize,
    },

    #[error("torsion group too large: {size} elements exceed the cap of {cap}")]
    GroupTooLarge { size: u128, cap: u64 },

    #[error("degree {0} does not define an affine gauged map (leading support is unstable)")]
    InvalidDegree(String),

    #[error("degree {0} is not integral")]
    NonIntegralDegree(String),

    #[error("degree {0} leaves no sections: X(d) is the zero representation")]
    EmptySectionSpace(String),

    #[error("one-parameter subgroup {lambda} is not admissible for the support: pairing with weight {index} is negative")]
    Inadmissible { lambda: String, index: usize },

    #[error("enumeration budget of {cap} exceeded")]
    Budget { cap: usize },

    #[error("illegal merge: {0}")]
    IllegalMerge(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
