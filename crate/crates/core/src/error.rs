use std::io;

use thiserror::Error;

/// Which generator set a reversal index belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReversalMode {
    /// Signed prefix reversals `r_1..r_n` of the hyperoctahedral group.
    Signed,
    /// Unsigned prefix reversals `r_2..r_n` of the symmetric group.
    Unsigned,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("reversal index {index} out of range for n = {n} ({mode:?} mode)")]
    IndexOutOfRange {
        index: usize,
        n: usize,
        mode: ReversalMode,
    },
    #[error("magnitude {0} appears more than once")]
    DuplicateMagnitude(u32),
    #[error("zero is not a valid signed permutation entry")]
    ZeroEntry,
    #[error("entry magnitude {magnitude} exceeds word length {n}")]
    MagnitudeTooLarge { magnitude: u32, n: usize },
    #[error("malformed token {0:?}")]
    MalformedToken(String),
    #[error("empty permutation")]
    Empty,
    #[error("negative entry in an unsigned permutation")]
    NegativeEntry,
    #[error("rank {rank} out of range (group order {order})")]
    RankOutOfRange { rank: u64, order: u64 },
    #[error("{what}: {requested} exceeds the budget of {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
    },
    #[error("{op}: n = {n} outside the supported range {}", range_text(*.min, *.max))]
    UnsupportedN {
        op: &'static str,
        n: usize,
        min: usize,
        max: usize,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("vertex {0} has zero degree")]
    ZeroDegree(usize),
    #[error(
        "Lanczos did not converge after {iterations} iterations (best residual {best_residual:e})"
    )]
    NonConvergence {
        iterations: usize,
        best_residual: f64,
    },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("matrix market: {0}")]
    MatrixMarket(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

fn range_text(min: usize, max: usize) -> String {
    if max == usize::MAX {
        format!("n >= {min}")
    } else {
        format!("[{min}, {max}]")
    }
}
