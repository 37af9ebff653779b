//! Binary linear block codes: LDPC construction and decoding, systematic
//! encoding, and the repetition code used by the slotted-ALOHA baseline.

mod alist;
mod bp;
mod peg;
mod repetition;
mod sparse;
mod systematic;

use thiserror::Error;

pub use alist::{parse_alist, read_alist, to_alist, write_alist};
pub use bp::{bp_decode, BitPrior, BpDecoder, DecodeOutcome, DEFAULT_MAX_ITER, LLR_CLAMP};
pub use peg::{ldpc_construct, peg_matrix};
pub use repetition::{repetition_encode, repetition_soft_decode};
pub use sparse::ParityCheckMatrix;
pub use systematic::{LinearCode, SystematicGenerator};

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("invalid code dimensions: n={n}, k={k}")]
    Dimensions { n: usize, k: usize },
    #[error("column weight {0} must be at least 2")]
    ColumnWeight(usize),
    #[error("column weight {weight} exceeds the number of checks {rows}")]
    ColumnWeightTooLarge { weight: usize, rows: usize },
    #[error("column {0} participates in no parity check")]
    EmptyColumn(usize),
    #[error("entry ({row}, {col}) out of bounds or duplicated")]
    BadEntry { row: usize, col: usize },
    #[error("parity-check matrix is rank deficient after {attempts} attempts")]
    RankDeficient { attempts: usize },
    #[error("expected length {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("probability at index {0} is outside [0, 1]")]
    Probability(usize),
    #[error("repetition factor must be at least 1")]
    RepetitionFactor,
    #[error("malformed alist data: {0}")]
    Alist(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CodeError>;
