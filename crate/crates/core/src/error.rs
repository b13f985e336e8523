use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported radius {0} (expected 1 or 2)")]
    UnsupportedRadius(u32),
    #[error("rule number {number} out of range for radius {radius}")]
    RuleOutOfRange { number: u64, radius: u32 },
    #[error("expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("ring width {width} is smaller than the neighbourhood size {neighborhood}")]
    WidthTooSmall { width: usize, neighborhood: usize },
    #[error("rule assignment mixes radii {0} and {1}")]
    MixedRadii(u32, u32),
    #[error("cell {cell} out of range for width {width}")]
    CellOutOfRange { cell: usize, width: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("rule {0} is not left-permutive")]
    NotLeftPermutive(u64),
    #[error("partial diagram is missing cell (time {time}, offset {offset})")]
    IncompleteDiagram { time: usize, offset: isize },
    #[error("no key found after {0} trials")]
    TrialsExhausted(u64),
    #[error("invalid bit character {0:?}")]
    InvalidBit(char),
    #[error("threshold configuration line {line}: {message}")]
    Config { line: usize, message: String },
}
