use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence length must be at least 2, got {0}")]
    LengthTooShort(usize),
    #[error("element {value} at index {index} is not -1 or +1")]
    InvalidElement { index: usize, value: i64 },
    #[error("shift {shift} out of range for length {len}")]
    ShiftOutOfRange { shift: usize, len: usize },
    #[error("position {position} out of range for length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("sidelobe index {index} out of range for length {len}")]
    SidelobeIndexOutOfRange { index: usize, len: usize },
    #[error("invalid hex digit {digit:?} at offset {offset}")]
    InvalidHex { digit: char, offset: usize },
    #[error("empty hex string")]
    EmptyHex,
    #[error("hex value needs {bits} bits but length is {len}")]
    HexTooLong { bits: usize, len: usize },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("invalid sequence character {0:?}; expected '+' or '-'")]
    InvalidSymbol(char),
    #[error("fitness exponent must be >= 1")]
    InvalidAlpha,
    #[error("quake flip count {count} out of range 1..={len}")]
    QuakeOutOfRange { count: usize, len: usize },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("LFSR initial state must be nonzero")]
    ZeroState,
    #[error("LFSR state {state:#x} does not fit in degree {degree}")]
    StateTooWide { state: u64, degree: u32 },
    #[error("invalid feedback polynomial {poly:#x}: {reason}")]
    InvalidPolynomial { poly: u64, reason: &'static str },
    #[error("polynomial {poly:#x} is not primitive: period {period} < {expected}")]
    NotPrimitive { poly: u64, period: u64, expected: u64 },
    #[error("exhaustive search length {n} exceeds cap {cap}")]
    ExhaustiveCap { n: usize, cap: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
