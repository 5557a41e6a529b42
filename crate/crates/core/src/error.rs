use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ValueError {
    #[error("value {value} out of range for radix {radix}")]
    OutOfRange { value: u64, radix: u8 },
    #[error("not a number: {0:?}")]
    NotANumber(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("{gate} expects {expected} operand(s), got {got}")]
pub struct ArityMismatch {
    pub gate: &'static str,
    pub expected: usize,
    pub got: usize,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("unknown gate kind {0:?}")]
pub struct UnknownGate(pub String);
