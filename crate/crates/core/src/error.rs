use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("{what}: {requested} exceeds the cap of {cap}")]
    OverCap { what: &'static str, requested: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operator is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("channel is not trace preserving (max deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),
    #[error("channel is not Pauli-diagonal; twirl it first")]
    NotPauliDiagonal,
    #[error("probability must be strictly positive (found {0:e})")]
    NonPositiveProbability(f64),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(alloc::format!("{name} = {p} is not in [0, 1]")))
    }
}
