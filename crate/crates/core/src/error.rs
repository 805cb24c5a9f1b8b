use alloc::string::String;

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid subsystem `{label}`: {reason}")]
    InvalidSubsystem { label: String, reason: &'static str },
    #[error("subsystem `{label}` has no basis label `{basis}`")]
    UnknownBasisLabel { label: String, basis: String },
    #[error("total dimension exceeds the supported limit of 2^20")]
    DimensionTooLarge,
    #[error("no assignment given for subsystem `{0}`")]
    MissingAssignment(String),
    #[error("amplitude list has zero norm")]
    ZeroNorm,
    #[error("expected {expected} amplitudes, found {found}")]
    AmplitudeCount { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not unitary (max |U^dag U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("partial trace needs a nonempty set of kept subsystems")]
    EmptyKeepSet,
    #[error("states are defined over different layouts")]
    LayoutMismatch,
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(&'static str),
    #[error("symbol permutation is not a bijection")]
    NonBijectivePermutation,
    #[error("pure-medium index {index} out of range for dimension {dim}")]
    PureMediumOutOfRange { index: usize, dim: usize },
    #[error("copy target `{label}` is not in its pure-medium state (overlap {overlap})")]
    TargetNotPrepared { label: String, overlap: f64 },
    #[error("copy source and target must differ (`{0}`)")]
    SelfCopy(String),
    #[error("no copy record with sequence number {0}")]
    UnknownRecord(u64),
    #[error("copy record {seq} involves escaped subsystem `{label}`")]
    EscapedSubsystem { seq: u64, label: String },
    #[error("record {seq} is not part of the most recent copies on its subsystems")]
    NonSuffixErasure { seq: u64 },
    #[error("rotated readout needs a two-level subsystem, `{label}` has dimension {dim}")]
    RotationRequiresQubit { label: String, dim: usize },
    #[error("state has no support on the measurement basis")]
    AllZeroProbabilities,
    #[error("source symbol {symbol} has zero probability")]
    DegenerateSource { symbol: usize },
    #[error("outcome {outcome} of `{label}` is inconsistent with the global state")]
    InconsistentKnowledge { label: String, outcome: usize },
    #[error("outcome index {outcome} out of range for `{label}`")]
    OutcomeOutOfRange { label: String, outcome: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(&'static str),
    #[error("label sets overlap on `{0}`")]
    OverlappingPartition(String),
    #[error("label set is empty")]
    EmptyPartition,
    #[error("corpus of length {len} is too short for order {order}")]
    CorpusTooShort { len: usize, order: usize },
    #[error("symbol at position {position} is outside the model alphabet")]
    UnknownSymbol { position: usize },
}

impl Error {
    /// Variant name, stable across releases; used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownLabel(..) => "UnknownLabel",
            Error::DuplicateLabel(..) => "DuplicateLabel",
            Error::InvalidSubsystem { .. } => "InvalidSubsystem",
            Error::UnknownBasisLabel { .. } => "UnknownBasisLabel",
            Error::DimensionTooLarge => "DimensionTooLarge",
            Error::MissingAssignment(..) => "MissingAssignment",
            Error::ZeroNorm => "ZeroNorm",
            Error::AmplitudeCount { .. } => "AmplitudeCount",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::EmptyKeepSet => "EmptyKeepSet",
            Error::LayoutMismatch => "LayoutMismatch",
            Error::InvalidDensityMatrix(..) => "InvalidDensityMatrix",
            Error::NonBijectivePermutation => "NonBijectivePermutation",
            Error::PureMediumOutOfRange { .. } => "PureMediumOutOfRange",
            Error::TargetNotPrepared { .. } => "TargetNotPrepared",
            Error::SelfCopy(..) => "SelfCopy",
            Error::UnknownRecord(..) => "UnknownRecord",
            Error::EscapedSubsystem { .. } => "EscapedSubsystem",
            Error::NonSuffixErasure { .. } => "NonSuffixErasure",
            Error::RotationRequiresQubit { .. } => "RotationRequiresQubit",
            Error::AllZeroProbabilities => "AllZeroProbabilities",
            Error::DegenerateSource { .. } => "DegenerateSource",
            Error::InconsistentKnowledge { .. } => "InconsistentKnowledge",
            Error::OutcomeOutOfRange { .. } => "OutcomeOutOfRange",
            Error::InvalidDistribution(..) => "InvalidDistribution",
            Error::OverlappingPartition(..) => "OverlappingPartition",
            Error::EmptyPartition => "EmptyPartition",
            Error::CorpusTooShort { .. } => "CorpusTooShort",
            Error::UnknownSymbol { .. } => "UnknownSymbol",
        }
    }
}
