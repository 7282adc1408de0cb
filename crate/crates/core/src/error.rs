use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseScalarError(pub String);

/// Errors raised by the algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element has dimension {found}, algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("leg count mismatch: {left} vs {right}")]
    LegMismatch { left: usize, right: usize },
    #[error("expected a {expected}-leg tensor, got {found} legs")]
    WrongLegCount { expected: usize, found: usize },
    #[error("leg position {position} out of range 1..={legs}")]
    PositionOutOfRange { position: usize, legs: usize },
    #[error("leg position {0} repeated")]
    RepeatedPosition(usize),
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("duplicate structure constant for e{0}*e{1} -> e{2}")]
    DuplicateStructureConstant(usize, usize, usize),
    #[error("algebra is not associative: (e{0}e{1})e{2} != e{0}(e{1}e{2})")]
    NotAssociative(usize, usize, usize),
    #[error("algebra must have positive dimension")]
    EmptyAlgebra,
    #[error("basis name `{0}` is invalid or repeated")]
    BadBasisName(String),
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series must have vanishing constant term")]
    NonzeroConstantTerm,
    #[error("series constant term must be the unit")]
    ConstantTermNotUnit,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("missing coefficient r_{0}")]
    MissingCoefficient(usize),
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
