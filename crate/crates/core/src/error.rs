use thiserror::Error;

/// Broad classification used by the command-line front end to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input: arity or variable-count mismatches, bad indices.
    Usage,
    /// A mathematical precondition does not hold (regularity, certificate, ...).
    Precondition,
    /// The input is not known to enough precision for the requested output.
    Precision,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("series is not a unit (constant term is zero)")]
    NonUnit,
    #[error("substituted series has a nonzero constant term (argument {index})")]
    ConstantTerm { index: usize },
    #[error("series vanishes modulo m^{prec}")]
    ZeroSeries { prec: u32 },
    #[error("series is not regular in variable {var} at working precision")]
    NotRegular { var: usize },
    #[error("no regularizing shear found with coefficients up to {bound}")]
    RegularizationExhausted { bound: u32 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("pseudo-division by the zero polynomial")]
    ZeroDivisor,
    #[error("constant term of equation {index} is nonzero")]
    NonzeroConstant { index: usize },
    #[error("Jacobian at the origin is singular")]
    SingularJacobian,
    #[error("vanishing Jacobian minor: delta is zero modulo m^{prec}")]
    VanishingMinor { prec: u32 },
    #[error("approximate solution is not certified")]
    Uncertified,
    #[error("division is not exact: {context}")]
    InexactDivision { context: String },
    #[error("congruence condition fails for component {component}")]
    CongruenceFails { component: usize },
    #[error("delta has a unit value at the origin; use the implicit function theorem directly")]
    UnitJacobian,
    #[error("solution is not simple: {context}")]
    NotSimple { context: String },
    #[error("input is not a solution: residual of equation {index} has order {order}")]
    NotASolution { index: usize, order: u32 },
    #[error("property check failed: {context}")]
    PropertyFailed { context: String },
    #[error("precision shortfall in {step}: need {needed}, have {available}")]
    PrecisionShortfall {
        step: String,
        needed: u32,
        available: u32,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NvarsMismatch { .. }
            | Error::Arity { .. }
            | Error::IndexOutOfRange { .. }
            | Error::NotSquare { .. } => ErrorKind::Usage,
            Error::PrecisionShortfall { .. } => ErrorKind::Precision,
            _ => ErrorKind::Precondition,
        }
    }

    pub(crate) fn shortfall(step: impl Into<String>, needed: u32, available: u32) -> Self {
        Error::PrecisionShortfall {
            step: step.into(),
            needed,
            available,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
