use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped by the stage that produces them: parsing, structural
/// validation, and backend capacity. The CLI maps these groups to distinct
/// exit codes.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ZxError {
    #[error("parse error at {line}:{col}: {message}")]
    Parse { line: usize, col: usize, message: String },

    #[error("arity mismatch at {path}: left side yields {upper} wires, right side expects {lower}")]
    ArityMismatch { path: String, upper: u32, lower: u32 },

    #[error("unbound variable `{name}`")]
    UnboundVariable { name: String },

    #[error("variable `{name}` is not declared in the rule header")]
    UndeclaredVariable { name: String },

    #[error("zero denominator in rational angle")]
    ZeroDenominator,

    #[error("exact backend requires rational angles; found a real-valued angle")]
    ExactNeedsRational,

    #[error("cyclotomic order {requested} exceeds the supported maximum {max}")]
    OrderTooLarge { requested: u64, max: u64 },

    #[error("node with {wires} boundary wires exceeds the wire cap {cap}")]
    WireCap { wires: u32, cap: u32 },

    #[error("cyclotomic inverse unavailable: field degree {phi} exceeds the solver limit {max}")]
    InverseDegree { phi: usize, max: usize },

    #[error("division by zero in a cyclotomic field")]
    DivisionByZero,

    #[error("invalid rule `{name}`: {reason}")]
    InvalidRule { name: String, reason: String },

    #[error("{0}")]
    Invalid(String),
}

impl ZxError {
    /// Parse-stage errors (CLI exit code 2).
    pub fn is_parse(&self) -> bool {
        matches!(self, ZxError::Parse { .. })
    }

    /// Structural validation errors (CLI exit code 3).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            ZxError::ArityMismatch { .. }
                | ZxError::UnboundVariable { .. }
                | ZxError::UndeclaredVariable { .. }
                | ZxError::ZeroDenominator
                | ZxError::InvalidRule { .. }
                | ZxError::Invalid(_)
        )
    }

    /// Backend and capacity errors (CLI exit code 4).
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            ZxError::ExactNeedsRational
                | ZxError::OrderTooLarge { .. }
                | ZxError::WireCap { .. }
                | ZxError::InverseDegree { .. }
                | ZxError::DivisionByZero
        )
    }
}
