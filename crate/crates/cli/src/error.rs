use std::fmt;

use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad or missing arguments.
    Usage(String),
    Config(String),
    Io(String),
    /// A module operation failed.
    Core { context: String, source: tate_core::Error },
}

impl CliError {
    pub fn core(context: impl Into<String>) -> impl FnOnce(tate_core::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Core { context, source }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Core { source, .. } => core_kind(source),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut e = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Core { context, .. } = self {
            e["context"] = Value::String(context.clone());
        }
        json!({ "error": e })
    }
}

fn core_kind(e: &tate_core::Error) -> &'static str {
    use tate_core::Error::*;
    match e {
        NotPrime(_) => "not_prime",
        PrimeMismatch { .. } => "prime_mismatch",
        ZeroOperand { .. } => "zero_operand",
        DivisionByZero => "division_by_zero",
        InsufficientPrecision { .. } => "insufficient_precision",
        NonConvergent { .. } => "non_convergent",
        UnsupportedPrime { .. } => "unsupported_prime",
        InvalidArgument(_) => "invalid_argument",
        Parse(_) => "parse",
        TooManyTerms { .. } => "too_many_terms",
        Divergent(_) => "divergent",
        BoundExceeded { .. } => "bound_exceeded",
        PoleProximity { .. } => "pole",
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Config(m) => write!(f, "config: {m}"),
            CliError::Io(m) => write!(f, "{m}"),
            CliError::Core { context, source } => write!(f, "{context}: {source}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<tate_core::Error> for CliError {
    fn from(source: tate_core::Error) -> Self {
        CliError::Core { context: "computation".into(), source }
    }
}
