use thiserror::Error;

/// Errors raised while turning source text into terms or clauses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReadError {
    #[error("lexical error at {line}:{col}: {message}")]
    Lexical { line: usize, col: usize, message: String },
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    /// A well-formed term that is not an acceptable clause or grammar rule.
    #[error("invalid clause at line {line}: {message}")]
    Clause { line: usize, message: String },
}

/// Errors raised while solving a goal. They abort the current query.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("instantiation error in {0}")]
    Instantiation(String),
    #[error("type error in {context}: expected {expected}, found {culprit}")]
    Type { context: String, expected: &'static str, culprit: String },
    #[error("existence error: unknown procedure {0}")]
    Existence(String),
    #[error("evaluation error: {0}")]
    Evaluation(&'static str),
    #[error("resource error: {0}")]
    Resource(String),
    #[error("grammar error: {0}")]
    Grammar(String),
}

impl EngineError {
    /// Short class name, stable across engines running equivalent programs.
    pub fn kind(&self) -> &'static str {
        match self {
            EngineError::Instantiation(_) => "instantiation_error",
            EngineError::Type { .. } => "type_error",
            EngineError::Existence(_) => "existence_error",
            EngineError::Evaluation(_) => "evaluation_error",
            EngineError::Resource(_) => "resource_error",
            EngineError::Grammar(_) => "grammar_error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranspileError {
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error("unknown interclausal variable ~{0} in query")]
    UnknownEVar(String),
    #[error("predicate {0} uses the reserved `$env_` prefix")]
    ReservedName(String),
    #[error("cannot thread the environment through {0}")]
    Unthreadable(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Read(#[from] ReadError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Transpile(#[from] TranspileError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}
