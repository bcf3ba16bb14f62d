use thiserror::Error;

/// Errors produced by model construction, schedule validation, and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("table parse error at line {line}: {reason}")]
    TableParse { line: usize, reason: String },

    #[error("table monotonicity violation at line {line}: {reason}")]
    TableMonotonicity { line: usize, reason: String },

    #[error("blocklength {n} is below the message length k = {k}")]
    BelowMessageLength { n: f64, k: u32 },

    #[error("blocklength {n} is outside the table range [{min}, {max}]")]
    OutsideTableRange { n: f64, min: f64, max: f64 },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("negative probability mass at attempt {attempt}: model is not monotone")]
    NegativeMass { attempt: usize },

    #[error("attempt index {f} out of range (free indices are 1..={max})")]
    IndexOutOfRange { f: usize, max: usize },

    #[error("no feasible schedule: {0}")]
    Infeasible(String),

    #[error("root bracketing failed: {0}")]
    NoBracket(String),

    #[error("branch explosion: more than {limit} live solution sequences")]
    BranchExplosion { limit: usize },

    #[error("terminal blocklength {n_cap} too small: residual failure mass {tail:e} exceeds {max_tail:e}")]
    CapTooSmall { n_cap: u32, tail: f64, max_tail: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
