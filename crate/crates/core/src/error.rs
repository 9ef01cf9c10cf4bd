use thiserror::Error;

/// Errors produced by the frame and perturbation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid norm index {0}: must satisfy p >= 1")]
    InvalidIndex(f64),
    #[error("frames require a finite index p, got {0}")]
    InfiniteFrameIndex(f64),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is numerically singular (sigma_min/sigma_max = {ratio:.3e})")]
    Singular { ratio: f64 },
    #[error("the pair is not an approximate Schauder frame (frame operator is singular)")]
    NotAnAsf,
    #[error("the family is not a frame (lambda_min/lambda_max = {ratio:.3e})")]
    NotAFrame { ratio: f64 },
    #[error("alpha and beta must lie in [0, 1), got alpha={alpha}, beta={beta}")]
    AlphaBetaOutOfRange { alpha: f64, beta: f64 },
    #[error("reference operator U is singular")]
    USingular,
    #[error("frame bounds must be positive, got a={a}, b={b}")]
    NonpositiveBounds { a: f64, b: f64 },
    #[error("parameter s must be < 1, got {0}")]
    SOutOfRange(f64),
    #[error("perturbation parameters must be nonnegative and finite: {0}")]
    InvalidParams(String),
    #[error("instance generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },
    #[error("missing field `{0}`")]
    MissingField(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
