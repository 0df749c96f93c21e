use thiserror::Error;

/// Errors raised while reading graph files. Every variant names the 1-based
/// line where the problem was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed token `{token}`")]
    Malformed { line: usize, token: String },
    #[error("line {line}: vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: unexpected end of input ({expected})")]
    Truncated { line: usize, expected: &'static str },
    #[error("line {line}: unexpected trailing token `{token}`")]
    Trailing { line: usize, token: String },
    #[error("line {line}: channel {channel} outside 1..={channels}")]
    ChannelOutOfRange { line: usize, channel: usize, channels: usize },
    #[error("line {line}: edge multiplicity must be at least 1")]
    ZeroMultiplicity { line: usize },
    #[error("line {line}: channel count must be at least 1")]
    NoChannels { line: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("template has {template} channels but world has {world}")]
    ChannelMismatch { template: usize, world: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("not a subgraph isomorphism: {0}")]
    NotAnIsomorphism(String),
    #[error("contract violated: {0}")]
    Contract(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
