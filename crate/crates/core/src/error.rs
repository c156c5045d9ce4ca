use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truth table length {len} is not a power of two >= 2")]
    InvalidLength { len: usize },
    #[error("illegal character {ch:?} at position {pos}")]
    InvalidChar { ch: char, pos: usize },
    #[error("arity {n} outside the supported range 1..={max}")]
    ArityOutOfRange { n: usize, max: usize },
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("word {word} out of range for arity {n}")]
    WordOutOfRange { word: u32, n: usize },
    #[error("not a permutation (or negation mask too wide): {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("malformed transform `{0}`")]
    BadTransform(String),
    #[error("malformed header `{0}`")]
    BadHeader(String),
    #[error("sensitivity level {k} exceeds arity {n}")]
    LevelOutOfRange { k: usize, n: usize },
    #[error("cannot compare domains of different level or polarity")]
    DomainMismatch,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_line(self, line: usize) -> Error {
        Error::Line {
            line,
            source: Box::new(self),
        }
    }
}
