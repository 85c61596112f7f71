use thiserror::Error;

use crate::word::ParseError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("generator index 0 is not allowed")]
    ZeroGenerator,

    #[error("the identity has no primitive root (its centralizer is the whole group)")]
    IdentityHasNoRoot,

    #[error("rank {rank} is too small for generator e{needed}")]
    RankTooSmall { needed: usize, rank: usize },

    #[error("no image given for generator e{generator}")]
    MissingImage { generator: u32 },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("inverse images do not invert the endomorphism on e{generator}")]
    BadInverse { generator: u32 },

    #[error("endomorphism does not fix the boundary word {boundary}")]
    BoundaryNotFixed { boundary: String },

    #[error("invalid amalgam: {0}")]
    InvalidAmalgam(String),

    #[error("word {word} is not factorizable at greedy horizon {horizon}")]
    NotFactorizable { word: String, horizon: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),
}
