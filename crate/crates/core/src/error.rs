use thiserror::Error;

use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank {rank} outside the supported range {min}..={max}")]
    RankOutOfRange { rank: u8, min: u8, max: u8 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("cannot parse direction `{0}` (expected x<i>+ or x<i>-)")]
    ParseDirection(String),

    #[error("cannot parse word `{0}` (expected tokens x<i> / X<i>)")]
    ParseWord(String),

    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(u8, u8),

    #[error("partition {0} is not an ideal edge")]
    NotIdeal(Partition),

    #[error("partitions {0} and {1} cross")]
    Incompatible(Partition, Partition),

    #[error("partitions {0} and {1} do not cross")]
    NotCrossing(Partition, Partition),

    #[error("the two arguments determine the same splitting")]
    SameSplitting,

    #[error("empty family")]
    EmptyFamily,

    #[error("boundary graph with signature {0} matches none of the six boundary types")]
    UnrecognizedBoundary(String),

    #[error("generator index {index} outside 1..={rank}")]
    GeneratorOutOfRange { index: i32, rank: u8 },

    #[error("Nielsen move needs two distinct generators, got {0} twice")]
    SameGenerator(u8),

    #[error("twisting word uses the stable letter x{0}")]
    StableLetterInTwist(u8),

    #[error("the trivial word has no Whitehead graph")]
    TrivialWord,

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
