//! Brute-force reference implementations used only by tests. Nothing here
//! depends on the main crate: directions, partitions and words are
//! re-modelled with plain collections and checked the slow way.

pub mod partitions;
pub mod words;
