//! Partition calculus for free splittings of a free group relative to a rose.

pub mod blowup;
pub mod complexes;
pub mod config;
pub mod error;
pub mod freegroup;
pub mod partition;
pub mod verify;

pub use error::{Error, Result};
