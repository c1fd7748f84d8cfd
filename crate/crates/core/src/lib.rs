//! Numerical laboratory for Picard iterates of `box u = (du)^2` in two
//! dimensions with unit-scale randomized initial data.

pub mod error;
pub mod harness;
pub mod moments;
pub mod picard;
pub mod randomization;
pub mod seeds;
pub mod spectral;
pub mod trees;
mod verdict;

pub use error::{Error, Result};
pub use verdict::Verdict;
