//! Exact Bredon cohomology and homology for proper actions with finite
//! stabilizers, with untwisted and twisted (projective) representation-ring
//! coefficients.

pub mod cyclotomic;
pub mod linalg;
pub mod group;
pub mod character;
pub mod bredon;
pub mod commands;
pub mod dataset;
mod error;

pub use error::Error;
