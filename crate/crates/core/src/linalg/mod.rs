//! Exact integer linear algebra: Smith normal form and homology of free complexes.

mod abelian;
mod matrix;
mod smith;

pub use abelian::FinAbGroup;
pub use matrix::IntMatrix;
pub use smith::{rank, snf, SmithDecomposition};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("composite of consecutive maps is nonzero")]
    NotAComplex,
    #[error("invalid invariant factors: {0}")]
    InvalidInvariants(String),
    #[error("matrix parse error: {0}")]
    Parse(String),
}

/// Homology of `Z^n --incoming--> Z^m --outgoing--> Z^k` at the middle term.
///
/// Matrices act on column vectors, so `incoming` is `m x n` and `outgoing` is `k x m`.
pub fn homology_at(incoming: &IntMatrix, outgoing: &IntMatrix) -> Result<FinAbGroup, LinalgError> {
    let m = incoming.rows();
    if outgoing.cols() != m {
        return Err(LinalgError::DimensionMismatch(format!(
            "incoming map lands in Z^{m} but outgoing map starts from Z^{}",
            outgoing.cols()
        )));
    }
    let composite = outgoing
        .checked_mul(incoming)
        .expect("dimensions checked above");
    if !composite.is_zero() {
        return Err(LinalgError::NotAComplex);
    }
    let inc = snf(incoming);
    let r = rank(outgoing);
    let s = inc.rank();
    Ok(FinAbGroup::from_chain(m - s - r, &inc.divisors))
}
