//! Target validation.

use thiserror::Error;

use crate::oracle::FoldConstraints;
use crate::structure::{parse_structure, Structure, StructureError};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TargetError {
    #[error("incorrect structure: {0}")]
    Syntax(#[from] StructureError),
    #[error("incorrect structure: {crossing} mutually crossing arcs (at most {max} allowed)")]
    TooManyCrossings { crossing: usize, max: usize },
    #[error("incorrect structure: stack of size {size} is smaller than sigma = {sigma}")]
    StackTooSmall { size: usize, sigma: usize },
    #[error("incorrect structure: arc of length {length} is shorter than lambda = {lambda}")]
    ArcTooShort { length: usize, lambda: usize },
}

/// Checks `target` against the folding constraints.
pub fn check_target(target: &Structure, c: FoldConstraints) -> Result<(), TargetError> {
    let crossing = target.crossing_number();
    if crossing >= c.k {
        return Err(TargetError::TooManyCrossings {
            crossing,
            max: c.k - 1,
        });
    }
    if let Some(size) = target.min_stack_size().filter(|&s| s < c.sigma) {
        return Err(TargetError::StackTooSmall {
            size,
            sigma: c.sigma,
        });
    }
    if let Some(length) = target.min_arc_length().filter(|&l| l < c.lambda) {
        return Err(TargetError::ArcTooShort {
            length,
            lambda: c.lambda,
        });
    }
    Ok(())
}

/// Parses and checks a target in `:()[]{}` notation.
pub fn parse_target(text: &str, c: FoldConstraints) -> Result<Structure, TargetError> {
    let s = parse_structure(text)?;
    check_target(&s, c)?;
    Ok(s)
}
