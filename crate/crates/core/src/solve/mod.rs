//! Solution concepts: Nash equilibrium and rationalizability.

mod nash;
mod rationalizable;
pub mod simplex;

use thiserror::Error;

use crate::checker::CheckError;
use crate::kripke::{ProfileError, StructureError, ValidationReport};

pub use nash::{
    find_nash, is_nash, solve_support, Method, NashOptions, NashReport, SupportVerdict,
    DEFAULT_DENOMINATOR_BOUND,
};
pub use rationalizable::{
    check_rationalizable_witness, find_rationalizable_strategy, rationalizable_set,
    search_rationalizable, search_rationalizable_with, witness_formula, RatOutcome, RatWitness,
    SearchMethod, DEFAULT_MAX_STATES,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("Nash search is defined only for forms without extra atoms")]
    ExtraAtoms,
    #[error("{0}")]
    InvalidBound(&'static str),
    #[error("structure violates {}", .0.summary())]
    InvalidStructure(ValidationReport),
    #[error("internal inconsistency: {0}")]
    Inconsistent(&'static str),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}
