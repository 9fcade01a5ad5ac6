//! Finite consistency spaces.
//!
//! A consistency space is a universe `X` with a family of consistent subsets
//! that excludes `X`, contains every singleton, and is closed under subsets.
//! This crate builds such spaces, decides the equivalence `a ~ b` (the two
//! sets are consistent with exactly the same extensions), recovers negation,
//! implication, join and meet from consistency alone, detects Boolean spaces,
//! and audits a fixed list of laws on concrete spaces.

pub mod audit;
pub mod builders;
pub mod connectives;
pub mod equivalence;
pub mod error;
pub mod formula;
pub mod io;
pub mod space;
pub mod structure;
pub mod subset;

pub use error::{Error, Result};
pub use space::{ExhaustiveCap, Origin, Point, Space, ValidationReport};
pub use subset::{Subset, MAX_POINTS};
