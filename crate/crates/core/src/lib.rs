//! Construction and verification toolkit for extremal layered-graph families.
//!
//! The crate builds three kinds of objects and checks every structural claim
//! about them by independent brute force at desk scale:
//!
//! * [`hull`] — exact integer geometry: lattice balls and the strictly convex
//!   vertex sets of their hulls, which drive all edge rules below.
//! * [`base`] / [`alternation`] — layered digraphs over `(Z/LZ)^k` with
//!   `L = 3·D·r`: the base family and its alternation products, together with
//!   their critical pairs and closed-form critical paths.
//! * [`obstacle`] — the obstacle product of the three-coordinate alternation
//!   graph: edge expansion plus bipartite-clique replacement.
//!
//! [`oracles`] holds the verification kernels (path counting, intersection
//! classification, multiplicities, diameter, additive stretch, shortcut
//! damage) and [`adversary`] the executable lower-bound experiments
//! (shortcut budgets, clique deletions, emulator-to-spanner reduction,
//! parameter balancing).

pub mod adversary;
pub mod alternation;
pub mod base;
pub mod hull;
pub mod obstacle;
pub mod oracles;
pub mod report;
pub mod textio;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ObstructorError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("vertex budget exceeded: need {needed} vertices, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("generator ({0}, {1}) is not a hull member")]
    NotInHull(u64, u64),
    #[error("pair does not belong to this graph: {0}")]
    InvalidPair(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ObstructorError>;
