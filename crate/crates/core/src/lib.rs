//! Few-hyperplane cuttings of several point sets.
//!
//! Given point sets `P_1..P_m` in `R^d` with size targets `μ_i`, find a small
//! set of hyperplanes such that every face of their arrangement holds at most
//! `μ_i` points of `P_i`. The geometric problem becomes a set system over the
//! combinatorially distinct halfspaces, which is solved by a greedy cover of a
//! monotone submodular objective.

pub mod error;
pub mod geometry;
pub mod greedy;
pub mod instances;
pub mod io;
pub mod oracle;
pub mod workflow;

pub use error::{Error, Result};
pub use greedy::{
    greedy_cover, GreedyMode, GreedyOptions, GreedyOutcome, GreedyStep, GreedyTrace,
    SubmodularObjective,
};
