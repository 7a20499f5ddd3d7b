//! Adaptive stochastic maximization under cardinality and knapsack budgets.
//!
//! Instances pair a prior over item states with a utility `f(A, φ)`.
//! [`Problem`] precomputes the support and caches conditional marginals;
//! [`policies`] holds the randomized greedy policies and explicit decision
//! trees; [`evaluation`] computes expected utilities exactly or by sampling;
//! [`oracles`] provides brute-force optima, property checkers and the
//! adaptive monotonicity ratio for small instances.

pub mod bundled;
pub mod error;
pub mod evaluation;
pub mod experiment;
pub mod fixtures;
pub mod format;
pub mod model;
pub mod oracles;
pub mod policies;
pub mod problem;
pub mod utility;

pub use error::{Error, Result};
pub use model::{
    consistent, Constraint, Instance, Item, ItemId, ItemSet, PartialRealization, Prior,
    Realization, StateId, StateSpace,
};
pub use policies::{Action, Policy, PolicyTree, Trajectory};
pub use problem::Problem;
pub use utility::Objective;
