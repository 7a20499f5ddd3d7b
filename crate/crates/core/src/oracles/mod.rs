//! Exhaustive ground truth for small instances: the optimal adaptive policy,
//! property checkers, the exact adaptive monotonicity ratio, and bound
//! certification.

mod checks;
mod enumerate;
mod lattice;
mod optimal;
mod ratio;

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::evaluation::{exact_favg, DEFAULT_NODE_LIMIT};
use crate::model::Constraint;
use crate::policies::Policy;
use crate::problem::Problem;

pub use checks::{check_adaptive_monotone, check_adaptive_submodular, CheckOutcome, Witness};
pub use enumerate::{
    composed_value, count_policies, enumerate_policies, outcome_range, outcome_value,
    tree_outcomes, Outcome, PolicySpace,
};
pub use lattice::{Lattice, LatticeNode};
pub use optimal::{optimal_policy, optimal_policy_within};
pub use ratio::{monotonicity_ratio, worst_follow_up, MonotonicityRatio, RatioWitness};

/// Size guards for the exhaustive routines.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleLimits {
    pub max_items: usize,
    /// Deterministic policies (or outcome-map combinations) per enumeration.
    pub max_policies: u64,
    pub max_lattice: u64,
    /// Node budget for exact policy evaluation.
    pub node_limit: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_items: 8,
            max_policies: 10_000_000,
            max_lattice: 5_000_000,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

impl OracleLimits {
    pub(crate) fn check_items(&self, problem: &Problem) -> Result<()> {
        if problem.len() > self.max_items {
            return Err(Error::too_large(
                format!("{} items for exhaustive oracles", problem.len()),
                self.max_items as u64,
            ));
        }
        Ok(())
    }
}

/// Guaranteed approximation ratio for monotonicity ratio `m`:
/// `m(1−1/e) + (1−m)/e` under a cardinality budget, `(m+1)/10` under a
/// knapsack budget.
pub fn ratio_bound(m: f64, constraint: Constraint) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::InvalidArgument(format!(
            "ratio {m} is outside [0, 1]"
        )));
    }
    Ok(match constraint {
        Constraint::Cardinality => m * (1.0 - 1.0 / E) + (1.0 - m) / E,
        Constraint::Knapsack => (m + 1.0) / 10.0,
    })
}

/// Outcome of certifying one policy on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub m: f64,
    pub opt_value: f64,
    pub policy_value: f64,
    pub theoretical_ratio: f64,
    /// `policy_value / opt_value`; `None` when the optimum is 0.
    pub achieved_ratio: Option<f64>,
    pub pass: bool,
}

/// Slack allowed when comparing a policy value with its guarantee.
pub const CERTIFY_TOL: f64 = 1e-9;

/// The guarantee that applies to `policy`: the cardinality formula for the
/// random greedy policies, the knapsack formula for the sampled density
/// greedy policy, otherwise the one matching the instance constraint.
pub fn bound_constraint(policy: &Policy, problem: &Problem) -> Constraint {
    match policy {
        Policy::RandomGreedy | Policy::RandomGreedyDummies => Constraint::Cardinality,
        Policy::SamplingDensityGreedy => Constraint::Knapsack,
        _ => problem.instance().constraint(),
    }
}

/// Computes `m`, the optimum and the exact policy value, and checks
/// `value ≥ bound(m)·opt − 1e-9`.
pub fn certify(problem: &Problem, policy: &Policy, limits: &OracleLimits) -> Result<BoundReport> {
    policy.validate(problem)?;
    let ratio = monotonicity_ratio(problem, limits)?;
    certify_with_ratio(problem, policy, ratio.m, limits)
}

/// [`certify`] with a precomputed monotonicity ratio.
pub fn certify_with_ratio(
    problem: &Problem,
    policy: &Policy,
    m: f64,
    limits: &OracleLimits,
) -> Result<BoundReport> {
    policy.validate(problem)?;
    let (_, opt_value) = optimal_policy(problem, limits)?;
    let policy_value = exact_favg(problem, policy, limits.node_limit)?.value;
    let theoretical_ratio = ratio_bound(m, bound_constraint(policy, problem))?;
    Ok(BoundReport {
        m,
        opt_value,
        policy_value,
        theoretical_ratio,
        achieved_ratio: (opt_value > 0.0).then(|| policy_value / opt_value),
        pass: policy_value >= theoretical_ratio * opt_value - CERTIFY_TOL,
    })
}
