use rayon::prelude::*;

use crate::error::Result;
use crate::model::{Instance, ItemId, ItemSet, PartialRealization};
use crate::problem::Problem;

use super::lattice::Lattice;
use super::OracleLimits;

/// A concrete violation found by a property checker.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `Δ(item|smaller) < Δ(item|larger) − tol` with `smaller ⊆ larger`.
    Submodularity {
        smaller: PartialRealization,
        larger: PartialRealization,
        item: ItemId,
        delta_smaller: f64,
        delta_larger: f64,
    },
    /// `Δ(item|psi) < −tol`.
    Monotonicity {
        psi: PartialRealization,
        item: ItemId,
        delta: f64,
    },
}

impl Witness {
    /// Recomputes the marginals and confirms the violation.
    pub fn verify(&self, problem: &Problem, tol: f64) -> Result<bool> {
        Ok(match self {
            Witness::Submodularity {
                smaller,
                larger,
                item,
                delta_smaller,
                delta_larger,
            } => {
                let ds = problem.marginals(smaller)?[item.0];
                let dl = problem.marginals(larger)?[item.0];
                smaller.is_sub_of(larger)
                    && !larger.domain().contains(*item)
                    && ds == *delta_smaller
                    && dl == *delta_larger
                    && ds < dl - tol
            }
            Witness::Monotonicity { psi, item, delta } => {
                let d = problem.marginals(psi)?[item.0];
                !psi.domain().contains(*item) && d == *delta && d < -tol
            }
        })
    }

    pub fn describe(&self, inst: &Instance) -> String {
        match self {
            Witness::Submodularity {
                smaller,
                larger,
                item,
                delta_smaller,
                delta_larger,
            } => format!(
                "Δ({e}|{}) = {delta_smaller} < Δ({e}|{}) = {delta_larger}",
                inst.format_partial(smaller),
                inst.format_partial(larger),
                e = inst.item_name(*item),
            ),
            Witness::Monotonicity { psi, item, delta } => format!(
                "Δ({}|{}) = {delta} < 0",
                inst.item_name(*item),
                inst.format_partial(psi)
            ),
        }
    }
}

/// Result of a property check.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckOutcome {
    Pass,
    Fail(Witness),
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            CheckOutcome::Pass => None,
            CheckOutcome::Fail(w) => Some(w),
        }
    }
}

/// Submasks of `mask` in increasing numeric order.
fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some(((cur | !mask).wrapping_add(1)) & mask)
        };
        Some(cur)
    })
}

/// Checks `Δ(e|ψ) ≥ Δ(e|ψ′) − tol` for every positive-probability `ψ′`,
/// every `ψ ⊆ ψ′` and every `e ∉ dom ψ′`. The first violation, scanning `ψ′`
/// by size, then `ψ` by domain, then `e`, is returned.
pub fn check_adaptive_submodular(
    problem: &Problem,
    tol: f64,
    limits: &OracleLimits,
) -> Result<CheckOutcome> {
    limits.check_items(problem)?;
    let lattice = Lattice::build(problem, limits.max_lattice)?;
    let found = lattice
        .nodes()
        .par_iter()
        .map(|node| -> Result<Option<Witness>> {
            let larger = &node.psi;
            let dom = larger.domain();
            let big = problem.marginals(larger)?;
            for sub in submasks(dom.0) {
                let smaller = larger.restrict(ItemSet(sub));
                let small = problem.marginals(&smaller)?;
                for e in problem.instance().item_ids().filter(|e| !dom.contains(*e)) {
                    if small[e.0] < big[e.0] - tol {
                        return Ok(Some(Witness::Submodularity {
                            smaller,
                            larger: larger.clone(),
                            item: e,
                            delta_smaller: small[e.0],
                            delta_larger: big[e.0],
                        }));
                    }
                }
            }
            Ok(None)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(CheckOutcome::Pass),
        Some(r) => r.map(|w| CheckOutcome::Fail(w.expect("violation"))),
    }
}

/// Checks `Δ(e|ψ) ≥ −tol` for every positive-probability `ψ` and `e ∉ dom ψ`.
pub fn check_adaptive_monotone(
    problem: &Problem,
    tol: f64,
    limits: &OracleLimits,
) -> Result<CheckOutcome> {
    limits.check_items(problem)?;
    let lattice = Lattice::build(problem, limits.max_lattice)?;
    let found = lattice
        .nodes()
        .par_iter()
        .map(|node| -> Result<Option<Witness>> {
            let dom = node.psi.domain();
            let d = problem.marginals(&node.psi)?;
            Ok(problem
                .instance()
                .item_ids()
                .find(|e| !dom.contains(*e) && d[e.0] < -tol)
                .map(|e| Witness::Monotonicity {
                    psi: node.psi.clone(),
                    item: e,
                    delta: d[e.0],
                }))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        None => Ok(CheckOutcome::Pass),
        Some(r) => r.map(|w| CheckOutcome::Fail(w.expect("violation"))),
    }
}
