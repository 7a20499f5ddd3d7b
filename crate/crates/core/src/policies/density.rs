use crate::error::{Error, Result};
use crate::model::{ItemId, ItemSet, PartialRealization, PROB_TOL};
use crate::problem::Problem;

use super::greedy::argmax_first;
use super::TIE_EPS;

/// `e* = argmax_e Δ(e|∅)` over items that fit in the budget, with its value.
/// Ties go to the smallest id; the winner may have a nonpositive marginal.
pub fn best_singleton(problem: &Problem) -> Result<(ItemId, f64)> {
    let inst = problem.instance();
    let marginals = problem.marginals(&PartialRealization::empty(inst.len()))?;
    let feasible: Vec<ItemId> = inst
        .item_ids()
        .filter(|&e| inst.cost(e) <= inst.budget() + PROB_TOL)
        .collect();
    let values: Vec<f64> = feasible.iter().map(|e| marginals[e.0]).collect();
    argmax_first(&values)
        .map(|i| (feasible[i], values[i]))
        .ok_or_else(|| Error::Infeasible("no item fits in the budget".into()))
}

/// Next density-greedy pick from `sample`: the largest `Δ(e|ψ)/c(e)` among
/// unselected sample items with positive marginal that fit in what is left
/// of the budget. `None` once that set is empty.
pub(crate) fn density_choice(
    problem: &Problem,
    sample: ItemSet,
    psi: &PartialRealization,
) -> Result<Option<ItemId>> {
    let inst = problem.instance();
    let marginals = problem.marginals(psi)?;
    let dom = psi.domain();
    let remaining = inst.budget() - inst.set_cost(dom);
    let pool: Vec<ItemId> = sample
        .difference(dom)
        .iter()
        .filter(|&e| marginals[e.0] > TIE_EPS && inst.cost(e) <= remaining + PROB_TOL)
        .collect();
    let densities: Vec<f64> = pool
        .iter()
        .map(|&e| {
            let c = inst.cost(e);
            if c > 0.0 {
                marginals[e.0] / c
            } else {
                f64::INFINITY
            }
        })
        .collect();
    Ok(argmax_first(&densities).map(|i| pool[i]))
}
