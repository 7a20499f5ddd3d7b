use crate::error::{Error, Result};
use crate::model::{ItemId, PartialRealization, PROB_TOL};
use crate::problem::Problem;

use super::TIE_EPS;

/// The top-`k` candidate set `M(ψ)`: real items with strictly positive
/// marginal, best first, padded with `no_ops` empty slots to size `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopSet {
    pub items: Vec<ItemId>,
    pub no_ops: usize,
}

/// Index of the best entry: largest value, ties (within [`TIE_EPS`]) to the
/// earliest entry. Entries must be listed in id order.
pub(crate) fn argmax_first(values: &[f64]) -> Option<usize> {
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values.iter().position(|&v| v >= best - TIE_EPS)
}

pub fn greedy_topk_set(problem: &Problem, psi: &PartialRealization, k: usize) -> Result<TopSet> {
    if k == 0 {
        return Err(Error::InvalidArgument("top-k set needs k >= 1".into()));
    }
    let marginals = problem.marginals(psi)?;
    let dom = psi.domain();
    let mut pool: Vec<(ItemId, f64)> = (0..problem.len())
        .map(ItemId)
        .filter(|e| !dom.contains(*e) && marginals[e.0] > TIE_EPS)
        .map(|e| (e, marginals[e.0]))
        .collect();
    let mut items = Vec::with_capacity(k);
    while items.len() < k {
        let values: Vec<f64> = pool.iter().map(|(_, v)| *v).collect();
        match argmax_first(&values) {
            Some(i) => items.push(pool.remove(i).0),
            None => break,
        }
    }
    let no_ops = k - items.len();
    Ok(TopSet { items, no_ops })
}

/// Member of the extended ground set `E ∪ D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Candidate {
    Real(ItemId),
    Dummy(usize),
}

/// `argmax_{M ⊆ E∪D, |M| ≤ k} Σ_{e∈M} Δ(e|ψ)` over unselected real items and
/// unused dummies. Each dummy has marginal 0; at equal marginals dummies
/// come before real items.
pub(crate) fn dummy_top_set(
    problem: &Problem,
    psi: &PartialRealization,
    used: &[bool],
    k: usize,
) -> Result<Vec<Candidate>> {
    let marginals = problem.marginals(psi)?;
    let dom = psi.domain();
    let mut pool: Vec<(Candidate, f64)> = used
        .iter()
        .enumerate()
        .filter(|(_, u)| !**u)
        .map(|(d, _)| (Candidate::Dummy(d), 0.0))
        .chain(
            (0..problem.len())
                .map(ItemId)
                .filter(|e| !dom.contains(*e))
                .map(|e| (Candidate::Real(e), marginals[e.0])),
        )
        .collect();
    let mut chosen = Vec::with_capacity(k);
    while chosen.len() < k && !pool.is_empty() {
        let values: Vec<f64> = pool.iter().map(|(_, v)| *v).collect();
        let i = argmax_first(&values).expect("nonempty pool");
        chosen.push(pool.remove(i).0);
    }
    // Only nonnegative members can be in the argmax once k dummies exist.
    debug_assert!(chosen.len() == k);
    Ok(chosen)
}

/// Deterministic greedy: best strictly positive affordable marginal.
pub(crate) fn greedy_choice(problem: &Problem, psi: &PartialRealization) -> Result<Option<ItemId>> {
    let inst = problem.instance();
    let marginals = problem.marginals(psi)?;
    let dom = psi.domain();
    let remaining = inst.budget() - inst.set_cost(dom);
    let pool: Vec<ItemId> = inst
        .item_ids()
        .filter(|&e| {
            !dom.contains(e) && marginals[e.0] > TIE_EPS && inst.cost(e) <= remaining + PROB_TOL
        })
        .collect();
    let values: Vec<f64> = pool.iter().map(|e| marginals[e.0]).collect();
    Ok(argmax_first(&values).map(|i| pool[i]))
}
