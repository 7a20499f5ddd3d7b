use crate::error::Result;
use crate::model::{ItemId, PROB_TOL};
use crate::policies::{PolicyTree, TIE_EPS};
use crate::problem::Problem;

use super::lattice::Lattice;
use super::OracleLimits;

#[derive(Debug, Clone, Copy)]
enum Choice {
    Stop,
    Select(ItemId),
}

/// Optimal budget-feasible adaptive policy and its value, by dynamic
/// programming over positive-probability partial realizations. Stopping is
/// preferred on ties, then the lowest item id.
pub fn optimal_policy(problem: &Problem, limits: &OracleLimits) -> Result<(PolicyTree, f64)> {
    optimal_policy_within(problem, problem.instance().budget(), limits)
}

/// [`optimal_policy`] under an explicit budget.
pub fn optimal_policy_within(
    problem: &Problem,
    budget: f64,
    limits: &OracleLimits,
) -> Result<(PolicyTree, f64)> {
    limits.check_items(problem)?;
    let lattice = Lattice::build(problem, limits.max_lattice)?;
    let inst = problem.instance();
    // Values are unnormalized: V(ψ)·Pr[Φ∼ψ].
    let mut value = vec![0.0; lattice.len()];
    let mut choice = vec![Choice::Stop; lattice.len()];
    for i in (0..lattice.len()).rev() {
        let node = lattice.node(i);
        let dom = node.psi.domain();
        let spent = inst.set_cost(dom);
        let mut best: f64 = node
            .atoms
            .iter()
            .map(|&a| problem.prob(a) * problem.f(dom, a))
            .sum();
        let mut pick = Choice::Stop;
        for e in inst.item_ids() {
            if dom.contains(e) || spent + inst.cost(e) > budget + PROB_TOL {
                continue;
            }
            let v: f64 = node.children[e.0].iter().map(|&(_, c)| value[c]).sum();
            if v > best + TIE_EPS {
                best = v;
                pick = Choice::Select(e);
            }
        }
        value[i] = best;
        choice[i] = pick;
    }
    fn build(lattice: &Lattice, choice: &[Choice], i: usize) -> PolicyTree {
        match choice[i] {
            Choice::Stop => PolicyTree::stop(),
            Choice::Select(e) => PolicyTree::select(
                e,
                lattice.node(i).children[e.0]
                    .iter()
                    .map(|&(s, c)| (s, build(lattice, choice, c)))
                    .collect(),
            ),
        }
    }
    Ok((build(&lattice, &choice, 0), value[0]))
}
