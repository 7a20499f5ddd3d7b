use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{ItemId, ItemSet, PROB_TOL};
use crate::policies::tree::TreeNode;
use crate::policies::PolicyTree;
use crate::problem::Problem;

use super::lattice::Lattice;
use super::OracleLimits;

fn affordable(problem: &Problem, budget: Option<f64>, dom: ItemSet, e: ItemId) -> bool {
    budget.is_none_or(|k| {
        let inst = problem.instance();
        inst.set_cost(dom) + inst.cost(e) <= k + PROB_TOL
    })
}

/// Visits every index tuple `0..sizes[0] × 0..sizes[1] × ...`, first
/// position most significant.
fn for_each_combination(sizes: &[usize], mut visit: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut idx = vec![0; sizes.len()];
    loop {
        visit(&idx);
        let mut j = sizes.len();
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < sizes[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Number of deterministic policy trees; saturates at `u128::MAX`.
pub fn count_policies(
    problem: &Problem,
    budget: Option<f64>,
    limits: &OracleLimits,
) -> Result<u128> {
    limits.check_items(problem)?;
    let lattice = Lattice::build(problem, limits.max_lattice)?;
    Ok(tree_counts(problem, &lattice, budget)[0])
}

fn tree_counts(problem: &Problem, lattice: &Lattice, budget: Option<f64>) -> Vec<u128> {
    let mut count = vec![0u128; lattice.len()];
    for i in (0..lattice.len()).rev() {
        let node = lattice.node(i);
        let dom = node.psi.domain();
        let mut total: u128 = 1;
        for e in (0..problem.len()).map(ItemId) {
            if dom.contains(e) || !affordable(problem, budget, dom, e) {
                continue;
            }
            let prod = node.children[e.0]
                .iter()
                .fold(1u128, |acc, &(_, c)| acc.saturating_mul(count[c]));
            total = total.saturating_add(prod);
        }
        count[i] = total;
    }
    count
}

/// Every deterministic policy tree whose root-to-leaf paths cost at most
/// `budget` (`None`: no limit), including the empty policy. Trees branch only
/// on positive-probability observations. Order: stop first, then by first
/// item ascending, then by subtrees in state order.
pub fn enumerate_policies(
    problem: &Problem,
    budget: Option<f64>,
    limits: &OracleLimits,
) -> Result<Vec<PolicyTree>> {
    limits.check_items(problem)?;
    let lattice = Lattice::build(problem, limits.max_lattice)?;
    let counts = tree_counts(problem, &lattice, budget);
    if counts[0] > limits.max_policies as u128 {
        return Err(Error::too_large("policy enumeration", limits.max_policies));
    }
    let mut memo: Vec<Option<Vec<PolicyTree>>> = vec![None; lattice.len()];
    fill_trees(problem, &lattice, budget, 0, &mut memo);
    Ok(memo[0].take().expect("root filled"))
}

fn fill_trees(
    problem: &Problem,
    lattice: &Lattice,
    budget: Option<f64>,
    i: usize,
    memo: &mut Vec<Option<Vec<PolicyTree>>>,
) {
    if memo[i].is_some() {
        return;
    }
    let node = lattice.node(i);
    let dom = node.psi.domain();
    let mut out = vec![PolicyTree::stop()];
    for e in (0..problem.len()).map(ItemId) {
        if dom.contains(e) || !affordable(problem, budget, dom, e) {
            continue;
        }
        let links = &node.children[e.0];
        for &(_, c) in links {
            fill_trees(problem, lattice, budget, c, memo);
        }
        let sizes: Vec<usize> = links
            .iter()
            .map(|&(_, c)| memo[c].as_ref().expect("child filled").len())
            .collect();
        for_each_combination(&sizes, |idx| {
            let children = links
                .iter()
                .zip(idx)
                .map(|(&(s, c), &j)| (s, memo[c].as_ref().expect("child filled")[j].clone()))
                .collect();
            out.push(PolicyTree::select(e, children));
        });
    }
    memo[i] = Some(out);
}

/// Final selected set of `tree` on every support atom.
pub fn tree_outcomes(problem: &Problem, tree: &PolicyTree) -> Vec<ItemSet> {
    problem
        .atoms()
        .iter()
        .map(|phi| {
            let mut set = ItemSet::EMPTY;
            let mut at = tree.root();
            while let TreeNode::Select { item, .. } = tree.node(at) {
                set = set.with(*item);
                match tree.child(at, phi.state(*item)) {
                    Some(c) => at = c,
                    None => break,
                }
            }
            set
        })
        .collect()
}

/// `Σ_φ p(φ) f(sets[φ], φ)` for per-atom selected sets.
pub fn outcome_value(problem: &Problem, sets: &[ItemSet]) -> f64 {
    sets.iter()
        .enumerate()
        .map(|(a, s)| problem.prob(a) * problem.f(*s, a))
        .sum()
}

/// `f_avg(π@π′)` from the outcomes of two deterministic policies.
pub fn composed_value(problem: &Problem, first: &[ItemSet], second: &[ItemSet]) -> f64 {
    first
        .iter()
        .zip(second)
        .enumerate()
        .map(|(a, (x, y))| problem.prob(a) * problem.f(x.union(*y), a))
        .sum()
}

/// Items selected with positive probability.
pub fn outcome_range(sets: &[ItemSet]) -> ItemSet {
    sets.iter().fold(ItemSet::EMPTY, |acc, s| acc.union(*s))
}

#[derive(Debug, Clone)]
enum Recipe {
    Stop,
    Select(ItemId, Vec<usize>),
}

/// A distinct outcome map: the selected set on each atom of a lattice node.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// Aligned with the node's atoms.
    pub sets: Vec<ItemSet>,
    recipe: Recipe,
}

/// The deterministic policies of an instance up to outcome equivalence: two
/// trees that select the same set on every realization are one entry. Kept
/// in the order of their first tree in [`enumerate_policies`] order.
#[derive(Debug)]
pub struct PolicySpace<'l> {
    lattice: &'l Lattice,
    outcomes: Vec<Option<Vec<Outcome>>>,
}

impl<'l> PolicySpace<'l> {
    pub fn build(
        problem: &Problem,
        lattice: &'l Lattice,
        budget: Option<f64>,
        max_policies: u64,
    ) -> Result<Self> {
        let mut space = PolicySpace {
            lattice,
            outcomes: vec![None; lattice.len()],
        };
        space.fill(problem, budget, max_policies, 0)?;
        Ok(space)
    }

    fn fill(&mut self, problem: &Problem, budget: Option<f64>, max: u64, i: usize) -> Result<()> {
        if self.outcomes[i].is_some() {
            return Ok(());
        }
        let lattice = self.lattice;
        let node = lattice.node(i);
        let dom = node.psi.domain();
        let items: Vec<ItemId> = (0..problem.len())
            .map(ItemId)
            .filter(|&e| !dom.contains(e) && affordable(problem, budget, dom, e))
            .collect();
        for &e in &items {
            for &(_, c) in &node.children[e.0] {
                self.fill(problem, budget, max, c)?;
            }
        }
        let size = |c: usize| self.outcomes[c].as_ref().expect("child filled").len();
        let combos = items.iter().fold(1u128, |acc, e| {
            let prod = node.children[e.0]
                .iter()
                .fold(1u128, |p, &(_, c)| p.saturating_mul(size(c) as u128));
            acc.saturating_add(prod)
        });
        if combos > max as u128 {
            return Err(Error::too_large("policy enumeration", max));
        }

        let mut seen: HashSet<Vec<ItemSet>> = HashSet::new();
        let mut out = Vec::new();
        let stop = vec![dom; node.atoms.len()];
        seen.insert(stop.clone());
        out.push(Outcome {
            sets: stop,
            recipe: Recipe::Stop,
        });
        for &e in &items {
            let links = &node.children[e.0];
            // where each atom of this node lands among the children
            let mut cursor = vec![0usize; links.len()];
            let route: Vec<(usize, usize)> = node
                .atoms
                .iter()
                .map(|&a| {
                    let s = problem.atoms()[a].state(e);
                    let j = links
                        .iter()
                        .position(|&(t, _)| t == s)
                        .expect("state has a child");
                    cursor[j] += 1;
                    (j, cursor[j] - 1)
                })
                .collect();
            let children: Vec<&[Outcome]> = links
                .iter()
                .map(|&(_, c)| self.outcomes[c].as_deref().expect("child filled"))
                .collect();
            let sizes: Vec<usize> = children.iter().map(|c| c.len()).collect();
            for_each_combination(&sizes, |idx| {
                let sets: Vec<ItemSet> = route
                    .iter()
                    .map(|&(j, pos)| children[j][idx[j]].sets[pos])
                    .collect();
                if seen.insert(sets.clone()) {
                    out.push(Outcome {
                        sets,
                        recipe: Recipe::Select(e, idx.to_vec()),
                    });
                }
            });
        }
        self.outcomes[i] = Some(out);
        Ok(())
    }

    pub fn lattice(&self) -> &'l Lattice {
        self.lattice
    }

    /// Distinct outcome maps of the whole instance, over all support atoms.
    pub fn root(&self) -> &[Outcome] {
        self.outcomes[0].as_deref().expect("root filled")
    }

    pub fn len(&self) -> usize {
        self.root().len()
    }

    pub fn is_empty(&self) -> bool {
        self.root().is_empty()
    }

    /// A tree realizing the `idx`-th root outcome.
    pub fn tree(&self, idx: usize) -> PolicyTree {
        self.tree_at(0, idx)
    }

    fn tree_at(&self, node: usize, idx: usize) -> PolicyTree {
        let outcome = &self.outcomes[node].as_ref().expect("node filled")[idx];
        match &outcome.recipe {
            Recipe::Stop => PolicyTree::stop(),
            Recipe::Select(e, picks) => {
                let links = &self.lattice.node(node).children[e.0];
                PolicyTree::select(
                    *e,
                    links
                        .iter()
                        .zip(picks)
                        .map(|(&(s, c), &j)| (s, self.tree_at(c, j)))
                        .collect(),
                )
            }
        }
    }
}
