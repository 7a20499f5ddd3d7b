use rayon::prelude::*;

use crate::error::Result;
use crate::model::{ItemId, ItemSet, PROB_TOL};
use crate::policies::{PolicyTree, TIE_EPS};
use crate::problem::Problem;

use super::enumerate::{composed_value, outcome_value, tree_outcomes, PolicySpace};
use super::lattice::Lattice;
use super::OracleLimits;

/// The adaptive monotonicity ratio of an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityRatio {
    /// `min f_avg(π@π′)/f_avg(π)` over all deterministic policy pairs of
    /// any depth. Never above 1, since `π′ = ∅` gives exactly 1.
    pub raw: f64,
    /// `raw` clamped to `[0, 1]`.
    pub m: f64,
    /// The same minimum with both policies restricted to the budget.
    pub feasible: f64,
    /// Distinct outcome maps among all policies, and among feasible ones.
    pub policies: usize,
    pub feasible_policies: usize,
    /// Minimizing pair, when the minimum is below 1.
    pub witness: Option<RatioWitness>,
}

/// A pair `(π, π′)` attaining the ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioWitness {
    pub policy: PolicyTree,
    pub follow_up: PolicyTree,
    /// `f_avg(π@π′)`.
    pub numerator: f64,
    /// `f_avg(π)`.
    pub denominator: f64,
}

impl RatioWitness {
    pub fn ratio(&self) -> f64 {
        self.numerator / self.denominator
    }

    /// Recomputes both sides from the trees.
    pub fn verify(&self, problem: &Problem, tol: f64) -> bool {
        let a = tree_outcomes(problem, &self.policy);
        let b = tree_outcomes(problem, &self.follow_up);
        (outcome_value(problem, &a) - self.denominator).abs() <= tol
            && (composed_value(problem, &a, &b) - self.numerator).abs() <= tol
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    value: f64,
    selections: f64,
    choice: Option<ItemId>,
}

/// `min_{π′} f_avg(π@π′)` for a policy `π` given by its per-atom outcomes,
/// by dynamic programming over the follow-up's own observations. Returns
/// the value and a minimizing follow-up (ties: fewer expected selections,
/// then stop, then lowest item id).
pub fn worst_follow_up(
    problem: &Problem,
    lattice: &Lattice,
    first: &[ItemSet],
    budget: Option<f64>,
) -> (f64, PolicyTree) {
    let mut cells = Vec::new();
    let value = follow_up_table(problem, lattice, first, budget, &mut cells);
    fn build(lattice: &Lattice, cells: &[Cell], i: usize) -> PolicyTree {
        match cells[i].choice {
            None => PolicyTree::stop(),
            Some(e) => PolicyTree::select(
                e,
                lattice.node(i).children[e.0]
                    .iter()
                    .map(|&(s, c)| (s, build(lattice, cells, c)))
                    .collect(),
            ),
        }
    }
    (value, build(lattice, &cells, 0))
}

fn follow_up_table(
    problem: &Problem,
    lattice: &Lattice,
    first: &[ItemSet],
    budget: Option<f64>,
    cells: &mut Vec<Cell>,
) -> f64 {
    let inst = problem.instance();
    cells.clear();
    cells.resize(
        lattice.len(),
        Cell {
            value: 0.0,
            selections: 0.0,
            choice: None,
        },
    );
    for i in (0..lattice.len()).rev() {
        let node = lattice.node(i);
        let dom = node.psi.domain();
        let spent = inst.set_cost(dom);
        let mut best = Cell {
            value: node
                .atoms
                .iter()
                .map(|&a| problem.prob(a) * problem.f(first[a].union(dom), a))
                .sum(),
            selections: 0.0,
            choice: None,
        };
        for e in inst.item_ids() {
            if dom.contains(e) || budget.is_some_and(|k| spent + inst.cost(e) > k + PROB_TOL) {
                continue;
            }
            let (value, selections) =
                node.children[e.0]
                    .iter()
                    .fold((0.0, 0.0), |(v, s), &(_, c)| {
                        (
                            v + cells[c].value,
                            s + lattice.node(c).mass + cells[c].selections,
                        )
                    });
            let better = value < best.value - TIE_EPS
                || (value <= best.value + TIE_EPS && selections < best.selections - TIE_EPS);
            if better {
                best = Cell {
                    value,
                    selections,
                    choice: Some(e),
                };
            }
        }
        cells[i] = best;
    }
    cells[0].value
}

struct Minimum {
    ratio: f64,
    index: Option<usize>,
    count: usize,
}

fn minimum<'l>(
    problem: &Problem,
    lattice: &'l Lattice,
    budget: Option<f64>,
    limits: &OracleLimits,
) -> Result<(Minimum, PolicySpace<'l>)> {
    let space = PolicySpace::build(problem, lattice, budget, limits.max_policies)?;
    let ratios: Vec<f64> = space
        .root()
        .par_iter()
        .map_init(Vec::new, |cells, outcome| {
            let denominator = outcome_value(problem, &outcome.sets);
            if denominator <= TIE_EPS {
                return 1.0;
            }
            follow_up_table(problem, lattice, &outcome.sets, budget, cells) / denominator
        })
        .collect();
    let mut best = Minimum {
        ratio: 1.0,
        index: None,
        count: ratios.len(),
    };
    for (i, r) in ratios.into_iter().enumerate() {
        if r < best.ratio - TIE_EPS {
            best.ratio = r;
            best.index = Some(i);
        }
    }
    Ok((best, space))
}

/// Exact adaptive monotonicity ratio. Deterministic policies suffice: for a
/// fixed follow-up the ratio is linear-fractional in the mixture weights of
/// `π`, and the inner minimum over `π′` is attained by a deterministic
/// policy found by dynamic programming.
pub fn monotonicity_ratio(problem: &Problem, limits: &OracleLimits) -> Result<MonotonicityRatio> {
    limits.check_items(problem)?;
    let lattice = Lattice::build(problem, limits.max_lattice)?;
    let (all, space) = minimum(problem, &lattice, None, limits)?;
    let witness = all.index.map(|i| {
        let sets = &space.root()[i].sets;
        let (numerator, follow_up) = worst_follow_up(problem, &lattice, sets, None);
        RatioWitness {
            policy: space.tree(i),
            follow_up,
            numerator,
            denominator: outcome_value(problem, sets),
        }
    });
    drop(space);
    let budget = Some(problem.instance().budget());
    let (feasible, _) = minimum(problem, &lattice, budget, limits)?;
    Ok(MonotonicityRatio {
        raw: all.ratio,
        m: all.ratio.clamp(0.0, 1.0),
        feasible: feasible.ratio,
        policies: all.count,
        feasible_policies: feasible.count,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracles::enumerate::enumerate_policies;

    #[test]
    fn edge_has_ratio_zero_with_named_witness() {
        let p = fixtures::edge(2);
        let r = monotonicity_ratio(&p, &OracleLimits::default()).unwrap();
        assert_eq!(r.raw, 0.0);
        assert_eq!(r.m, 0.0);
        let w = r.witness.unwrap();
        assert_eq!(w.policy.render(p.instance()), "a");
        assert_eq!(w.follow_up.render(p.instance()), "b");
        assert_eq!((w.numerator, w.denominator), (0.0, 1.0));
        assert!(w.verify(&p, 1e-12));
    }

    #[test]
    fn modular_has_ratio_one() {
        let p = fixtures::modular(&[2.0, 1.0, 0.5], 0.4, 2);
        let r = monotonicity_ratio(&p, &OracleLimits::default()).unwrap();
        assert!((r.raw - 1.0).abs() < 1e-9);
        assert!(r.witness.is_none());
        assert!((r.feasible - 1.0).abs() < 1e-9);
    }

    #[test]
    fn agrees_with_pairwise_brute_force() {
        let blend = crate::utility::Objective::Blend {
            lambda: 0.5,
            modular: crate::utility::Modular {
                weights: vec![1.0, 0.5, 2.0],
                active: crate::model::StateId(1),
            },
            cut: crate::utility::Cut {
                edges: vec![(ItemId(0), ItemId(1), 1.0), (ItemId(1), ItemId(2), 2.0)],
            },
        };
        let base = fixtures::modular(&[1.0, 1.0, 1.0], 0.5, 2);
        let inst = crate::model::Instance::new(
            "blend",
            base.instance().items().to_vec(),
            base.instance().states().clone(),
            crate::model::Prior::Independent(vec![vec![0.3, 0.7], vec![0.5, 0.5], vec![0.6, 0.4]]),
            blend,
            2.0,
            crate::model::Constraint::Cardinality,
        )
        .unwrap();
        let p = Problem::new(inst).unwrap();
        let limits = OracleLimits::default();
        let trees = enumerate_policies(&p, None, &limits).unwrap();
        let outcomes: Vec<Vec<ItemSet>> = trees.iter().map(|t| tree_outcomes(&p, t)).collect();
        let mut brute = 1.0f64;
        for a in &outcomes {
            let d = outcome_value(&p, a);
            if d <= TIE_EPS {
                continue;
            }
            for b in &outcomes {
                brute = brute.min(composed_value(&p, a, b) / d);
            }
        }
        let r = monotonicity_ratio(&p, &limits).unwrap();
        assert!((r.raw - brute).abs() < 1e-12, "{} vs {brute}", r.raw);
        assert!(r.raw > 0.0 && r.raw < 1.0);
        assert!(r.feasible >= r.raw - 1e-12);
    }
}
