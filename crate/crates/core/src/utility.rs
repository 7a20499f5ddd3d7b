//! Utility functions `f(A, φ)` and their conditional expected marginals.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{ItemId, ItemSet, PartialRealization, Realization, StateId};
use crate::policies::{Action, Policy};
use crate::problem::Problem;

/// Stochastic modular part: `Σ_{e∈A} w_e·[φ(e) = active]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Modular {
    pub weights: Vec<f64>,
    pub active: StateId,
}

impl Modular {
    fn value(&self, set: ItemSet, states: &[StateId]) -> f64 {
        set.iter()
            .filter(|e| states[e.0] == self.active)
            .map(|e| self.weights[e.0])
            .sum()
    }
}

/// Weighted cut function on a graph over the items; state independent.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub edges: Vec<(ItemId, ItemId, f64)>,
}

impl Cut {
    fn value(&self, set: ItemSet) -> f64 {
        self.edges
            .iter()
            .filter(|(u, v, _)| set.contains(*u) != set.contains(*v))
            .map(|(_, _, w)| w)
            .sum()
    }
}

/// Coverage of a universe by the items observed in the active state.
#[derive(Debug, Clone, PartialEq)]
pub struct Coverage {
    pub universe: Vec<String>,
    /// Universe indices covered by each item.
    pub covers: Vec<Vec<usize>>,
    pub active: StateId,
}

impl Coverage {
    fn value(&self, set: ItemSet, states: &[StateId]) -> f64 {
        let mut covered = vec![false; self.universe.len()];
        for e in set.iter().filter(|e| states[e.0] == self.active) {
            for &u in &self.covers[e.0] {
                covered[u] = true;
            }
        }
        covered.iter().filter(|&&c| c).count() as f64
    }
}

type UtilityFn = dyn Fn(ItemSet, &[StateId]) -> f64 + Send + Sync;

/// User-supplied evaluator. Must be deterministic and nonnegative.
#[derive(Clone)]
pub struct CustomUtility {
    name: String,
    eval: Arc<UtilityFn>,
}

impl CustomUtility {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(ItemSet, &[StateId]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CustomUtility {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomUtility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomUtility")
            .field("name", &self.name)
            .finish()
    }
}

impl PartialEq for CustomUtility {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.eval, &other.eval)
    }
}

/// The benchmark objective families plus an escape hatch for custom code.
#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    StochasticModular(Modular),
    GraphCut(Cut),
    /// `λ·modular + (1−λ)·cut`.
    Blend {
        lambda: f64,
        modular: Modular,
        cut: Cut,
    },
    StochasticCoverage(Coverage),
    /// `value` if `|A| = size`, else 0. Not adaptive submodular.
    SizeIndicator {
        size: usize,
        value: f64,
    },
    Zero,
    Custom(CustomUtility),
}

impl Objective {
    pub fn kind(&self) -> &'static str {
        match self {
            Objective::StochasticModular(_) => "stochastic-modular",
            Objective::GraphCut(_) => "graph-cut",
            Objective::Blend { .. } => "blend",
            Objective::StochasticCoverage(_) => "stochastic-coverage",
            Objective::SizeIndicator { .. } => "size-indicator",
            Objective::Zero => "zero",
            Objective::Custom(_) => "custom",
        }
    }

    /// `f(A, φ)` on dense state vectors. No bounds checks.
    pub fn value(&self, set: ItemSet, states: &[StateId]) -> f64 {
        match self {
            Objective::StochasticModular(m) => m.value(set, states),
            Objective::GraphCut(c) => c.value(set),
            Objective::Blend {
                lambda,
                modular,
                cut,
            } => lambda * modular.value(set, states) + (1.0 - lambda) * cut.value(set),
            Objective::StochasticCoverage(c) => c.value(set, states),
            Objective::SizeIndicator { size, value } => {
                if set.len() == *size {
                    *value
                } else {
                    0.0
                }
            }
            Objective::Zero => 0.0,
            Objective::Custom(c) => (c.eval)(set, states),
        }
    }

    pub(crate) fn validate(&self, n: usize, n_states: usize) -> Result<()> {
        let check_modular = |m: &Modular| -> Result<()> {
            if m.weights.len() != n {
                return Err(Error::Validation(format!(
                    "{} weights for {n} items",
                    m.weights.len()
                )));
            }
            if m.weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                return Err(Error::Validation(
                    "modular weights must be nonnegative".into(),
                ));
            }
            if m.active.0 as usize >= n_states {
                return Err(Error::Validation("active state out of range".into()));
            }
            Ok(())
        };
        let check_cut = |c: &Cut| -> Result<()> {
            for (u, v, w) in &c.edges {
                if u.0 >= n || v.0 >= n || u == v {
                    return Err(Error::Validation("bad edge endpoints".into()));
                }
                if !w.is_finite() || *w < 0.0 {
                    return Err(Error::Validation("edge weights must be nonnegative".into()));
                }
            }
            Ok(())
        };
        match self {
            Objective::StochasticModular(m) => check_modular(m),
            Objective::GraphCut(c) => check_cut(c),
            Objective::Blend {
                lambda,
                modular,
                cut,
            } => {
                if !(0.0..=1.0).contains(lambda) {
                    return Err(Error::Validation("blend lambda must lie in [0, 1]".into()));
                }
                check_modular(modular)?;
                check_cut(cut)
            }
            Objective::StochasticCoverage(c) => {
                if c.covers.len() != n {
                    return Err(Error::Validation(format!(
                        "{} coverage lists for {n} items",
                        c.covers.len()
                    )));
                }
                if c.covers.iter().flatten().any(|&u| u >= c.universe.len()) {
                    return Err(Error::Validation("coverage index out of range".into()));
                }
                if c.active.0 as usize >= n_states {
                    return Err(Error::Validation("active state out of range".into()));
                }
                Ok(())
            }
            Objective::SizeIndicator { value, .. } => {
                if !value.is_finite() || *value < 0.0 {
                    return Err(Error::Validation(
                        "indicator value must be nonnegative".into(),
                    ));
                }
                Ok(())
            }
            Objective::Zero | Objective::Custom(_) => Ok(()),
        }
    }
}

/// `f(A, φ)` with argument checks.
pub fn evaluate(problem: &Problem, set: ItemSet, phi: &Realization) -> Result<f64> {
    let inst = problem.instance();
    if !set.is_subset(inst.ground_set()) {
        return Err(Error::InvalidArgument(
            "set contains items outside the ground set".into(),
        ));
    }
    if phi.len() != inst.len() {
        return Err(Error::InvalidArgument(
            "realization does not cover the ground set".into(),
        ));
    }
    Ok(inst.utility().value(set, phi.states()))
}

/// `Δ(e | ψ)`. May be negative.
pub fn marginal_item(problem: &Problem, e: ItemId, psi: &PartialRealization) -> Result<f64> {
    if e.0 >= problem.len() {
        return Err(Error::InvalidArgument(format!(
            "item index {} outside ground set",
            e.0
        )));
    }
    Ok(problem.marginals(psi)?[e.0])
}

/// `Δ` of a policy action: the marginal of the selected item, 0 for a no-op.
pub fn marginal_action(problem: &Problem, action: Action, psi: &PartialRealization) -> Result<f64> {
    match action {
        Action::Select(e) => marginal_item(problem, e, psi),
        Action::NoOp | Action::Dummy(_) => {
            problem.check_possible(psi)?;
            Ok(0.0)
        }
    }
}

/// `Δ(S | ψ)`.
pub fn marginal_set(problem: &Problem, set: ItemSet, psi: &PartialRealization) -> Result<f64> {
    if !set.is_subset(problem.instance().ground_set()) {
        return Err(Error::InvalidArgument(
            "set contains items outside the ground set".into(),
        ));
    }
    let dom = problem.check_partial(psi)?;
    let mass = problem.check_possible(psi)?;
    let grown = dom.union(set);
    let total: f64 = problem
        .consistent_atoms(psi)
        .map(|i| problem.prob(i) * (problem.f(grown, i) - problem.f(dom, i)))
        .sum();
    Ok(total / mass)
}

/// `Δ(π | ψ)`, computed exactly by tree expansion.
pub fn marginal_policy(
    problem: &Problem,
    policy: &Policy,
    psi: &PartialRealization,
) -> Result<f64> {
    crate::evaluation::policy_marginal(problem, policy, psi, crate::evaluation::DEFAULT_NODE_LIMIT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn brute_expectation(p: &Problem, set: ItemSet, psi: &PartialRealization) -> f64 {
        let support = p.instance().prior().support();
        let consistent: Vec<_> = support
            .iter()
            .filter(|(r, _)| crate::model::consistent(r, psi).unwrap())
            .collect();
        let mass: f64 = consistent.iter().map(|(_, q)| q).sum();
        consistent
            .iter()
            .map(|(r, q)| q * p.instance().utility().value(set, r.states()))
            .sum::<f64>()
            / mass
    }

    #[test]
    fn evaluate_examples() {
        let p = modular(&[1.0, 1.0], 0.5, 1);
        let phi = Realization(vec![StateId(1), StateId(0)]);
        assert_eq!(evaluate(&p, ItemSet(0b11), &phi).unwrap(), 1.0);

        let p = edge(2);
        assert_eq!(evaluate(&p, ItemSet(0b01), &phi).unwrap(), 1.0);
        assert_eq!(evaluate(&p, ItemSet(0b11), &phi).unwrap(), 0.0);
        assert!(evaluate(&p, ItemSet(0b100), &phi).is_err());
    }

    #[test]
    fn item_marginals() {
        let p = modular(&[1.0, 1.0], 0.5, 1);
        let empty = PartialRealization::empty(2);
        assert!((marginal_item(&p, ItemId(0), &empty).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(marginal_action(&p, Action::NoOp, &empty).unwrap(), 0.0);

        let p = edge(2);
        let psi = PartialRealization::from_pairs(2, &[(ItemId(0), StateId(1))]).unwrap();
        assert!((marginal_item(&p, ItemId(1), &psi).unwrap() + 1.0).abs() < 1e-12);
        // brute-force cross-check over the support
        let brute =
            brute_expectation(&p, ItemSet(0b11), &psi) - brute_expectation(&p, ItemSet(0b01), &psi);
        assert!((brute + 1.0).abs() < 1e-12);
    }

    #[test]
    fn set_marginals() {
        let p = modular(&[1.0, 1.0], 0.5, 1);
        let empty = PartialRealization::empty(2);
        assert_eq!(marginal_set(&p, ItemSet::EMPTY, &empty).unwrap(), 0.0);
        assert!((marginal_set(&p, ItemSet(0b11), &empty).unwrap() - 1.0).abs() < 1e-12);
        let p = edge(2);
        assert_eq!(marginal_set(&p, ItemSet(0b11), &empty).unwrap(), 0.0);
        assert_eq!(
            marginal_set(&p, ItemSet(0b10), &empty).unwrap(),
            marginal_item(&p, ItemId(1), &empty).unwrap()
        );
    }

    #[test]
    fn impossible_conditioning() {
        let p = modular(&[1.0], 1.0, 1);
        let psi = PartialRealization::from_pairs(1, &[(ItemId(0), StateId(0))]).unwrap();
        assert_eq!(
            marginal_item(&p, ItemId(0), &psi),
            Err(Error::ImpossibleObservation)
        );
    }

    #[test]
    fn blend_endpoints_match_components() {
        let modular = Modular {
            weights: vec![1.0, 2.0, 0.5],
            active: StateId(1),
        };
        let cut = Cut {
            edges: vec![(ItemId(0), ItemId(1), 1.0), (ItemId(1), ItemId(2), 2.0)],
        };
        let b1 = Objective::Blend {
            lambda: 1.0,
            modular: modular.clone(),
            cut: cut.clone(),
        };
        let b0 = Objective::Blend {
            lambda: 0.0,
            modular: modular.clone(),
            cut: cut.clone(),
        };
        let m = Objective::StochasticModular(modular);
        let c = Objective::GraphCut(cut);
        for mask in 0..8u64 {
            for st in 0..8u16 {
                let states: Vec<StateId> = (0..3).map(|i| StateId(st >> i & 1)).collect();
                let set = ItemSet(mask);
                assert_eq!(b1.value(set, &states), m.value(set, &states));
                assert_eq!(b0.value(set, &states), c.value(set, &states));
            }
        }
    }

    #[test]
    fn coverage_counts_active_items_only() {
        let cov = Objective::StochasticCoverage(Coverage {
            universe: vec!["x".into(), "y".into(), "z".into()],
            covers: vec![vec![0, 1], vec![1, 2]],
            active: StateId(1),
        });
        let on = [StateId(1), StateId(1)];
        let mixed = [StateId(1), StateId(0)];
        assert_eq!(cov.value(ItemSet(0b11), &on), 3.0);
        assert_eq!(cov.value(ItemSet(0b11), &mixed), 2.0);
        assert_eq!(cov.value(ItemSet(0b10), &mixed), 0.0);
    }
}
