//! Expected utility of a policy, exactly or by Monte Carlo.
//!
//! Exact evaluation expands the policy's decision process as a tree. Up-front
//! randomness (sample sets, mixture branch) and per-step randomness (greedy
//! slots) become weighted branches; the state of an item is drawn from its
//! conditional distribution only when the item is selected. At a leaf with
//! observations `ψ` the value is `E[f(dom ψ, Φ) | Φ ∼ ψ]`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ItemSet, PartialRealization};
use crate::policies::{simulate, Action, Policy, Run, Step};
use crate::problem::Problem;

/// Default bound on expanded nodes for exact evaluation.
pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact,
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::MonteCarlo => "monte-carlo",
        })
    }
}

/// Value of `f_avg(π)` with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub value: f64,
    pub method: Method,
    /// Monte Carlo only.
    pub samples: Option<u64>,
    /// Monte Carlo only.
    pub std_error: Option<f64>,
    /// Monte Carlo only.
    pub seed: Option<u64>,
    /// Exact only: expanded decision nodes.
    pub nodes: Option<u64>,
}

impl EvaluationReport {
    fn exact(value: f64, nodes: u64) -> Self {
        EvaluationReport {
            value,
            method: Method::Exact,
            samples: None,
            std_error: None,
            seed: None,
            nodes: Some(nodes),
        }
    }
}

struct Expander<'a> {
    problem: &'a Problem,
    limit: u64,
    nodes: &'a AtomicU64,
}

impl<'a> Expander<'a> {
    fn expand<'p, A>(
        &self,
        run: Run<'p>,
        psi: PartialRealization,
        weight: f64,
        acc: &mut A,
        visit: &(impl Fn(&mut A, &PartialRealization, f64) -> Result<()> + Sync),
    ) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.limit {
            return Err(Error::too_large("exact expansion nodes", self.limit));
        }
        for (p, step) in run.step(self.problem)? {
            let w = weight * p;
            if w == 0.0 {
                continue;
            }
            match step {
                Step::Stop => visit(acc, &psi, w)?,
                Step::Act(Action::Select(e), next) => match psi.get(e) {
                    Some(s) => {
                        let mut next = next;
                        next.observe(e, s);
                        self.expand(next, psi.clone(), w, acc, visit)?;
                    }
                    None => {
                        for (s, q) in self.problem.state_distribution(e, &psi)? {
                            let mut branch = next.clone();
                            branch.observe(e, s);
                            self.expand(branch, psi.with(e, s), w * q, acc, visit)?;
                        }
                    }
                },
                Step::Act(Action::NoOp | Action::Dummy(_), next) => {
                    self.expand(next, psi.clone(), w, acc, visit)?
                }
            }
        }
        Ok(())
    }
}

/// Folds `visit` over every leaf `(ψ, probability)` of the expansion, one
/// accumulator per up-front branch of the policy (in order). Leaf
/// probabilities are conditional on `psi0`.
fn fold_leaves<A: Send>(
    problem: &Problem,
    policy: &Policy,
    psi0: &PartialRealization,
    limit: u64,
    init: impl Fn() -> A + Sync,
    visit: impl Fn(&mut A, &PartialRealization, f64) -> Result<()> + Sync,
) -> Result<(Vec<A>, u64)> {
    problem.check_possible(psi0)?;
    let starts = policy.start(problem)?;
    let nodes = AtomicU64::new(0);
    let ex = Expander {
        problem,
        limit,
        nodes: &nodes,
    };
    let accs = starts
        .into_par_iter()
        .map(|(w, run)| {
            let mut acc = init();
            ex.expand(run, psi0.clone(), w, &mut acc, &visit)?;
            Ok(acc)
        })
        .collect::<Result<Vec<A>>>()?;
    Ok((accs, nodes.load(Ordering::Relaxed)))
}

fn leaf_value(problem: &Problem, psi: &PartialRealization) -> Result<f64> {
    problem.expected_value(psi.domain(), psi)
}

/// `f_avg(π)` by exhaustive expansion, failing with `TooLarge` past `node_limit`.
pub fn exact_favg(problem: &Problem, policy: &Policy, node_limit: u64) -> Result<EvaluationReport> {
    let (parts, nodes) = fold_leaves(
        problem,
        policy,
        &PartialRealization::empty(problem.len()),
        node_limit,
        || 0.0,
        |acc, psi, w| {
            *acc += w * leaf_value(problem, psi)?;
            Ok(())
        },
    )?;
    Ok(EvaluationReport::exact(parts.iter().sum(), nodes))
}

/// Exact distribution of the final selected set.
pub fn exact_set_distribution(
    problem: &Problem,
    policy: &Policy,
    node_limit: u64,
) -> Result<BTreeMap<ItemSet, f64>> {
    let (parts, _) = fold_leaves(
        problem,
        policy,
        &PartialRealization::empty(problem.len()),
        node_limit,
        BTreeMap::new,
        |acc: &mut BTreeMap<ItemSet, f64>, psi, w| {
            *acc.entry(psi.domain()).or_insert(0.0) += w;
            Ok(())
        },
    )?;
    let mut out = BTreeMap::new();
    for part in parts {
        for (set, w) in part {
            *out.entry(set).or_insert(0.0) += w;
        }
    }
    Ok(out)
}

/// `Δ(π | ψ)`: the policy runs from a fresh start against `Φ ∼ ψ`, and the
/// items of `dom ψ` count as already selected.
pub fn policy_marginal(
    problem: &Problem,
    policy: &Policy,
    psi: &PartialRealization,
    node_limit: u64,
) -> Result<f64> {
    let base = problem.expected_value(psi.domain(), psi)?;
    let (parts, _) = fold_leaves(
        problem,
        policy,
        psi,
        node_limit,
        || 0.0,
        |acc, leaf, w| {
            *acc += w * leaf_value(problem, leaf)?;
            Ok(())
        },
    )?;
    Ok(parts.iter().sum::<f64>() - base)
}

/// Monte Carlo estimate of `f_avg(π)`. Sample `i` uses seed `seed ^ i`, so
/// the estimate is reproducible regardless of thread count.
pub fn mc_favg(
    problem: &Problem,
    policy: &Policy,
    samples: u64,
    seed: u64,
) -> Result<EvaluationReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "at least one sample is required".into(),
        ));
    }
    policy.validate(problem)?;
    let values = (0..samples)
        .into_par_iter()
        .map(|i| simulate(problem, policy, seed ^ i).map(|t| t.utility))
        .collect::<Result<Vec<f64>>>()?;
    let n = samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std_error = if samples > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(EvaluationReport {
        value: mean,
        method: Method::MonteCarlo,
        samples: Some(samples),
        std_error: Some(std_error),
        seed: Some(seed),
        nodes: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{ItemId, StateId};
    use crate::policies::{compose, PolicyTree};

    #[test]
    fn never_select_is_zero() {
        let p = fixtures::edge(2);
        let r = exact_favg(&p, &Policy::Never, DEFAULT_NODE_LIMIT).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.method, Method::Exact);
        assert!(r.samples.is_none() && r.std_error.is_none());
    }

    #[test]
    fn exact_values_on_the_edge() {
        let p = fixtures::edge(2);
        let arg = exact_favg(&p, &Policy::RandomGreedy, DEFAULT_NODE_LIMIT).unwrap();
        assert!((arg.value - 1.0).abs() < 1e-15);
        let sad = exact_favg(&p, &Policy::SamplingDensityGreedy, DEFAULT_NODE_LIMIT).unwrap();
        assert!((sad.value - 0.8).abs() < 1e-15);
    }

    #[test]
    fn adaptive_tree_value() {
        // select a; if a is active select b
        let p = fixtures::modular(&[1.0, 1.0], 0.5, 2);
        let tree = PolicyTree::select(
            ItemId(0),
            vec![
                (StateId(0), PolicyTree::stop()),
                (StateId(1), PolicyTree::sequence(&[ItemId(1)], 2)),
            ],
        );
        let v = exact_favg(&p, &Policy::tree(tree.clone()), DEFAULT_NODE_LIMIT)
            .unwrap()
            .value;
        // hand enumeration: (a,b) ∈ {11,10} → 2,1 ; {01,00} → 0
        let hand = 0.25 * 2.0 + 0.25 * 1.0;
        assert!((v - hand).abs() < 1e-15);
        let m =
            crate::utility::marginal_policy(&p, &Policy::tree(tree), &PartialRealization::empty(2))
                .unwrap();
        assert!((m - 0.75).abs() < 1e-15);
    }

    #[test]
    fn policy_marginal_examples() {
        let p = fixtures::edge(2);
        let psi = PartialRealization::empty(2).with(ItemId(0), StateId(1));
        let sel_b = Policy::tree(PolicyTree::sequence(&[ItemId(1)], 2));
        let m = policy_marginal(&p, &sel_b, &psi, DEFAULT_NODE_LIMIT).unwrap();
        assert!((m + 1.0).abs() < 1e-15);
        assert_eq!(
            policy_marginal(&p, &Policy::Never, &psi, DEFAULT_NODE_LIMIT).unwrap(),
            0.0
        );
        let empty = PartialRealization::empty(2);
        assert_eq!(
            policy_marginal(&p, &Policy::RandomGreedy, &empty, DEFAULT_NODE_LIMIT).unwrap(),
            exact_favg(&p, &Policy::RandomGreedy, DEFAULT_NODE_LIMIT)
                .unwrap()
                .value
        );
    }

    #[test]
    fn node_limit_is_enforced() {
        let p = fixtures::modular(&[1.0, 2.0, 3.0, 4.0], 0.5, 3);
        assert!(matches!(
            exact_favg(&p, &Policy::RandomGreedy, 5),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn monte_carlo_deterministic_instance_has_zero_error() {
        let p = fixtures::modular(&[2.0], 1.0, 1);
        let r = mc_favg(&p, &Policy::Greedy, 500, 9).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.std_error, Some(0.0));
        assert_eq!(r, mc_favg(&p, &Policy::Greedy, 500, 9).unwrap());
    }

    #[test]
    fn monte_carlo_agrees_with_exact() {
        let p = fixtures::modular(&[1.0], 0.5, 1);
        let r = mc_favg(&p, &Policy::SamplingDensityGreedy, 20_000, 5).unwrap();
        assert!((r.value - 0.3).abs() <= 3.0 * r.std_error.unwrap());
        let p = fixtures::edge(2);
        let r = mc_favg(&p, &Policy::RandomGreedy, 20_000, 5).unwrap();
        assert!((r.value - 1.0).abs() <= 3.0 * r.std_error.unwrap() + 1e-12);
    }

    #[test]
    fn composition_union_semantics() {
        let p = fixtures::edge(2);
        let a = Policy::tree(PolicyTree::sequence(&[ItemId(0)], 2));
        let b = Policy::tree(PolicyTree::sequence(&[ItemId(1)], 2));
        let d = exact_set_distribution(&p, &compose(a, b), DEFAULT_NODE_LIMIT).unwrap();
        assert_eq!(
            d.into_iter().collect::<Vec<_>>(),
            vec![(ItemSet(0b11), 1.0)]
        );
    }
}
