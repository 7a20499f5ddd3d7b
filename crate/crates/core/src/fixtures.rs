//! Small hand-checkable instances used throughout the tests and docs.

use crate::model::{Constraint, Instance, Item, ItemId, Prior, Realization, StateId, StateSpace};
use crate::problem::Problem;
use crate::utility::{Cut, Modular, Objective};

/// Item ids `a`, `b`, `c`, ...
pub fn item_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect()
}

fn binary_states() -> StateSpace {
    StateSpace::new(["0", "1"]).expect("static state space")
}

fn unit_items(n: usize) -> Vec<Item> {
    item_names(n)
        .into_iter()
        .map(|id| Item::new(id, 1.0))
        .collect()
}

fn bernoulli(n: usize, p_active: f64) -> Prior {
    Prior::Independent(vec![vec![1.0 - p_active, p_active]; n])
}

fn build(name: &str, n: usize, prior: Prior, utility: Objective, k: f64, c: Constraint) -> Problem {
    let inst = Instance::new(name, unit_items(n), binary_states(), prior, utility, k, c)
        .expect("fixture instance is valid");
    Problem::new(inst).expect("fixture compiles")
}

/// Stochastic modular utility, items active (state `1`) independently
/// with probability `p_active`, cardinality budget `k`.
pub fn modular(weights: &[f64], p_active: f64, k: usize) -> Problem {
    let n = weights.len();
    build(
        "modular",
        n,
        bernoulli(n, p_active),
        Objective::StochasticModular(Modular {
            weights: weights.to_vec(),
            active: StateId(1),
        }),
        k as f64,
        Constraint::Cardinality,
    )
}

/// Single edge `a–b` of weight 1, Bernoulli(1/2) states, cardinality `k`.
pub fn edge(k: usize) -> Problem {
    build(
        "graph_cut_edge",
        2,
        bernoulli(2, 0.5),
        Objective::GraphCut(Cut {
            edges: vec![(ItemId(0), ItemId(1), 1.0)],
        }),
        k as f64,
        Constraint::Cardinality,
    )
}

/// The single-edge cut under a knapsack budget `k` with unit costs.
pub fn edge_knapsack(k: f64) -> Problem {
    build(
        "graph_cut_edge_knapsack",
        2,
        bernoulli(2, 0.5),
        Objective::GraphCut(Cut {
            edges: vec![(ItemId(0), ItemId(1), 1.0)],
        }),
        k,
        Constraint::Knapsack,
    )
}

/// Two perfectly correlated items, unit modular weights.
pub fn correlated_pair() -> Problem {
    let r = |a: u16, b: u16| Realization(vec![StateId(a), StateId(b)]);
    build(
        "correlated_pair",
        2,
        Prior::Joint(vec![(r(0, 0), 0.5), (r(1, 1), 0.5)]),
        Objective::StochasticModular(Modular {
            weights: vec![1.0, 1.0],
            active: StateId(1),
        }),
        1.0,
        Constraint::Cardinality,
    )
}

/// `f(A, φ) = 1` iff `|A| = 2`: adaptive submodularity fails.
pub fn pair_indicator(n: usize, k: usize) -> Problem {
    build(
        "pair_indicator",
        n,
        bernoulli(n, 0.5),
        Objective::SizeIndicator {
            size: 2,
            value: 1.0,
        },
        k as f64,
        Constraint::Cardinality,
    )
}

/// Identically zero utility.
pub fn zero(n: usize, k: usize) -> Problem {
    build(
        "zero",
        n,
        bernoulli(n, 0.5),
        Objective::Zero,
        k as f64,
        Constraint::Cardinality,
    )
}
