//! Random small instances for the property tests.
#![allow(dead_code)]

use adasub::model::{Constraint, Instance, Item, ItemId, Prior, Realization, StateId, StateSpace};
use adasub::utility::{Coverage, Cut, Modular, Objective};
use adasub::Problem;
use proptest::prelude::*;

pub const PROBS: [f64; 6] = [0.0, 0.2, 0.25, 0.5, 0.7, 1.0];

fn names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect()
}

#[derive(Debug, Clone)]
pub enum Kind {
    Modular,
    Cut,
    Blend(f64),
    Coverage,
}

fn objective(
    kind: &Kind,
    n: usize,
    weights: &[f64],
    edges: &[(usize, usize, f64)],
    covers: &[Vec<usize>],
) -> Objective {
    let modular = Modular {
        weights: weights[..n].to_vec(),
        active: StateId(1),
    };
    let cut = Cut {
        edges: edges
            .iter()
            .filter(|(u, v, _)| *u < n && *v < n && u != v)
            .map(|&(u, v, w)| (ItemId(u), ItemId(v), w))
            .collect(),
    };
    match kind {
        Kind::Modular => Objective::StochasticModular(modular),
        Kind::Cut => Objective::GraphCut(cut),
        Kind::Blend(lambda) => Objective::Blend {
            lambda: *lambda,
            modular,
            cut,
        },
        Kind::Coverage => Objective::StochasticCoverage(Coverage {
            universe: (0..4).map(|u| format!("u{u}")).collect(),
            covers: covers[..n].to_vec(),
            active: StateId(1),
        }),
    }
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![
        Just(Kind::Modular),
        Just(Kind::Cut),
        (0u8..=4).prop_map(|q| Kind::Blend(q as f64 / 4.0)),
        Just(Kind::Coverage),
    ]
}

fn parts(
    max_n: usize,
) -> impl Strategy<
    Value = (
        usize,
        Kind,
        Vec<f64>,
        Vec<f64>,
        Vec<(usize, usize, f64)>,
        Vec<Vec<usize>>,
    ),
> {
    (
        2..=max_n,
        kind(),
        prop::collection::vec(prop::sample::select(PROBS.to_vec()), max_n),
        prop::collection::vec(0u8..4, max_n).prop_map(|w| w.into_iter().map(f64::from).collect()),
        prop::collection::vec((0..max_n, 0..max_n, 1u8..3), 0..5).prop_map(|es| {
            es.into_iter()
                .map(|(u, v, w)| (u, v, f64::from(w)))
                .collect()
        }),
        prop::collection::vec(prop::collection::vec(0usize..4, 0..3), max_n).prop_map(|cs| {
            cs.into_iter()
                .map(|mut c| {
                    c.sort_unstable();
                    c.dedup();
                    c
                })
                .collect()
        }),
    )
}

fn build(
    n: usize,
    kind: &Kind,
    p: &[f64],
    weights: &[f64],
    edges: &[(usize, usize, f64)],
    covers: &[Vec<usize>],
    costs: Vec<f64>,
    budget: f64,
    constraint: Constraint,
) -> Problem {
    let items = names(n)
        .into_iter()
        .zip(costs)
        .map(|(id, c)| Item::new(id, c))
        .collect();
    let prior = Prior::Independent(p[..n].iter().map(|&q| vec![1.0 - q, q]).collect());
    let inst = Instance::new(
        "random",
        items,
        StateSpace::new(["0", "1"]).unwrap(),
        prior,
        objective(kind, n, weights, edges, covers),
        budget,
        constraint,
    )
    .unwrap();
    Problem::new(inst).unwrap()
}

/// Unit-cost instance with a cardinality budget.
pub fn cardinality(max_n: usize) -> impl Strategy<Value = Problem> {
    (parts(max_n), 1usize..=3).prop_map(|((n, kind, p, w, e, c), k)| {
        build(
            n,
            &kind,
            &p,
            &w,
            &e,
            &c,
            vec![1.0; n],
            k.min(n) as f64,
            Constraint::Cardinality,
        )
    })
}

/// Mixed-cost instance with a knapsack budget.
pub fn knapsack(max_n: usize) -> impl Strategy<Value = Problem> {
    (
        parts(max_n),
        prop::collection::vec(prop::sample::select(vec![0.5, 1.0, 2.0, 3.0]), max_n),
        prop::sample::select(vec![1.0, 2.0, 2.5, 4.0]),
    )
        .prop_map(
            |((n, kind, p, w, e, c), mut costs, budget): (_, Vec<f64>, f64)| {
                // at least one item fits
                costs[0] = costs[0].min(budget);
                build(
                    n,
                    &kind,
                    &p,
                    &w,
                    &e,
                    &c,
                    costs[..n].to_vec(),
                    budget,
                    Constraint::Knapsack,
                )
            },
        )
}

/// Joint prior over `n` binary items from raw nonnegative weights.
pub fn joint_prior(n: usize, raw: &[u8]) -> Prior {
    let total: f64 = raw.iter().map(|&w| f64::from(w)).sum();
    let atoms = (0..1usize << n)
        .filter(|&mask| raw[mask] > 0)
        .map(|mask| {
            let states = (0..n).map(|i| StateId(((mask >> i) & 1) as u16)).collect();
            (Realization(states), f64::from(raw[mask]) / total)
        })
        .collect();
    Prior::Joint(atoms)
}
