mod common;

use adasub::evaluation::{exact_favg, exact_set_distribution, mc_favg, DEFAULT_NODE_LIMIT};
use adasub::model::{ItemId, ItemSet, PartialRealization, Prior, StateId};
use adasub::policies::{compose, Policy, PolicyTree};
use adasub::utility::{marginal_policy, marginal_set, Objective};
use adasub::Problem;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

/// A partial realization over `n` binary items from a code per item:
/// 0 unobserved, 1 state 0, 2 state 1.
fn partial(n: usize, code: &[u8]) -> PartialRealization {
    let mut psi = PartialRealization::empty(n);
    for (i, &c) in code.iter().take(n).enumerate() {
        if c > 0 {
            psi.observe(ItemId(i), StateId(u16::from(c - 1)));
        }
    }
    psi
}

fn support_close(a: &Prior, b: &Prior) -> bool {
    let (sa, sb) = (a.support(), b.support());
    sa.len() == sb.len()
        && sa
            .iter()
            .zip(&sb)
            .all(|((ra, pa), (rb, pb))| ra == rb && (pa - pb).abs() < 1e-9)
}

fn exact(p: &Problem, policy: &Policy) -> f64 {
    exact_favg(p, policy, DEFAULT_NODE_LIMIT).unwrap().value
}

proptest! {
    #[test]
    fn conditioning_composes(
        raw in prop::collection::vec(0u8..4, 8),
        first in prop::collection::vec(0u8..3, 3),
        second in prop::collection::vec(0u8..3, 3),
    ) {
        prop_assume!(raw.iter().any(|&w| w > 0));
        let prior = common::joint_prior(3, &raw);
        let a = partial(3, &first);
        let b = partial(3, &second);
        let Some(both) = a.merge(&b) else { return Ok(()) };
        prop_assume!(prior.mass(&both) > 0.0);
        let stepwise = prior.conditional(&a).unwrap().conditional(&both).unwrap();
        let direct = prior.conditional(&both).unwrap();
        prop_assert!(support_close(&stepwise, &direct));
    }

    #[test]
    fn set_marginal_telescopes(p in common::cardinality(4), code in prop::collection::vec(0u8..3, 4), mask in 0u64..16) {
        let psi = partial(p.len(), &code);
        prop_assume!(p.mass(&psi) > 0.0);
        let set = ItemSet(mask).intersection(p.instance().ground_set());
        let dom = psi.domain();
        // Δ(S|ψ) = Σ_i Δ(S_i|ψ) − Δ(S_{i−1}|ψ) along any order of S ∖ dom ψ
        let mut acc = 0.0;
        let mut prefix = ItemSet::EMPTY;
        for e in set.difference(dom).iter() {
            let next = prefix.with(e);
            acc += marginal_set(&p, next, &psi).unwrap() - marginal_set(&p, prefix, &psi).unwrap();
            prefix = next;
        }
        let whole = marginal_set(&p, set, &psi).unwrap();
        prop_assert!((acc - whole).abs() < 1e-9);
        // a fixed sequence policy over S earns the same marginal
        let order: Vec<ItemId> = set.difference(dom).iter().collect();
        let tree = Policy::tree(PolicyTree::sequence(&order, 2));
        let via_policy = marginal_policy(&p, &tree, &psi).unwrap();
        prop_assert!((via_policy - whole).abs() < 1e-9);
        for e in set.difference(dom).iter() {
            let single = marginal_set(&p, ItemSet::singleton(e), &psi).unwrap();
            prop_assert!((single - p.marginals(&psi).unwrap()[e.0]).abs() < 1e-9);
        }
    }

    #[test]
    fn blend_marginals_are_convex(p in common::cardinality(4), code in prop::collection::vec(0u8..3, 4), q in 0u8..=4) {
        let Objective::Blend { modular, cut, .. } = p.instance().utility().clone() else { return Ok(()) };
        let lambda = f64::from(q) / 4.0;
        let with = |u: Objective| {
            let i = p.instance();
            Problem::new(adasub::Instance::new(
                "x", i.items().to_vec(), i.states().clone(), i.prior().clone(), u, i.budget(), i.constraint(),
            ).unwrap()).unwrap()
        };
        let blend = with(Objective::Blend { lambda, modular: modular.clone(), cut: cut.clone() });
        let m = with(Objective::StochasticModular(modular));
        let c = with(Objective::GraphCut(cut));
        let psi = partial(p.len(), &code);
        prop_assume!(p.mass(&psi) > 0.0);
        let (db, dm, dc) = (blend.marginals(&psi).unwrap(), m.marginals(&psi).unwrap(), c.marginals(&psi).unwrap());
        for e in 0..p.len() {
            prop_assert!((db[e] - (lambda * dm[e] + (1.0 - lambda) * dc[e])).abs() < 1e-9);
        }
    }

    #[test]
    fn composition_is_associative(p in common::cardinality(3), picks in prop::collection::vec(0usize..5, 3)) {
        let pool = |i: usize| match i {
            0 => Policy::RandomGreedy,
            1 => Policy::Greedy,
            2 => Policy::BestSingleton,
            3 => Policy::tree(PolicyTree::sequence(&[ItemId(1)], 2)),
            _ => Policy::HalfSampleDensityGreedy,
        };
        let (a, b, c) = (pool(picks[0]), pool(picks[1]), pool(picks[2]));
        let left = compose(compose(a.clone(), b.clone()), c.clone());
        let right = compose(a, compose(b, c));
        prop_assert!((exact(&p, &left) - exact(&p, &right)).abs() < 1e-9);
    }

    #[test]
    fn density_greedy_respects_budget(p in common::knapsack(5)) {
        let budget = p.instance().budget();
        for policy in [Policy::HalfSampleDensityGreedy, Policy::SamplingDensityGreedy, Policy::Greedy] {
            let dist = exact_set_distribution(&p, &policy, DEFAULT_NODE_LIMIT).unwrap();
            for set in dist.keys() {
                prop_assert!(p.instance().set_cost(*set) <= budget + 1e-9);
            }
        }
    }

    #[test]
    fn complementary_samples_have_disjoint_ranges(p in common::knapsack(6), mask in 0u64..64) {
        let ground = p.instance().ground_set();
        let s = ItemSet(mask).intersection(ground);
        let range = |sample: ItemSet| {
            exact_set_distribution(&p, &Policy::DensityGreedy(sample), DEFAULT_NODE_LIMIT)
                .unwrap()
                .keys()
                .fold(ItemSet::EMPTY, |acc, set| acc.union(*set))
        };
        let (r1, r2) = (range(s), range(ground.difference(s)));
        prop_assert!(r1.is_subset(s) && r2.is_subset(ground.difference(s)));
        prop_assert!(r1.intersection(r2).is_empty());
    }

    #[test]
    fn dummy_items_change_nothing(p in common::cardinality(4)) {
        let a = exact(&p, &Policy::RandomGreedy);
        let b = exact(&p, &Policy::RandomGreedyDummies);
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }
}

proptest! {
    #![proptest_config(Config { cases: 24, rng_seed: RngSeed::Fixed(7), ..Config::default() })]

    #[test]
    fn monte_carlo_brackets_exact(p in common::knapsack(4), seed in any::<u64>()) {
        for policy in [Policy::SamplingDensityGreedy, Policy::Greedy] {
            let mc = mc_favg(&p, &policy, 4_000, seed).unwrap();
            let ex = exact(&p, &policy);
            let se = mc.std_error.unwrap();
            prop_assert!((mc.value - ex).abs() <= 4.0 * se + 1e-9, "mc {} exact {} se {}", mc.value, ex, se);
        }
    }
}
