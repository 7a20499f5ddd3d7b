//! Adaptive policies: explicit trees, the random greedy policy (with no-op
//! slots or with materialized dummy items), density greedy and its sampled
//! mixture, and `@`-composition.
//!
//! A [`Policy`] is a description. Execution goes through a private `Run`
//! state machine that exposes, at each point, the distribution over the next
//! action. The exact evaluator expands that distribution; the simulator
//! samples from it with a seeded RNG.
//!
//! Draw order for one seeded run: sample-set membership in item-id order,
//! then the branch variable `r₀`, then one slot draw per greedy round. A
//! composed policy draws for its first part before its second.

mod density;
mod greedy;
pub mod tree;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{
    Constraint, ItemId, ItemSet, PartialRealization, Realization, StateId, PROB_TOL,
};
use crate::problem::Problem;

pub use density::best_singleton;
pub use greedy::{greedy_topk_set, TopSet};
pub use tree::{PolicyTree, TreeNode};

/// Two marginals closer than this are tied; a marginal must exceed it to
/// count as positive.
pub const TIE_EPS: f64 = 1e-12;

/// Largest ground set for which random-subset policies are expanded exactly.
const MAX_SUBSET_ITEMS: usize = 20;

/// Probability of running the best-singleton branch in the sampled mixture.
pub const SINGLETON_BRANCH_PROB: f64 = 0.2;

/// What a policy does in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Select(ItemId),
    /// An empty greedy slot; selects nothing.
    NoOp,
    /// A materialized dummy item, identified by index.
    Dummy(usize),
}

/// A decision rule from observations to a distribution over actions.
#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    /// Selects nothing.
    Never,
    Tree(Arc<PolicyTree>),
    /// Adaptive random greedy with no-op slots.
    RandomGreedy,
    /// Adaptive random greedy over `E ∪ D` with `2k−1` explicit dummy items.
    RandomGreedyDummies,
    /// Deterministic adaptive greedy: best positive marginal while affordable.
    Greedy,
    /// Selects the best affordable singleton.
    BestSingleton,
    /// Density greedy restricted to a fixed sample set.
    DensityGreedy(ItemSet),
    /// Density greedy over a uniformly random half-sample of the ground set.
    HalfSampleDensityGreedy,
    /// Best singleton with probability 1/5, else half-sample density greedy.
    SamplingDensityGreedy,
    /// Runs one of several policies, chosen up front.
    Mixture(Vec<(f64, Policy)>),
    /// Runs the first policy, then the second from a fresh start.
    Compose(Box<Policy>, Box<Policy>),
}

/// `π @ π′`.
pub fn compose(first: Policy, second: Policy) -> Policy {
    Policy::Compose(Box::new(first), Box::new(second))
}

impl Policy {
    /// Policy for a CLI id: `arg`, `sad`, `best1`, `dg`, `greedy`,
    /// `arg-dummies`, `pi2`, `never`. `dg` requires `sample`.
    pub fn from_id(id: &str, sample: Option<ItemSet>) -> Result<Policy> {
        Ok(match id {
            "arg" => Policy::RandomGreedy,
            "arg-dummies" => Policy::RandomGreedyDummies,
            "sad" => Policy::SamplingDensityGreedy,
            "best1" => Policy::BestSingleton,
            "greedy" => Policy::Greedy,
            "pi2" => Policy::HalfSampleDensityGreedy,
            "never" => Policy::Never,
            "dg" => {
                Policy::DensityGreedy(sample.ok_or_else(|| {
                    Error::InvalidArgument("policy `dg` needs a sample set".into())
                })?)
            }
            other => return Err(Error::InvalidArgument(format!("unknown policy `{other}`"))),
        })
    }

    pub fn tree(tree: PolicyTree) -> Policy {
        Policy::Tree(Arc::new(tree))
    }

    /// Short identifier used in reports.
    pub fn label(&self) -> String {
        match self {
            Policy::Never => "never".into(),
            Policy::Tree(_) => "tree".into(),
            Policy::RandomGreedy => "arg".into(),
            Policy::RandomGreedyDummies => "arg-dummies".into(),
            Policy::Greedy => "greedy".into(),
            Policy::BestSingleton => "best1".into(),
            Policy::DensityGreedy(_) => "dg".into(),
            Policy::HalfSampleDensityGreedy => "pi2".into(),
            Policy::SamplingDensityGreedy => "sad".into(),
            Policy::Mixture(_) => "mixture".into(),
            Policy::Compose(a, b) => format!("{}@{}", a.label(), b.label()),
        }
    }

    /// Whether every run respects the instance budget.
    pub fn budget_feasible(&self, problem: &Problem) -> bool {
        match self {
            Policy::Tree(t) => t.is_budget_feasible(problem.instance()),
            Policy::Mixture(parts) => parts.iter().all(|(_, p)| p.budget_feasible(problem)),
            Policy::Compose(a, b) => {
                matches!(**b, Policy::Never) && a.budget_feasible(problem)
                    || matches!(**a, Policy::Never) && b.budget_feasible(problem)
            }
            _ => true,
        }
    }

    /// Checks that the policy applies to this instance.
    pub fn validate(&self, problem: &Problem) -> Result<()> {
        let inst = problem.instance();
        match self {
            Policy::RandomGreedy | Policy::RandomGreedyDummies => {
                if inst.constraint() != Constraint::Cardinality {
                    return Err(Error::ConstraintMismatch(
                        "random greedy requires a cardinality constraint".into(),
                    ));
                }
                if inst.budget() < 1.0 {
                    return Err(Error::InvalidArgument("random greedy needs k >= 1".into()));
                }
            }
            Policy::Tree(t) => {
                if !t.items().is_subset(inst.ground_set()) {
                    return Err(Error::InvalidArgument(
                        "policy tree names items outside the ground set".into(),
                    ));
                }
            }
            Policy::DensityGreedy(s) => {
                if !s.is_subset(inst.ground_set()) {
                    return Err(Error::InvalidArgument(
                        "sample set contains items outside the ground set".into(),
                    ));
                }
            }
            Policy::Mixture(parts) => {
                let total: f64 = parts.iter().map(|(w, _)| w).sum();
                if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > PROB_TOL {
                    return Err(Error::InvalidArgument(
                        "mixture weights must be a distribution".into(),
                    ));
                }
                for (_, p) in parts {
                    p.validate(problem)?;
                }
            }
            Policy::Compose(a, b) => {
                a.validate(problem)?;
                b.validate(problem)?;
            }
            Policy::HalfSampleDensityGreedy | Policy::SamplingDensityGreedy => {
                if inst.len() > MAX_SUBSET_ITEMS {
                    return Err(Error::too_large(
                        "ground set for sampled policies",
                        MAX_SUBSET_ITEMS as u64,
                    ));
                }
            }
            Policy::Never | Policy::Greedy | Policy::BestSingleton => {}
        }
        Ok(())
    }

    /// Distribution over initial run states (the policy's up-front randomness).
    pub(crate) fn start<'p>(&'p self, problem: &Problem) -> Result<Vec<(f64, Run<'p>)>> {
        self.validate(problem)?;
        let n = problem.len();
        Ok(match self {
            Policy::Mixture(parts) => {
                let mut out = Vec::new();
                for (w, p) in parts {
                    if *w > 0.0 {
                        out.extend(p.start(problem)?.into_iter().map(|(q, r)| (w * q, r)));
                    }
                }
                out
            }
            Policy::Compose(a, b) => {
                let firsts = a.start(problem)?;
                let seconds = b.start(problem)?;
                let mut out = Vec::with_capacity(firsts.len() * seconds.len());
                for (p, r1) in &firsts {
                    for (q, r2) in &seconds {
                        out.push((p * q, Run::composed(r1.clone(), r2.clone())));
                    }
                }
                out
            }
            Policy::HalfSampleDensityGreedy => {
                let w = 0.5f64.powi(n as i32);
                (0..1u64 << n)
                    .map(|mask| (w, Run::density(ItemSet(mask), n)))
                    .collect()
            }
            Policy::SamplingDensityGreedy => {
                let w = (1.0 - SINGLETON_BRANCH_PROB) * 0.5f64.powi(n as i32);
                let mut out = vec![(SINGLETON_BRANCH_PROB, Run::best(problem)?)];
                out.extend((0..1u64 << n).map(|mask| (w, Run::density(ItemSet(mask), n))));
                out
            }
            _ => vec![(1.0, self.deterministic_start(problem)?)],
        })
    }

    /// Samples the initial run state.
    pub(crate) fn start_sampled<'p, R: Rng + ?Sized>(
        &'p self,
        problem: &Problem,
        rng: &mut R,
    ) -> Result<Run<'p>> {
        self.validate(problem)?;
        let n = problem.len();
        let half_sample = |rng: &mut R| {
            (0..n)
                .filter(|_| rng.random_bool(0.5))
                .fold(ItemSet::EMPTY, |s, e| s.with(ItemId(e)))
        };
        Ok(match self {
            Policy::Mixture(parts) => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut chosen = None;
                for (w, p) in parts {
                    if *w <= 0.0 {
                        continue;
                    }
                    acc += w;
                    chosen = Some(p);
                    if u < acc {
                        break;
                    }
                }
                chosen
                    .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?
                    .start_sampled(problem, rng)?
            }
            Policy::Compose(a, b) => {
                let first = a.start_sampled(problem, rng)?;
                let second = b.start_sampled(problem, rng)?;
                Run::composed(first, second)
            }
            Policy::HalfSampleDensityGreedy => Run::density(half_sample(rng), n),
            Policy::SamplingDensityGreedy => {
                let sample = half_sample(rng);
                let r0: f64 = rng.random();
                if r0 < SINGLETON_BRANCH_PROB {
                    Run::best(problem)?
                } else {
                    Run::density(sample, n)
                }
            }
            _ => self.deterministic_start(problem)?,
        })
    }

    fn deterministic_start<'p>(&'p self, problem: &Problem) -> Result<Run<'p>> {
        let n = problem.len();
        Ok(match self {
            Policy::Never => Run::Done,
            Policy::Tree(t) => Run::Tree {
                tree: t,
                node: Some(t.root()),
            },
            Policy::RandomGreedy => Run::RandomGreedy {
                psi: PartialRealization::empty(n),
                round: 0,
            },
            Policy::RandomGreedyDummies => {
                let k = problem.instance().budget() as usize;
                Run::Dummies {
                    psi: PartialRealization::empty(n),
                    round: 0,
                    used: vec![false; 2 * k - 1],
                }
            }
            Policy::Greedy => Run::Greedy {
                psi: PartialRealization::empty(n),
            },
            Policy::BestSingleton => Run::best(problem)?,
            Policy::DensityGreedy(s) => Run::density(*s, n),
            Policy::Mixture(_)
            | Policy::Compose(..)
            | Policy::HalfSampleDensityGreedy
            | Policy::SamplingDensityGreedy => unreachable!("randomized start"),
        })
    }
}

/// Execution state of a policy.
#[derive(Debug, Clone)]
pub(crate) enum Run<'p> {
    Done,
    Tree {
        tree: &'p PolicyTree,
        node: Option<usize>,
    },
    RandomGreedy {
        psi: PartialRealization,
        round: usize,
    },
    Dummies {
        psi: PartialRealization,
        round: usize,
        used: Vec<bool>,
    },
    Greedy {
        psi: PartialRealization,
    },
    Best {
        item: ItemId,
        picked: bool,
    },
    Density {
        sample: ItemSet,
        psi: PartialRealization,
    },
    Compose {
        first: Box<Run<'p>>,
        second: Box<Run<'p>>,
        in_second: bool,
    },
}

/// One transition of a run: stop, or act and continue in the given state.
#[derive(Debug, Clone)]
pub(crate) enum Step<'p> {
    Stop,
    Act(Action, Run<'p>),
}

impl<'p> Run<'p> {
    fn composed(first: Run<'p>, second: Run<'p>) -> Self {
        Run::Compose {
            first: Box::new(first),
            second: Box::new(second),
            in_second: false,
        }
    }

    fn best(problem: &Problem) -> Result<Self> {
        let (item, _) = best_singleton(problem)?;
        Ok(Run::Best {
            item,
            picked: false,
        })
    }

    fn density(sample: ItemSet, n: usize) -> Self {
        Run::Density {
            sample,
            psi: PartialRealization::empty(n),
        }
    }

    /// Distribution over the next transition.
    pub(crate) fn step(&self, problem: &Problem) -> Result<Vec<(f64, Step<'p>)>> {
        let k = problem.instance().budget();
        Ok(match self {
            Run::Done => vec![(1.0, Step::Stop)],
            Run::Tree { tree, node } => match node.map(|i| (i, tree.node(i))) {
                Some((i, TreeNode::Select { item, .. })) => vec![(
                    1.0,
                    Step::Act(
                        Action::Select(*item),
                        Run::Tree {
                            tree,
                            node: Some(i),
                        },
                    ),
                )],
                _ => vec![(1.0, Step::Stop)],
            },
            Run::RandomGreedy { psi, round } => {
                let k = k as usize;
                if *round >= k {
                    return Ok(vec![(1.0, Step::Stop)]);
                }
                let top = greedy_topk_set(problem, psi, k)?;
                let next = Run::RandomGreedy {
                    psi: psi.clone(),
                    round: round + 1,
                };
                let slot = 1.0 / k as f64;
                let mut out: Vec<_> = top
                    .items
                    .iter()
                    .map(|&e| (slot, Step::Act(Action::Select(e), next.clone())))
                    .collect();
                if top.no_ops > 0 {
                    out.push((top.no_ops as f64 * slot, Step::Act(Action::NoOp, next)));
                }
                out
            }
            Run::Dummies { psi, round, used } => {
                let k = k as usize;
                if *round >= k {
                    return Ok(vec![(1.0, Step::Stop)]);
                }
                let slot = 1.0 / k as f64;
                greedy::dummy_top_set(problem, psi, used, k)?
                    .into_iter()
                    .map(|cand| {
                        let mut used = used.clone();
                        let action = match cand {
                            greedy::Candidate::Real(e) => Action::Select(e),
                            greedy::Candidate::Dummy(d) => {
                                used[d] = true;
                                Action::Dummy(d)
                            }
                        };
                        let next = Run::Dummies {
                            psi: psi.clone(),
                            round: round + 1,
                            used,
                        };
                        (slot, Step::Act(action, next))
                    })
                    .collect()
            }
            Run::Greedy { psi } => match greedy::greedy_choice(problem, psi)? {
                Some(e) => vec![(1.0, Step::Act(Action::Select(e), self.clone()))],
                None => vec![(1.0, Step::Stop)],
            },
            Run::Best { item, picked } => {
                if *picked {
                    vec![(1.0, Step::Stop)]
                } else {
                    vec![(
                        1.0,
                        Step::Act(
                            Action::Select(*item),
                            Run::Best {
                                item: *item,
                                picked: true,
                            },
                        ),
                    )]
                }
            }
            Run::Density { sample, psi } => match density::density_choice(problem, *sample, psi)? {
                Some(e) => vec![(1.0, Step::Act(Action::Select(e), self.clone()))],
                None => vec![(1.0, Step::Stop)],
            },
            Run::Compose {
                first,
                second,
                in_second,
            } => {
                let wrap_second = |steps: Vec<(f64, Step<'p>)>, scale: f64| {
                    steps.into_iter().map(move |(q, st)| {
                        let st = match st {
                            Step::Stop => Step::Stop,
                            Step::Act(a, r) => Step::Act(
                                a,
                                Run::Compose {
                                    first: first.clone(),
                                    second: Box::new(r),
                                    in_second: true,
                                },
                            ),
                        };
                        (scale * q, st)
                    })
                };
                if *in_second {
                    wrap_second(second.step(problem)?, 1.0).collect()
                } else {
                    let mut out = Vec::new();
                    for (p, st) in first.step(problem)? {
                        match st {
                            Step::Stop => out.extend(wrap_second(second.step(problem)?, p)),
                            Step::Act(a, r) => out.push((
                                p,
                                Step::Act(
                                    a,
                                    Run::Compose {
                                        first: Box::new(r),
                                        second: second.clone(),
                                        in_second: false,
                                    },
                                ),
                            )),
                        }
                    }
                    out
                }
            }
        })
    }

    /// Samples the next transition.
    pub(crate) fn sample_step<R: Rng + ?Sized>(
        &self,
        problem: &Problem,
        rng: &mut R,
    ) -> Result<Step<'p>> {
        match self {
            Run::RandomGreedy { psi, round } => {
                let k = problem.instance().budget() as usize;
                if *round >= k {
                    return Ok(Step::Stop);
                }
                let top = greedy_topk_set(problem, psi, k)?;
                let slot = rng.random_range(0..k);
                let next = Run::RandomGreedy {
                    psi: psi.clone(),
                    round: round + 1,
                };
                Ok(match top.items.get(slot) {
                    Some(&e) => Step::Act(Action::Select(e), next),
                    None => Step::Act(Action::NoOp, next),
                })
            }
            Run::Compose {
                first,
                second,
                in_second: false,
            } => match first.sample_step(problem, rng)? {
                Step::Act(a, r) => Ok(Step::Act(
                    a,
                    Run::Compose {
                        first: Box::new(r),
                        second: second.clone(),
                        in_second: false,
                    },
                )),
                Step::Stop => Run::Compose {
                    first: first.clone(),
                    second: second.clone(),
                    in_second: true,
                }
                .sample_step(problem, rng),
            },
            Run::Compose {
                first,
                second,
                in_second: true,
            } => Ok(match second.sample_step(problem, rng)? {
                Step::Stop => Step::Stop,
                Step::Act(a, r) => Step::Act(
                    a,
                    Run::Compose {
                        first: first.clone(),
                        second: Box::new(r),
                        in_second: true,
                    },
                ),
            }),
            _ => {
                let mut steps = self.step(problem)?;
                if steps.len() == 1 {
                    return Ok(steps.pop().expect("one step").1);
                }
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let last = steps.len() - 1;
                for (i, (p, st)) in steps.into_iter().enumerate() {
                    acc += p;
                    if u < acc || i == last {
                        return Ok(st);
                    }
                }
                unreachable!("nonempty step distribution")
            }
        }
    }

    /// Records the state observed for the item just selected.
    pub(crate) fn observe(&mut self, e: ItemId, s: StateId) {
        match self {
            Run::Tree { tree, node } => *node = node.and_then(|i| tree.child(i, s)),
            Run::RandomGreedy { psi, .. }
            | Run::Dummies { psi, .. }
            | Run::Greedy { psi }
            | Run::Density { psi, .. } => psi.observe(e, s),
            Run::Compose {
                first,
                second,
                in_second,
            } => {
                if *in_second {
                    second.observe(e, s)
                } else {
                    first.observe(e, s)
                }
            }
            Run::Done | Run::Best { .. } => {}
        }
    }
}

/// One executed step.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryStep {
    pub action: Action,
    /// Observed state for a selection.
    pub state: Option<StateId>,
}

/// One executed run of a policy against a realization.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    /// Selected real items (no-ops and dummies removed).
    pub selected: ItemSet,
    pub realization: Realization,
    pub utility: f64,
    pub seed: u64,
}

impl Trajectory {
    pub fn cost(&self, problem: &Problem) -> f64 {
        problem.instance().set_cost(self.selected)
    }
}

/// Runs `policy` against a fixed realization; `seed` drives the policy's
/// internal randomness only.
pub fn run_with_realization(
    problem: &Problem,
    policy: &Policy,
    phi: &Realization,
    seed: u64,
) -> Result<Trajectory> {
    if phi.len() != problem.len() {
        return Err(Error::InvalidArgument(
            "realization does not cover the ground set".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut run = policy.start_sampled(problem, &mut rng)?;
    let mut steps = Vec::new();
    let mut selected = ItemSet::EMPTY;
    loop {
        match run.sample_step(problem, &mut rng)? {
            Step::Stop => break,
            Step::Act(action, mut next) => {
                let state = match action {
                    Action::Select(e) => {
                        let s = phi.state(e);
                        next.observe(e, s);
                        selected = selected.with(e);
                        Some(s)
                    }
                    Action::NoOp | Action::Dummy(_) => None,
                };
                steps.push(TrajectoryStep { action, state });
                run = next;
            }
        }
    }
    let utility = problem.instance().utility().value(selected, phi.states());
    Ok(Trajectory {
        steps,
        selected,
        realization: phi.clone(),
        utility,
        seed,
    })
}

/// Draws a realization, then runs the policy against it.
///
/// The realization comes from stream 1 of the seeded generator, so the
/// policy's own draws (stream 0) match [`run_with_realization`].
pub fn simulate(problem: &Problem, policy: &Policy, seed: u64) -> Result<Trajectory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let phi = problem.sample_realization(&mut rng);
    run_with_realization(problem, policy, &phi, seed)
}

/// One seeded run of adaptive random greedy.
pub fn adaptive_random_greedy(problem: &Problem, seed: u64) -> Result<Trajectory> {
    simulate(problem, &Policy::RandomGreedy, seed)
}

/// One seeded run of density greedy over the fixed sample `sample`.
pub fn density_greedy(problem: &Problem, sample: ItemSet, seed: u64) -> Result<Trajectory> {
    simulate(problem, &Policy::DensityGreedy(sample), seed)
}

/// One seeded run of the sampled density-greedy mixture.
pub fn sampling_density_greedy(problem: &Problem, seed: u64) -> Result<Trajectory> {
    simulate(problem, &Policy::SamplingDensityGreedy, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::{exact_favg, exact_set_distribution, DEFAULT_NODE_LIMIT};
    use crate::fixtures;

    const A: ItemId = ItemId(0);
    const B: ItemId = ItemId(1);

    fn favg(p: &Problem, pol: &Policy) -> f64 {
        exact_favg(p, pol, DEFAULT_NODE_LIMIT).unwrap().value
    }

    fn select(e: ItemId) -> Policy {
        Policy::tree(PolicyTree::sequence(&[e], 2))
    }

    #[test]
    fn compose_examples() {
        let p = fixtures::edge(2);
        assert_eq!(
            favg(&p, &compose(select(A), Policy::Never)),
            favg(&p, &select(A))
        );
        let d =
            exact_set_distribution(&p, &compose(select(A), select(A)), DEFAULT_NODE_LIMIT).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&ItemSet(0b01)], 1.0);
        assert_eq!(favg(&p, &compose(select(A), select(B))), 0.0);
        assert_eq!(favg(&p, &select(A)), 1.0);
    }

    #[test]
    fn compose_rejects_foreign_items() {
        let p = fixtures::edge(2);
        let bad = compose(select(A), select(ItemId(7)));
        assert!(matches!(bad.validate(&p), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn random_greedy_examples() {
        let p = fixtures::modular(&[1.0], 0.5, 1);
        for seed in 0..5 {
            assert_eq!(
                adaptive_random_greedy(&p, seed).unwrap().selected,
                ItemSet(0b1)
            );
        }
        assert!((favg(&p, &Policy::RandomGreedy) - 0.5).abs() < 1e-12);

        let p = fixtures::edge(2);
        assert!((favg(&p, &Policy::RandomGreedy) - 1.0).abs() < 1e-12);
        for seed in 0..20 {
            let t = adaptive_random_greedy(&p, seed).unwrap();
            assert_eq!(t.selected.len(), 1);
            assert_eq!(t.steps.len(), 2);
            assert_eq!(t.steps[1].action, Action::NoOp);
        }

        let p = fixtures::zero(3, 2);
        assert_eq!(favg(&p, &Policy::RandomGreedy), 0.0);
    }

    #[test]
    fn random_greedy_rejects_knapsack() {
        let p = fixtures::edge_knapsack(2.0);
        assert!(matches!(
            adaptive_random_greedy(&p, 1),
            Err(Error::ConstraintMismatch(_))
        ));
    }

    #[test]
    fn density_greedy_examples() {
        let p = fixtures::modular(&[1.0], 0.5, 1);
        let t = density_greedy(&p, ItemSet::EMPTY, 3).unwrap();
        assert!(t.steps.is_empty());
        assert!((favg(&p, &Policy::DensityGreedy(ItemSet(1))) - 0.5).abs() < 1e-12);

        let p = fixtures::edge(2);
        for seed in 0..5 {
            let t = density_greedy(&p, ItemSet(0b11), seed).unwrap();
            assert_eq!(t.selected, ItemSet(0b01));
            assert_eq!(t.utility, 1.0);
        }
    }

    #[test]
    fn sampling_density_greedy_examples() {
        let p = fixtures::modular(&[1.0], 0.5, 1);
        assert!((favg(&p, &Policy::SamplingDensityGreedy) - 0.3).abs() < 1e-12);
        for seed in 0..20 {
            let t = sampling_density_greedy(&p, seed).unwrap();
            assert!(t.selected.is_subset(ItemSet(1)));
        }
        let p = fixtures::edge(2);
        assert!((favg(&p, &Policy::SamplingDensityGreedy) - 0.8).abs() < 1e-12);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let p = fixtures::modular(&[1.0, 2.0, 3.0, 1.5], 0.5, 2);
        for pol in [Policy::RandomGreedy, Policy::SamplingDensityGreedy] {
            for seed in 0..10 {
                assert_eq!(
                    simulate(&p, &pol, seed).unwrap(),
                    simulate(&p, &pol, seed).unwrap()
                );
            }
        }
    }

    #[test]
    fn trajectory_observations_match_realization() {
        let p = fixtures::modular(&[1.0, 2.0, 3.0, 1.5], 0.5, 3);
        for seed in 0..50 {
            let t = simulate(&p, &Policy::RandomGreedy, seed).unwrap();
            assert!(t.selected.len() <= 3);
            for st in &t.steps {
                if let Action::Select(e) = st.action {
                    assert_eq!(st.state, Some(t.realization.state(e)));
                }
            }
        }
    }
}
