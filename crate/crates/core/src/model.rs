//! Ground set, states, priors over realizations and partial realizations.
//!
//! Item ids and state tokens are strings at the boundary and dense indices
//! internally. Items are kept sorted by id, so `ItemId` order is id order and
//! every "ties by item id" rule reduces to comparing indices.

use std::fmt;

use crate::error::{Error, Result};
use crate::utility::Objective;

/// Tolerance used for every probability and budget comparison.
pub const PROB_TOL: f64 = 1e-9;

/// Hard cap on the ground-set size; item sets are 64-bit masks.
pub const MAX_ITEMS: usize = 64;

/// Dense index of an item. Ordered like the string ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub usize);

/// Dense index of a state token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u16);

/// A subset of the ground set as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ItemSet(pub u64);

impl ItemSet {
    pub const EMPTY: ItemSet = ItemSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ItemSet(u64::MAX)
        } else {
            ItemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: ItemId) -> Self {
        ItemSet(1u64 << e.0)
    }

    pub fn from_items<I: IntoIterator<Item = ItemId>>(items: I) -> Self {
        items.into_iter().fold(ItemSet::EMPTY, |s, e| s.with(e))
    }

    pub fn contains(self, e: ItemId) -> bool {
        e.0 < 64 && self.0 >> e.0 & 1 == 1
    }

    #[must_use]
    pub fn with(self, e: ItemId) -> Self {
        ItemSet(self.0 | 1u64 << e.0)
    }

    #[must_use]
    pub fn without(self, e: ItemId) -> Self {
        ItemSet(self.0 & !(1u64 << e.0))
    }

    #[must_use]
    pub fn union(self, other: ItemSet) -> Self {
        ItemSet(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: ItemSet) -> Self {
        ItemSet(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: ItemSet) -> Self {
        ItemSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ItemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Items in ascending id order.
    pub fn iter(self) -> impl Iterator<Item = ItemId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(ItemId(i))
            }
        })
    }
}

/// A selectable item with its cost in budget units.
#[derive(Debug, Clone, PartialEq)]
pub struct Item {
    pub id: String,
    pub cost: f64,
}

impl Item {
    pub fn new(id: impl Into<String>, cost: f64) -> Self {
        Item {
            id: id.into(),
            cost,
        }
    }
}

/// The finite state space shared by all items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    tokens: Vec<String>,
}

impl StateSpace {
    pub fn new<S: Into<String>>(tokens: impl IntoIterator<Item = S>) -> Result<Self> {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if tokens.is_empty() {
            return Err(Error::InvalidArgument("state space is empty".into()));
        }
        if tokens.len() > u16::MAX as usize {
            return Err(Error::InvalidArgument("too many states".into()));
        }
        for (i, t) in tokens.iter().enumerate() {
            if tokens[..i].contains(t) {
                return Err(Error::InvalidArgument(format!("duplicate state `{t}`")));
            }
        }
        Ok(StateSpace { tokens })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token(&self, s: StateId) -> &str {
        &self.tokens[s.0 as usize]
    }

    pub fn lookup(&self, token: &str) -> Option<StateId> {
        self.tokens
            .iter()
            .position(|t| t == token)
            .map(|i| StateId(i as u16))
    }

    pub fn ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.tokens.len() as u16).map(StateId)
    }
}

/// A total assignment of states to items.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Realization(pub Vec<StateId>);

impl Realization {
    pub fn state(&self, e: ItemId) -> StateId {
        self.0[e.0]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn states(&self) -> &[StateId] {
        &self.0
    }
}

/// Observed states for a subset of the items.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialRealization {
    obs: Vec<Option<StateId>>,
}

impl PartialRealization {
    pub fn empty(n: usize) -> Self {
        PartialRealization { obs: vec![None; n] }
    }

    /// Builds from `(item, state)` pairs; an item observed twice with
    /// different states is rejected.
    pub fn from_pairs(n: usize, pairs: &[(ItemId, StateId)]) -> Result<Self> {
        let mut psi = Self::empty(n);
        for &(e, s) in pairs {
            if e.0 >= n {
                return Err(Error::InvalidArgument(format!(
                    "item index {} outside ground set of size {n}",
                    e.0
                )));
            }
            match psi.obs[e.0] {
                Some(prev) if prev != s => {
                    return Err(Error::InvalidArgument(format!(
                        "item index {} observed in two states",
                        e.0
                    )))
                }
                _ => psi.obs[e.0] = Some(s),
            }
        }
        Ok(psi)
    }

    /// Number of items in the ground set this realization ranges over.
    pub fn ground_size(&self) -> usize {
        self.obs.len()
    }

    pub fn get(&self, e: ItemId) -> Option<StateId> {
        self.obs.get(e.0).copied().flatten()
    }

    pub fn domain(&self) -> ItemSet {
        ItemSet::from_items(
            self.obs
                .iter()
                .enumerate()
                .filter(|(_, s)| s.is_some())
                .map(|(i, _)| ItemId(i)),
        )
    }

    pub fn len(&self) -> usize {
        self.obs.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.obs.iter().all(Option::is_none)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (ItemId, StateId)> + '_ {
        self.obs
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|s| (ItemId(i), s)))
    }

    /// Adds an observation. Panics if `e` is already observed in another state.
    pub fn observe(&mut self, e: ItemId, s: StateId) {
        if let Some(prev) = self.obs[e.0] {
            assert_eq!(prev, s, "conflicting observation for item {}", e.0);
        }
        self.obs[e.0] = Some(s);
    }

    #[must_use]
    pub fn with(&self, e: ItemId, s: StateId) -> Self {
        let mut next = self.clone();
        next.observe(e, s);
        next
    }

    /// Restriction to the items in `set`.
    #[must_use]
    pub fn restrict(&self, set: ItemSet) -> Self {
        let obs = self
            .obs
            .iter()
            .enumerate()
            .map(|(i, s)| if set.contains(ItemId(i)) { *s } else { None })
            .collect();
        PartialRealization { obs }
    }

    /// `self ⊆ other` as sets of (item, state) pairs.
    pub fn is_sub_of(&self, other: &PartialRealization) -> bool {
        self.obs
            .iter()
            .zip(&other.obs)
            .all(|(a, b)| a.is_none() || a == b)
    }

    /// Union of two observation sets, `None` if they disagree on an item.
    pub fn merge(&self, other: &PartialRealization) -> Option<Self> {
        let mut out = self.clone();
        for (e, s) in other.pairs() {
            match out.obs[e.0] {
                Some(prev) if prev != s => return None,
                _ => out.obs[e.0] = Some(s),
            }
        }
        Some(out)
    }

    pub(crate) fn agrees_with(&self, states: &[StateId]) -> bool {
        self.obs
            .iter()
            .zip(states)
            .all(|(o, s)| o.is_none_or(|o| o == *s))
    }
}

/// `φ ∼ ψ`: the realization agrees with every observation.
pub fn consistent(phi: &Realization, psi: &PartialRealization) -> Result<bool> {
    if phi.len() != psi.ground_size() {
        return Err(Error::InvalidArgument(format!(
            "partial realization over {} items, realization over {}",
            psi.ground_size(),
            phi.len()
        )));
    }
    Ok(psi.agrees_with(phi.states()))
}

/// Distribution of the joint state vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Prior {
    /// Per-item categorical distributions, indexed `[item][state]`.
    Independent(Vec<Vec<f64>>),
    /// Explicit realization atoms.
    Joint(Vec<(Realization, f64)>),
}

impl Prior {
    /// Checks nonnegativity and normalization against `n` items and `n_states` states.
    pub fn validate(&self, n: usize, n_states: usize) -> Result<()> {
        match self {
            Prior::Independent(dists) => {
                if dists.len() != n {
                    return Err(Error::Validation(format!(
                        "independent prior has {} rows for {n} items",
                        dists.len()
                    )));
                }
                for (i, d) in dists.iter().enumerate() {
                    if d.len() != n_states {
                        return Err(Error::Validation(format!(
                            "item index {i}: {} probabilities for {n_states} states",
                            d.len()
                        )));
                    }
                    check_probs(d.iter().copied(), || format!("item index {i}"))?;
                }
            }
            Prior::Joint(atoms) => {
                for (r, _) in atoms {
                    if r.len() != n {
                        return Err(Error::Validation(format!(
                            "joint atom over {} items, expected {n}",
                            r.len()
                        )));
                    }
                    if r.0.iter().any(|s| s.0 as usize >= n_states) {
                        return Err(Error::Validation("joint atom uses unknown state".into()));
                    }
                }
                for (i, (r, _)) in atoms.iter().enumerate() {
                    if atoms[..i].iter().any(|(q, _)| q == r) {
                        return Err(Error::Validation("duplicate joint atom".into()));
                    }
                }
                check_probs(atoms.iter().map(|(_, p)| *p), || "joint prior".into())?;
            }
        }
        Ok(())
    }

    pub fn num_items(&self) -> usize {
        match self {
            Prior::Independent(d) => d.len(),
            Prior::Joint(atoms) => atoms.first().map_or(0, |(r, _)| r.len()),
        }
    }

    /// Probability that `Φ ∼ ψ`.
    pub fn mass(&self, psi: &PartialRealization) -> f64 {
        match self {
            Prior::Independent(dists) => {
                psi.pairs().map(|(e, s)| dists[e.0][s.0 as usize]).product()
            }
            Prior::Joint(atoms) => atoms
                .iter()
                .filter(|(r, _)| psi.agrees_with(r.states()))
                .map(|(_, p)| p)
                .sum(),
        }
    }

    /// The prior conditioned on `Φ ∼ ψ`.
    pub fn conditional(&self, psi: &PartialRealization) -> Result<Prior> {
        if psi.ground_size() != self.num_items() {
            return Err(Error::InvalidArgument(
                "partial realization does not match the prior's ground set".into(),
            ));
        }
        match self {
            Prior::Independent(dists) => {
                let mut out = dists.clone();
                for (e, s) in psi.pairs() {
                    let row = &mut out[e.0];
                    if row.get(s.0 as usize).copied().unwrap_or(0.0) <= 0.0 {
                        return Err(Error::ImpossibleObservation);
                    }
                    row.iter_mut().for_each(|p| *p = 0.0);
                    row[s.0 as usize] = 1.0;
                }
                Ok(Prior::Independent(out))
            }
            Prior::Joint(atoms) => {
                let kept: Vec<_> = atoms
                    .iter()
                    .filter(|(r, p)| *p > 0.0 && psi.agrees_with(r.states()))
                    .cloned()
                    .collect();
                let total: f64 = kept.iter().map(|(_, p)| p).sum();
                if total <= 0.0 {
                    return Err(Error::ImpossibleObservation);
                }
                Ok(Prior::Joint(
                    kept.into_iter().map(|(r, p)| (r, p / total)).collect(),
                ))
            }
        }
    }

    /// Positive-probability realizations `U⁺`, in lexicographic state order
    /// for independent priors and file order for joint priors.
    pub fn support(&self) -> Vec<(Realization, f64)> {
        match self {
            Prior::Joint(atoms) => atoms.iter().filter(|(_, p)| *p > 0.0).cloned().collect(),
            Prior::Independent(dists) => {
                let mut out = vec![(Vec::with_capacity(dists.len()), 1.0)];
                for row in dists {
                    let mut next = Vec::with_capacity(out.len() * row.len());
                    for (prefix, p) in &out {
                        for (s, &q) in row.iter().enumerate() {
                            if q > 0.0 {
                                let mut v: Vec<StateId> = prefix.clone();
                                v.push(StateId(s as u16));
                                next.push((v, p * q));
                            }
                        }
                    }
                    out = next;
                }
                out.into_iter().map(|(v, p)| (Realization(v), p)).collect()
            }
        }
    }

    /// Number of positive-probability realizations, saturating.
    pub fn support_size(&self) -> u128 {
        match self {
            Prior::Joint(atoms) => atoms.iter().filter(|(_, p)| *p > 0.0).count() as u128,
            Prior::Independent(dists) => dists.iter().fold(1u128, |acc, row| {
                acc.saturating_mul(row.iter().filter(|&&p| p > 0.0).count() as u128)
            }),
        }
    }

    /// Expands an independent prior into joint form.
    pub fn to_joint(&self) -> Prior {
        match self {
            Prior::Joint(_) => self.clone(),
            Prior::Independent(_) => Prior::Joint(self.support()),
        }
    }
}

fn check_probs(probs: impl Iterator<Item = f64>, what: impl Fn() -> String) -> Result<()> {
    let mut total = 0.0;
    for p in probs {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::Validation(format!(
                "{}: negative probability",
                what()
            )));
        }
        total += p;
    }
    if (total - 1.0).abs() > PROB_TOL {
        return Err(Error::Validation(format!(
            "{}: probabilities sum to {total}, not 1",
            what()
        )));
    }
    Ok(())
}

/// Budget constraint kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    Cardinality,
    Knapsack,
}

impl Constraint {
    pub fn as_str(self) -> &'static str {
        match self {
            Constraint::Cardinality => "cardinality",
            Constraint::Knapsack => "knapsack",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cardinality" => Ok(Constraint::Cardinality),
            "knapsack" => Ok(Constraint::Knapsack),
            other => Err(Error::InvalidArgument(format!(
                "unknown constraint `{other}`"
            ))),
        }
    }
}

/// A complete problem instance.
#[derive(Debug, Clone)]
pub struct Instance {
    name: String,
    items: Vec<Item>,
    states: StateSpace,
    prior: Prior,
    utility: Objective,
    budget: f64,
    constraint: Constraint,
}

impl Instance {
    /// Validates and builds an instance. Items must be listed in strictly
    /// ascending id order.
    pub fn new(
        name: impl Into<String>,
        items: Vec<Item>,
        states: StateSpace,
        prior: Prior,
        utility: Objective,
        budget: f64,
        constraint: Constraint,
    ) -> Result<Self> {
        let n = items.len();
        if n > MAX_ITEMS {
            return Err(Error::InvalidArgument(format!(
                "{n} items; at most {MAX_ITEMS} supported"
            )));
        }
        for w in items.windows(2) {
            if w[0].id >= w[1].id {
                return Err(Error::InvalidArgument(format!(
                    "item ids must be unique and ascending (`{}` then `{}`)",
                    w[0].id, w[1].id
                )));
            }
        }
        for it in &items {
            if !it.cost.is_finite() || it.cost < 0.0 {
                return Err(Error::Validation(format!(
                    "item `{}` has negative cost",
                    it.id
                )));
            }
        }
        if !budget.is_finite() || budget < 0.0 {
            return Err(Error::Validation("budget must be nonnegative".into()));
        }
        if constraint == Constraint::Cardinality {
            if budget.fract() != 0.0 || budget < 1.0 {
                return Err(Error::Validation(
                    "cardinality budget must be a positive integer".into(),
                ));
            }
            if let Some(it) = items.iter().find(|it| it.cost != 1.0) {
                return Err(Error::Validation(format!(
                    "item `{}` has cost {} under a cardinality constraint",
                    it.id, it.cost
                )));
            }
        }
        prior.validate(n, states.len())?;
        utility.validate(n, states.len())?;
        Ok(Instance {
            name: name.into(),
            items,
            states,
            prior,
            utility,
            budget,
            constraint,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn item_ids(&self) -> impl Iterator<Item = ItemId> {
        (0..self.items.len()).map(ItemId)
    }

    pub fn ground_set(&self) -> ItemSet {
        ItemSet::full(self.items.len())
    }

    pub fn cost(&self, e: ItemId) -> f64 {
        self.items[e.0].cost
    }

    pub fn set_cost(&self, set: ItemSet) -> f64 {
        set.iter().map(|e| self.cost(e)).sum()
    }

    pub fn item_name(&self, e: ItemId) -> &str {
        &self.items[e.0].id
    }

    pub fn lookup_item(&self, id: &str) -> Option<ItemId> {
        self.items
            .binary_search_by(|it| it.id.as_str().cmp(id))
            .ok()
            .map(ItemId)
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn prior(&self) -> &Prior {
        &self.prior
    }

    pub fn utility(&self) -> &Objective {
        &self.utility
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    /// Copy of this instance with another budget.
    pub fn with_budget(&self, budget: f64) -> Result<Self> {
        Instance::new(
            self.name.clone(),
            self.items.clone(),
            self.states.clone(),
            self.prior.clone(),
            self.utility.clone(),
            budget,
            self.constraint,
        )
    }

    /// Copy of this instance with another name.
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Item names of a set, in id order.
    pub fn set_names(&self, set: ItemSet) -> Vec<&str> {
        set.iter().map(|e| self.item_name(e)).collect()
    }

    /// Parses `a,b,c` into a set.
    pub fn parse_set(&self, list: &str) -> Result<ItemSet> {
        let mut set = ItemSet::EMPTY;
        for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let e = self
                .lookup_item(tok)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown item `{tok}`")))?;
            set = set.with(e);
        }
        Ok(set)
    }

    /// Human-readable rendering of a partial realization, `{a:1, b:0}`.
    pub fn format_partial(&self, psi: &PartialRealization) -> String {
        let parts: Vec<String> = psi
            .pairs()
            .map(|(e, s)| format!("{}:{}", self.item_name(e), self.states.token(s)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.items == other.items
            && self.states == other.states
            && self.prior == other.prior
            && self.utility == other.utility
            && self.budget == other.budget
            && self.constraint == other.constraint
    }
}
