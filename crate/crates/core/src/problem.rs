//! An instance compiled for evaluation: expanded support, optional value
//! table, and a marginal cache keyed by partial realization.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Instance, ItemId, ItemSet, PartialRealization, Prior, Realization, StateId};

/// Largest support the compiler will expand.
pub const MAX_SUPPORT: u128 = 1 << 20;

const MAX_TABLE: usize = 1 << 22;

/// Compiled instance shared by the policies, the evaluators and the oracles.
pub struct Problem {
    instance: Instance,
    atoms: Vec<Realization>,
    probs: Vec<f64>,
    /// `f(A, φ_i)` at `A.0 * atoms + i`, when small enough.
    table: Option<Vec<f64>>,
    marginals: RwLock<HashMap<PartialRealization, Arc<[f64]>>>,
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("instance", &self.instance.name())
            .field("atoms", &self.atoms.len())
            .finish()
    }
}

impl Problem {
    pub fn new(instance: Instance) -> Result<Self> {
        let size = instance.prior().support_size();
        if size > MAX_SUPPORT {
            return Err(Error::too_large("prior support", MAX_SUPPORT as u64));
        }
        let (atoms, probs): (Vec<_>, Vec<_>) = instance.prior().support().into_iter().unzip();
        let n = instance.len();
        let table = (n <= 20)
            .then(|| (1usize << n).checked_mul(atoms.len()))
            .flatten()
            .filter(|&cells| cells <= MAX_TABLE)
            .map(|_| {
                let f = instance.utility();
                (0..1u64 << n)
                    .flat_map(|mask| {
                        atoms
                            .iter()
                            .map(move |a| f.value(ItemSet(mask), a.states()))
                    })
                    .collect()
            });
        Ok(Problem {
            instance,
            atoms,
            probs,
            table,
            marginals: RwLock::new(HashMap::new()),
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn len(&self) -> usize {
        self.instance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instance.is_empty()
    }

    /// Positive-probability realizations.
    pub fn atoms(&self) -> &[Realization] {
        &self.atoms
    }

    pub fn prob(&self, atom: usize) -> f64 {
        self.probs[atom]
    }

    /// `f(A, φ_atom)`.
    pub fn f(&self, set: ItemSet, atom: usize) -> f64 {
        match &self.table {
            Some(t) => t[set.0 as usize * self.atoms.len() + atom],
            None => self
                .instance
                .utility()
                .value(set, self.atoms[atom].states()),
        }
    }

    /// Validates the ground set of `psi` and returns its domain.
    pub fn check_partial(&self, psi: &PartialRealization) -> Result<ItemSet> {
        if psi.ground_size() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "partial realization over {} items, instance has {}",
                psi.ground_size(),
                self.len()
            )));
        }
        Ok(psi.domain())
    }

    pub fn consistent_atoms<'a>(
        &'a self,
        psi: &'a PartialRealization,
    ) -> impl Iterator<Item = usize> + 'a {
        self.atoms
            .iter()
            .enumerate()
            .filter(move |(_, a)| psi.agrees_with(a.states()))
            .map(|(i, _)| i)
    }

    /// `Pr[Φ ∼ ψ]`.
    pub fn mass(&self, psi: &PartialRealization) -> f64 {
        self.consistent_atoms(psi).map(|i| self.probs[i]).sum()
    }

    /// Returns `Pr[Φ ∼ ψ]`, or an error if it is zero.
    pub fn check_possible(&self, psi: &PartialRealization) -> Result<f64> {
        self.check_partial(psi)?;
        let m = self.mass(psi);
        if m > 0.0 {
            Ok(m)
        } else {
            Err(Error::ImpossibleObservation)
        }
    }

    /// `E[f(A, Φ) | Φ ∼ ψ]`.
    pub fn expected_value(&self, set: ItemSet, psi: &PartialRealization) -> Result<f64> {
        let mass = self.check_possible(psi)?;
        Ok(self.weighted_value(set, psi) / mass)
    }

    /// `Σ_{φ∼ψ} p(φ)·f(A, φ)`, unnormalized.
    pub fn weighted_value(&self, set: ItemSet, psi: &PartialRealization) -> f64 {
        self.consistent_atoms(psi)
            .map(|i| self.probs[i] * self.f(set, i))
            .sum()
    }

    /// `E[f(∅, Φ)]`.
    pub fn empty_value(&self) -> f64 {
        (0..self.atoms.len())
            .map(|i| self.probs[i] * self.f(ItemSet::EMPTY, i))
            .sum()
    }

    /// `Δ(e | ψ)` for every item (0 for observed items). Cached.
    pub fn marginals(&self, psi: &PartialRealization) -> Result<Arc<[f64]>> {
        if let Some(hit) = self.marginals.read().expect("cache poisoned").get(psi) {
            return Ok(hit.clone());
        }
        let dom = self.check_partial(psi)?;
        let mass = self.check_possible(psi)?;
        let mut out = vec![0.0; self.len()];
        for i in self.consistent_atoms(psi) {
            let p = self.probs[i];
            let base = self.f(dom, i);
            for (e, slot) in out.iter_mut().enumerate() {
                if !dom.contains(ItemId(e)) {
                    *slot += p * (self.f(dom.with(ItemId(e)), i) - base);
                }
            }
        }
        let out: Arc<[f64]> = out.into_iter().map(|d| d / mass).collect();
        self.marginals
            .write()
            .expect("cache poisoned")
            .insert(psi.clone(), out.clone());
        Ok(out)
    }

    /// Conditional distribution of `Φ(e)` given `ψ`, positive entries only.
    pub fn state_distribution(
        &self,
        e: ItemId,
        psi: &PartialRealization,
    ) -> Result<Vec<(StateId, f64)>> {
        let mass = self.check_possible(psi)?;
        if let Some(s) = psi.get(e) {
            return Ok(vec![(s, 1.0)]);
        }
        let mut acc = vec![0.0; self.instance.states().len()];
        for i in self.consistent_atoms(psi) {
            acc[self.atoms[i].state(e).0 as usize] += self.probs[i];
        }
        Ok(acc
            .into_iter()
            .enumerate()
            .filter(|(_, p)| *p > 0.0)
            .map(|(s, p)| (StateId(s as u16), p / mass))
            .collect())
    }

    /// Draws a realization from the prior.
    pub fn sample_realization<R: Rng + ?Sized>(&self, rng: &mut R) -> Realization {
        match self.instance.prior() {
            Prior::Independent(dists) => Realization(
                dists
                    .iter()
                    .map(|row| StateId(pick(row.iter().copied(), rng.random::<f64>()) as u16))
                    .collect(),
            ),
            Prior::Joint(_) => {
                let i = pick(self.probs.iter().copied(), rng.random::<f64>());
                self.atoms[i].clone()
            }
        }
    }

    /// Exhaustive check of `f(A, φ) ≥ 0` over all `A` and `φ ∈ U⁺`.
    /// Returns the first violation.
    pub fn check_nonnegative(&self) -> Result<Option<(ItemSet, Realization)>> {
        if self.len() > 20 {
            return Err(Error::too_large("ground set for exhaustive check", 20));
        }
        for mask in 0..1u64 << self.len() {
            for i in 0..self.atoms.len() {
                if self.f(ItemSet(mask), i) < 0.0 {
                    return Ok(Some((ItemSet(mask), self.atoms[i].clone())));
                }
            }
        }
        Ok(None)
    }
}

/// Inverse-CDF draw; the last positive entry absorbs rounding.
fn pick(weights: impl Iterator<Item = f64>, u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        if w <= 0.0 {
            continue;
        }
        acc += w;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}
