use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{ItemId, PartialRealization, StateId};
use crate::problem::Problem;

/// A positive-probability partial realization and its neighbours.
#[derive(Debug, Clone)]
pub struct LatticeNode {
    pub psi: PartialRealization,
    /// Support atoms consistent with `psi`, ascending.
    pub atoms: Vec<usize>,
    pub mass: f64,
    /// Per item: the children reached by observing it, one per
    /// positive-probability state. Empty for observed items.
    pub children: Vec<Vec<(StateId, usize)>>,
}

/// Every partial realization with positive probability, in breadth-first
/// order from `∅`: by size, and within a size in discovery order.
#[derive(Debug, Clone)]
pub struct Lattice {
    nodes: Vec<LatticeNode>,
    index: HashMap<PartialRealization, usize>,
}

impl Lattice {
    pub fn build(problem: &Problem, max_nodes: u64) -> Result<Self> {
        let n = problem.len();
        let root = LatticeNode {
            psi: PartialRealization::empty(n),
            atoms: (0..problem.atoms().len()).collect(),
            mass: 1.0,
            children: vec![Vec::new(); n],
        };
        let mut nodes = vec![root];
        let mut index = HashMap::new();
        index.insert(PartialRealization::empty(n), 0);
        let mut next = 0;
        while next < nodes.len() {
            let dom = nodes[next].psi.domain();
            for e in (0..n).map(ItemId) {
                if dom.contains(e) {
                    continue;
                }
                let mut groups: Vec<(StateId, Vec<usize>)> = Vec::new();
                for &a in &nodes[next].atoms {
                    let s = problem.atoms()[a].state(e);
                    match groups.iter_mut().find(|(t, _)| *t == s) {
                        Some((_, g)) => g.push(a),
                        None => groups.push((s, vec![a])),
                    }
                }
                groups.sort_by_key(|(s, _)| *s);
                let mut links = Vec::with_capacity(groups.len());
                for (s, atoms) in groups {
                    let psi = nodes[next].psi.with(e, s);
                    let id = match index.get(&psi) {
                        Some(&id) => id,
                        None => {
                            let id = nodes.len();
                            if id as u64 >= max_nodes {
                                return Err(Error::too_large(
                                    "partial realization lattice",
                                    max_nodes,
                                ));
                            }
                            let mass = atoms.iter().map(|&a| problem.prob(a)).sum();
                            index.insert(psi.clone(), id);
                            nodes.push(LatticeNode {
                                psi,
                                atoms,
                                mass,
                                children: vec![Vec::new(); n],
                            });
                            id
                        }
                    };
                    links.push((s, id));
                }
                nodes[next].children[e.0] = links;
            }
            next += 1;
        }
        Ok(Lattice { nodes, index })
    }

    pub fn nodes(&self) -> &[LatticeNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &LatticeNode {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lookup(&self, psi: &PartialRealization) -> Option<usize> {
        self.index.get(psi).copied()
    }
}
