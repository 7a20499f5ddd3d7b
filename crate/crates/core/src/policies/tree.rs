use std::fmt::Write;

use crate::model::{Instance, ItemId, ItemSet, StateId};

/// Node of an explicit deterministic policy.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreeNode {
    Stop,
    /// Select `item`, then continue at the child for the observed state.
    /// A state without a child stops.
    Select {
        item: ItemId,
        children: Vec<(StateId, usize)>,
    },
}

/// A deterministic adaptive policy as a decision tree. Node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolicyTree {
    nodes: Vec<TreeNode>,
}

impl Default for PolicyTree {
    fn default() -> Self {
        Self::stop()
    }
}

impl PolicyTree {
    /// The empty policy.
    pub fn stop() -> Self {
        PolicyTree {
            nodes: vec![TreeNode::Stop],
        }
    }

    /// Selects `item` and continues with one subtree per observed state.
    pub fn select(item: ItemId, children: Vec<(StateId, PolicyTree)>) -> Self {
        let mut nodes = vec![TreeNode::Stop];
        let mut links = Vec::with_capacity(children.len());
        for (s, sub) in children {
            let offset = nodes.len();
            links.push((s, offset));
            nodes.extend(sub.nodes.into_iter().map(|n| match n {
                TreeNode::Stop => TreeNode::Stop,
                TreeNode::Select { item, children } => TreeNode::Select {
                    item,
                    children: children.into_iter().map(|(s, c)| (s, c + offset)).collect(),
                },
            }));
        }
        nodes[0] = TreeNode::Select {
            item,
            children: links,
        };
        PolicyTree { nodes }
    }

    /// Selects `items` in order regardless of what is observed.
    pub fn sequence(items: &[ItemId], n_states: usize) -> Self {
        items.iter().rev().fold(PolicyTree::stop(), |tail, &e| {
            let children = (0..n_states as u16)
                .map(|s| (StateId(s), tail.clone()))
                .collect();
            PolicyTree::select(e, children)
        })
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn node(&self, i: usize) -> &TreeNode {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.nodes[0], TreeNode::Stop)
    }

    /// Child reached after observing `s` at node `i`.
    pub fn child(&self, i: usize, s: StateId) -> Option<usize> {
        match &self.nodes[i] {
            TreeNode::Stop => None,
            TreeNode::Select { children, .. } => {
                children.iter().find(|(t, _)| *t == s).map(|(_, c)| *c)
            }
        }
    }

    /// Every item named anywhere in the tree.
    pub fn items(&self) -> ItemSet {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                TreeNode::Select { item, .. } => Some(*item),
                TreeNode::Stop => None,
            })
            .fold(ItemSet::EMPTY, ItemSet::with)
    }

    /// Largest total cost along a root-to-leaf path.
    pub fn max_path_cost(&self, instance: &Instance) -> f64 {
        fn walk(t: &PolicyTree, i: usize, inst: &Instance) -> f64 {
            match &t.nodes[i] {
                TreeNode::Stop => 0.0,
                TreeNode::Select { item, children } => {
                    inst.cost(*item)
                        + children
                            .iter()
                            .map(|(_, c)| walk(t, *c, inst))
                            .fold(0.0, f64::max)
                }
            }
        }
        walk(self, 0, instance)
    }

    pub fn is_budget_feasible(&self, instance: &Instance) -> bool {
        self.max_path_cost(instance) <= instance.budget() + crate::model::PROB_TOL
    }

    /// Compact rendering: `stop`, `a`, `a(0:stop; 1:b)`.
    pub fn render(&self, instance: &Instance) -> String {
        fn walk(t: &PolicyTree, i: usize, inst: &Instance, out: &mut String) {
            match &t.nodes[i] {
                TreeNode::Stop => out.push_str("stop"),
                TreeNode::Select { item, children } => {
                    out.push_str(inst.item_name(*item));
                    if children
                        .iter()
                        .any(|(_, c)| !matches!(t.nodes[*c], TreeNode::Stop))
                    {
                        out.push('(');
                        for (j, (s, c)) in children.iter().enumerate() {
                            if j > 0 {
                                out.push_str("; ");
                            }
                            let _ = write!(out, "{}:", inst.states().token(*s));
                            walk(t, *c, inst, out);
                        }
                        out.push(')');
                    }
                }
            }
        }
        let mut out = String::new();
        walk(self, 0, instance, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn grafting_and_rendering() {
        let p = fixtures::modular(&[1.0, 1.0], 0.5, 2);
        let t = PolicyTree::select(
            ItemId(0),
            vec![
                (StateId(0), PolicyTree::stop()),
                (StateId(1), PolicyTree::sequence(&[ItemId(1)], 2)),
            ],
        );
        assert_eq!(t.render(p.instance()), "a(0:stop; 1:b)");
        assert_eq!(t.items(), ItemSet(0b11));
        assert_eq!(t.max_path_cost(p.instance()), 2.0);
        let c = t.child(0, StateId(1)).unwrap();
        assert!(matches!(
            t.node(c),
            TreeNode::Select {
                item: ItemId(1),
                ..
            }
        ));
        assert_eq!(PolicyTree::stop().render(p.instance()), "stop");
    }
}
