//! Instances shipped with the library, used by `bench` and the test suites.

use crate::error::{Error, Result};
use crate::format::parse_instance;
use crate::model::Instance;

const SOURCES: &[(&str, &str)] = &[
    ("blend_025", include_str!("../instances/blend_025.toy")),
    ("blend_050", include_str!("../instances/blend_050.toy")),
    ("blend_075", include_str!("../instances/blend_075.toy")),
    ("coverage_4", include_str!("../instances/coverage_4.toy")),
    ("cut_path_4", include_str!("../instances/cut_path_4.toy")),
    (
        "graph_cut_edge",
        include_str!("../instances/graph_cut_edge.toy"),
    ),
    (
        "knapsack_blend",
        include_str!("../instances/knapsack_blend.toy"),
    ),
    (
        "knapsack_coverage",
        include_str!("../instances/knapsack_coverage.toy"),
    ),
    (
        "knapsack_cut",
        include_str!("../instances/knapsack_cut.toy"),
    ),
    (
        "knapsack_modular",
        include_str!("../instances/knapsack_modular.toy"),
    ),
    ("modular_4", include_str!("../instances/modular_4.toy")),
];

/// Names of the bundled instances, sorted.
pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

/// File text of a bundled instance. Accepts the name with or without `.toy`.
pub fn source(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".toy").unwrap_or(name);
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<Instance> {
    let text = source(name)
        .ok_or_else(|| Error::InvalidArgument(format!("no bundled instance `{name}`")))?;
    parse_instance(text, name.strip_suffix(".toy").unwrap_or(name))
}

/// Every bundled instance, in name order.
pub fn all() -> Vec<Instance> {
    names()
        .map(|n| load(n).expect("bundled instance parses"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Constraint;

    #[test]
    fn all_parse_and_cover_both_constraints() {
        let all = all();
        let card = all
            .iter()
            .filter(|i| i.constraint() == Constraint::Cardinality)
            .count();
        let knap = all
            .iter()
            .filter(|i| i.constraint() == Constraint::Knapsack)
            .count();
        assert!(card >= 6 && knap >= 4);
        assert!(all.iter().all(|i| i.len() <= 5));
        assert_eq!(load("graph_cut_edge.toy").unwrap().name(), "graph_cut_edge");
        assert!(load("missing").is_err());
    }
}
