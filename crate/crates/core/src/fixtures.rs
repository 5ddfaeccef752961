//! Small hand-built graphs used by tests, examples and the CLI.

use std::collections::BTreeSet;

use crate::forest::{NodeScope, Orientation, SiblingOrder, TreeSpec};
use crate::graph::{labels, NodeId, Properties, PropertyGraph, PropertyValue, KEY_PROPERTY};

/// `(key, name, parent key)` rows of the TagClass hierarchy excerpt.
pub const TAGCLASS: [(i64, &str, Option<i64>); 5] = [
    (1, "Thing", None),
    (304, "Place", Some(1)),
    (240, "Agent", Some(1)),
    (302, "Organisation", Some(240)),
    (212, "Person", Some(240)),
];

fn named(key: i64, name: &str) -> Properties {
    let mut p = Properties::new();
    p.insert(KEY_PROPERTY.into(), PropertyValue::Int(key));
    p.insert("name".into(), PropertyValue::from(name));
    p
}

fn tagclass_with(label: &str, orientation: Orientation) -> (PropertyGraph, TreeSpec) {
    let mut g = PropertyGraph::new();
    for (key, name, _) in TAGCLASS {
        g.add_node(labels(["TagClass"]), named(key, name)).expect("unique keys");
    }
    for (key, _, parent) in TAGCLASS {
        if let Some(parent) = parent {
            let child = g.node_by_key(&PropertyValue::Int(key)).unwrap();
            let parent = g.node_by_key(&PropertyValue::Int(parent)).unwrap();
            let (src, dst) = match orientation {
                Orientation::ChildToParent => (child, parent),
                Orientation::ParentToChild => (parent, child),
            };
            g.add_edge(src, dst, label, Properties::new()).unwrap();
        }
    }
    let spec =
        TreeSpec::new([label], orientation).with_scope(NodeScope::AnyLabel(BTreeSet::from(["TagClass".to_owned()])));
    (g, spec)
}

/// Five-node TagClass tree, `isSubclassOf` edges pointing child to parent.
pub fn tagclass() -> (PropertyGraph, TreeSpec) {
    tagclass_with("isSubclassOf", Orientation::ChildToParent)
}

/// Same tree with `hasSubclass` edges pointing parent to child.
pub fn tagclass_downward() -> (PropertyGraph, TreeSpec) {
    tagclass_with("hasSubclass", Orientation::ParentToChild)
}

/// Account → Statement → Transaction via `CONTAINS`, siblings linked by
/// `PRECEDES`. Containment edges are inserted out of order on purpose.
pub fn time_series() -> (PropertyGraph, TreeSpec) {
    let mut g = PropertyGraph::new();
    let mut add = |label: &str, key: i64, name: &str| g.add_node(labels([label]), named(key, name)).unwrap();
    let a1 = add("Account", 1, "A1");
    let s1 = add("Statement", 10, "S1");
    let s2 = add("Statement", 11, "S2");
    let t: Vec<NodeId> = (1..=5).map(|i| add("Transaction", 100 + i, &format!("T{i}"))).collect();
    let contains = [
        (a1, s2),
        (a1, s1),
        (s1, t[1]),
        (s1, t[0]),
        (s2, t[4]),
        (s2, t[2]),
        (s2, t[3]),
    ];
    for (p, c) in contains {
        g.add_edge(p, c, "CONTAINS", Properties::new()).unwrap();
    }
    for (a, b) in [(s1, s2), (t[0], t[1]), (t[2], t[3]), (t[3], t[4])] {
        g.add_edge(a, b, "PRECEDES", Properties::new()).unwrap();
    }
    let spec = TreeSpec::new(["CONTAINS"], Orientation::ParentToChild)
        .with_scope(NodeScope::AnyLabel(
            ["Account", "Statement", "Transaction"]
                .into_iter()
                .map(String::from)
                .collect(),
        ))
        .with_sibling_order(SiblingOrder::ByNextEdge("PRECEDES".into()))
        .with_parent_required(["Statement", "Transaction"]);
    (g, spec)
}

/// Continent / country / city hierarchy with one `Place` label and
/// `IS_PART_OF` edges pointing child to parent.
pub fn places() -> (PropertyGraph, TreeSpec) {
    let mut g = PropertyGraph::new();
    let mut key = 0;
    let mut add = |g: &mut PropertyGraph, name: &str, kind: &str| {
        key += 1;
        let mut p = named(key, name);
        p.insert("type".into(), PropertyValue::from(kind));
        g.add_node(labels(["Place"]), p).unwrap()
    };
    let europe = add(&mut g, "Europe", "continent");
    let asia = add(&mut g, "Asia", "continent");
    let countries = [("Germany", europe), ("Netherlands", europe), ("Japan", asia)];
    for (country, continent) in countries {
        let c = add(&mut g, country, "country");
        g.add_edge(c, continent, "IS_PART_OF", Properties::new()).unwrap();
        for i in 0..3 {
            let city = add(&mut g, &format!("{country}-city-{i}"), "city");
            g.add_edge(city, c, "IS_PART_OF", Properties::new()).unwrap();
        }
    }
    let spec = TreeSpec::new(["IS_PART_OF"], Orientation::ChildToParent);
    (g, spec)
}

/// Looks a fixture node up by its `name` property.
pub fn by_name(g: &PropertyGraph, name: &str) -> NodeId {
    g.nodes()
        .find(|n| n.properties.get("name") == Some(&PropertyValue::from(name)))
        .map(|n| n.id)
        .unwrap_or_else(|| panic!("no node named {name}"))
}
