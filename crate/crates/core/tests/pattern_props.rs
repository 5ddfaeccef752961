mod common;

use std::collections::BTreeSet;

use common::{random_tree, walk_oracle};
use proptest::prelude::*;
use sylva::graph::{labels, Properties};
use sylva::pattern::{self, Catalog, EdgeDirection, EdgePattern, NodePattern, PathLength, PatternQuery, Predicate};
use sylva::{verify_forest, Codec, NodeId, Orientation, PropertyGraph, PropertyValue, StructuralIndex, TreeSpec};

const RESERVED: [&str; 6] = ["match", "where", "return", "and", "true", "false"];

fn ident(pattern: &'static str) -> impl Strategy<Value = String> {
    pattern.prop_filter("reserved word", |s| {
        !RESERVED.contains(&s.to_ascii_lowercase().as_str())
    })
}

fn literal() -> impl Strategy<Value = PropertyValue> {
    prop_oneof![
        (-1_000_000_000_000i64..1_000_000_000_000).prop_map(PropertyValue::Int),
        (-1.0e9f64..1.0e9).prop_map(PropertyValue::Float),
        "[ -~é]{0,8}".prop_map(PropertyValue::Str),
        any::<bool>().prop_map(PropertyValue::Bool),
    ]
}

fn length() -> impl Strategy<Value = PathLength> {
    prop_oneof![
        Just(PathLength::One),
        Just(PathLength::Range { min: 1, max: None }),
        (0u32..5, 0u32..5).prop_map(|(a, d)| PathLength::Range {
            min: a,
            max: Some(a + d)
        }),
    ]
}

fn query() -> impl Strategy<Value = PatternQuery> {
    (
        ident("[a-z][a-z0-9_]{0,4}"),
        ident("[a-z][a-z0-9_]{0,4}"),
        prop::option::of(ident("[A-Z][A-Za-z0-9_]{0,6}")),
        prop::option::of(ident("[A-Z][A-Za-z0-9_]{0,6}")),
        prop::option::of(ident("[A-Za-z_][A-Za-z0-9_]{0,6}")),
        prop_oneof![
            Just(EdgeDirection::Right),
            Just(EdgeDirection::Left),
            Just(EdgeDirection::Undirected)
        ],
        length(),
        prop::collection::vec((any::<bool>(), ident("[a-z_][a-z0-9_]{0,5}"), literal()), 0..4),
        prop::sample::select(vec![vec![true], vec![false], vec![true, false], vec![false, true]]),
    )
        .prop_filter("distinct variables", |t| t.0 != t.1)
        .prop_map(|(l, r, ll, rl, el, direction, length, preds, ret)| {
            let var = |left: bool| if left { l.clone() } else { r.clone() };
            PatternQuery {
                left: NodePattern {
                    var: l.clone(),
                    label: ll,
                },
                edge: EdgePattern {
                    label: el,
                    direction,
                    length,
                },
                right: NodePattern {
                    var: r.clone(),
                    label: rl,
                },
                predicates: preds
                    .into_iter()
                    .map(|(left, property, value)| Predicate {
                        var: var(left),
                        property,
                        value,
                    })
                    .collect(),
                returns: ret.into_iter().map(var).collect(),
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn parse_inverts_print(q in query()) {
        let text = q.to_string();
        let parsed = pattern::parse(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&parsed, &q);
        prop_assert_eq!(parsed.to_string(), text);
    }

    #[test]
    fn parser_never_panics(text in "[ -~]{0,60}") {
        if let Err(e) = pattern::parse(&text) {
            prop_assert!(e.position <= text.len());
        }
    }
}

/// The random tree with edges flipped to point parent to child.
fn downward(g: &PropertyGraph) -> (PropertyGraph, TreeSpec) {
    let mut out = PropertyGraph::new();
    for n in g.nodes() {
        out.add_node(labels(["Node"]), n.properties.clone()).unwrap();
    }
    for e in g.edges() {
        out.add_edge(e.dst, e.src, "HAS_CHILD", Properties::new()).unwrap();
    }
    (out, TreeSpec::new(["HAS_CHILD"], Orientation::ParentToChild))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rewrite_is_sound(
        seed in any::<u64>(),
        n in 2usize..120,
        flip in any::<bool>(),
        anchor in any::<prop::sample::Index>(),
        right in any::<bool>(),
        anchor_left in any::<bool>(),
        length in length(),
        dewey in any::<bool>(),
    ) {
        let (g, spec) = random_tree(seed, n, 40);
        let (g, spec) = if flip { downward(&g) } else { (g, spec) };
        let label = spec.edge_labels.iter().next().unwrap().clone();
        let index = StructuralIndex::build(verify_forest(&g, &spec).unwrap());
        let mut catalog = Catalog::new(&g);
        catalog.register("t", &index);

        let nodes: Vec<NodeId> = g.node_ids().collect();
        let a = *anchor.get(&nodes);
        let key = g.external_key(a);
        let av = if anchor_left { "n" } else { "m" };
        let free = if anchor_left { "m" } else { "n" };
        let edge = EdgePattern {
            label: Some(label.clone()),
            direction: if right { EdgeDirection::Right } else { EdgeDirection::Left },
            length,
        };
        let text = format!("MATCH (n){edge}(m) WHERE {av}.node_id = {} RETURN {free}", match key {
            PropertyValue::Int(k) => k,
            _ => unreachable!(),
        });
        let q = pattern::parse(&text).unwrap();
        let codec = if dewey { Codec::Dewey } else { Codec::PrePost };
        let plan = pattern::rewrite_with(&q, &catalog, codec);
        let got = pattern::execute(&plan, &catalog).unwrap();
        let base = pattern::execute(&pattern::baseline_plan(&q, "reference"), &catalog).unwrap();
        prop_assert_eq!(&got.rows, &base.rows, "{} via {}", text, plan.plan);

        let (min, max) = length.bounds();
        let expected: BTreeSet<Vec<NodeId>> = walk_oracle(&g, a, Some(&label), right == anchor_left, min, max)
            .into_iter()
            .map(|x| vec![x])
            .collect();
        prop_assert_eq!(got.rows, expected, "{}", text);
    }
}
