use std::collections::BTreeSet;
use std::path::PathBuf;

use proptest::prelude::*;
use sylva::bench::{self, BenchConfig, ReportFormat};
use sylva::datagen::{self, GenConfig, Shape};
use sylva::forest::{NodeScope, SiblingOrder};
use sylva::graph::{labels, Properties, KEY_PROPERTY};
use sylva::{fixtures, verify_forest, Orientation, PropertyGraph, PropertyValue, StructuralIndex, TreeSpec};

fn props() -> impl Strategy<Value = Properties> {
    (
        prop::option::of(any::<i64>()),
        prop::option::of(-1.0e12f64..1.0e12),
        prop::option::of("[ -~é,;\"\n]{1,10}"),
        prop::option::of(any::<bool>()),
    )
        .prop_map(|(i, f, s, b)| {
            let mut p = Properties::new();
            i.map(|v| p.insert("count".into(), PropertyValue::Int(v)));
            f.map(|v| p.insert("weight".into(), PropertyValue::Float(v)));
            s.map(|v| p.insert("name".into(), PropertyValue::Str(v)));
            b.map(|v| p.insert("flag".into(), PropertyValue::Bool(v)));
            p
        })
}

fn graph() -> impl Strategy<Value = PropertyGraph> {
    let node = (prop::collection::btree_set("[A-Z][a-z]{0,5}", 1..3), props());
    (
        prop::collection::vec(node, 1..20),
        prop::collection::vec((any::<usize>(), any::<usize>(), "[A-Z_]{1,6}", props()), 0..30),
    )
        .prop_map(|(nodes, edges)| {
            let mut g = PropertyGraph::new();
            let n = nodes.len();
            for (i, (labels, mut p)) in nodes.into_iter().enumerate() {
                p.insert(KEY_PROPERTY.into(), PropertyValue::Int(i as i64 * 3 + 1));
                g.add_node(labels, p).unwrap();
            }
            let ids: Vec<_> = g.node_ids().collect();
            for (s, d, label, p) in edges {
                g.add_edge(ids[s % n], ids[d % n], &label, p).unwrap();
            }
            g
        })
}

fn edge_rows(g: &PropertyGraph) -> Vec<(PropertyValue, PropertyValue, String, Properties)> {
    g.edges()
        .map(|e| {
            (
                g.external_key(e.src),
                g.external_key(e.dst),
                e.label.clone(),
                e.properties.clone(),
            )
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_csv_round_trips(g in graph()) {
        let dir = tempfile::tempdir().unwrap();
        g.save_dir(dir.path()).unwrap();
        let back = PropertyGraph::load_dir(dir.path()).unwrap();
        let nodes = |g: &PropertyGraph| g.nodes().map(|n| (n.labels.clone(), n.properties.clone())).collect::<Vec<_>>();
        prop_assert_eq!(nodes(&back), nodes(&g));
        prop_assert_eq!(edge_rows(&back), edge_rows(&g));
    }

    #[test]
    fn spec_toml_round_trips(
        edge_labels in prop::collection::btree_set("[A-Za-z_]{1,8}", 1..4),
        down in any::<bool>(),
        scope in prop_oneof![
            Just(NodeScope::All),
            prop::collection::btree_set("[A-Z][a-z]{0,5}", 1..3).prop_map(NodeScope::AnyLabel),
        ],
        order in prop_oneof![
            Just(SiblingOrder::Insertion),
            "[a-z]{1,6}".prop_map(SiblingOrder::ByProperty),
            "[A-Z]{1,6}".prop_map(SiblingOrder::ByNextEdge),
        ],
        required in prop::collection::btree_set("[A-Z][a-z]{0,5}", 0..3),
    ) {
        let orientation = if down { Orientation::ParentToChild } else { Orientation::ChildToParent };
        let spec = TreeSpec::new(edge_labels, orientation)
            .with_scope(scope)
            .with_sibling_order(order)
            .with_parent_required(required);
        let text = spec.to_toml().unwrap();
        prop_assert_eq!(TreeSpec::from_toml(&text).unwrap(), spec);
    }

    #[test]
    fn datagen_is_deterministic(
        shape in prop_oneof![Just(Shape::Wide), Just(Shape::Deep), Just(Shape::Random)],
        n in 1usize..300,
        seed in any::<u64>(),
    ) {
        let config = GenConfig::new(shape, n, 1, 4).with_seed(seed);
        let dump = |c: &GenConfig| {
            let (g, _) = datagen::generate(c).unwrap();
            let dir = tempfile::tempdir().unwrap();
            g.save_dir(dir.path()).unwrap();
            let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
            (read("nodes.csv"), read("edges.csv"))
        };
        prop_assert_eq!(dump(&config), dump(&config.clone()));
    }
}

#[test]
fn stored_fixture_matches_builtin() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/tagclass");
    let g = PropertyGraph::load_dir(&dir).unwrap();
    let spec = TreeSpec::load(&dir.join("spec.toml")).unwrap();
    let (builtin, builtin_spec) = fixtures::tagclass();
    assert_eq!(spec, builtin_spec);
    let index = StructuralIndex::build(verify_forest(&g, &spec).unwrap());
    let mut out = Vec::new();
    index.export_csv(&g, &mut out).unwrap();
    assert_eq!(
        String::from_utf8(out).unwrap(),
        std::fs::read_to_string(dir.join("index.golden.csv")).unwrap()
    );
    let names = |g: &PropertyGraph| g.nodes().map(|n| n.properties["name"].clone()).collect::<Vec<_>>();
    assert_eq!(names(&g), names(&builtin));
}

#[test]
fn different_seeds_differ() {
    let a = datagen::generate(&GenConfig::new(Shape::Random, 200, 1, 4).with_seed(1))
        .unwrap()
        .0;
    let b = datagen::generate(&GenConfig::new(Shape::Random, 200, 1, 4).with_seed(2))
        .unwrap()
        .0;
    let pairs = |g: &PropertyGraph| g.edges().map(|e| (e.src, e.dst)).collect::<BTreeSet<_>>();
    assert_ne!(pairs(&a), pairs(&b));
}

#[test]
fn bench_csv_round_trips() {
    let config = BenchConfig {
        graphs: vec!["WT1".into(), "TF".into()],
        repetitions: 3,
        ..BenchConfig::default()
    };
    let graphs = config.load_graphs().unwrap();
    let report = bench::run_suite(&config.cases().unwrap(), &graphs, config.baseline_plan().unwrap());
    let csv = bench::emit_report(&report, ReportFormat::Csv);
    let rows = bench::read_report_csv(&csv).unwrap();
    assert_eq!(rows.len(), 2 * 4 * 4);
    for (row, parsed) in report.rows.iter().zip(&rows) {
        assert_eq!(&bench::CsvRow::from(row), parsed);
    }
    // Every plan returns the same cardinality per (graph, query).
    for chunk in rows.chunks(4) {
        let counts: BTreeSet<_> = chunk.iter().map(|r| r.result_count).collect();
        assert_eq!(counts.len(), 1, "{chunk:?}");
    }
    let table = bench::emit_report(&report, ReportFormat::Table);
    assert_eq!(table.lines().count(), rows.len() + 1);
}

#[test]
fn unit_property_values_survive() {
    let mut g = PropertyGraph::new();
    let mut p = Properties::new();
    p.insert(KEY_PROPERTY.into(), PropertyValue::Int(-7));
    p.insert("name".into(), PropertyValue::from("a,b \"quoted\""));
    g.add_node(labels(["A", "B"]), p).unwrap();
    let dir = tempfile::tempdir().unwrap();
    g.save_dir(dir.path()).unwrap();
    let back = PropertyGraph::load_dir(dir.path()).unwrap();
    assert_eq!(back.nodes().next(), g.nodes().next());
}
