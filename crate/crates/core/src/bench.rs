//! Median-of-N benchmark harness.
//!
//! Graph loading, index building and start-node resolution all happen before
//! the clock starts; only query execution is timed. Times are captured in
//! microseconds and reported in milliseconds.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datagen::{self, GenConfig};
use crate::forest::{verify_forest, Position, SpecError, TreeSpec, Violation};
use crate::graph::{CsvError, NodeId, Properties, PropertyGraph, PropertyValue};
use crate::index::{build_index, StructuralIndex};
use crate::query::{PlanKind, Query, QueryEngine, QueryError, QueryKind};

/// How a case picks its start node(s).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartRule {
    /// First tree root.
    #[default]
    Root,
    /// A seeded random in-scope node.
    Random,
    /// The node with this `node_id`.
    Key(i64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchCase {
    pub graph: String,
    pub query: QueryKind,
    pub plan: PlanKind,
    pub start: StartRule,
    pub seed: u64,
    pub repetitions: usize,
    pub timeout: Duration,
}

/// A graph ready for benchmarking: verified and indexed.
pub struct BenchGraph {
    pub graph: PropertyGraph,
    pub index: StructuralIndex,
}

impl BenchGraph {
    pub fn new(graph: PropertyGraph, spec: &TreeSpec) -> Result<BenchGraph, Violation> {
        let index = build_index(verify_forest(&graph, spec)?);
        Ok(BenchGraph { graph, index })
    }

    pub fn spec(&self) -> &TreeSpec {
        self.index.forest().spec()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub graph: String,
    pub query: QueryKind,
    pub plan: PlanKind,
    pub median_us: Option<u64>,
    pub min_us: Option<u64>,
    pub max_us: Option<u64>,
    pub result_count: Option<usize>,
    pub timed_out: bool,
    pub speedup: Option<f64>,
    /// Speedup is only a lower bound (baseline timed out, or the plan ran
    /// below timer resolution).
    pub lower_bound: bool,
    pub error: Option<String>,
}

/// Relabel cost of random leaf appends on one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaintenanceRow {
    pub graph: String,
    pub inserts: usize,
    pub prepost_relabeled: usize,
    pub dewey_relabeled: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub baseline: Option<PlanKind>,
    pub rows: Vec<BenchRow>,
    pub maintenance: Vec<MaintenanceRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Table,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<ReportFormat, String> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "table" => Ok(ReportFormat::Table),
            _ => Err(format!("unknown report format `{s}` (expected csv or table)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("cannot read bench config: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed bench config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("graph `{name}`: {source}")]
    Generate {
        name: String,
        source: datagen::DatagenError,
    },
    #[error("graph `{name}`: {source}")]
    Load { name: String, source: CsvError },
    #[error("graph `{name}`: {source}")]
    Spec { name: String, source: SpecError },
    #[error("graph `{name}` is not a forest: {source}")]
    NotAForest { name: String, source: Violation },
    #[error("invalid bench config: {0}")]
    Invalid(String),
}

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

/// Timer resolution used when a plan's median rounds to zero.
const RESOLUTION_US: u64 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CustomGraph {
    pub name: String,
    pub config: GenConfig,
}

/// A graph stored as a CSV pair plus a tree spec file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoredGraph {
    pub name: String,
    pub dir: PathBuf,
    pub spec: PathBuf,
}

/// Benchmark configuration, read from TOML:
///
/// ```toml
/// graphs = ["WT1", "DT"]
/// queries = ["desc", "leaf"]
/// plans = ["baseline_join", "index_prepost"]
/// repetitions = 5
/// timeout_secs = 60
/// seed = 7
/// start = "root"
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    /// Preset names.
    #[serde(default)]
    pub graphs: Vec<String>,
    #[serde(default)]
    pub custom: Vec<CustomGraph>,
    #[serde(default)]
    pub stored: Vec<StoredGraph>,
    #[serde(default = "all_queries")]
    pub queries: Vec<String>,
    #[serde(default = "all_plans")]
    pub plans: Vec<String>,
    #[serde(default = "five")]
    pub repetitions: usize,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub start: StartRule,
    /// Plan every speedup is measured against.
    #[serde(default = "default_baseline")]
    pub baseline: String,
    /// Random leaf appends per graph for the relabel-count report; 0 skips.
    #[serde(default)]
    pub maintenance_ops: usize,
}

fn all_queries() -> Vec<String> {
    QueryKind::ALL.iter().map(ToString::to_string).collect()
}

fn all_plans() -> Vec<String> {
    PlanKind::ALL.iter().map(ToString::to_string).collect()
}

fn five() -> usize {
    5
}

fn default_timeout_secs() -> f64 {
    DEFAULT_TIMEOUT.as_secs_f64()
}

fn default_baseline() -> String {
    PlanKind::BaselineJoin.to_string()
}

impl Default for BenchConfig {
    fn default() -> BenchConfig {
        BenchConfig {
            graphs: Vec::new(),
            custom: Vec::new(),
            stored: Vec::new(),
            queries: all_queries(),
            plans: all_plans(),
            repetitions: five(),
            timeout_secs: default_timeout_secs(),
            seed: 0,
            start: StartRule::Root,
            baseline: default_baseline(),
            maintenance_ops: 0,
        }
    }
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<BenchConfig, BenchError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<BenchConfig, BenchError> {
        let text = std::fs::read_to_string(path)?;
        let mut config = BenchConfig::from_toml(&text)?;
        // Stored graph paths are relative to the config file.
        if let Some(base) = path.parent() {
            for s in &mut config.stored {
                s.dir = base.join(&s.dir);
                s.spec = base.join(&s.spec);
            }
        }
        Ok(config)
    }

    /// Every preset, every query, every plan.
    pub fn all_presets() -> BenchConfig {
        BenchConfig {
            graphs: datagen::presets().into_iter().map(|(n, _)| n.to_owned()).collect(),
            ..BenchConfig::default()
        }
    }

    pub fn baseline_plan(&self) -> Result<PlanKind, BenchError> {
        self.baseline.parse().map_err(BenchError::Invalid)
    }

    pub fn timeout(&self) -> Result<Duration, BenchError> {
        Duration::try_from_secs_f64(self.timeout_secs)
            .map_err(|_| BenchError::Invalid(format!("bad timeout_secs {}", self.timeout_secs)))
    }

    pub fn graph_names(&self) -> Vec<String> {
        self.graphs
            .iter()
            .cloned()
            .chain(self.custom.iter().map(|c| c.name.clone()))
            .chain(self.stored.iter().map(|s| s.name.clone()))
            .collect()
    }

    /// Graphs × queries × plans, in config order.
    pub fn cases(&self) -> Result<Vec<BenchCase>, BenchError> {
        if self.repetitions == 0 || self.repetitions.is_multiple_of(2) {
            return Err(BenchError::Invalid(format!(
                "repetitions must be odd and positive, got {}",
                self.repetitions
            )));
        }
        let queries: Vec<QueryKind> = parse_all(&self.queries)?;
        let plans: Vec<PlanKind> = parse_all(&self.plans)?;
        let timeout = self.timeout()?;
        let mut cases = Vec::new();
        for graph in self.graph_names() {
            for query in &queries {
                for plan in &plans {
                    cases.push(BenchCase {
                        graph: graph.clone(),
                        query: *query,
                        plan: *plan,
                        start: self.start.clone(),
                        seed: self.seed,
                        repetitions: self.repetitions,
                        timeout,
                    });
                }
            }
        }
        Ok(cases)
    }

    /// Generates or loads every graph and builds its index.
    pub fn load_graphs(&self) -> Result<BTreeMap<String, BenchGraph>, BenchError> {
        let mut out = BTreeMap::new();
        let mut add = |name: &str, graph: PropertyGraph, spec: TreeSpec| -> Result<(), BenchError> {
            let bg = BenchGraph::new(graph, &spec).map_err(|source| BenchError::NotAForest {
                name: name.to_owned(),
                source,
            })?;
            out.insert(name.to_owned(), bg);
            Ok(())
        };
        for name in &self.graphs {
            let config = datagen::preset(name).ok_or_else(|| BenchError::UnknownPreset(name.clone()))?;
            let (g, spec) = datagen::generate(&config).map_err(|source| BenchError::Generate {
                name: name.clone(),
                source,
            })?;
            add(name, g, spec)?;
        }
        for c in &self.custom {
            let (g, spec) = datagen::generate(&c.config).map_err(|source| BenchError::Generate {
                name: c.name.clone(),
                source,
            })?;
            add(&c.name, g, spec)?;
        }
        for s in &self.stored {
            let g = PropertyGraph::load_dir(&s.dir).map_err(|source| BenchError::Load {
                name: s.name.clone(),
                source,
            })?;
            let spec = TreeSpec::load(&s.spec).map_err(|source| BenchError::Spec {
                name: s.name.clone(),
                source,
            })?;
            add(&s.name, g, spec)?;
        }
        Ok(out)
    }
}

fn parse_all<T: std::str::FromStr<Err = String>>(items: &[String]) -> Result<Vec<T>, BenchError> {
    items.iter().map(|s| s.parse().map_err(BenchError::Invalid)).collect()
}

/// Resolves a case's start node(s); `None` when the rule matches nothing.
pub fn resolve_start(bg: &BenchGraph, query: QueryKind, rule: &StartRule, seed: u64) -> Option<Query> {
    let forest = bg.index.forest();
    let start = match rule {
        StartRule::Root => *forest.roots().first()?,
        StartRule::Random => {
            let nodes: Vec<NodeId> = forest.nodes().collect();
            if nodes.is_empty() {
                return None;
            }
            nodes[ChaCha8Rng::seed_from_u64(seed).random_range(0..nodes.len())]
        }
        StartRule::Key(k) => bg
            .graph
            .node_by_key(&PropertyValue::Int(*k))
            .filter(|n| forest.contains(*n))?,
    };
    Some(match query {
        QueryKind::Desc => Query::Desc(start),
        QueryKind::Leaf => Query::Leaf(start),
        QueryKind::Children => Query::Children(start),
        // Partner: the last node of the start's tree in document order.
        QueryKind::AncDesc => {
            let root = bg.index.root_of(start)?;
            Query::AncDesc(start, *bg.index.tree_preorder(root).last()?)
        }
    })
}

/// Runs every case serially and fills in speedups against `baseline`.
pub fn run_suite(cases: &[BenchCase], graphs: &BTreeMap<String, BenchGraph>, baseline: PlanKind) -> BenchReport {
    let mut engines: BTreeMap<&str, QueryEngine<'_>> = BTreeMap::new();
    let mut rows = Vec::with_capacity(cases.len());
    for case in cases {
        let mut row = BenchRow {
            graph: case.graph.clone(),
            query: case.query,
            plan: case.plan,
            median_us: None,
            min_us: None,
            max_us: None,
            result_count: None,
            timed_out: false,
            speedup: None,
            lower_bound: false,
            error: None,
        };
        let Some(bg) = graphs.get(&case.graph) else {
            row.error = Some(format!("unknown graph `{}`", case.graph));
            rows.push(row);
            continue;
        };
        let engine = engines.entry(case.graph.as_str()).or_insert_with(|| {
            QueryEngine::new(&bg.graph, bg.spec().clone())
                .with_index(&bg.index)
                .expect("index built from this spec")
        });
        engine.set_timeout(Some(case.timeout));
        let Some(query) = resolve_start(bg, case.query, &case.start, case.seed) else {
            row.error = Some("start rule matches no node".into());
            rows.push(row);
            continue;
        };
        let mut times = Vec::with_capacity(case.repetitions);
        for _ in 0..case.repetitions.max(1) {
            match engine.run(query, case.plan) {
                Ok(r) => {
                    times.push(r.elapsed.as_micros() as u64);
                    row.result_count = Some(r.cardinality());
                }
                Err(QueryError::TimedOut(elapsed)) => {
                    row.timed_out = true;
                    row.result_count = None;
                    times = vec![elapsed.as_micros() as u64];
                    break;
                }
                Err(e) => {
                    row.error = Some(e.to_string());
                    break;
                }
            }
        }
        if row.error.is_none() {
            times.sort_unstable();
            row.median_us = Some(times[times.len() / 2]);
            row.min_us = times.first().copied();
            row.max_us = times.last().copied();
        }
        rows.push(row);
    }
    fill_speedups(&mut rows, baseline);
    BenchReport {
        baseline: Some(baseline),
        rows,
        maintenance: Vec::new(),
    }
}

fn fill_speedups(rows: &mut [BenchRow], baseline: PlanKind) {
    let base: BTreeMap<(String, QueryKind), (u64, bool)> = rows
        .iter()
        .filter(|r| r.plan == baseline)
        .filter_map(|r| Some(((r.graph.clone(), r.query), (r.median_us?, r.timed_out))))
        .collect();
    for r in rows.iter_mut() {
        let (Some(&(b, b_timed_out)), Some(p)) = (base.get(&(r.graph.clone(), r.query)), r.median_us) else {
            continue;
        };
        if r.timed_out && r.plan != baseline {
            // The plan's own time is a lower bound; no speedup to claim.
            continue;
        }
        r.speedup = Some(speedup(b, p));
        r.lower_bound = b_timed_out || p < RESOLUTION_US;
    }
}

/// `baseline / plan`, with the plan clamped to the timer resolution.
pub fn speedup(baseline_us: u64, plan_us: u64) -> f64 {
    baseline_us as f64 / plan_us.max(RESOLUTION_US) as f64
}

/// Appends `ops` random leaves to a copy of each graph's index and records
/// how many existing nodes each codec had to relabel.
pub fn maintenance_rows(graphs: &BTreeMap<String, BenchGraph>, ops: usize, seed: u64) -> Vec<MaintenanceRow> {
    graphs
        .iter()
        .map(|(name, bg)| {
            let mut graph = bg.graph.clone();
            let mut index = bg.index.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut row = MaintenanceRow {
                graph: name.clone(),
                inserts: 0,
                prepost_relabeled: 0,
                dewey_relabeled: 0,
            };
            let mut members: Vec<NodeId> = index.forest().nodes().collect();
            let labels = bg.graph.nodes().next().map(|n| n.labels.clone()).unwrap_or_default();
            for _ in 0..ops {
                if members.is_empty() {
                    break;
                }
                let parent = members[rng.random_range(0..members.len())];
                let Ok(node) = graph.add_node(labels.clone(), Properties::new()) else {
                    break;
                };
                if let Ok(r) = index.insert_node(&graph, parent, Position::Last, node) {
                    row.inserts += 1;
                    row.prepost_relabeled += r.prepost_relabeled;
                    row.dewey_relabeled += r.dewey_relabeled;
                    members.push(node);
                }
            }
            row
        })
        .collect()
}

/// One CSV record of the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub graph: String,
    pub query: String,
    pub plan: String,
    pub median_ms: Option<f64>,
    pub min_ms: Option<f64>,
    pub max_ms: Option<f64>,
    pub result_count: Option<usize>,
    pub speedup: Option<f64>,
    pub lower_bound_flag: String,
}

pub const LOWER_BOUND_MARK: &str = "≥";

fn ms(us: Option<u64>) -> Option<f64> {
    us.map(|u| u as f64 / 1000.0)
}

impl From<&BenchRow> for CsvRow {
    fn from(r: &BenchRow) -> CsvRow {
        CsvRow {
            graph: r.graph.clone(),
            query: r.query.to_string(),
            plan: r.plan.to_string(),
            median_ms: ms(r.median_us),
            min_ms: ms(r.min_us),
            max_ms: ms(r.max_us),
            result_count: r.result_count,
            speedup: r.speedup,
            lower_bound_flag: if r.lower_bound {
                LOWER_BOUND_MARK.into()
            } else {
                String::new()
            },
        }
    }
}

pub fn emit_report(r: &BenchReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => emit_csv(r),
        ReportFormat::Table => emit_table(r),
    }
}

fn emit_csv(r: &BenchReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    // serde skips the header when there are no records.
    w.write_record([
        "graph",
        "query",
        "plan",
        "median_ms",
        "min_ms",
        "max_ms",
        "result_count",
        "speedup",
        "lower_bound_flag",
    ])
    .expect("in-memory write");
    for row in &r.rows {
        let c = CsvRow::from(row);
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        w.write_record([
            c.graph,
            c.query,
            c.plan,
            opt(c.median_ms),
            opt(c.min_ms),
            opt(c.max_ms),
            c.result_count.map(|n| n.to_string()).unwrap_or_default(),
            opt(c.speedup),
            c.lower_bound_flag,
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn read_report_csv(text: &str) -> Result<Vec<CsvRow>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

fn emit_table(r: &BenchReport) -> String {
    let header = [
        "graph",
        "query",
        "plan",
        "median ms",
        "min ms",
        "max ms",
        "results",
        "speedup",
        "note",
    ];
    let cells: Vec<[String; 9]> = r
        .rows
        .iter()
        .map(|row| {
            let f = |v: Option<u64>| ms(v).map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
            let speedup = match row.speedup {
                Some(s) if row.lower_bound => format!("{LOWER_BOUND_MARK}{s:.1}x"),
                Some(s) => format!("{s:.1}x"),
                None => "-".into(),
            };
            let note = match (&row.error, row.timed_out) {
                (Some(e), _) => e.clone(),
                (None, true) => "timed out".into(),
                _ => String::new(),
            };
            [
                row.graph.clone(),
                row.query.to_string(),
                row.plan.to_string(),
                f(row.median_us),
                f(row.min_us),
                f(row.max_us),
                row.result_count.map(|n| n.to_string()).unwrap_or_else(|| "-".into()),
                speedup,
                note,
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cols: &[String]| {
        let padded: Vec<String> = cols.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(&header.map(String::from));
    for row in &cells {
        line(row);
    }
    if !r.maintenance.is_empty() {
        let _ = writeln!(
            out,
            "\nmaintenance (leaf appends): graph, inserts, prepost relabels, dewey relabels"
        );
        for m in &r.maintenance {
            let _ = writeln!(
                out,
                "{}  {}  {}  {}",
                m.graph, m.inserts, m.prepost_relabeled, m.dewey_relabeled
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_suite(timeout: Duration) -> BenchReport {
        let config = BenchConfig {
            graphs: vec!["WT1".into()],
            timeout_secs: timeout.as_secs_f64(),
            repetitions: 3,
            ..BenchConfig::default()
        };
        let graphs = config.load_graphs().unwrap();
        run_suite(&config.cases().unwrap(), &graphs, PlanKind::BaselineJoin)
    }

    #[test]
    fn wt1_descendants_agree() {
        let report = tiny_suite(DEFAULT_TIMEOUT);
        assert_eq!(report.rows.len(), 16);
        let desc: Vec<_> = report.rows.iter().filter(|r| r.query == QueryKind::Desc).collect();
        assert_eq!(desc.len(), 4);
        assert!(desc.iter().all(|r| r.result_count == Some(99)));
        let base = desc.iter().find(|r| r.plan == PlanKind::BaselineJoin).unwrap();
        assert_eq!(base.speedup, Some(1.0));
    }

    #[test]
    fn timeouts_give_lower_bounds() {
        let report = tiny_suite(Duration::ZERO);
        for r in &report.rows {
            if r.plan.is_baseline() {
                assert!(r.timed_out, "{r:?}");
            } else {
                assert!(r.lower_bound && r.speedup.is_some(), "{r:?}");
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let empty = emit_report(&BenchReport::default(), ReportFormat::Csv);
        assert_eq!(
            empty,
            "graph,query,plan,median_ms,min_ms,max_ms,result_count,speedup,lower_bound_flag\n"
        );
        let row = BenchRow {
            graph: "WT1".into(),
            query: QueryKind::Leaf,
            plan: PlanKind::IndexDewey,
            median_us: Some(1234),
            min_us: Some(1000),
            max_us: Some(2000),
            result_count: Some(80),
            timed_out: false,
            speedup: Some(12.5),
            lower_bound: true,
            error: None,
        };
        let report = BenchReport {
            rows: vec![row.clone()],
            ..BenchReport::default()
        };
        let parsed = read_report_csv(&emit_report(&report, ReportFormat::Csv)).unwrap();
        assert_eq!(parsed, vec![CsvRow::from(&row)]);
        assert_eq!(parsed[0].median_ms, Some(1.234));
        assert!(emit_report(&report, ReportFormat::Table).contains("≥12.5x"));
    }

    #[test]
    fn config_parsing() {
        let c = BenchConfig::from_toml(
            r#"
            graphs = ["TF"]
            queries = ["ad"]
            plans = ["index_dewey"]
            repetitions = 1
            start = { key = 3 }
            "#,
        )
        .unwrap();
        assert_eq!(c.start, StartRule::Key(3));
        assert_eq!(c.cases().unwrap().len(), 1);
        let even = BenchConfig {
            repetitions: 4,
            ..BenchConfig::default()
        };
        assert!(matches!(even.cases(), Err(BenchError::Invalid(_))));
        assert!(BenchConfig::from_toml("graphz = []").is_err());
        assert!(matches!(
            BenchConfig::from_toml("graphs = [\"XX\"]").unwrap().load_graphs(),
            Err(BenchError::UnknownPreset(_))
        ));
    }

    #[test]
    fn speedup_clamps_zero() {
        assert_eq!(speedup(500, 0), 500.0);
        assert_eq!(speedup(500, 250), 2.0);
    }

    #[test]
    fn maintenance_counts() {
        let config = BenchConfig {
            graphs: vec!["TF".into()],
            ..BenchConfig::default()
        };
        let rows = maintenance_rows(&config.load_graphs().unwrap(), 10, 1);
        assert_eq!(rows[0].inserts, 10);
    }
}
