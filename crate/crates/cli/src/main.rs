//! `sylva` command-line front end.
//!
//! Exit codes: 0 success, 1 user error (bad flags, bad input, invalid data),
//! 2 internal error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sylva::bench::{self, BenchConfig, ReportFormat};
use sylva::datagen::{self, GenConfig, Shape};
use sylva::forest::{forest_stats, verify_forest, TreeSpec, Violation};
use sylva::graph::PropertyGraph;
use sylva::index::{build_index, Codec};
use sylva::pattern::{self, Catalog};
use sylva::query::PlanKind;
use sylva::schema::{find_sequence_hints, find_tree_candidates, infer_schema};

#[derive(Parser)]
#[command(
    name = "sylva",
    version,
    about = "Structural indexes for tree-shaped parts of property graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic tree or forest (nodes.csv, edges.csv, spec.toml).
    Gen(GenArgs),
    /// Print size, depth and fanout statistics of a verified forest.
    Stats(GraphSpec),
    /// Infer the schema and propose tree specs.
    Schema {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Build the structural index and export it as CSV.
    Index {
        #[command(flatten)]
        input: GraphSpec,
        #[arg(long, default_value = "prepost")]
        codec: CodecArg,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a tree spec's edges form a forest.
    Verify(GraphSpec),
    /// Parse, rewrite and run one pattern query.
    Query {
        #[arg(long)]
        graph: PathBuf,
        /// Tree spec to index; defaults to GRAPH/spec.toml when present.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value = "prepost")]
        codec: CodecArg,
        /// Skip rewriting and walk the graph.
        #[arg(long)]
        baseline: bool,
        text: String,
    },
    /// Run a benchmark suite.
    Bench {
        /// TOML suite description.
        #[arg(long, conflicts_with = "presets")]
        config: Option<PathBuf>,
        /// All presets, all queries, all plans.
        #[arg(long)]
        presets: bool,
        #[arg(long, default_value = "table")]
        format: FormatArg,
        /// Override the per-query timeout.
        #[arg(long)]
        timeout_secs: Option<f64>,
        #[arg(long)]
        repetitions: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GraphSpec {
    #[arg(long)]
    graph: PathBuf,
    /// Defaults to GRAPH/spec.toml.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// WT1, WT2, WT3, DT or TF.
    #[arg(long, conflicts_with = "shape")]
    preset: Option<String>,
    #[arg(long, value_enum)]
    shape: Option<ShapeArg>,
    #[arg(long, default_value_t = 100)]
    nodes: usize,
    #[arg(long, default_value_t = 1)]
    fanout_min: usize,
    #[arg(long, default_value_t = 3)]
    fanout_max: usize,
    #[arg(long, default_value_t = 1)]
    trees: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Wide,
    Deep,
    Forest,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodecArg {
    Prepost,
    Dewey,
}

impl From<CodecArg> for Codec {
    fn from(c: CodecArg) -> Codec {
        match c {
            CodecArg::Prepost => Codec::PrePost,
            CodecArg::Dewey => Codec::Dewey,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Table,
}

/// Errors split by who has to fix them.
enum Failure {
    User(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::User(e)
    }
}

type Outcome = Result<(), Failure>;

fn internal<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Internal(e.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::User(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Gen(args) => gen(args),
        Command::Stats(input) => {
            let (g, spec) = load(&input.graph, input.spec.as_deref())?;
            let forest = verified(&g, &spec)?;
            emit(&format!("{}\n", forest_stats(&forest)))
        }
        Command::Schema { graph } => {
            let g = load_graph(&graph)?;
            let schema = infer_schema(&g);
            let mut out = format!("{schema}\n");
            for h in find_sequence_hints(&schema) {
                let types: Vec<String> = h.node_types.iter().map(ToString::to_string).collect();
                out.push_str(&format!("sequence hint: {} on {}\n", h.label, types.join(", ")));
            }
            for (i, c) in find_tree_candidates(&schema).iter().enumerate() {
                let status = if c.schema_sufficient {
                    "schema_sufficient"
                } else {
                    "needs_instance_check"
                };
                let spec = c.spec.to_toml().map_err(internal)?;
                out.push_str(&format!("\n# candidate {} ({status})\n{spec}", i + 1));
            }
            emit(&out)
        }
        Command::Index { input, codec, out } => {
            let (g, spec) = load(&input.graph, input.spec.as_deref())?;
            let index = build_index(verified(&g, &spec)?);
            let mut buf = Vec::new();
            index.export_csv(&g, &mut buf).map_err(internal)?;
            let (pp, dw) = index.storage_bytes();
            let bytes = match Codec::from(codec) {
                Codec::PrePost => pp,
                Codec::Dewey => dw,
            };
            eprintln!(
                "indexed {} nodes in {} trees; {} codec uses {bytes} bytes",
                index.len(),
                index.forest().roots().len(),
                Codec::from(codec)
            );
            match out {
                Some(path) => fs::write(&path, buf).with_context(|| format!("writing {}", path.display()))?,
                None => io::stdout().write_all(&buf).map_err(internal)?,
            }
            Ok(())
        }
        Command::Verify(input) => {
            let (g, spec) = load(&input.graph, input.spec.as_deref())?;
            match verify_forest(&g, &spec) {
                Ok(f) => emit(&format!("ok: {} nodes in {} trees\n", f.len(), f.roots().len())),
                Err(v) => Err(anyhow!("{}", describe_violation(&g, &v)).into()),
            }
        }
        Command::Query {
            graph,
            spec,
            codec,
            baseline,
            text,
        } => query(&graph, spec.as_deref(), codec.into(), baseline, &text),
        Command::Bench {
            config,
            presets,
            format,
            timeout_secs,
            repetitions,
            out,
        } => {
            let mut config = match (config, presets) {
                (Some(path), _) => BenchConfig::load(&path).map_err(anyhow::Error::from)?,
                (None, true) => BenchConfig::all_presets(),
                (None, false) => return Err(anyhow!("pass --config FILE or --presets").into()),
            };
            if let Some(t) = timeout_secs {
                config.timeout_secs = t;
            }
            if let Some(r) = repetitions {
                config.repetitions = r;
            }
            let cases = config.cases().map_err(anyhow::Error::from)?;
            let baseline = config.baseline_plan().map_err(anyhow::Error::from)?;
            let graphs = config.load_graphs().map_err(anyhow::Error::from)?;
            let mut report = bench::run_suite(&cases, &graphs, baseline);
            if config.maintenance_ops > 0 {
                report.maintenance = bench::maintenance_rows(&graphs, config.maintenance_ops, config.seed);
            }
            let format = match format {
                FormatArg::Csv => ReportFormat::Csv,
                FormatArg::Table => ReportFormat::Table,
            };
            let text = bench::emit_report(&report, format);
            match out {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => emit(&text)?,
            }
            Ok(())
        }
    }
}

fn gen(args: GenArgs) -> Outcome {
    let mut config = match (&args.preset, args.shape) {
        (Some(name), _) => datagen::preset(name).ok_or_else(|| anyhow!("unknown preset `{name}`"))?,
        (None, Some(shape)) => {
            let shape = match shape {
                ShapeArg::Wide => Shape::Wide,
                ShapeArg::Deep => Shape::Deep,
                ShapeArg::Forest => Shape::Forest,
                ShapeArg::Random => Shape::Random,
            };
            GenConfig::new(shape, args.nodes, args.fanout_min, args.fanout_max).with_trees(args.trees)
        }
        (None, None) => return Err(anyhow!("pass --preset NAME or --shape SHAPE").into()),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let (g, spec) = datagen::generate(&config).map_err(anyhow::Error::from)?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    g.save_dir(&args.out)
        .with_context(|| format!("writing graph to {}", args.out.display()))?;
    spec.save(&args.out.join("spec.toml")).context("writing spec.toml")?;
    eprintln!(
        "wrote {} nodes and {} edges to {}",
        g.node_count(),
        g.edge_count(),
        args.out.display()
    );
    Ok(())
}

fn query(graph: &Path, spec: Option<&Path>, codec: Codec, baseline: bool, text: &str) -> Outcome {
    let g = load_graph(graph)?;
    let q = pattern::parse(text).map_err(|e| anyhow!("{e}\n  {text}\n  {}^", " ".repeat(e.position)))?;
    let spec_path = spec.map(Path::to_path_buf).or_else(|| {
        let default = graph.join("spec.toml");
        default.exists().then_some(default)
    });
    let index = match spec_path {
        Some(p) => {
            let spec = TreeSpec::load(&p).with_context(|| format!("reading {}", p.display()))?;
            Some(build_index(verified(&g, &spec)?))
        }
        None => None,
    };
    let mut catalog = Catalog::new(&g);
    if let Some(index) = &index {
        catalog.register("spec", index);
    }
    let plan = if baseline {
        pattern::baseline_plan(&q, "baseline requested")
    } else {
        pattern::rewrite_with(&q, &catalog, codec)
    };
    eprintln!("plan: {} ({})", plan.plan, plan.note);
    if plan.plan != PlanKind::BaselineTraversal {
        eprintln!("where: {}", plan.predicates.join(" AND "));
    }
    let result = pattern::execute(&plan, &catalog).map_err(internal)?;
    let mut out = format!("{}\n", result.columns.join(","));
    for row in &result.rows {
        let keys: Vec<String> = row.iter().map(|n| g.external_key(*n).to_string()).collect();
        out.push_str(&keys.join(","));
        out.push('\n');
    }
    emit(&out)?;
    eprintln!("{} rows in {:?}", result.rows.len(), result.elapsed);
    Ok(())
}

fn load_graph(dir: &Path) -> Result<PropertyGraph, Failure> {
    PropertyGraph::load_dir(dir)
        .with_context(|| format!("loading graph from {}", dir.display()))
        .map_err(Failure::User)
}

fn load(dir: &Path, spec: Option<&Path>) -> Result<(PropertyGraph, TreeSpec), Failure> {
    let g = load_graph(dir)?;
    let path = spec.map(Path::to_path_buf).unwrap_or_else(|| dir.join("spec.toml"));
    let spec = TreeSpec::load(&path).with_context(|| format!("reading tree spec {}", path.display()))?;
    spec.validate().map_err(anyhow::Error::from)?;
    Ok((g, spec))
}

fn verified(g: &PropertyGraph, spec: &TreeSpec) -> Result<sylva::Forest, Failure> {
    verify_forest(g, spec).map_err(|v| Failure::User(anyhow!("{}", describe_violation(g, &v))))
}

/// Violation text with node ids replaced by external keys.
fn describe_violation(g: &PropertyGraph, v: &Violation) -> String {
    let key = |n: &sylva::NodeId| g.external_key(*n).to_string();
    let detail = match v {
        Violation::Cycle { witness } => format!(
            "cycle through node_id {}",
            witness.iter().map(key).collect::<Vec<_>>().join(" -> ")
        ),
        Violation::MultiParent { node, parents } => format!(
            "node_id {} has parents {}",
            key(node),
            parents.iter().map(key).collect::<Vec<_>>().join(", ")
        ),
        Violation::MissingParent { node } => format!("node_id {} must have a parent", key(node)),
        other => other.to_string(),
    };
    format!("not a forest: {detail}")
}

fn emit(text: &str) -> Outcome {
    let mut stdout = io::stdout().lock();
    match stdout.write_all(text.as_bytes()).and_then(|()| stdout.flush()) {
        Ok(()) => Ok(()),
        // A closed pipe (`| head`) is not an error worth reporting.
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(internal(e)),
    }
}
