use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::{Duration, Instant};

use super::ast::{EdgeDirection, NodePattern, PathLength, PatternQuery};
use crate::forest::Orientation;
use crate::graph::{EdgeId, LabelId, NodeId, PropertyGraph, KEY_PROPERTY};
use crate::index::{Codec, StructuralIndex};
use crate::query::{PlanKind, QueryError};

/// Which way the matched end lies from the anchor inside the tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Descendant,
    Ancestor,
}

#[derive(Clone, Debug, PartialEq)]
enum Step {
    Baseline,
    Index {
        entry: usize,
        codec: Codec,
        relation: Relation,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewrittenPlan {
    pub query: PatternQuery,
    pub plan: PlanKind,
    /// Conditions replacing the path pattern, in the query's variables.
    pub predicates: Vec<String>,
    pub note: String,
    step: Step,
}

impl RewrittenPlan {
    pub fn relation(&self) -> Option<Relation> {
        match self.step {
            Step::Index { relation, .. } => Some(relation),
            Step::Baseline => None,
        }
    }
}

struct Registered<'a> {
    name: String,
    index: &'a StructuralIndex,
    label: Option<String>,
    /// Every edge carrying the spec's label stays inside the scope.
    closed: bool,
}

/// Tree specs (through their indexes) that rewriting may use.
pub struct Catalog<'a> {
    graph: &'a PropertyGraph,
    entries: Vec<Registered<'a>>,
    /// The graph's only live edge label, if it has exactly one.
    sole_label: Option<String>,
}

impl<'a> Catalog<'a> {
    pub fn new(graph: &'a PropertyGraph) -> Catalog<'a> {
        let labels: BTreeSet<&str> = graph.edges().map(|e| e.label.as_str()).collect();
        let sole_label = match labels.len() {
            1 => labels.into_iter().next().map(str::to_owned),
            _ => None,
        };
        Catalog {
            graph,
            entries: Vec::new(),
            sole_label,
        }
    }

    /// `index` must have been built over `graph`'s current state.
    pub fn register(&mut self, name: impl Into<String>, index: &'a StructuralIndex) {
        let spec = index.forest().spec();
        let label = (spec.edge_labels.len() == 1)
            .then(|| spec.edge_labels.iter().next().cloned())
            .flatten();
        let closed = self
            .graph
            .edges()
            .filter(|e| spec.edge_labels.contains(&e.label))
            .all(|e| {
                let inside = |n: NodeId| self.graph.node(n).map(|n| spec.scope.contains(n)).unwrap_or(false);
                inside(e.src) && inside(e.dst)
            });
        self.entries.push(Registered {
            name: name.into(),
            index,
            label,
            closed,
        });
    }

    pub fn graph(&self) -> &'a PropertyGraph {
        self.graph
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn lookup(&self, label: Option<&str>) -> Option<usize> {
        let wanted = match label {
            Some(l) => l,
            None => self.sole_label.as_deref()?,
        };
        self.entries
            .iter()
            .position(|e| e.closed && e.label.as_deref() == Some(wanted))
    }
}

/// The plan that walks the graph as written.
pub fn baseline_plan(q: &PatternQuery, note: impl Into<String>) -> RewrittenPlan {
    RewrittenPlan {
        query: q.clone(),
        plan: PlanKind::BaselineTraversal,
        predicates: Vec::new(),
        note: note.into(),
        step: Step::Baseline,
    }
}

/// [`rewrite_with`] using the PrePost codec.
pub fn rewrite(q: &PatternQuery, catalog: &Catalog<'_>) -> RewrittenPlan {
    rewrite_with(q, catalog, Codec::PrePost)
}

/// Replaces a variable-length path over a registered tree spec with index
/// predicates; anything else falls back to a baseline plan with a note.
pub fn rewrite_with(q: &PatternQuery, catalog: &Catalog<'_>, codec: Codec) -> RewrittenPlan {
    let (min, max) = match q.edge.length {
        PathLength::One => return baseline_plan(q, "single-hop pattern; adjacency lookup is already direct"),
        PathLength::Range { min, max } => (min, max),
    };
    if q.edge.direction == EdgeDirection::Undirected {
        return baseline_plan(q, "undirected pattern crosses tree direction");
    }
    if catalog.is_empty() {
        return baseline_plan(q, "no index registered");
    }
    let Some(entry) = catalog.lookup(q.edge.label.as_deref()) else {
        let note = match &q.edge.label {
            Some(l) => format!("no index covers edge label {l}"),
            None => "unlabeled edge does not pin down a single tree spec; no index".to_owned(),
        };
        return baseline_plan(q, note);
    };
    let registered = &catalog.entries[entry];
    // Following edges forward climbs when edges point child to parent.
    let forward_climbs = registered.index.forest().spec().orientation == Orientation::ChildToParent;
    let relation = match (q.edge.direction == EdgeDirection::Right, forward_climbs) {
        (true, true) | (false, false) => Relation::Ancestor,
        _ => Relation::Descendant,
    };
    let (n, m) = (&q.left.var, &q.right.var);
    let (upper, lower) = match relation {
        Relation::Descendant => (n, m),
        Relation::Ancestor => (m, n),
    };
    let ancestry = match codec {
        Codec::PrePost => format!("{upper}.pre < {lower}.pre AND {lower}.pre < {upper}.post"),
        Codec::Dewey => format!("{lower}.dewey STARTS WITH {upper}.dewey + '.'"),
    };
    let mut predicates = vec![if min == 0 {
        format!("({n} = {m} OR {ancestry})")
    } else {
        ancestry
    }];
    match max {
        Some(max) if max == min => predicates.push(format!("{upper}.lvl + {min} = {lower}.lvl")),
        Some(max) => {
            if min > 1 {
                predicates.push(format!("{lower}.lvl >= {upper}.lvl + {min}"));
            }
            predicates.push(format!("{lower}.lvl <= {upper}.lvl + {max}"));
        }
        None if min > 1 => predicates.push(format!("{lower}.lvl >= {upper}.lvl + {min}")),
        None => {}
    }
    RewrittenPlan {
        query: q.clone(),
        plan: match codec {
            Codec::PrePost => PlanKind::IndexPrePost,
            Codec::Dewey => PlanKind::IndexDewey,
        },
        predicates,
        note: format!("uses index `{}`", registered.name),
        step: Step::Index { entry, codec, relation },
    }
}

/// Answer rows, one per distinct binding of the returned variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternResult {
    pub columns: Vec<String>,
    pub rows: BTreeSet<Vec<NodeId>>,
    pub plan: PlanKind,
    pub elapsed: Duration,
}

pub fn execute(plan: &RewrittenPlan, catalog: &Catalog<'_>) -> Result<PatternResult, QueryError> {
    let g = catalog.graph;
    let q = &plan.query;
    // Anchor on whichever side is pinned by a key predicate; the other
    // side is reached through the path.
    let swap = !keyed(q, &q.left.var) && keyed(q, &q.right.var);
    let (anchor, other, direction) = if swap {
        (&q.right, &q.left, q.edge.direction.reversed())
    } else {
        (&q.left, &q.right, q.edge.direction)
    };
    let step = match &plan.step {
        Step::Index { entry, codec, relation } => {
            let r = catalog.entries.get(*entry).ok_or(QueryError::NoIndex(plan.plan))?;
            let relation = match (swap, relation) {
                (false, r) => *r,
                (true, Relation::Ancestor) => Relation::Descendant,
                (true, Relation::Descendant) => Relation::Ancestor,
            };
            Some((r.index, *codec, relation))
        }
        Step::Baseline => None,
    };
    let start = Instant::now();
    let (min, max) = q.edge.length.bounds();
    let labels: Vec<LabelId> = match &q.edge.label {
        Some(l) => g.label_id(l).into_iter().collect(),
        None => (0..g.edge_labels().len() as u32).map(LabelId).collect(),
    };
    let mut rows = BTreeSet::new();
    for a in candidates(g, q, anchor) {
        let ends = match step {
            None => walk_endpoints(g, a, &labels, direction, min, max),
            Some((index, codec, relation)) => index_endpoints(index, codec, relation, a, min, max)?,
        };
        for b in ends {
            if matches(g, q, other, b) {
                let bind = |v: &String| if *v == anchor.var { a } else { b };
                rows.insert(q.returns.iter().map(bind).collect());
            }
        }
    }
    Ok(PatternResult {
        columns: q.returns.clone(),
        rows,
        plan: plan.plan,
        elapsed: start.elapsed(),
    })
}

fn keyed(q: &PatternQuery, var: &str) -> bool {
    q.predicates_on(var).any(|p| p.property == KEY_PROPERTY)
}

fn matches(g: &PropertyGraph, q: &PatternQuery, pat: &NodePattern, n: NodeId) -> bool {
    let Ok(node) = g.node(n) else { return false };
    pat.label.as_ref().is_none_or(|l| node.has_label(l))
        && q.predicates_on(&pat.var)
            .all(|p| node.properties.get(&p.property) == Some(&p.value))
}

fn candidates(g: &PropertyGraph, q: &PatternQuery, pat: &NodePattern) -> Vec<NodeId> {
    match q.predicates_on(&pat.var).find(|p| p.property == KEY_PROPERTY) {
        Some(p) => g
            .node_by_key(&p.value)
            .into_iter()
            .filter(|n| matches(g, q, pat, *n))
            .collect(),
        None => g.node_ids().filter(|n| matches(g, q, pat, *n)).collect(),
    }
}

fn index_endpoints(
    index: &StructuralIndex,
    codec: Codec,
    relation: Relation,
    a: NodeId,
    min: u32,
    max: Option<u32>,
) -> Result<Vec<NodeId>, QueryError> {
    let mut out = Vec::new();
    if min == 0 {
        out.push(a);
    }
    // Outside the scope of a closed spec a node has no tree edges at all.
    let Some(base) = index.prepost(a) else { return Ok(out) };
    let related = match relation {
        Relation::Descendant => index.descendants(a, codec)?,
        Relation::Ancestor => index.ancestors(a, codec)?,
    };
    let level = |n: NodeId| match codec {
        Codec::PrePost => index.prepost(n).map(|e| e.lvl),
        Codec::Dewey => index.dewey(n).map(|d| d.level() as u32),
    };
    for n in related {
        let lvl = level(n).expect("indexed");
        let hops = base.lvl.abs_diff(lvl);
        if hops >= min.max(1) && max.is_none_or(|m| hops <= m) {
            out.push(n);
        }
    }
    Ok(out)
}

/// End points of walks from `from` whose length lies in `[min, max]`.
/// Undirected walks never immediately re-cross the edge they came over, so
/// in a tree they are exactly the simple paths.
pub fn walk_endpoints(
    g: &PropertyGraph,
    from: NodeId,
    labels: &[LabelId],
    direction: EdgeDirection,
    min: u32,
    max: Option<u32>,
) -> Vec<NodeId> {
    // Unbounded walks only need to count up to `min`.
    let cap = max.unwrap_or(min);
    let mut out = Vec::new();
    let mut emitted = HashSet::new();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([(from, 0u32, None::<EdgeId>)]);
    seen.insert((from, 0, None));
    while let Some((n, d, via)) = queue.pop_front() {
        if d >= min && emitted.insert(n) {
            out.push(n);
        }
        if max.is_some_and(|m| d >= m) {
            continue;
        }
        let next_d = if max.is_some() { d + 1 } else { (d + 1).min(cap) };
        for l in labels {
            let forward = matches!(direction, EdgeDirection::Right | EdgeDirection::Undirected);
            let backward = matches!(direction, EdgeDirection::Left | EdgeDirection::Undirected);
            let outs = if forward { g.out_edges(n, *l) } else { &[] };
            let ins = if backward { g.in_edges(n, *l) } else { &[] };
            for (e, take_dst) in outs.iter().map(|e| (e, true)).chain(ins.iter().map(|e| (e, false))) {
                if direction == EdgeDirection::Undirected && via == Some(*e) {
                    continue;
                }
                let (s, t) = g.endpoints(*e);
                let next = if take_dst { t } else { s };
                let via = (direction == EdgeDirection::Undirected).then_some(*e);
                if seen.insert((next, next_d, via)) {
                    queue.push_back((next, next_d, via));
                }
            }
        }
    }
    out
}
