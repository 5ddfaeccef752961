//! Descendant, leaf, ancestor/descendant and children queries under four
//! plans.
//!
//! * `BaselineTraversal` walks adjacency lists, as a native graph store would.
//! * `BaselineJoin` never touches adjacency: each hop is one full scan of the
//!   spec's edge table joined against a hash-set frontier, the way a
//!   relational engine evaluates a recursive path.
//! * `IndexPrePost` / `IndexDewey` answer from a [`StructuralIndex`].
//!
//! Callers resolve start nodes to [`NodeId`]s first; the timer only covers
//! the query itself.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::forest::{Orientation, TreeSpec};
use crate::graph::{LabelId, NodeId, PropertyGraph};
use crate::index::{Codec, IndexError, StructuralIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlanKind {
    BaselineTraversal,
    BaselineJoin,
    IndexPrePost,
    IndexDewey,
}

impl PlanKind {
    pub const ALL: [PlanKind; 4] = [
        PlanKind::BaselineTraversal,
        PlanKind::BaselineJoin,
        PlanKind::IndexPrePost,
        PlanKind::IndexDewey,
    ];

    pub fn codec(self) -> Option<Codec> {
        match self {
            PlanKind::IndexPrePost => Some(Codec::PrePost),
            PlanKind::IndexDewey => Some(Codec::Dewey),
            _ => None,
        }
    }

    pub fn is_baseline(self) -> bool {
        self.codec().is_none()
    }
}

impl fmt::Display for PlanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlanKind::BaselineTraversal => "baseline_traversal",
            PlanKind::BaselineJoin => "baseline_join",
            PlanKind::IndexPrePost => "index_prepost",
            PlanKind::IndexDewey => "index_dewey",
        })
    }
}

impl FromStr for PlanKind {
    type Err = String;

    fn from_str(s: &str) -> Result<PlanKind, String> {
        PlanKind::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| format!("unknown plan `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QueryKind {
    Desc,
    Leaf,
    AncDesc,
    Children,
}

impl QueryKind {
    pub const ALL: [QueryKind; 4] = [
        QueryKind::Desc,
        QueryKind::Leaf,
        QueryKind::AncDesc,
        QueryKind::Children,
    ];
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryKind::Desc => "desc",
            QueryKind::Leaf => "leaf",
            QueryKind::AncDesc => "ad",
            QueryKind::Children => "children",
        })
    }
}

impl FromStr for QueryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<QueryKind, String> {
        QueryKind::ALL
            .into_iter()
            .find(|q| q.to_string() == s)
            .ok_or_else(|| format!("unknown query `{s}` (expected desc, leaf, ad or children)"))
    }
}

/// A query with its start node(s) already resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Query {
    Desc(NodeId),
    Leaf(NodeId),
    AncDesc(NodeId, NodeId),
    Children(NodeId),
}

impl Query {
    pub fn kind(&self) -> QueryKind {
        match self {
            Query::Desc(_) => QueryKind::Desc,
            Query::Leaf(_) => QueryKind::Leaf,
            Query::AncDesc(..) => QueryKind::AncDesc,
            Query::Children(_) => QueryKind::Children,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryOutput {
    Nodes(Vec<NodeId>),
    Bool(bool),
}

#[derive(Clone, Debug)]
pub struct QueryResult {
    pub output: QueryOutput,
    pub plan: PlanKind,
    pub elapsed: Duration,
    /// Expansion rounds: BFS levels for traversal, edge-table passes for
    /// the join plan, 0 for index plans.
    pub hops: usize,
}

impl QueryResult {
    pub fn nodes(&self) -> Option<&[NodeId]> {
        match &self.output {
            QueryOutput::Nodes(v) => Some(v),
            QueryOutput::Bool(_) => None,
        }
    }

    pub fn node_set(&self) -> BTreeSet<NodeId> {
        self.nodes().unwrap_or(&[]).iter().copied().collect()
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self.output {
            QueryOutput::Bool(b) => Some(b),
            QueryOutput::Nodes(_) => None,
        }
    }

    /// Node count, or 0/1 for a boolean answer.
    pub fn cardinality(&self) -> usize {
        match &self.output {
            QueryOutput::Nodes(v) => v.len(),
            QueryOutput::Bool(b) => usize::from(*b),
        }
    }

    /// Order-insensitive comparison of two answers.
    pub fn same_answer(&self, other: &QueryResult) -> bool {
        match (&self.output, &other.output) {
            (QueryOutput::Bool(a), QueryOutput::Bool(b)) => a == b,
            (QueryOutput::Nodes(_), QueryOutput::Nodes(_)) => self.node_set() == other.node_set(),
            _ => false,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("node {0} is outside the tree spec's scope")]
    NotInScope(NodeId),
    #[error("plan {0} needs a structural index")]
    NoIndex(PlanKind),
    #[error("index was built for a different tree spec")]
    SpecMismatch,
    #[error("query timed out after {0:?}")]
    TimedOut(Duration),
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// Query executor over one graph and one tree spec.
pub struct QueryEngine<'a> {
    graph: &'a PropertyGraph,
    spec: TreeSpec,
    labels: Vec<LabelId>,
    in_scope: Vec<bool>,
    /// `(parent, child)` for every spec edge with both ends in scope.
    edge_table: Vec<(NodeId, NodeId)>,
    index: Option<&'a StructuralIndex>,
    timeout: Option<Duration>,
}

struct Clock {
    start: Instant,
    timeout: Option<Duration>,
}

impl Clock {
    fn check(&self) -> Result<(), QueryError> {
        match self.timeout {
            Some(t) if self.start.elapsed() >= t => Err(QueryError::TimedOut(self.start.elapsed())),
            _ => Ok(()),
        }
    }
}

impl<'a> QueryEngine<'a> {
    pub fn new(graph: &'a PropertyGraph, spec: TreeSpec) -> QueryEngine<'a> {
        let labels: Vec<LabelId> = spec.edge_labels.iter().filter_map(|l| graph.label_id(l)).collect();
        let in_scope: Vec<bool> = graph.nodes().map(|n| spec.scope.contains(n)).collect();
        let edge_table = graph
            .edges()
            .filter(|e| spec.edge_labels.contains(&e.label))
            .filter(|e| in_scope[e.src.index()] && in_scope[e.dst.index()])
            .map(|e| {
                let (child, parent) = spec.orientation.child_parent(e.src, e.dst);
                (parent, child)
            })
            .collect();
        QueryEngine {
            graph,
            spec,
            labels,
            in_scope,
            edge_table,
            index: None,
            timeout: None,
        }
    }

    pub fn with_index(mut self, index: &'a StructuralIndex) -> Result<QueryEngine<'a>, QueryError> {
        if index.forest().spec() != &self.spec {
            return Err(QueryError::SpecMismatch);
        }
        self.index = Some(index);
        Ok(self)
    }

    /// Baselines give up with [`QueryError::TimedOut`] past this budget.
    pub fn with_timeout(mut self, timeout: Duration) -> QueryEngine<'a> {
        self.timeout = Some(timeout);
        self
    }

    pub fn set_timeout(&mut self, timeout: Option<Duration>) {
        self.timeout = timeout;
    }

    pub fn spec(&self) -> &TreeSpec {
        &self.spec
    }

    pub fn graph(&self) -> &'a PropertyGraph {
        self.graph
    }

    pub fn index(&self) -> Option<&'a StructuralIndex> {
        self.index
    }

    pub fn in_scope(&self, n: NodeId) -> bool {
        self.in_scope.get(n.index()).copied().unwrap_or(false)
    }

    pub fn edge_table_len(&self) -> usize {
        self.edge_table.len()
    }

    pub fn q_desc(&self, start: NodeId, plan: PlanKind) -> Result<QueryResult, QueryError> {
        self.run(Query::Desc(start), plan)
    }

    pub fn q_leaf(&self, start: NodeId, plan: PlanKind) -> Result<QueryResult, QueryError> {
        self.run(Query::Leaf(start), plan)
    }

    /// Symmetric: true if either node is a strict ancestor of the other.
    pub fn q_anc_desc(&self, a: NodeId, b: NodeId, plan: PlanKind) -> Result<QueryResult, QueryError> {
        self.run(Query::AncDesc(a, b), plan)
    }

    pub fn q_children(&self, start: NodeId, plan: PlanKind) -> Result<QueryResult, QueryError> {
        self.run(Query::Children(start), plan)
    }

    pub fn run(&self, query: Query, plan: PlanKind) -> Result<QueryResult, QueryError> {
        let starts = match query {
            Query::AncDesc(a, b) => [a, b],
            Query::Desc(n) | Query::Leaf(n) | Query::Children(n) => [n, n],
        };
        if let Some(n) = starts.into_iter().find(|n| !self.in_scope(*n)) {
            return Err(QueryError::NotInScope(n));
        }
        let index = match plan.codec() {
            Some(_) => Some(self.index.ok_or(QueryError::NoIndex(plan))?),
            None => None,
        };
        let clock = Clock {
            start: Instant::now(),
            timeout: self.timeout,
        };
        let mut hops = 0;
        let output = match (plan, index) {
            (PlanKind::BaselineTraversal, _) => self.traversal(query, &clock, &mut hops)?,
            (PlanKind::BaselineJoin, _) => self.join(query, &clock, &mut hops)?,
            (_, Some(index)) => {
                let codec = plan.codec().expect("index plan");
                match query {
                    Query::Desc(n) => QueryOutput::Nodes(index.descendants(n, codec)?),
                    Query::Leaf(n) => QueryOutput::Nodes(index.leaves_under(n, codec)?),
                    Query::Children(n) => QueryOutput::Nodes(index.children(n, codec)?),
                    Query::AncDesc(a, b) => {
                        QueryOutput::Bool(index.is_ancestor(a, b, codec)? || index.is_ancestor(b, a, codec)?)
                    }
                }
            }
            (_, None) => unreachable!("index presence checked above"),
        };
        Ok(QueryResult {
            output,
            plan,
            elapsed: clock.start.elapsed(),
            hops,
        })
    }

    // ---- adjacency baseline ----

    fn adjacent_children(&self, n: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.labels
            .iter()
            .flat_map(move |l| {
                let (edges, take_src) = match self.spec.orientation {
                    Orientation::ChildToParent => (self.graph.in_edges(n, *l), true),
                    Orientation::ParentToChild => (self.graph.out_edges(n, *l), false),
                };
                edges.iter().map(move |e| {
                    let (s, d) = self.graph.endpoints(*e);
                    if take_src {
                        s
                    } else {
                        d
                    }
                })
            })
            .filter(|c| self.in_scope(*c))
    }

    fn adjacent_parent(&self, n: NodeId) -> Option<NodeId> {
        self.labels
            .iter()
            .flat_map(|l| {
                let (edges, take_src) = match self.spec.orientation {
                    Orientation::ChildToParent => (self.graph.out_edges(n, *l), false),
                    Orientation::ParentToChild => (self.graph.in_edges(n, *l), true),
                };
                edges.iter().map(move |e| {
                    let (s, d) = self.graph.endpoints(*e);
                    if take_src {
                        s
                    } else {
                        d
                    }
                })
            })
            .find(|p| self.in_scope(*p))
    }

    fn traversal(&self, query: Query, clock: &Clock, hops: &mut usize) -> Result<QueryOutput, QueryError> {
        clock.check()?;
        match query {
            Query::Desc(n) | Query::Leaf(n) => {
                let leaves_only = matches!(query, Query::Leaf(_));
                let mut out = Vec::new();
                let mut seen = HashSet::from([n]);
                let mut queue = VecDeque::from([(n, 0usize)]);
                while let Some((x, depth)) = queue.pop_front() {
                    *hops = (*hops).max(depth + 1);
                    if out.len() % 1024 == 0 {
                        clock.check()?;
                    }
                    let mut has_child = false;
                    for c in self.adjacent_children(x) {
                        has_child = true;
                        if seen.insert(c) {
                            queue.push_back((c, depth + 1));
                        }
                    }
                    if x != n && (!leaves_only || !has_child) {
                        out.push(x);
                    }
                }
                Ok(QueryOutput::Nodes(out))
            }
            Query::Children(n) => {
                *hops = 1;
                let mut seen = HashSet::new();
                Ok(QueryOutput::Nodes(
                    self.adjacent_children(n).filter(|c| seen.insert(*c)).collect(),
                ))
            }
            Query::AncDesc(a, b) => {
                let found = self.walk_up(b, a, clock, hops, |x| self.adjacent_parent(x))?
                    || self.walk_up(a, b, clock, hops, |x| self.adjacent_parent(x))?;
                Ok(QueryOutput::Bool(found))
            }
        }
    }

    /// Follows parents from `from`; true when `target` is met strictly above.
    fn walk_up(
        &self,
        from: NodeId,
        target: NodeId,
        clock: &Clock,
        hops: &mut usize,
        parent: impl Fn(NodeId) -> Option<NodeId>,
    ) -> Result<bool, QueryError> {
        let mut seen = HashSet::from([from]);
        let mut x = from;
        loop {
            clock.check()?;
            *hops += 1;
            match parent(x) {
                Some(p) if p == target => return Ok(true),
                Some(p) if seen.insert(p) => x = p,
                _ => return Ok(false),
            }
        }
    }

    // ---- edge-table join baseline ----

    fn join(&self, query: Query, clock: &Clock, hops: &mut usize) -> Result<QueryOutput, QueryError> {
        clock.check()?;
        match query {
            Query::Desc(n) | Query::Leaf(n) => {
                let leaves_only = matches!(query, Query::Leaf(_));
                let mut out = Vec::new();
                let mut seen = HashSet::from([n]);
                let mut frontier = HashSet::from([n]);
                while !frontier.is_empty() {
                    clock.check()?;
                    *hops += 1;
                    let mut next = HashSet::new();
                    let mut expanded = HashSet::new();
                    for (p, c) in &self.edge_table {
                        if frontier.contains(p) {
                            expanded.insert(*p);
                            if seen.insert(*c) {
                                next.insert(*c);
                                if !leaves_only {
                                    out.push(*c);
                                }
                            }
                        }
                    }
                    if leaves_only {
                        out.extend(frontier.iter().filter(|x| **x != n && !expanded.contains(*x)));
                    }
                    frontier = next;
                }
                Ok(QueryOutput::Nodes(out))
            }
            Query::Children(n) => {
                *hops = 1;
                let mut seen = HashSet::new();
                Ok(QueryOutput::Nodes(
                    self.edge_table
                        .iter()
                        .filter(|(p, c)| *p == n && seen.insert(*c))
                        .map(|(_, c)| *c)
                        .collect(),
                ))
            }
            Query::AncDesc(a, b) => {
                let parent = |x: NodeId| self.edge_table.iter().find(|(_, c)| *c == x).map(|(p, _)| *p);
                let found = self.walk_up(b, a, clock, hops, parent)? || self.walk_up(a, b, clock, hops, parent)?;
                Ok(QueryOutput::Bool(found))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, by_name};
    use crate::forest::verify_forest;
    use crate::index::build_index;

    fn names(g: &PropertyGraph, r: &QueryResult) -> BTreeSet<String> {
        r.node_set()
            .into_iter()
            .map(|n| g.node(n).unwrap().properties["name"].to_string())
            .collect()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tagclass_queries_under_every_plan() {
        for (g, spec) in [fixtures::tagclass(), fixtures::tagclass_downward()] {
            let idx = build_index(verify_forest(&g, &spec).unwrap());
            let engine = QueryEngine::new(&g, spec).with_index(&idx).unwrap();
            let [thing, place, agent, person] = ["Thing", "Place", "Agent", "Person"].map(|n| by_name(&g, n));
            for plan in PlanKind::ALL {
                let desc = engine.q_desc(thing, plan).unwrap();
                assert_eq!(
                    names(&g, &desc),
                    set(&["Place", "Agent", "Organisation", "Person"]),
                    "{plan}"
                );
                assert!(engine.q_desc(person, plan).unwrap().node_set().is_empty());
                assert_eq!(
                    names(&g, &engine.q_leaf(thing, plan).unwrap()),
                    set(&["Place", "Organisation", "Person"])
                );
                assert!(engine.q_leaf(place, plan).unwrap().node_set().is_empty());
                assert_eq!(
                    names(&g, &engine.q_children(thing, plan).unwrap()),
                    set(&["Place", "Agent"])
                );
                assert!(engine.q_children(person, plan).unwrap().node_set().is_empty());
                assert_eq!(engine.q_anc_desc(person, agent, plan).unwrap().as_bool(), Some(true));
                assert_eq!(engine.q_anc_desc(agent, person, plan).unwrap().as_bool(), Some(true));
                assert_eq!(engine.q_anc_desc(place, person, plan).unwrap().as_bool(), Some(false));
                assert_eq!(engine.q_anc_desc(agent, agent, plan).unwrap().as_bool(), Some(false));
            }
        }
    }

    #[test]
    fn join_passes_track_subtree_depth() {
        let (g, spec) = fixtures::places();
        let engine = QueryEngine::new(&g, spec);
        let europe = by_name(&g, "Europe");
        // Two levels below Europe, plus the empty final pass.
        assert_eq!(engine.q_desc(europe, PlanKind::BaselineJoin).unwrap().hops, 3);
        let city = by_name(&g, "Japan-city-1");
        assert_eq!(engine.q_desc(city, PlanKind::BaselineJoin).unwrap().hops, 1);
    }

    #[test]
    fn errors() {
        let (g, spec) = fixtures::tagclass();
        let engine = QueryEngine::new(&g, spec.clone());
        let thing = by_name(&g, "Thing");
        assert_eq!(
            engine.q_desc(thing, PlanKind::IndexDewey).unwrap_err(),
            QueryError::NoIndex(PlanKind::IndexDewey)
        );
        assert_eq!(
            engine.q_desc(NodeId(77), PlanKind::BaselineJoin).unwrap_err(),
            QueryError::NotInScope(NodeId(77))
        );
        let (g2, spec2) = fixtures::places();
        let idx = build_index(verify_forest(&g2, &spec2).unwrap());
        assert!(matches!(
            QueryEngine::new(&g, spec).with_index(&idx),
            Err(QueryError::SpecMismatch)
        ));
    }

    #[test]
    fn zero_timeout_stops_baselines_only() {
        let (g, spec) = fixtures::places();
        let idx = build_index(verify_forest(&g, &spec).unwrap());
        let engine = QueryEngine::new(&g, spec)
            .with_index(&idx)
            .unwrap()
            .with_timeout(Duration::ZERO);
        let europe = by_name(&g, "Europe");
        assert!(matches!(
            engine.q_desc(europe, PlanKind::BaselineJoin),
            Err(QueryError::TimedOut(_))
        ));
        assert_eq!(engine.q_desc(europe, PlanKind::IndexPrePost).unwrap().cardinality(), 8);
    }

    #[test]
    fn names_round_trip() {
        for p in PlanKind::ALL {
            assert_eq!(p.to_string().parse::<PlanKind>().unwrap(), p);
        }
        for q in QueryKind::ALL {
            assert_eq!(q.to_string().parse::<QueryKind>().unwrap(), q);
        }
    }
}
