//! In-memory labeled property graph.
//!
//! Nodes and edges live in dense vectors addressed by [`NodeId`] / [`EdgeId`].
//! Every node keeps its outgoing and incoming edges grouped by edge label, so
//! one-hop expansion never scans the edge collection.

mod csv;

pub use self::csv::{read_edges, read_nodes, write_edges, write_nodes, CsvError};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use thiserror::Error;

/// Property that carries a node's external key.
pub const KEY_PROPERTY: &str = "node_id";

/// Store-assigned node identifier. Dense, starting at zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Store-assigned edge identifier; increases with insertion order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Interned edge label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

#[derive(Clone, Debug, PartialEq)]
pub enum PropertyValue {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
}

impl PropertyValue {
    pub fn type_name(&self) -> &'static str {
        match self {
            PropertyValue::Int(_) => "int",
            PropertyValue::Float(_) => "float",
            PropertyValue::Str(_) => "str",
            PropertyValue::Bool(_) => "bool",
        }
    }

    /// Comparison is only defined between values of the same tag.
    pub fn try_cmp(&self, other: &PropertyValue) -> Option<Ordering> {
        match (self, other) {
            (PropertyValue::Int(a), PropertyValue::Int(b)) => Some(a.cmp(b)),
            (PropertyValue::Float(a), PropertyValue::Float(b)) => a.partial_cmp(b),
            (PropertyValue::Str(a), PropertyValue::Str(b)) => Some(a.cmp(b)),
            (PropertyValue::Bool(a), PropertyValue::Bool(b)) => Some(a.cmp(b)),
            _ => None,
        }
    }
}

impl PartialOrd for PropertyValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other)
    }
}

impl fmt::Display for PropertyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyValue::Int(v) => write!(f, "{v}"),
            PropertyValue::Float(v) => write!(f, "{v}"),
            PropertyValue::Str(v) => f.write_str(v),
            PropertyValue::Bool(v) => write!(f, "{v}"),
        }
    }
}

impl From<i64> for PropertyValue {
    fn from(v: i64) -> Self {
        PropertyValue::Int(v)
    }
}

impl From<f64> for PropertyValue {
    fn from(v: f64) -> Self {
        PropertyValue::Float(v)
    }
}

impl From<&str> for PropertyValue {
    fn from(v: &str) -> Self {
        PropertyValue::Str(v.to_owned())
    }
}

impl From<String> for PropertyValue {
    fn from(v: String) -> Self {
        PropertyValue::Str(v)
    }
}

impl From<bool> for PropertyValue {
    fn from(v: bool) -> Self {
        PropertyValue::Bool(v)
    }
}

pub type Properties = BTreeMap<String, PropertyValue>;
pub type LabelSet = BTreeSet<String>;

/// Hashable form of a key value. Floats are not valid keys.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum KeyRepr {
    Int(i64),
    Str(String),
    Bool(bool),
}

impl KeyRepr {
    fn of(v: &PropertyValue) -> Option<KeyRepr> {
        match v {
            PropertyValue::Int(i) => Some(KeyRepr::Int(*i)),
            PropertyValue::Str(s) => Some(KeyRepr::Str(s.clone())),
            PropertyValue::Bool(b) => Some(KeyRepr::Bool(*b)),
            PropertyValue::Float(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub labels: LabelSet,
    pub properties: Properties,
}

impl Node {
    pub fn has_label(&self, label: &str) -> bool {
        self.labels.contains(label)
    }

    pub fn key(&self) -> Option<&PropertyValue> {
        self.properties.get(KEY_PROPERTY)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub src: NodeId,
    pub dst: NodeId,
    pub label: String,
    pub properties: Properties,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Out,
    In,
    Both,
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown edge {0:?}")]
    UnknownEdge(EdgeId),
    #[error("duplicate node key `{0}`")]
    DuplicateKey(String),
    #[error("adjacency inconsistent for edge {edge:?}: {detail}")]
    Inconsistent { edge: EdgeId, detail: String },
}

/// Edges of one label touching a node, in insertion order.
#[derive(Clone, Debug)]
struct LabelGroup {
    label: LabelId,
    edges: Vec<EdgeId>,
}

#[derive(Clone, Debug, Default)]
struct Adjacency {
    out: Vec<LabelGroup>,
    inc: Vec<LabelGroup>,
}

fn group_mut(groups: &mut Vec<LabelGroup>, label: LabelId) -> &mut Vec<EdgeId> {
    let pos = match groups.iter().position(|g| g.label == label) {
        Some(pos) => pos,
        None => {
            groups.push(LabelGroup {
                label,
                edges: Vec::new(),
            });
            groups.len() - 1
        }
    };
    &mut groups[pos].edges
}

fn group(groups: &[LabelGroup], label: LabelId) -> &[EdgeId] {
    groups
        .iter()
        .find(|g| g.label == label)
        .map(|g| g.edges.as_slice())
        .unwrap_or(&[])
}

#[derive(Clone, Debug, Default)]
pub struct PropertyGraph {
    nodes: Vec<Node>,
    adjacency: Vec<Adjacency>,
    edges: Vec<Option<Edge>>,
    edge_labels: Vec<String>,
    label_ids: HashMap<String, LabelId>,
    edge_count: usize,
    keys: HashMap<KeyRepr, NodeId>,
}

impl PropertyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Adds a node. A `node_id` property, when present, is registered as the
    /// node's external key and must be unique.
    pub fn add_node(&mut self, labels: LabelSet, properties: Properties) -> Result<NodeId, GraphError> {
        let id = NodeId(self.nodes.len() as u32);
        if let Some(key) = properties.get(KEY_PROPERTY).and_then(KeyRepr::of) {
            if self.keys.contains_key(&key) {
                return Err(GraphError::DuplicateKey(properties[KEY_PROPERTY].to_string()));
            }
            self.keys.insert(key, id);
        }
        self.nodes.push(Node { id, labels, properties });
        self.adjacency.push(Adjacency::default());
        Ok(id)
    }

    pub fn add_edge(
        &mut self,
        src: NodeId,
        dst: NodeId,
        label: &str,
        properties: Properties,
    ) -> Result<EdgeId, GraphError> {
        self.check_node(src)?;
        self.check_node(dst)?;
        let label_id = self.intern(label);
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push(Some(Edge {
            id,
            src,
            dst,
            label: label.to_owned(),
            properties,
        }));
        group_mut(&mut self.adjacency[src.index()].out, label_id).push(id);
        group_mut(&mut self.adjacency[dst.index()].inc, label_id).push(id);
        self.edge_count += 1;
        Ok(id)
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Result<Edge, GraphError> {
        let edge = self
            .edges
            .get_mut(id.index())
            .and_then(Option::take)
            .ok_or(GraphError::UnknownEdge(id))?;
        let label = self.label_ids[&edge.label];
        group_mut(&mut self.adjacency[edge.src.index()].out, label).retain(|e| *e != id);
        group_mut(&mut self.adjacency[edge.dst.index()].inc, label).retain(|e| *e != id);
        self.edge_count -= 1;
        Ok(edge)
    }

    fn intern(&mut self, label: &str) -> LabelId {
        if let Some(id) = self.label_ids.get(label) {
            return *id;
        }
        let id = LabelId(self.edge_labels.len() as u32);
        self.edge_labels.push(label.to_owned());
        self.label_ids.insert(label.to_owned(), id);
        id
    }

    fn check_node(&self, id: NodeId) -> Result<(), GraphError> {
        if id.index() < self.nodes.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(id))
        }
    }

    pub fn contains_node(&self, id: NodeId) -> bool {
        id.index() < self.nodes.len()
    }

    pub fn node(&self, id: NodeId) -> Result<&Node, GraphError> {
        self.nodes.get(id.index()).ok_or(GraphError::UnknownNode(id))
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(id.index()).and_then(Option::as_ref)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> + '_ {
        self.nodes.iter()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    /// Live edges in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().flatten()
    }

    pub fn label_id(&self, label: &str) -> Option<LabelId> {
        self.label_ids.get(label).copied()
    }

    pub fn label_name(&self, id: LabelId) -> &str {
        &self.edge_labels[id.0 as usize]
    }

    /// All edge labels in first-use order.
    pub fn edge_labels(&self) -> &[String] {
        &self.edge_labels
    }

    pub fn node_by_key(&self, key: &PropertyValue) -> Option<NodeId> {
        KeyRepr::of(key).and_then(|k| self.keys.get(&k).copied())
    }

    /// External key of a node, falling back to the store id.
    pub fn external_key(&self, id: NodeId) -> PropertyValue {
        self.nodes
            .get(id.index())
            .and_then(Node::key)
            .cloned()
            .unwrap_or(PropertyValue::Int(i64::from(id.0)))
    }

    /// Outgoing edge ids of one label, insertion order.
    pub fn out_edges(&self, n: NodeId, label: LabelId) -> &[EdgeId] {
        group(&self.adjacency[n.index()].out, label)
    }

    /// Incoming edge ids of one label, insertion order.
    pub fn in_edges(&self, n: NodeId, label: LabelId) -> &[EdgeId] {
        group(&self.adjacency[n.index()].inc, label)
    }

    /// Edge endpoint without the `Option` dance; the id must be live.
    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        let edge = self.edges[e.index()].as_ref().expect("live edge");
        (edge.src, edge.dst)
    }

    /// Nodes adjacent to `n` over one edge labelled `label`, ordered by edge
    /// insertion. With [`Direction::Both`] the two lists are merged by edge id;
    /// a self-loop then appears twice.
    pub fn neighbors(&self, n: NodeId, label: &str, direction: Direction) -> Result<Vec<NodeId>, GraphError> {
        self.check_node(n)?;
        let Some(label) = self.label_id(label) else {
            return Ok(Vec::new());
        };
        let out = self.out_edges(n, label);
        let inc = self.in_edges(n, label);
        let far = |e: EdgeId, outgoing: bool| {
            let (s, d) = self.endpoints(e);
            if outgoing {
                d
            } else {
                s
            }
        };
        Ok(match direction {
            Direction::Out => out.iter().map(|e| far(*e, true)).collect(),
            Direction::In => inc.iter().map(|e| far(*e, false)).collect(),
            Direction::Both => {
                let mut merged: Vec<(EdgeId, bool)> = out
                    .iter()
                    .map(|e| (*e, true))
                    .chain(inc.iter().map(|e| (*e, false)))
                    .collect();
                merged.sort_by_key(|(e, outgoing)| (*e, !outgoing));
                merged.into_iter().map(|(e, o)| far(e, o)).collect()
            }
        })
    }

    /// Full consistency audit of the adjacency lists against the edge table.
    pub fn audit(&self) -> Result<(), GraphError> {
        let mut seen_out = vec![0usize; self.edges.len()];
        let mut seen_in = vec![0usize; self.edges.len()];
        for (i, adj) in self.adjacency.iter().enumerate() {
            let n = NodeId(i as u32);
            for (groups, seen, outgoing) in [(&adj.out, &mut seen_out, true), (&adj.inc, &mut seen_in, false)] {
                for g in groups {
                    for e in &g.edges {
                        let edge = self.edge(*e).ok_or_else(|| GraphError::Inconsistent {
                            edge: *e,
                            detail: "adjacency references a removed edge".into(),
                        })?;
                        let end = if outgoing { edge.src } else { edge.dst };
                        if end != n || self.label_ids.get(&edge.label) != Some(&g.label) {
                            return Err(GraphError::Inconsistent {
                                edge: *e,
                                detail: format!("listed under node {n} with the wrong endpoint or label"),
                            });
                        }
                        seen[e.index()] += 1;
                    }
                }
            }
        }
        for edge in self.edges() {
            let i = edge.id.index();
            if seen_out[i] != 1 || seen_in[i] != 1 {
                return Err(GraphError::Inconsistent {
                    edge: edge.id,
                    detail: format!(
                        "listed {} times outgoing and {} times incoming",
                        seen_out[i], seen_in[i]
                    ),
                });
            }
        }
        Ok(())
    }

    /// Loads `nodes.csv` / `edges.csv` from a directory.
    pub fn load_dir(dir: &Path) -> Result<PropertyGraph, CsvError> {
        let nodes = std::fs::File::open(dir.join("nodes.csv"))?;
        let edges = std::fs::File::open(dir.join("edges.csv"))?;
        load_edge_list(nodes, edges)
    }

    pub fn save_dir(&self, dir: &Path) -> Result<(), CsvError> {
        std::fs::create_dir_all(dir)?;
        write_nodes(self, std::fs::File::create(dir.join("nodes.csv"))?)?;
        write_edges(self, std::fs::File::create(dir.join("edges.csv"))?)?;
        Ok(())
    }
}

/// Builds a graph from a nodes CSV and an edges CSV.
pub fn load_edge_list<N: std::io::Read, E: std::io::Read>(nodes: N, edges: E) -> Result<PropertyGraph, CsvError> {
    let mut graph = PropertyGraph::new();
    read_nodes(&mut graph, nodes)?;
    read_edges(&mut graph, edges)?;
    Ok(graph)
}

pub fn labels<I, S>(items: I) -> LabelSet
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    items.into_iter().map(Into::into).collect()
}
