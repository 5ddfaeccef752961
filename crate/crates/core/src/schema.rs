//! Schema inference with edge cardinalities, and tree candidates derived from
//! the schema alone.
//!
//! Node types are label sets. Edge types are `(label, source type, target
//! type)` triples annotated with the observed min/max number of such edges
//! per source node and per target node. A label is a tree candidate when,
//! under some orientation, no node type can have more than one parent through
//! it; whether that suffices to rule out cycles depends on the shape of the
//! schema graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::forest::{NodeScope, Orientation, TreeSpec};
use crate::graph::{LabelSet, PropertyGraph};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeType(pub LabelSet);

impl NodeType {
    pub fn is_unlabeled(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for NodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("(unlabeled)");
        }
        let parts: Vec<&str> = self.0.iter().map(String::as_str).collect();
        f.write_str(&parts.join(":"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Finite(usize),
    Unbounded,
}

impl Bound {
    pub fn at_most(self, n: usize) -> bool {
        matches!(self, Bound::Finite(m) if m <= n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cardinality {
    pub min: usize,
    pub max: Bound,
}

impl Cardinality {
    pub fn new(min: usize, max: usize) -> Cardinality {
        Cardinality {
            min,
            max: Bound::Finite(max),
        }
    }

    fn observed(counts: impl Iterator<Item = usize>) -> Cardinality {
        let (mut min, mut max, mut any) = (usize::MAX, 0, false);
        for c in counts {
            any = true;
            min = min.min(c);
            max = max.max(c);
        }
        if !any {
            min = 0;
        }
        Cardinality::new(min, max)
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.max {
            Bound::Finite(m) => write!(f, "[{}..{}]", self.min, m),
            Bound::Unbounded => write!(f, "[{}..*]", self.min),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeType {
    pub label: String,
    pub src_type: NodeType,
    pub dst_type: NodeType,
    /// Edges of this type per node of `src_type`.
    pub out_card: Cardinality,
    /// Edges of this type per node of `dst_type`.
    pub in_card: Cardinality,
}

impl EdgeType {
    pub fn is_self_typed(&self) -> bool {
        self.src_type == self.dst_type
    }
}

/// Degree of one node type over all edges of one label, whatever the far
/// endpoint's type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelDegree {
    pub node_type: NodeType,
    pub label: String,
    pub out_card: Cardinality,
    pub in_card: Cardinality,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SchemaGraph {
    /// Node types with their instance counts.
    pub node_types: BTreeMap<NodeType, usize>,
    pub edge_types: Vec<EdgeType>,
    pub label_degrees: Vec<LabelDegree>,
}

impl SchemaGraph {
    pub fn edge_type(&self, label: &str, src: &NodeType, dst: &NodeType) -> Option<&EdgeType> {
        self.edge_types
            .iter()
            .find(|e| e.label == label && &e.src_type == src && &e.dst_type == dst)
    }

    pub fn label_degree(&self, node_type: &NodeType, label: &str) -> Option<&LabelDegree> {
        self.label_degrees
            .iter()
            .find(|d| &d.node_type == node_type && d.label == label)
    }

    fn labels(&self) -> BTreeSet<&str> {
        self.edge_types.iter().map(|e| e.label.as_str()).collect()
    }
}

impl fmt::Display for SchemaGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<24} {:>10}", "node type", "count")?;
        for (t, count) in &self.node_types {
            writeln!(f, "{:<24} {:>10}", t.to_string(), count)?;
        }
        writeln!(f)?;
        writeln!(
            f,
            "{:<20} {:<20} {:<20} {:>10} {:>10}",
            "edge label", "source", "target", "out", "in"
        )?;
        for e in &self.edge_types {
            writeln!(
                f,
                "{:<20} {:<20} {:<20} {:>10} {:>10}",
                e.label,
                e.src_type.to_string(),
                e.dst_type.to_string(),
                e.out_card.to_string(),
                e.in_card.to_string()
            )?;
        }
        Ok(())
    }
}

/// Observes node types, edge types and their tight cardinalities.
pub fn infer_schema(g: &PropertyGraph) -> SchemaGraph {
    let mut type_ids: HashMap<&LabelSet, usize> = HashMap::new();
    let mut types: Vec<NodeType> = Vec::new();
    let mut node_type = Vec::with_capacity(g.node_count());
    for node in g.nodes() {
        let t = *type_ids.entry(&node.labels).or_insert_with(|| {
            types.push(NodeType(node.labels.clone()));
            types.len() - 1
        });
        node_type.push(t);
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); types.len()];
    for (i, t) in node_type.iter().enumerate() {
        members[*t].push(i);
    }

    // (label, src type, dst type) -> per-node out/in counts
    type Counts = (HashMap<usize, usize>, HashMap<usize, usize>);
    let mut by_edge_type: BTreeMap<(String, usize, usize), Counts> = BTreeMap::new();
    // (type, label) -> per-node out/in counts
    let mut by_label: BTreeMap<(usize, String), Counts> = BTreeMap::new();
    for e in g.edges() {
        let (s, d) = (e.src.index(), e.dst.index());
        let (ts, td) = (node_type[s], node_type[d]);
        let entry = by_edge_type.entry((e.label.clone(), ts, td)).or_default();
        *entry.0.entry(s).or_default() += 1;
        *entry.1.entry(d).or_default() += 1;
        *by_label
            .entry((ts, e.label.clone()))
            .or_default()
            .0
            .entry(s)
            .or_default() += 1;
        *by_label
            .entry((td, e.label.clone()))
            .or_default()
            .1
            .entry(d)
            .or_default() += 1;
    }

    let card = |t: usize, counts: &HashMap<usize, usize>| {
        Cardinality::observed(members[t].iter().map(|n| counts.get(n).copied().unwrap_or(0)))
    };

    let edge_types = by_edge_type
        .iter()
        .map(|((label, ts, td), (outs, ins))| EdgeType {
            label: label.clone(),
            src_type: types[*ts].clone(),
            dst_type: types[*td].clone(),
            out_card: card(*ts, outs),
            in_card: card(*td, ins),
        })
        .collect();
    let label_degrees = by_label
        .iter()
        .map(|((t, label), (outs, ins))| LabelDegree {
            node_type: types[*t].clone(),
            label: label.clone(),
            out_card: card(*t, outs),
            in_card: card(*t, ins),
        })
        .collect();
    let node_types = types
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), members[i].len()))
        .collect();
    SchemaGraph {
        node_types,
        edge_types,
        label_degrees,
    }
}

/// A tree spec proposed from schema information.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeCandidate {
    pub spec: TreeSpec,
    /// Distinct node types along an acyclic schema: every instance is a forest.
    pub schema_sufficient: bool,
    /// Self-typed or cyclic schema edges: instances may contain cycles.
    pub needs_instance_check: bool,
}

/// A self-typed label with at most one edge each way per node: a possible
/// sequence, not a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceHint {
    pub label: String,
    pub node_types: BTreeSet<NodeType>,
}

fn parent_side(d: &LabelDegree, o: Orientation) -> Cardinality {
    match o {
        Orientation::ChildToParent => d.out_card,
        Orientation::ParentToChild => d.in_card,
    }
}

/// Node types playing the child role for `label` under `o`.
fn child_types<'a>(s: &'a SchemaGraph, label: &str, o: Orientation) -> BTreeSet<&'a NodeType> {
    s.edge_types
        .iter()
        .filter(|e| e.label == label)
        .map(|e| o.child_parent(&e.src_type, &e.dst_type).0)
        .collect()
}

fn eligible(s: &SchemaGraph, label: &str, o: Orientation) -> bool {
    child_types(s, label, o).into_iter().all(|t| {
        s.label_degree(t, label)
            .is_some_and(|d| parent_side(d, o).max.at_most(1))
    })
}

fn is_sequence(s: &SchemaGraph, label: &str) -> bool {
    let self_typed = s.edge_types.iter().any(|e| e.label == label && e.is_self_typed());
    self_typed && eligible(s, label, Orientation::ChildToParent) && eligible(s, label, Orientation::ParentToChild)
}

pub fn find_sequence_hints(s: &SchemaGraph) -> Vec<SequenceHint> {
    s.labels()
        .into_iter()
        .filter(|l| is_sequence(s, l))
        .map(|l| SequenceHint {
            label: l.to_owned(),
            node_types: s
                .edge_types
                .iter()
                .filter(|e| e.label == l)
                .flat_map(|e| [e.src_type.clone(), e.dst_type.clone()])
                .collect(),
        })
        .collect()
}

/// Largest component size for which maximal label sets are enumerated
/// exhaustively; larger components fall back to one candidate per label.
const MAX_EXHAUSTIVE_LABELS: usize = 16;

/// Proposes every maximal label set that can form a forest under some
/// orientation according to the schema's parent-side cardinalities.
///
/// Two labels conflict when they share a child node type (a node could get a
/// parent through each). Sets are connected through shared node types and
/// conflict-free.
pub fn find_tree_candidates(s: &SchemaGraph) -> Vec<TreeCandidate> {
    let mut out = Vec::new();
    for o in [Orientation::ChildToParent, Orientation::ParentToChild] {
        let labels: Vec<&str> = s
            .labels()
            .into_iter()
            .filter(|l| !is_sequence(s, l) && eligible(s, l, o))
            .collect();
        let children: Vec<BTreeSet<&NodeType>> = labels.iter().map(|l| child_types(s, l, o)).collect();
        let touched: Vec<BTreeSet<&NodeType>> = labels
            .iter()
            .map(|l| {
                s.edge_types
                    .iter()
                    .filter(|e| e.label == *l)
                    .flat_map(|e| [&e.src_type, &e.dst_type])
                    .collect()
            })
            .collect();
        let conflict = |i: usize, j: usize| !children[i].is_disjoint(&children[j]);
        let linked = |i: usize, j: usize| !touched[i].is_disjoint(&touched[j]);

        for component in components(labels.len(), linked) {
            for set in maximal_sets(&component, conflict, linked) {
                let chosen: Vec<&str> = set.iter().map(|i| labels[*i]).collect();
                out.push(candidate(s, &chosen, o));
            }
        }
    }
    out
}

fn components(n: usize, linked: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let cur = comp[i];
            for (j, s) in seen.iter_mut().enumerate() {
                if !*s && linked(cur, j) {
                    *s = true;
                    comp.push(j);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn maximal_sets(
    component: &[usize],
    conflict: impl Fn(usize, usize) -> bool,
    linked: impl Fn(usize, usize) -> bool,
) -> Vec<Vec<usize>> {
    let k = component.len();
    let any_conflict = component
        .iter()
        .enumerate()
        .any(|(a, i)| component[a + 1..].iter().any(|j| conflict(*i, *j)));
    if !any_conflict {
        return vec![component.to_vec()];
    }
    if k > MAX_EXHAUSTIVE_LABELS {
        return component.iter().map(|i| vec![*i]).collect();
    }
    let ok = |mask: u32| {
        let members: Vec<usize> = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| component[b]).collect();
        let free = members
            .iter()
            .enumerate()
            .all(|(a, i)| members[a + 1..].iter().all(|j| !conflict(*i, *j)));
        free && components(members.len(), |x, y| linked(members[x], members[y])).len() == 1
    };
    let valid: Vec<u32> = (1u32..(1 << k)).filter(|m| ok(*m)).collect();
    valid
        .iter()
        .filter(|m| !valid.iter().any(|other| *other != **m && *other & **m == **m))
        .map(|m| (0..k).filter(|b| m & (1 << b) != 0).map(|b| component[b]).collect())
        .collect()
}

fn candidate(s: &SchemaGraph, labels: &[&str], o: Orientation) -> TreeCandidate {
    let ets: Vec<&EdgeType> = s
        .edge_types
        .iter()
        .filter(|e| labels.contains(&e.label.as_str()))
        .collect();
    let types: BTreeSet<NodeType> = ets
        .iter()
        .flat_map(|e| [e.src_type.clone(), e.dst_type.clone()])
        .collect();

    // child -> parent arcs between node types
    let arcs: Vec<(&NodeType, &NodeType)> = ets.iter().map(|e| o.child_parent(&e.src_type, &e.dst_type)).collect();
    let self_typed = arcs.iter().any(|(c, p)| c == p);
    let schema_sufficient = !self_typed && is_acyclic(&types, &arcs);

    let mut parent_required = BTreeSet::new();
    let all_labels: BTreeSet<&String> = types.iter().flat_map(|t| t.0.iter()).collect();
    for l in all_labels {
        let holders: Vec<&NodeType> = types.iter().filter(|t| t.0.contains(l)).collect();
        let required = holders.iter().all(|t| {
            let min_parents: usize = labels
                .iter()
                .filter_map(|lab| s.label_degree(t, lab))
                .map(|d| parent_side(d, o).min)
                .sum();
            min_parents >= 1
        });
        if required {
            parent_required.insert(l.clone());
        }
    }

    let spec = TreeSpec {
        edge_labels: labels.iter().map(|l| l.to_string()).collect(),
        orientation: o,
        scope: NodeScope::Types(types.iter().map(|t| t.0.clone()).collect()),
        sibling_order: Default::default(),
        parent_required,
    };
    TreeCandidate {
        spec,
        schema_sufficient,
        needs_instance_check: !schema_sufficient,
    }
}

fn is_acyclic(types: &BTreeSet<NodeType>, arcs: &[(&NodeType, &NodeType)]) -> bool {
    let index: HashMap<&NodeType, usize> = types.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut indegree = vec![0usize; types.len()];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); types.len()];
    for (c, p) in arcs {
        let (c, p) = (index[c], index[p]);
        out[c].push(p);
        indegree[p] += 1;
    }
    let mut queue: Vec<usize> = (0..types.len()).filter(|i| indegree[*i] == 0).collect();
    let mut removed = 0;
    while let Some(v) = queue.pop() {
        removed += 1;
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                queue.push(w);
            }
        }
    }
    removed == types.len()
}
