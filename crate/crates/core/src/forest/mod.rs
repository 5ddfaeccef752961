//! Tree-shaped substructures: specs, verification against a graph instance,
//! and the parent/children overlay a verified spec produces.

mod spec;
mod stats;

pub use self::spec::{NodeScope, Orientation, SiblingOrder, SpecError, TreeSpec};
pub use self::stats::{forest_stats, ForestStats, Summary};

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::graph::{NodeId, PropertyGraph, PropertyValue};

/// Why a graph does not satisfy a tree spec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `witness[i+1]` is the parent of `witness[i]`, and the parent of the last
    /// element is the first.
    Cycle {
        witness: Vec<NodeId>,
    },
    MultiParent {
        node: NodeId,
        parents: Vec<NodeId>,
    },
    MissingParent {
        node: NodeId,
    },
    /// The sibling-order edges among `parent`'s children do not form one chain.
    BrokenSiblingChain {
        parent: NodeId,
        detail: String,
    },
    InvalidSpec(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle { witness } => {
                write!(f, "cycle through")?;
                for n in witness {
                    write!(f, " {n}")?;
                }
                Ok(())
            }
            Violation::MultiParent { node, parents } => {
                write!(f, "node {node} has {} parents:", parents.len())?;
                for p in parents {
                    write!(f, " {p}")?;
                }
                Ok(())
            }
            Violation::MissingParent { node } => write!(f, "node {node} requires a parent but has none"),
            Violation::BrokenSiblingChain { parent, detail } => {
                write!(f, "children of {parent} are not linked in one chain: {detail}")
            }
            Violation::InvalidSpec(msg) => write!(f, "invalid tree spec: {msg}"),
        }
    }
}

impl std::error::Error for Violation {}

/// Where a node goes among its new siblings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Position {
    Last,
    Before(NodeId),
}

/// Parent/children overlay of one tree spec over a graph.
///
/// Storage is dense by node id. A node outside the forest has no root.
#[derive(Clone, Debug)]
pub struct Forest {
    spec: TreeSpec,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    root_of: Vec<Option<NodeId>>,
    roots: Vec<NodeId>,
    len: usize,
}

impl Forest {
    fn with_capacity(spec: TreeSpec, n: usize) -> Forest {
        Forest {
            spec,
            parent: vec![None; n],
            children: vec![Vec::new(); n],
            root_of: vec![None; n],
            roots: Vec::new(),
            len: 0,
        }
    }

    /// Builds a forest directly from `(child, parent)` pairs, children in
    /// pair order. Meant for tests and generators; no validation beyond
    /// debug assertions.
    pub fn from_parent_pairs(spec: TreeSpec, nodes: &[NodeId], pairs: &[(NodeId, NodeId)]) -> Forest {
        let cap = nodes.iter().map(|n| n.index() + 1).max().unwrap_or(0);
        let mut forest = Forest::with_capacity(spec, cap);
        for &(child, parent) in pairs {
            debug_assert!(forest.parent[child.index()].is_none());
            forest.parent[child.index()] = Some(parent);
            forest.children[parent.index()].push(child);
        }
        let mut sorted = nodes.to_vec();
        sorted.sort();
        forest.assign_roots(&sorted);
        forest
    }

    fn assign_roots(&mut self, scoped: &[NodeId]) {
        self.roots = scoped
            .iter()
            .copied()
            .filter(|n| self.parent[n.index()].is_none())
            .collect();
        for i in 0..self.roots.len() {
            let root = self.roots[i];
            let members: Vec<_> = self.preorder(root).collect();
            for n in members {
                self.root_of[n.index()] = Some(root);
            }
        }
        self.len = scoped.len();
    }

    pub fn spec(&self) -> &TreeSpec {
        &self.spec
    }

    /// Number of nodes in the forest.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.root_of.get(n.index()).is_some_and(Option::is_some)
    }

    pub fn parent(&self, n: NodeId) -> Option<NodeId> {
        self.parent.get(n.index()).copied().flatten()
    }

    pub fn children(&self, n: NodeId) -> &[NodeId] {
        self.children.get(n.index()).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    /// Root of the tree containing `n`; doubles as the tree id.
    pub fn root_of(&self, n: NodeId) -> Option<NodeId> {
        self.root_of.get(n.index()).copied().flatten()
    }

    /// All member nodes in id order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.root_of
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_some())
            .map(|(i, _)| NodeId(i as u32))
    }

    /// Preorder of the subtree rooted at `n` (including `n`), children in
    /// sibling order.
    pub fn preorder(&self, n: NodeId) -> Preorder<'_> {
        Preorder {
            forest: self,
            stack: vec![n],
        }
    }

    /// Nodes of the subtree rooted at `n` with their depth below `n`.
    pub fn subtree_levels(&self, n: NodeId) -> Vec<(NodeId, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![(n, 0usize)];
        while let Some((node, depth)) = stack.pop() {
            out.push((node, depth));
            for c in self.children(node).iter().rev() {
                stack.push((*c, depth + 1));
            }
        }
        out
    }

    fn grow(&mut self, n: NodeId) {
        let need = n.index() + 1;
        if self.parent.len() < need {
            self.parent.resize(need, None);
            self.children.resize(need, Vec::new());
            self.root_of.resize(need, None);
        }
    }

    /// Hangs `node` (a root or a fresh node) under `parent` at `pos`.
    pub(crate) fn attach(&mut self, parent: NodeId, pos: usize, node: NodeId) {
        self.grow(node);
        let root = self.root_of(parent).expect("parent in forest");
        if self.contains(node) {
            self.roots.retain(|r| *r != node);
            let members: Vec<_> = self.preorder(node).collect();
            for m in members {
                self.root_of[m.index()] = Some(root);
            }
        } else {
            self.root_of[node.index()] = Some(root);
            self.len += 1;
        }
        self.parent[node.index()] = Some(parent);
        self.children[parent.index()].insert(pos, node);
    }

    /// Makes `node` the root of its own tree.
    pub(crate) fn detach(&mut self, node: NodeId) {
        if let Some(p) = self.parent[node.index()].take() {
            self.children[p.index()].retain(|c| *c != node);
            self.roots.push(node);
            let members: Vec<_> = self.preorder(node).collect();
            for m in members {
                self.root_of[m.index()] = Some(node);
            }
        }
    }

    /// Drops the subtree rooted at `node` from the forest.
    pub(crate) fn remove_subtree(&mut self, node: NodeId) {
        if let Some(p) = self.parent[node.index()].take() {
            self.children[p.index()].retain(|c| *c != node);
        } else {
            self.roots.retain(|r| *r != node);
        }
        let members: Vec<_> = self.preorder(node).collect();
        for m in members {
            self.children[m.index()].clear();
            self.parent[m.index()] = None;
            self.root_of[m.index()] = None;
            self.len -= 1;
        }
    }
}

pub struct Preorder<'a> {
    forest: &'a Forest,
    stack: Vec<NodeId>,
}

impl Iterator for Preorder<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        let n = self.stack.pop()?;
        self.stack.extend(self.forest.children(n).iter().rev().copied());
        Some(n)
    }
}

/// Checks that `spec` carves a forest out of `g` and returns the overlay.
///
/// Tree edges are the edges labelled with one of the spec's labels whose two
/// endpoints are both in scope; edges leaving the scope are ignored.
pub fn verify_forest(g: &PropertyGraph, spec: &TreeSpec) -> Result<Forest, Violation> {
    spec.validate().map_err(|e| Violation::InvalidSpec(e.to_string()))?;
    let n = g.node_count();
    let in_scope: Vec<bool> = g.nodes().map(|node| spec.scope.contains(node)).collect();

    let tree_edges: Vec<(NodeId, NodeId)> = g
        .edges()
        .filter(|e| spec.edge_labels.contains(&e.label))
        .filter(|e| in_scope[e.src.index()] && in_scope[e.dst.index()])
        .map(|e| spec.orientation.child_parent(e.src, e.dst))
        .collect();

    let mut parent: Vec<Option<NodeId>> = vec![None; n];
    for &(child, p) in &tree_edges {
        if parent[child.index()].is_some() {
            let parents = tree_edges
                .iter()
                .filter(|(c, _)| *c == child)
                .map(|(_, p)| *p)
                .collect();
            return Err(Violation::MultiParent { node: child, parents });
        }
        parent[child.index()] = Some(p);
    }

    if let Some(witness) = find_cycle(&parent) {
        return Err(Violation::Cycle { witness });
    }

    for node in g.nodes() {
        if in_scope[node.id.index()] && parent[node.id.index()].is_none() && spec.requires_parent(node) {
            return Err(Violation::MissingParent { node: node.id });
        }
    }

    let mut forest = Forest::with_capacity(spec.clone(), n);
    forest.parent = parent;
    for &(child, p) in &tree_edges {
        forest.children[p.index()].push(child);
    }
    order_siblings(g, spec, &mut forest.children)?;
    let scoped: Vec<NodeId> = g.node_ids().filter(|id| in_scope[id.index()]).collect();
    forest.assign_roots(&scoped);
    Ok(forest)
}

/// Iterative parent-chain walk with three-colour marking.
fn find_cycle(parent: &[Option<NodeId>]) -> Option<Vec<NodeId>> {
    const FRESH: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;
    let mut state = vec![FRESH; parent.len()];
    let mut path = Vec::new();
    for start in 0..parent.len() {
        if state[start] != FRESH {
            continue;
        }
        path.clear();
        let mut cur = Some(NodeId(start as u32));
        while let Some(node) = cur {
            match state[node.index()] {
                DONE => break,
                ON_PATH => {
                    let from = path.iter().position(|n| *n == node).expect("node on path");
                    return Some(path[from..].to_vec());
                }
                _ => {
                    state[node.index()] = ON_PATH;
                    path.push(node);
                    cur = parent[node.index()];
                }
            }
        }
        for node in &path {
            state[node.index()] = DONE;
        }
    }
    None
}

fn order_siblings(g: &PropertyGraph, spec: &TreeSpec, children: &mut [Vec<NodeId>]) -> Result<(), Violation> {
    match &spec.sibling_order {
        SiblingOrder::Insertion => Ok(()),
        SiblingOrder::ByProperty(name) => {
            let value =
                |n: NodeId| -> Option<&PropertyValue> { g.node(n).ok().and_then(|node| node.properties.get(name)) };
            for list in children.iter_mut().filter(|l| l.len() > 1) {
                list.sort_by(|a, b| match (value(*a), value(*b)) {
                    (Some(x), Some(y)) => x.try_cmp(y).unwrap_or_else(|| x.type_name().cmp(y.type_name())),
                    (Some(_), None) => Ordering::Less,
                    (None, Some(_)) => Ordering::Greater,
                    (None, None) => Ordering::Equal,
                });
            }
            Ok(())
        }
        SiblingOrder::ByNextEdge(label) => {
            let mut next: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
            for e in g.edges().filter(|e| &e.label == label) {
                next.entry(e.src).or_default().push(e.dst);
            }
            for (p, list) in children.iter_mut().enumerate() {
                if list.len() > 1 {
                    *list = chain_siblings(NodeId(p as u32), list, &next)?;
                }
            }
            Ok(())
        }
    }
}

fn chain_siblings(
    parent: NodeId,
    siblings: &[NodeId],
    next: &HashMap<NodeId, Vec<NodeId>>,
) -> Result<Vec<NodeId>, Violation> {
    let broken = |detail: String| Violation::BrokenSiblingChain { parent, detail };
    let member: HashMap<NodeId, usize> = siblings.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut succ: Vec<Option<NodeId>> = vec![None; siblings.len()];
    let mut has_pred = vec![false; siblings.len()];
    for (i, s) in siblings.iter().enumerate() {
        let targets: Vec<NodeId> = next
            .get(s)
            .into_iter()
            .flatten()
            .copied()
            .filter(|t| member.contains_key(t))
            .collect();
        if targets.len() > 1 {
            return Err(broken(format!("{s} links to {} siblings", targets.len())));
        }
        if let Some(t) = targets.first() {
            let j = member[t];
            if has_pred[j] {
                return Err(broken(format!("{t} has two predecessors")));
            }
            has_pred[j] = true;
            succ[i] = Some(*t);
        }
    }
    let heads: Vec<usize> = (0..siblings.len()).filter(|i| !has_pred[*i]).collect();
    if heads.len() != 1 {
        return Err(broken(format!("{} chain heads", heads.len())));
    }
    let mut order = Vec::with_capacity(siblings.len());
    let mut cur = Some(siblings[heads[0]]);
    while let Some(n) = cur {
        if order.len() == siblings.len() {
            return Err(broken("chain loops".into()));
        }
        order.push(n);
        cur = succ[member[&n]];
    }
    if order.len() != siblings.len() {
        return Err(broken(format!(
            "chain covers {} of {} siblings",
            order.len(),
            siblings.len()
        )));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{labels, Properties};

    fn name(g: &PropertyGraph, n: NodeId) -> String {
        g.node(n).unwrap().properties["name"].to_string()
    }

    #[test]
    fn tagclass_is_one_tree_rooted_at_thing() {
        let (g, spec) = fixtures::tagclass();
        let f = verify_forest(&g, &spec).unwrap();
        assert_eq!(f.roots().len(), 1);
        assert_eq!(name(&g, f.roots()[0]), "Thing");
        assert_eq!(f.len(), 5);
        let kids: Vec<_> = f.children(f.roots()[0]).iter().map(|n| name(&g, *n)).collect();
        assert_eq!(kids, ["Place", "Agent"]);
    }

    #[test]
    fn injected_cycle_is_reported_with_witness() {
        let (mut g, spec) = fixtures::tagclass();
        let person = fixtures::by_name(&g, "Person");
        let place = fixtures::by_name(&g, "Place");
        let thing = fixtures::by_name(&g, "Thing");
        // Thing -> Person makes Thing a child of its own descendant.
        g.add_edge(thing, person, "isSubclassOf", Properties::new()).unwrap();
        match verify_forest(&g, &spec) {
            Err(Violation::Cycle { witness }) => {
                assert_eq!(witness.len(), 3);
                assert!(witness.contains(&thing) && witness.contains(&person));
                assert!(!witness.contains(&place));
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn second_parent_is_reported() {
        let (mut g, spec) = fixtures::tagclass();
        let person = fixtures::by_name(&g, "Person");
        let agent = fixtures::by_name(&g, "Agent");
        let x = g.add_node(labels(["TagClass"]), Properties::new()).unwrap();
        g.add_edge(person, x, "isSubclassOf", Properties::new()).unwrap();
        assert_eq!(
            verify_forest(&g, &spec).unwrap_err(),
            Violation::MultiParent {
                node: person,
                parents: vec![agent, x]
            }
        );
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let (mut g, spec) = fixtures::tagclass();
        let place = fixtures::by_name(&g, "Place");
        let mut g2 = PropertyGraph::new();
        let a = g2.add_node(labels(["TagClass"]), Properties::new()).unwrap();
        g2.add_edge(a, a, "isSubclassOf", Properties::new()).unwrap();
        assert_eq!(
            verify_forest(&g2, &spec).unwrap_err(),
            Violation::Cycle { witness: vec![a] }
        );
        // Out-of-label edges are ignored.
        g.add_edge(place, place, "other", Properties::new()).unwrap();
        assert!(verify_forest(&g, &spec).is_ok());
    }

    #[test]
    fn missing_parent_only_when_required() {
        let (g, spec) = fixtures::time_series();
        assert!(verify_forest(&g, &spec).is_ok());
        let mut g = g;
        let orphan = g.add_node(labels(["Statement"]), Properties::new()).unwrap();
        assert_eq!(
            verify_forest(&g, &spec).unwrap_err(),
            Violation::MissingParent { node: orphan }
        );
        let relaxed = spec.clone().with_parent_required(Vec::<String>::new());
        let f = verify_forest(&g, &relaxed).unwrap();
        assert!(f.roots().contains(&orphan));
    }

    #[test]
    fn next_edges_order_siblings() {
        let (g, spec) = fixtures::time_series();
        let f = verify_forest(&g, &spec).unwrap();
        let account = f.roots()[0];
        let stmts: Vec<_> = f.children(account).iter().map(|n| name(&g, *n)).collect();
        assert_eq!(stmts, ["S1", "S2"]);
        let s2 = f.children(account)[1];
        let txs: Vec<_> = f.children(s2).iter().map(|n| name(&g, *n)).collect();
        assert_eq!(txs, ["T3", "T4", "T5"]);
    }

    #[test]
    fn broken_next_chain_is_a_violation() {
        let (mut g, spec) = fixtures::time_series();
        let t3 = fixtures::by_name(&g, "T3");
        let t5 = fixtures::by_name(&g, "T5");
        g.add_edge(t3, t5, "PRECEDES", Properties::new()).unwrap();
        assert!(matches!(
            verify_forest(&g, &spec),
            Err(Violation::BrokenSiblingChain { .. })
        ));
    }

    #[test]
    fn property_order_puts_missing_last() {
        let mut g = PropertyGraph::new();
        let root = g.add_node(labels(["N"]), Properties::new()).unwrap();
        let mut kids = Vec::new();
        for ts in [Some(30), None, Some(10), Some(20)] {
            let mut p = Properties::new();
            if let Some(ts) = ts {
                p.insert("ts".into(), PropertyValue::Int(ts));
            }
            let k = g.add_node(labels(["N"]), p).unwrap();
            g.add_edge(root, k, "HAS", Properties::new()).unwrap();
            kids.push(k);
        }
        let spec = TreeSpec::new(["HAS"], Orientation::ParentToChild)
            .with_sibling_order(SiblingOrder::ByProperty("ts".into()));
        let f = verify_forest(&g, &spec).unwrap();
        assert_eq!(f.children(root), &[kids[2], kids[3], kids[0], kids[1]]);
    }

    #[test]
    fn scope_limits_membership() {
        let (mut g, spec) = fixtures::tagclass();
        let outsider = g.add_node(labels(["Other"]), Properties::new()).unwrap();
        let thing = fixtures::by_name(&g, "Thing");
        g.add_edge(outsider, thing, "isSubclassOf", Properties::new()).unwrap();
        let f = verify_forest(&g, &spec).unwrap();
        assert!(!f.contains(outsider));
        assert_eq!(f.len(), 5);
    }

    #[test]
    fn overlay_mutations_keep_roots_consistent() {
        let (g, spec) = fixtures::tagclass();
        let mut f = verify_forest(&g, &spec).unwrap();
        let agent = fixtures::by_name(&g, "Agent");
        let person = fixtures::by_name(&g, "Person");
        let place = fixtures::by_name(&g, "Place");
        f.detach(agent);
        assert_eq!(f.root_of(person), Some(agent));
        assert_eq!(f.roots().len(), 2);
        f.attach(place, 0, agent);
        assert_eq!(f.root_of(person), f.root_of(place));
        assert_eq!(f.roots().len(), 1);
        f.remove_subtree(agent);
        assert_eq!(f.len(), 2);
        assert!(!f.contains(person));
        assert!(f.children(place).is_empty());
    }
}
