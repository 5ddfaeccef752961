//! Reference implementations used as test oracles. They share no code with
//! the library's forest, index or query modules: everything is rebuilt from
//! raw edges with the most direct algorithm available.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use sylva::forest::{Orientation, TreeSpec};
use sylva::graph::{NodeId, PropertyGraph};

/// Parent/children maps, children in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Oracle {
    pub parent: HashMap<NodeId, NodeId>,
    pub children: HashMap<NodeId, Vec<NodeId>>,
    /// Members in id order.
    pub members: BTreeSet<NodeId>,
}

/// Expected index values for one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub root: NodeId,
    pub pre: u32,
    pub post: u32,
    pub lvl: u32,
    pub dewey: Vec<u32>,
}

impl Oracle {
    /// Reads a forest straight off the graph's edge list. Only valid for
    /// insertion sibling order.
    pub fn from_graph(g: &PropertyGraph, spec: &TreeSpec) -> Oracle {
        let mut o = Oracle::default();
        let in_scope = |n: NodeId| spec.scope.contains(g.node(n).unwrap());
        for n in g.node_ids().filter(|n| in_scope(*n)) {
            o.members.insert(n);
        }
        let mut edges: Vec<_> = g.edges().collect();
        edges.sort_by_key(|e| e.id);
        for e in edges {
            if !spec.edge_labels.contains(&e.label) || !in_scope(e.src) || !in_scope(e.dst) {
                continue;
            }
            let (child, parent) = match spec.orientation {
                Orientation::ChildToParent => (e.src, e.dst),
                Orientation::ParentToChild => (e.dst, e.src),
            };
            o.parent.insert(child, parent);
            o.children.entry(parent).or_default().push(child);
        }
        o
    }

    pub fn roots(&self) -> Vec<NodeId> {
        self.members
            .iter()
            .copied()
            .filter(|n| !self.parent.contains_key(n))
            .collect()
    }

    pub fn children(&self, n: NodeId) -> Vec<NodeId> {
        self.children.get(&n).cloned().unwrap_or_default()
    }

    /// Parent chain, nearest first.
    pub fn ancestors(&self, n: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut x = n;
        while let Some(p) = self.parent.get(&x) {
            out.push(*p);
            x = *p;
        }
        out
    }

    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        self.ancestors(b).contains(&a)
    }

    pub fn depth(&self, n: NodeId) -> usize {
        self.ancestors(n).len()
    }

    pub fn descendants(&self, a: NodeId) -> BTreeSet<NodeId> {
        let mut out = BTreeSet::new();
        let mut queue = VecDeque::from(self.children(a));
        while let Some(x) = queue.pop_front() {
            out.insert(x);
            queue.extend(self.children(x));
        }
        out
    }

    pub fn leaves_under(&self, a: NodeId) -> BTreeSet<NodeId> {
        self.descendants(a)
            .into_iter()
            .filter(|x| self.children(*x).is_empty())
            .collect()
    }

    /// Nodes exactly `k` levels below `a` (k >= 1), by BFS.
    pub fn k_below(&self, a: NodeId, k: usize) -> BTreeSet<NodeId> {
        let mut level = vec![a];
        for _ in 0..k {
            level = level.iter().flat_map(|x| self.children(*x)).collect();
        }
        level.into_iter().collect()
    }

    /// Height of the subtree below `a` (0 for a leaf).
    pub fn height(&self, a: NodeId) -> usize {
        self.children(a).iter().map(|c| 1 + self.height(*c)).max().unwrap_or(0)
    }

    /// Recursive DFS with a single counter per tree.
    pub fn encode(&self) -> BTreeMap<NodeId, Expected> {
        fn visit(
            o: &Oracle,
            n: NodeId,
            root: NodeId,
            lvl: u32,
            dewey: Vec<u32>,
            counter: &mut u32,
            out: &mut BTreeMap<NodeId, Expected>,
        ) {
            *counter += 1;
            let pre = *counter;
            for (i, c) in o.children(n).into_iter().enumerate() {
                let mut d = dewey.clone();
                d.push(i as u32 + 1);
                visit(o, c, root, lvl + 1, d, counter, out);
            }
            *counter += 1;
            out.insert(
                n,
                Expected {
                    root,
                    pre,
                    post: *counter,
                    lvl,
                    dewey,
                },
            );
        }
        let mut out = BTreeMap::new();
        for r in self.roots() {
            let mut counter = 0;
            visit(self, r, r, 0, vec![1], &mut counter, &mut out);
        }
        out
    }

    // Mutations mirroring the index maintenance operations.

    pub fn attach(&mut self, parent: NodeId, pos: usize, node: NodeId) {
        self.members.insert(node);
        self.parent.insert(node, parent);
        self.children.entry(parent).or_default().insert(pos, node);
    }

    pub fn detach(&mut self, node: NodeId) {
        if let Some(p) = self.parent.remove(&node) {
            self.children.get_mut(&p).unwrap().retain(|c| *c != node);
        }
    }

    pub fn remove(&mut self, node: NodeId) {
        self.detach(node);
        let mut stack = vec![node];
        while let Some(x) = stack.pop() {
            self.members.remove(&x);
            stack.extend(self.children.remove(&x).unwrap_or_default());
            self.parent.remove(&x);
        }
    }
}

/// Checks that a library index matches the oracle's encoding exactly.
pub fn assert_matches_oracle(index: &sylva::StructuralIndex, oracle: &Oracle) {
    let expected = oracle.encode();
    let actual = index.entries();
    assert_eq!(actual.len(), expected.len(), "member count");
    for (n, e) in &expected {
        let a = &actual[n];
        assert_eq!(
            (a.root, a.pre, a.post, a.lvl, a.dewey.components()),
            (e.root, e.pre, e.post, e.lvl, e.dewey.as_slice()),
            "entry of {n}"
        );
    }
}

/// Reachability by repeated relaxation over the raw edge list, following
/// edges forward (`forward = true`) or backward, with walk lengths in
/// `[min, max]`. Deliberately slow and obvious.
pub fn walk_oracle(
    g: &PropertyGraph,
    from: NodeId,
    label: Option<&str>,
    forward: bool,
    min: u32,
    max: Option<u32>,
) -> BTreeSet<NodeId> {
    let edges: Vec<(NodeId, NodeId)> = g
        .edges()
        .filter(|e| label.is_none_or(|l| e.label == l))
        .map(|e| if forward { (e.src, e.dst) } else { (e.dst, e.src) })
        .collect();
    let limit = max.unwrap_or(g.node_count() as u32 + min);
    let mut out = BTreeSet::new();
    let mut level: BTreeSet<NodeId> = BTreeSet::from([from]);
    for d in 0..=limit {
        if d >= min {
            out.extend(level.iter().copied());
        }
        if level.is_empty() {
            break;
        }
        level = edges
            .iter()
            .filter(|(s, _)| level.contains(s))
            .map(|(_, t)| *t)
            .collect();
    }
    out
}

/// Splitmix-style deterministic sequence for picking test inputs without
/// depending on the library's generators.
pub struct Picker(u64);

impl Picker {
    pub fn new(seed: u64) -> Picker {
        Picker(seed ^ 0x9E37_79B9_7F4A_7C15)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    pub fn pick<T: Copy>(&mut self, items: &[T]) -> T {
        items[self.below(items.len())]
    }
}

/// A random tree built here, not by the library's generator: node `i > 0`
/// hangs under a uniformly chosen earlier node, or under `i - 1` with
/// probability `chain_bias` percent (long paths).
pub fn random_tree(seed: u64, n: usize, chain_bias: u64) -> (PropertyGraph, TreeSpec) {
    let mut p = Picker::new(seed);
    let mut g = PropertyGraph::new();
    for i in 0..n {
        let mut props = sylva::graph::Properties::new();
        props.insert("node_id".into(), sylva::PropertyValue::Int(i as i64 + 1));
        g.add_node(sylva::graph::labels(["Node"]), props).unwrap();
    }
    for i in 1..n {
        let parent = if p.below(100) < chain_bias as usize {
            i - 1
        } else {
            p.below(i)
        };
        g.add_edge(NodeId(i as u32), NodeId(parent as u32), "CHILD_OF", Default::default())
            .unwrap();
    }
    (g, TreeSpec::new(["CHILD_OF"], Orientation::ChildToParent))
}
