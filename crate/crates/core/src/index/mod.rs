//! PrePost and Dewey structural encodings over a verified forest.
//!
//! A single counter per tree is bumped on node entry (`pre`) and node exit
//! (`post`), so a tree of `n` nodes uses exactly the values `1..=2n` and a
//! node is a leaf iff `post == pre + 1`. Dewey labels record child ranks from
//! the root (`[1]`). Both encodings, plus the level, are kept for every node;
//! each tree has a pre-sorted node array and a Dewey-ordered map as access
//! paths.

mod dewey;
mod maintain;

pub use self::dewey::{dewey_to_string, string_to_dewey, DeweyLabel, MalformedDewey};
pub use self::maintain::{DeleteMode, MaintenanceReport};

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::ops::Bound;
use std::str::FromStr;

use thiserror::Error;

use crate::forest::Forest;
use crate::graph::{NodeId, PropertyGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Codec {
    PrePost,
    Dewey,
}

impl fmt::Display for Codec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Codec::PrePost => "prepost",
            Codec::Dewey => "dewey",
        })
    }
}

impl FromStr for Codec {
    type Err = String;

    fn from_str(s: &str) -> Result<Codec, String> {
        match s {
            "prepost" => Ok(Codec::PrePost),
            "dewey" => Ok(Codec::Dewey),
            _ => Err(format!("unknown codec `{s}` (expected prepost or dewey)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrePostEntry {
    pub pre: u32,
    pub post: u32,
    pub lvl: u32,
}

impl PrePostEntry {
    #[inline]
    pub fn is_leaf(&self) -> bool {
        self.post == self.pre + 1
    }

    /// Strict ancestry by interval containment.
    #[inline]
    pub fn contains(&self, other: &PrePostEntry) -> bool {
        self.pre < other.pre && other.pre < self.post
    }

    /// Nodes in the subtree rooted here, itself included.
    #[inline]
    pub fn subtree_size(&self) -> usize {
        (self.post - self.pre).div_ceil(2) as usize
    }
}

/// Everything the index stores about one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexEntry {
    pub root: NodeId,
    pub pre: u32,
    pub post: u32,
    pub lvl: u32,
    pub dewey: DeweyLabel,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("node {0} is not indexed")]
    NotIndexed(NodeId),
    #[error("node {0} is outside the tree spec's scope")]
    NotInScope(NodeId),
    #[error("attaching {node} under {parent} would create a cycle")]
    WouldCreateCycle { parent: NodeId, node: NodeId },
    #[error("{node} already has parent {existing}")]
    WouldCreateMultiParent { node: NodeId, existing: NodeId },
    #[error("{0} must keep a parent")]
    ParentRequired(NodeId),
    #[error("{sibling} is not a child of {parent}")]
    NotAChild { parent: NodeId, sibling: NodeId },
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    root: NodeId,
    pp: PrePostEntry,
}

/// Per-tree access paths.
#[derive(Clone, Debug, Default)]
struct TreeAccess {
    /// Members sorted by `pre`.
    by_pre: Vec<NodeId>,
    dewey: BTreeMap<DeweyLabel, NodeId>,
}

#[derive(Clone, Debug)]
pub struct StructuralIndex {
    forest: Forest,
    slots: Vec<Option<Slot>>,
    dewey: Vec<Option<DeweyLabel>>,
    trees: HashMap<NodeId, TreeAccess>,
}

/// Builds both encodings over every tree of `forest`.
pub fn build_index(forest: Forest) -> StructuralIndex {
    StructuralIndex::build(forest)
}

impl StructuralIndex {
    pub fn build(forest: Forest) -> StructuralIndex {
        let cap = forest.nodes().last().map(|n| n.index() + 1).unwrap_or(0);
        let mut index = StructuralIndex {
            slots: vec![None; cap],
            dewey: vec![None; cap],
            trees: HashMap::with_capacity(forest.roots().len()),
            forest,
        };
        let roots = index.forest.roots().to_vec();
        for root in roots {
            let access = index.encode_tree(root);
            index.trees.insert(root, access);
        }
        index
    }

    /// DFS with one counter for entry and exit events.
    fn encode_tree(&mut self, root: NodeId) -> TreeAccess {
        enum Step {
            Enter(NodeId, u32, DeweyLabel),
            Exit(NodeId),
        }
        let mut access = TreeAccess::default();
        let mut counter = 0u32;
        let mut stack = vec![Step::Enter(root, 0, DeweyLabel::root())];
        while let Some(step) = stack.pop() {
            counter += 1;
            match step {
                Step::Enter(n, lvl, label) => {
                    self.set_slot(
                        n,
                        Slot {
                            root,
                            pp: PrePostEntry {
                                pre: counter,
                                post: 0,
                                lvl,
                            },
                        },
                    );
                    access.by_pre.push(n);
                    stack.push(Step::Exit(n));
                    for (i, c) in self.forest.children(n).iter().enumerate().rev() {
                        stack.push(Step::Enter(*c, lvl + 1, label.child(i as u32 + 1)));
                    }
                    access.dewey.insert(label.clone(), n);
                    self.dewey[n.index()] = Some(label);
                }
                Step::Exit(n) => {
                    self.slots[n.index()].as_mut().expect("entered").pp.post = counter;
                }
            }
        }
        access
    }

    fn set_slot(&mut self, n: NodeId, slot: Slot) {
        if self.slots.len() <= n.index() {
            self.slots.resize(n.index() + 1, None);
            self.dewey.resize(n.index() + 1, None);
        }
        self.slots[n.index()] = Some(slot);
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn len(&self) -> usize {
        self.forest.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forest.is_empty()
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.slot(n).is_some()
    }

    #[inline]
    fn slot(&self, n: NodeId) -> Option<&Slot> {
        self.slots.get(n.index()).and_then(Option::as_ref)
    }

    #[inline]
    fn slot_of(&self, n: NodeId) -> Result<&Slot, IndexError> {
        self.slot(n).ok_or(IndexError::NotIndexed(n))
    }

    fn dewey_of(&self, n: NodeId) -> Result<&DeweyLabel, IndexError> {
        self.dewey
            .get(n.index())
            .and_then(Option::as_ref)
            .ok_or(IndexError::NotIndexed(n))
    }

    pub fn prepost(&self, n: NodeId) -> Option<PrePostEntry> {
        self.slot(n).map(|s| s.pp)
    }

    pub fn dewey(&self, n: NodeId) -> Option<&DeweyLabel> {
        self.dewey.get(n.index()).and_then(Option::as_ref)
    }

    pub fn root_of(&self, n: NodeId) -> Option<NodeId> {
        self.slot(n).map(|s| s.root)
    }

    pub fn entry(&self, n: NodeId) -> Option<IndexEntry> {
        let slot = self.slot(n)?;
        Some(IndexEntry {
            root: slot.root,
            pre: slot.pp.pre,
            post: slot.pp.post,
            lvl: slot.pp.lvl,
            dewey: self.dewey(n)?.clone(),
        })
    }

    /// All entries keyed by node; two indexes over the same forest compare
    /// equal entry for entry.
    pub fn entries(&self) -> BTreeMap<NodeId, IndexEntry> {
        self.forest
            .nodes()
            .filter_map(|n| self.entry(n).map(|e| (n, e)))
            .collect()
    }

    /// Tree members in preorder.
    pub fn tree_preorder(&self, root: NodeId) -> &[NodeId] {
        self.trees.get(&root).map(|t| t.by_pre.as_slice()).unwrap_or(&[])
    }

    pub fn node_at_dewey(&self, root: NodeId, label: &DeweyLabel) -> Option<NodeId> {
        self.trees.get(&root).and_then(|t| t.dewey.get(label)).copied()
    }

    fn access(&self, root: NodeId) -> &TreeAccess {
        &self.trees[&root]
    }

    /// Position of `n` in its tree's pre-sorted array.
    fn pre_position(&self, access: &TreeAccess, pre: u32) -> usize {
        access
            .by_pre
            .partition_point(|m| self.slots[m.index()].unwrap().pp.pre < pre)
    }

    /// `a.pre < b.pre < a.post`; false across trees.
    pub fn is_ancestor_prepost(&self, a: NodeId, b: NodeId) -> Result<bool, IndexError> {
        let (sa, sb) = (self.slot_of(a)?, self.slot_of(b)?);
        Ok(sa.root == sb.root && sa.pp.contains(&sb.pp))
    }

    /// `a.dewey` is a proper, level-respecting prefix of `b.dewey`.
    pub fn is_ancestor_dewey(&self, a: NodeId, b: NodeId) -> Result<bool, IndexError> {
        let (ra, rb) = (self.slot_of(a)?.root, self.slot_of(b)?.root);
        Ok(ra == rb && self.dewey_of(a)?.is_proper_prefix_of(self.dewey_of(b)?))
    }

    pub fn is_ancestor(&self, a: NodeId, b: NodeId, codec: Codec) -> Result<bool, IndexError> {
        match codec {
            Codec::PrePost => self.is_ancestor_prepost(a, b),
            Codec::Dewey => self.is_ancestor_dewey(a, b),
        }
    }

    /// Ancestor `k` hops up: the codec's ancestor test plus
    /// `a.lvl + k = b.lvl`.
    pub fn is_k_hop_ancestor(&self, a: NodeId, b: NodeId, k: u32, codec: Codec) -> Result<bool, IndexError> {
        let levels_match = match codec {
            Codec::PrePost => self.slot_of(a)?.pp.lvl + k == self.slot_of(b)?.pp.lvl,
            Codec::Dewey => self.dewey_of(a)?.level() + k as usize == self.dewey_of(b)?.level(),
        };
        Ok(levels_match && self.is_ancestor(a, b, codec)?)
    }

    /// Strict descendants of `a` in document order.
    pub fn descendants(&self, a: NodeId, codec: Codec) -> Result<Vec<NodeId>, IndexError> {
        match codec {
            Codec::PrePost => Ok(self.descendant_slice(a)?.to_vec()),
            Codec::Dewey => Ok(self.dewey_descendants(a)?.map(|(_, n)| *n).collect()),
        }
    }

    /// Contiguous run of the pre-sorted array with `a.pre < pre < a.post`.
    fn descendant_slice(&self, a: NodeId) -> Result<&[NodeId], IndexError> {
        let slot = self.slot_of(a)?;
        let access = self.access(slot.root);
        let start = self.pre_position(access, slot.pp.pre) + 1;
        let rest = &access.by_pre[start..];
        let len = rest.partition_point(|m| self.slots[m.index()].unwrap().pp.pre < slot.pp.post);
        Ok(&rest[..len])
    }

    fn dewey_descendants(&self, a: NodeId) -> Result<impl Iterator<Item = (&DeweyLabel, &NodeId)> + '_, IndexError> {
        let root = self.slot_of(a)?.root;
        let label = self.dewey_of(a)?;
        Ok(self
            .access(root)
            .dewey
            .range((Bound::Excluded(label), Bound::Unbounded))
            .take_while(move |(k, _)| label.is_prefix_of(k)))
    }

    /// Strict descendants without children.
    pub fn leaves_under(&self, a: NodeId, codec: Codec) -> Result<Vec<NodeId>, IndexError> {
        match codec {
            Codec::PrePost => Ok(self
                .descendant_slice(a)?
                .iter()
                .copied()
                .filter(|m| self.slots[m.index()].unwrap().pp.is_leaf())
                .collect()),
            Codec::Dewey => {
                // A label is a leaf iff the next label in document order
                // does not extend it.
                let mut out = Vec::new();
                let mut iter = self.dewey_descendants(a)?.peekable();
                while let Some((label, n)) = iter.next() {
                    match iter.peek() {
                        Some((next, _)) if label.is_proper_prefix_of(next) => {}
                        _ => out.push(*n),
                    }
                }
                Ok(out)
            }
        }
    }

    /// Children of `a` in sibling order.
    pub fn children(&self, a: NodeId, codec: Codec) -> Result<Vec<NodeId>, IndexError> {
        match codec {
            Codec::PrePost => {
                // Skip whole child subtrees: the next sibling starts right
                // after a child's post.
                let slice = self.descendant_slice(a)?;
                let mut out = Vec::new();
                let mut i = 0;
                while i < slice.len() {
                    let c = slice[i];
                    out.push(c);
                    i += self.slots[c.index()].unwrap().pp.subtree_size();
                }
                Ok(out)
            }
            Codec::Dewey => {
                let root = self.slot_of(a)?.root;
                let label = self.dewey_of(a)?;
                let access = self.access(root);
                Ok((1..)
                    .map(|rank| access.dewey.get(&label.child(rank)).copied())
                    .take_while(Option::is_some)
                    .flatten()
                    .collect())
            }
        }
    }

    /// Strict ancestors of `b`, root first.
    pub fn ancestors(&self, b: NodeId, codec: Codec) -> Result<Vec<NodeId>, IndexError> {
        let slot = *self.slot_of(b)?;
        let access = self.access(slot.root);
        match codec {
            Codec::PrePost => {
                let pos = self.pre_position(access, slot.pp.pre);
                Ok(access.by_pre[..pos]
                    .iter()
                    .copied()
                    .filter(|m| self.slots[m.index()].unwrap().pp.post > slot.pp.post)
                    .collect())
            }
            Codec::Dewey => {
                let label = self.dewey_of(b)?.components();
                Ok((1..label.len())
                    .filter_map(|len| {
                        DeweyLabel::new(label[..len].to_vec()).and_then(|prefix| access.dewey.get(&prefix).copied())
                    })
                    .collect())
            }
        }
    }

    /// Bytes taken by each encoding's per-node values (not access paths).
    pub fn storage_bytes(&self) -> (usize, usize) {
        let prepost = self.len() * std::mem::size_of::<PrePostEntry>();
        let dewey = self.dewey.iter().flatten().map(DeweyLabel::storage_bytes).sum();
        (prepost, dewey)
    }

    /// Writes `node_id,pre,post,lvl,dewey`, one tree after another in
    /// preorder. `node_id` is the node's external key.
    pub fn export_csv<W: Write>(&self, graph: &PropertyGraph, out: W) -> Result<(), csv::Error> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["node_id", "pre", "post", "lvl", "dewey"])?;
        for root in self.forest.roots() {
            for n in self.tree_preorder(*root) {
                let e = self.entry(*n).expect("indexed");
                wtr.write_record([
                    graph.external_key(*n).to_string(),
                    e.pre.to_string(),
                    e.post.to_string(),
                    e.lvl.to_string(),
                    e.dewey.to_string(),
                ])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}
