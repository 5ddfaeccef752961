//! Incremental maintenance of both encodings.
//!
//! PrePost uses gapless shifting: inserting a subtree of `m` nodes at value
//! `x` adds `2m` to every value `>= x` in the tree; deleting one subtracts
//! `2m` from every value past its `post`. Dewey only renumbers the subtrees
//! of the following siblings. After every operation the index equals a full
//! rebuild over the mutated forest.

use std::collections::BTreeMap;

use super::{DeweyLabel, IndexError, PrePostEntry, Slot, StructuralIndex, TreeAccess};
use crate::forest::Position;
use crate::graph::{NodeId, PropertyGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeleteMode {
    /// Drop the subtree from the forest.
    Remove,
    /// Keep the subtree as a tree of its own.
    Detach,
}

/// What an update cost, counted in pre-existing nodes whose labels changed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MaintenanceReport {
    pub prepost_relabeled: usize,
    pub dewey_relabeled: usize,
    /// Nodes that joined the tree (fresh node or attached subtree).
    pub inserted: usize,
    pub removed: usize,
}

impl StructuralIndex {
    /// Inserts `node` under `parent`. `node` is either new to the forest or
    /// the root of another tree, in which case its whole subtree moves.
    pub fn insert_node(
        &mut self,
        graph: &PropertyGraph,
        parent: NodeId,
        position: Position,
        node: NodeId,
    ) -> Result<MaintenanceReport, IndexError> {
        let parent_slot = *self.slot_of(parent)?;
        let in_scope = graph
            .node(node)
            .map(|n| self.forest.spec().scope.contains(n))
            .unwrap_or(false);
        if !in_scope {
            return Err(IndexError::NotInScope(node));
        }
        if node == parent {
            return Err(IndexError::WouldCreateCycle { parent, node });
        }
        let moving = self.contains(node);
        if moving {
            if let Some(existing) = self.forest.parent(node) {
                return Err(IndexError::WouldCreateMultiParent { node, existing });
            }
            if parent_slot.root == node {
                return Err(IndexError::WouldCreateCycle { parent, node });
            }
        }
        let siblings = self.forest.children(parent);
        let (rank, x) = match position {
            Position::Last => (siblings.len(), parent_slot.pp.post),
            Position::Before(s) => {
                let i = siblings
                    .iter()
                    .position(|c| *c == s)
                    .ok_or(IndexError::NotAChild { parent, sibling: s })?;
                (i, self.slots[s.index()].unwrap().pp.pre)
            }
        };
        let following: Vec<NodeId> = siblings[rank..].to_vec();
        let root = parent_slot.root;

        // Subtree being inserted, in preorder, with entries relative to its
        // own root.
        let incoming: Vec<(NodeId, PrePostEntry, DeweyLabel)> = if moving {
            let access = self.trees.remove(&node).expect("root has access paths");
            access
                .by_pre
                .iter()
                .map(|m| {
                    (
                        *m,
                        self.slots[m.index()].unwrap().pp,
                        self.dewey[m.index()].clone().unwrap(),
                    )
                })
                .collect()
        } else {
            vec![(
                node,
                PrePostEntry {
                    pre: 1,
                    post: 2,
                    lvl: 0,
                },
                DeweyLabel::root(),
            )]
        };
        let m = incoming.len() as u32;
        let mut report = MaintenanceReport {
            inserted: incoming.len(),
            ..Default::default()
        };

        // PrePost: shift, then splice the subtree into the access path.
        let access = self.trees.get_mut(&root).expect("tree access");
        let splice_at = access
            .by_pre
            .partition_point(|n| self.slots[n.index()].unwrap().pp.pre < x);
        for n in &access.by_pre {
            let pp = &mut self.slots[n.index()].as_mut().unwrap().pp;
            let before = *pp;
            if pp.pre >= x {
                pp.pre += 2 * m;
            }
            if pp.post >= x {
                pp.post += 2 * m;
            }
            if *pp != before {
                report.prepost_relabeled += 1;
            }
        }
        access
            .by_pre
            .splice(splice_at..splice_at, incoming.iter().map(|(n, _, _)| *n));

        // Dewey: bump the following siblings' subtrees by one rank.
        let depth = parent_slot.pp.lvl as usize + 1;
        let renumbered = shift_siblings(&mut self.dewey, &following, &self.forest, &mut access.dewey, depth, 1);
        report.dewey_relabeled += renumbered;

        let prefix = self.dewey[parent.index()].clone().unwrap().child(rank as u32 + 1);
        for (n, pp, label) in &incoming {
            let slot = Slot {
                root,
                pp: PrePostEntry {
                    pre: pp.pre - 1 + x,
                    post: pp.post - 1 + x,
                    lvl: pp.lvl + parent_slot.pp.lvl + 1,
                },
            };
            let new_label = label.rebase(1, &prefix);
            access.dewey.insert(new_label.clone(), *n);
            if self.slots.len() <= n.index() {
                self.slots.resize(n.index() + 1, None);
                self.dewey.resize(n.index() + 1, None);
            }
            self.slots[n.index()] = Some(slot);
            self.dewey[n.index()] = Some(new_label);
        }
        if moving {
            report.prepost_relabeled += incoming.len();
            report.dewey_relabeled += incoming.len();
        }

        self.forest.attach(parent, rank, node);
        Ok(report)
    }

    /// Removes or detaches the subtree rooted at `a`.
    pub fn delete_subtree(
        &mut self,
        graph: &PropertyGraph,
        a: NodeId,
        mode: DeleteMode,
    ) -> Result<MaintenanceReport, IndexError> {
        let slot = *self.slot_of(a)?;
        let parent = self.forest.parent(a);
        if mode == DeleteMode::Detach {
            let required = graph
                .node(a)
                .map(|n| self.forest.spec().requires_parent(n))
                .unwrap_or(false);
            if required && parent.is_some() {
                return Err(IndexError::ParentRequired(a));
            }
            if parent.is_none() {
                return Ok(MaintenanceReport::default());
            }
        }
        let root = slot.root;
        let size = slot.pp.subtree_size();
        let shift = 2 * size as u32;
        let mut report = MaintenanceReport::default();

        let mut access = self.trees.remove(&root).expect("tree access");
        let start = access
            .by_pre
            .partition_point(|n| self.slots[n.index()].unwrap().pp.pre < slot.pp.pre);
        let members: Vec<NodeId> = access.by_pre.drain(start..start + size).collect();
        for n in &members {
            access.dewey.remove(self.dewey[n.index()].as_ref().unwrap());
        }

        if let Some(p) = parent {
            for n in &access.by_pre {
                let pp = &mut self.slots[n.index()].as_mut().unwrap().pp;
                let before = *pp;
                if pp.pre > slot.pp.post {
                    pp.pre -= shift;
                }
                if pp.post > slot.pp.post {
                    pp.post -= shift;
                }
                if *pp != before {
                    report.prepost_relabeled += 1;
                }
            }
            let siblings = self.forest.children(p);
            let i = siblings.iter().position(|c| *c == a).expect("child of parent");
            let following: Vec<NodeId> = siblings[i + 1..].to_vec();
            report.dewey_relabeled += shift_siblings(
                &mut self.dewey,
                &following,
                &self.forest,
                &mut access.dewey,
                slot.pp.lvl as usize,
                -1,
            );
            self.trees.insert(root, access);
        }

        match mode {
            DeleteMode::Remove => {
                for n in &members {
                    self.slots[n.index()] = None;
                    self.dewey[n.index()] = None;
                }
                report.removed = members.len();
                self.forest.remove_subtree(a);
            }
            DeleteMode::Detach => {
                let old_len = slot.pp.lvl as usize + 1;
                let mut fresh = TreeAccess {
                    by_pre: members.clone(),
                    dewey: BTreeMap::new(),
                };
                for n in &members {
                    let s = self.slots[n.index()].as_mut().unwrap();
                    s.root = a;
                    s.pp.pre -= slot.pp.pre - 1;
                    s.pp.post -= slot.pp.pre - 1;
                    s.pp.lvl -= slot.pp.lvl;
                    let label = self.dewey[n.index()]
                        .as_ref()
                        .unwrap()
                        .rebase(old_len, &DeweyLabel::root());
                    fresh.dewey.insert(label.clone(), *n);
                    self.dewey[n.index()] = Some(label);
                }
                self.trees.insert(a, fresh);
                report.prepost_relabeled += members.len();
                report.dewey_relabeled += members.len();
                self.forest.detach(a);
            }
        }
        Ok(report)
    }
}

/// Adds `delta` to component `depth` of every label in the subtrees rooted
/// at `siblings`, keeping the Dewey map in sync. Returns nodes touched.
fn shift_siblings(
    labels: &mut [Option<DeweyLabel>],
    siblings: &[NodeId],
    forest: &crate::forest::Forest,
    map: &mut BTreeMap<DeweyLabel, NodeId>,
    depth: usize,
    delta: i64,
) -> usize {
    let affected: Vec<NodeId> = siblings.iter().flat_map(|s| forest.preorder(*s)).collect();
    for n in &affected {
        map.remove(labels[n.index()].as_ref().unwrap());
    }
    for n in &affected {
        let label = labels[n.index()].as_mut().unwrap();
        let c = &mut label.components_mut()[depth];
        *c = (i64::from(*c) + delta) as u32;
        map.insert(label.clone(), *n);
    }
    affected.len()
}
