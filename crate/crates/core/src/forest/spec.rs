use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{LabelSet, Node};

/// Which direction tree edges point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Edge source is the child, destination the parent (`REPLY_OF` style).
    ChildToParent,
    /// Edge source is the parent (`CONTAINS` style).
    ParentToChild,
}

impl Orientation {
    /// Splits an edge `(src, dst)` into `(child, parent)`.
    #[inline]
    pub fn child_parent<T>(self, src: T, dst: T) -> (T, T) {
        match self {
            Orientation::ChildToParent => (src, dst),
            Orientation::ParentToChild => (dst, src),
        }
    }

    pub fn flipped(self) -> Orientation {
        match self {
            Orientation::ChildToParent => Orientation::ParentToChild,
            Orientation::ParentToChild => Orientation::ChildToParent,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::ChildToParent => "child_to_parent",
            Orientation::ParentToChild => "parent_to_child",
        })
    }
}

/// Which nodes participate in a tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeScope {
    #[default]
    All,
    /// Nodes carrying at least one of these labels.
    AnyLabel(BTreeSet<String>),
    /// Nodes whose label set is exactly one of these.
    Types(BTreeSet<LabelSet>),
}

impl NodeScope {
    pub fn contains(&self, node: &Node) -> bool {
        match self {
            NodeScope::All => true,
            NodeScope::AnyLabel(labels) => labels.iter().any(|l| node.labels.contains(l)),
            NodeScope::Types(types) => types.contains(&node.labels),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiblingOrder {
    /// Order in which the tree edges were inserted.
    #[default]
    Insertion,
    /// Ascending by a node property; nodes lacking it come last.
    ByProperty(String),
    /// Linked list of sibling-to-next-sibling edges with this label.
    ByNextEdge(String),
}

/// Declarative description of a tree-shaped substructure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeSpec {
    pub edge_labels: BTreeSet<String>,
    pub orientation: Orientation,
    #[serde(default)]
    pub scope: NodeScope,
    #[serde(default)]
    pub sibling_order: SiblingOrder,
    /// Node labels whose nodes must have a parent.
    #[serde(default)]
    pub parent_required: BTreeSet<String>,
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("tree spec needs at least one edge label")]
    NoEdgeLabels,
    #[error("sibling-order edge `{0}` is also a tree edge label")]
    NextEdgeIsTreeEdge(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed tree spec: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("cannot serialize tree spec: {0}")]
    Serialize(#[from] toml::ser::Error),
}

impl TreeSpec {
    pub fn new<I, S>(edge_labels: I, orientation: Orientation) -> TreeSpec
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TreeSpec {
            edge_labels: edge_labels.into_iter().map(Into::into).collect(),
            orientation,
            scope: NodeScope::All,
            sibling_order: SiblingOrder::Insertion,
            parent_required: BTreeSet::new(),
        }
    }

    pub fn with_scope(mut self, scope: NodeScope) -> TreeSpec {
        self.scope = scope;
        self
    }

    pub fn with_sibling_order(mut self, order: SiblingOrder) -> TreeSpec {
        self.sibling_order = order;
        self
    }

    pub fn with_parent_required<I, S>(mut self, labels: I) -> TreeSpec
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.parent_required = labels.into_iter().map(Into::into).collect();
        self
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.edge_labels.is_empty() {
            return Err(SpecError::NoEdgeLabels);
        }
        if let SiblingOrder::ByNextEdge(label) = &self.sibling_order {
            if self.edge_labels.contains(label) {
                return Err(SpecError::NextEdgeIsTreeEdge(label.clone()));
            }
        }
        Ok(())
    }

    pub fn requires_parent(&self, node: &Node) -> bool {
        self.parent_required.iter().any(|l| node.labels.contains(l))
    }

    pub fn from_toml(text: &str) -> Result<TreeSpec, SpecError> {
        let spec: TreeSpec = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> Result<String, SpecError> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &Path) -> Result<TreeSpec, SpecError> {
        TreeSpec::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), SpecError> {
        std::fs::write(path, self.to_toml()?)?;
        Ok(())
    }
}
