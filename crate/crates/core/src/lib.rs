//! Structural indexing for tree-shaped substructures of property graphs.
//!
//! The pieces, bottom-up:
//!
//! * [`graph`] — in-memory labeled property graph with CSV import/export.
//! * [`schema`] — cardinality-annotated schema inference and tree candidates.
//! * [`forest`] — tree specs, instance verification, forest statistics.
//! * [`index`] — PrePost and Dewey encodings with incremental maintenance.
//! * [`query`] — descendant / leaf / ancestor / children queries under
//!   traversal, join and index plans.
//! * [`pattern`] — a tiny Cypher-like pattern language and its rewrite into
//!   index predicates.
//! * [`datagen`] — seeded tree and forest generators.
//! * [`bench`] — median-of-N benchmark harness and report output.

pub mod bench;
pub mod datagen;
pub mod fixtures;
pub mod forest;
pub mod graph;
pub mod index;
pub mod pattern;
pub mod query;
pub mod schema;

pub use forest::{verify_forest, Forest, Orientation, TreeSpec, Violation};
pub use graph::{NodeId, PropertyGraph, PropertyValue};
pub use index::{Codec, StructuralIndex};
pub use query::{PlanKind, QueryEngine};
