//! A tiny Cypher subset and its rewrite into structural-index predicates.
//!
//! Grammar (keywords case-insensitive):
//!
//! ```text
//! query := "MATCH" node edge node ("WHERE" pred ("AND" pred)*)? "RETURN" var ("," var)*
//! node  := "(" var (":" label)? ")"
//! edge  := ("-" | "<-") "[" (":" label)? ("*" (int (".." int)?)?)? "]" ("-" | "->")
//! pred  := var "." name "=" literal
//! ```

mod ast;
mod parser;
mod rewrite;

pub use self::ast::{EdgeDirection, EdgePattern, NodePattern, PathLength, PatternQuery, Predicate};
pub use self::parser::{parse, SyntaxError};
pub use self::rewrite::{
    baseline_plan, execute, rewrite, rewrite_with, walk_endpoints, Catalog, PatternResult, Relation, RewrittenPlan,
};
