//! Query relaxation and entity-centric query reformulation over RDF graphs.
//!
//! Given a graph and a basic-graph-pattern query, the crate generates
//! alternative queries: schema relaxations (superclass, superproperty,
//! literal and simple relaxation), variable typing, and entity
//! reformulations that replace an entity constant by a variable constrained
//! with the entity's top-ranked facts. Candidates are ordered by level,
//! executed, and compared against the original answers.

pub mod cli;
pub mod entity;
pub mod query;
pub mod rdf;
pub mod reformulate;
pub mod relax;
pub mod report;

pub use entity::{SelectionConfig, SummaryMode};
pub use query::{evaluate, parse_query, BgpQuery, PatternTerm, SolutionSet, TriplePattern};
pub use rdf::{build_graph, compute_closure, parse_ntriples, Graph, Term, Triple};
pub use reformulate::{execute_all, generate, Candidate, GenerationConfig};
pub use relax::{RewriteStep, RuleKind};
