//! RDF data model, N-Triples ingestion, indexed storage and RDFS closure.

mod closure;
mod graph;
mod ntriples;
mod schema;
mod term;
pub mod vocab;

pub use closure::compute_closure;
pub use graph::{build_graph, Graph, IndexOrder, TermId};
pub use ntriples::{
    parse_line, parse_ntriples, parse_ntriples_str, scope_blank_nodes, LexError, ParseError,
};
pub use schema::SchemaIndex;
pub use term::{Term, TermError, Triple};

pub(crate) use ntriples::{read_iri_ref, read_quoted};
