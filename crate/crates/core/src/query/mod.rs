//! Triple patterns, BGP queries, the query parser and the evaluator.

mod eval;
mod parser;
mod pattern;

pub use eval::{evaluate, SolutionSet};
pub use parser::{parse_query, QueryError};
pub use pattern::{
    is_valid_var_name, substitute, BgpQuery, Binding, FreshVars, PatternError, PatternTerm,
    Position, TriplePattern,
};
