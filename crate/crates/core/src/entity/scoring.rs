use std::cmp::Ordering;

use serde::Serialize;

use super::{Fact, LogBase, SelectionConfig};
use crate::rdf::{Graph, Term};

/// A fact with its scores. `rank` is exactly `specificity * popularity`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedFact {
    pub fact: Fact,
    pub specificity: f64,
    pub popularity: f64,
    pub rank: f64,
    /// Most specific type of the object; `None` for untyped objects.
    pub range: Option<Term>,
}

impl RankedFact {
    /// Rank rounded to 1e-9 so that mathematically equal products of
    /// different logarithms compare equal and fall through to the
    /// predicate/object tie-break.
    pub(crate) fn rank_key(&self) -> i64 {
        (self.rank * 1e9).round() as i64
    }

    /// Rank descending, then predicate, then object.
    pub(crate) fn order(a: &RankedFact, b: &RankedFact) -> Ordering {
        b.rank_key()
            .cmp(&a.rank_key())
            .then_with(|| a.fact.predicate.cmp(&b.fact.predicate))
            .then_with(|| a.fact.object.cmp(&b.fact.object))
    }
}

/// `log(|E| / df)` with `df` the number of entities holding the fact.
pub fn specificity(fact: &Fact, graph: &Graph, base: LogBase) -> f64 {
    let df = graph.count_entities_with_fact(&fact.predicate, &fact.object);
    debug_assert!(df >= 1, "no entity holds {fact}");
    let n = graph.count_entities().max(1);
    base.log(n as f64 / df.max(1) as f64)
}

/// `log(#triples with object o)` over the whole graph.
pub fn popularity(object: &Term, graph: &Graph, base: LogBase) -> f64 {
    let count = graph.count_triples_with_object(object);
    debug_assert!(count >= 1, "{object} never occurs as an object");
    base.log(count.max(1) as f64)
}

/// Most specific `rdf:type` of `object`, the least one in term order when
/// several are incomparable.
pub fn range_of(object: &Term, graph: &Graph) -> Option<Term> {
    let schema = graph.schema();
    let types = schema.types_of(object)?;
    schema.most_specific(types).into_iter().next()
}

pub fn rank(fact: &Fact, graph: &Graph, cfg: &SelectionConfig) -> RankedFact {
    let specificity = specificity(fact, graph, cfg.log_base);
    let popularity = popularity(&fact.object, graph, cfg.log_base);
    RankedFact {
        fact: fact.clone(),
        specificity,
        popularity,
        rank: specificity * popularity,
        range: range_of(&fact.object, graph),
    }
}
