use std::fmt;

use serde::Serialize;

use super::SelectionConfig;
use crate::rdf::{vocab, Graph, Term};

/// A `<predicate, object>` pair held by an entity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fact {
    pub predicate: Term,
    pub object: Term,
}

impl Fact {
    pub fn new(predicate: Term, object: Term) -> Self {
        Fact { predicate, object }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.predicate, self.object)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactSet {
    pub entity: Term,
    pub facts: Vec<Fact>,
}

impl FactSet {
    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }
}

/// Every `<p, o>` with `<entity, p, o>` in the graph, sorted, unfiltered.
pub fn fact_set(entity: &Term, graph: &Graph) -> FactSet {
    let mut facts: Vec<Fact> = graph
        .match_triples(Some(entity), None, None)
        .map(|t| {
            let (_, p, o) = t.into_parts();
            Fact::new(p, o)
        })
        .collect();
    facts.sort();
    facts.dedup();
    FactSet {
        entity: entity.clone(),
        facts,
    }
}

/// Drops facts that should never end up in a summary: literal objects,
/// facts unique to one entity whose object occurs once in the graph,
/// blacklisted predicates, hierarchy statements, and (unless enabled)
/// `rdf:type` facts.
pub fn filter_facts(facts: FactSet, graph: &Graph, cfg: &SelectionConfig) -> FactSet {
    let keep = |f: &Fact| {
        let Some(p) = f.predicate.as_iri() else {
            return false;
        };
        if vocab::is_schema_predicate(p) || cfg.blacklist.contains(p) {
            return false;
        }
        if p == vocab::RDF_TYPE && !cfg.include_type_facts {
            return false;
        }
        if cfg.exclude_literals && f.object.is_literal() {
            return false;
        }
        if cfg.exclude_unique
            && graph.count_entities_with_fact(&f.predicate, &f.object) <= 1
            && graph.count_triples_with_object(&f.object) <= 1
        {
            return false;
        }
        true
    };
    FactSet {
        entity: facts.entity,
        facts: facts.facts.into_iter().filter(keep).collect(),
    }
}
