use std::collections::BTreeMap;

use serde::Serialize;

use super::{fact_set, filter_facts, rank, Fact, RankedFact, SelectionConfig, SummaryMode};
use crate::query::{PatternTerm, TriplePattern};
use crate::rdf::{Graph, Term};

/// Top-ranked facts of an entity, ordered by rank descending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntitySummary {
    pub entity: Term,
    pub k: usize,
    pub ranked: Vec<RankedFact>,
}

impl EntitySummary {
    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }

    pub fn facts(&self) -> impl Iterator<Item = &Fact> {
        self.ranked.iter().map(|r| &r.fact)
    }
}

/// The summary's facts as patterns `<?var, p, o>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryPattern {
    pub variable: String,
    pub patterns: Vec<TriplePattern>,
}

/// Facts a reformulation must not append.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Exclusion {
    #[default]
    Nothing,
    Predicate(Term),
    Pair(Fact),
}

impl Exclusion {
    pub fn excludes(&self, fact: &Fact) -> bool {
        match self {
            Exclusion::Nothing => false,
            Exclusion::Predicate(p) => &fact.predicate == p,
            Exclusion::Pair(pair) => fact == pair,
        }
    }
}

/// Text after the last `#`, `/` or `:` of an IRI.
pub fn local_name(iri: &str) -> &str {
    iri.rfind(['#', '/', ':']).map_or(iri, |i| &iri[i + 1..])
}

fn namespace_rank(predicate: &Term, priority: &[String]) -> usize {
    let iri = predicate.as_iri().unwrap_or_default();
    priority
        .iter()
        .position(|prefix| iri.starts_with(prefix.as_str()))
        .unwrap_or(priority.len())
}

/// Among predicates sharing a local name, keeps only the facts of the one
/// holding the best-ranked fact. Rank ties go to the predicate whose
/// namespace comes first in `namespace_priority`, then to the smaller IRI.
/// The result is in rank order.
pub fn dedup_properties(facts: Vec<RankedFact>, cfg: &SelectionConfig) -> Vec<RankedFact> {
    let mut winners: BTreeMap<&str, &RankedFact> = BTreeMap::new();
    for f in &facts {
        let name = local_name(f.fact.predicate.as_iri().unwrap_or_default());
        let better = |cur: &RankedFact| {
            f.rank_key()
                .cmp(&cur.rank_key())
                .then_with(|| {
                    namespace_rank(&cur.fact.predicate, &cfg.namespace_priority)
                        .cmp(&namespace_rank(&f.fact.predicate, &cfg.namespace_priority))
                })
                .then_with(|| cur.fact.predicate.cmp(&f.fact.predicate))
                .is_gt()
        };
        match winners.get(name) {
            Some(cur) if !better(cur) => {}
            _ => {
                winners.insert(name, f);
            }
        }
    }
    let keep: Vec<Term> = winners.values().map(|f| f.fact.predicate.clone()).collect();
    let mut out: Vec<RankedFact> = facts
        .iter()
        .filter(|f| keep.contains(&f.fact.predicate))
        .cloned()
        .collect();
    out.sort_by(RankedFact::order);
    out
}

/// Groups facts by range and takes, for round `r`, the `r+1`-th best member
/// of every group; the best `k` of those form the summary.
pub fn group_and_select(
    entity: &Term,
    facts: &[RankedFact],
    k: usize,
    round: usize,
) -> EntitySummary {
    let mut groups: BTreeMap<Option<&Term>, Vec<&RankedFact>> = BTreeMap::new();
    for f in facts {
        groups.entry(f.range.as_ref()).or_default().push(f);
    }
    let mut picked: Vec<RankedFact> = groups
        .into_values()
        .filter_map(|mut members| {
            members.sort_by(|a, b| RankedFact::order(a, b));
            members.get(round).map(|f| (*f).clone())
        })
        .collect();
    picked.sort_by(RankedFact::order);
    picked.truncate(k);
    EntitySummary {
        entity: entity.clone(),
        k,
        ranked: picked,
    }
}

/// Round `r` takes the `r+1`-th best fact overall.
pub fn per_feature_select(entity: &Term, facts: &[RankedFact], round: usize) -> EntitySummary {
    let mut sorted: Vec<&RankedFact> = facts.iter().collect();
    sorted.sort_by(|a, b| RankedFact::order(a, b));
    EntitySummary {
        entity: entity.clone(),
        k: 1,
        ranked: sorted
            .get(round)
            .map(|f| (*f).clone())
            .into_iter()
            .collect(),
    }
}

pub fn summary_pattern(summary: &EntitySummary, var: &str) -> SummaryPattern {
    let patterns = summary
        .facts()
        .map(|f| {
            TriplePattern::new(
                PatternTerm::var(var),
                PatternTerm::Const(f.predicate.clone()),
                PatternTerm::Const(f.object.clone()),
            )
            .expect("facts carry IRI predicates and non-literal or literal objects")
        })
        .collect();
    SummaryPattern {
        variable: var.to_string(),
        patterns,
    }
}

/// Facts of `entity` → filter → exclusion → rank → property dedup →
/// selection for `round`.
pub fn summarize(
    entity: &Term,
    graph: &Graph,
    cfg: &SelectionConfig,
    round: usize,
    exclusion: &Exclusion,
) -> EntitySummary {
    let facts = filter_facts(fact_set(entity, graph), graph, cfg);
    let ranked: Vec<RankedFact> = facts
        .facts
        .iter()
        .filter(|f| !exclusion.excludes(f))
        .map(|f| rank(f, graph, cfg))
        .collect();
    let ranked = dedup_properties(ranked, cfg);
    match cfg.mode {
        SummaryMode::KSummary => group_and_select(entity, &ranked, cfg.k, round),
        SummaryMode::PerFeature => per_feature_select(entity, &ranked, round),
    }
}
