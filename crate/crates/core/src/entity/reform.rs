use std::fmt;

use thiserror::Error;

use super::{summarize, summary_pattern, EntitySummary, Exclusion, Fact, SelectionConfig};
use crate::query::{FreshVars, PatternTerm, Position, TriplePattern};
use crate::rdf::{vocab, Graph, Term};

/// The six entity pattern shapes, named after the position and binding of
/// the remaining terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityRule {
    /// `<e, ?p, ?o>`
    R1,
    /// `<e, P, ?o>`
    R2,
    /// `<e, P, o>`
    R3,
    /// `<s, p, e>`
    R4,
    /// `<?s, p, e>`
    R5,
    /// `<?s, ?p, e>`
    R6,
}

impl fmt::Display for EntityRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReformError {
    #[error("not an entity pattern: {0}")]
    NotEntityPattern(&'static str),
    #[error("no facts left to summarize")]
    EmptySummary,
}

/// Result of rewriting one entity pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct Reformulation {
    pub rule: EntityRule,
    pub position: Position,
    pub entity: Term,
    pub variable: String,
    /// The rewritten pattern followed by the summary patterns.
    pub patterns: Vec<TriplePattern>,
    pub summary: Option<EntitySummary>,
}

/// Shape of `pattern` with respect to the constant at `position`.
pub fn entity_rule(pattern: &TriplePattern, position: Position) -> Result<EntityRule, ReformError> {
    let s = pattern.subject().is_var();
    let p = pattern.predicate().is_var();
    let o = pattern.object().is_var();
    match position {
        Position::Subject if s => Err(ReformError::NotEntityPattern("subject is a variable")),
        Position::Subject => match (p, o) {
            (true, true) => Ok(EntityRule::R1),
            (false, true) => Ok(EntityRule::R2),
            (false, false) => Ok(EntityRule::R3),
            (true, false) => Err(ReformError::NotEntityPattern("<e, ?p, o> has no rule")),
        },
        Position::Object if o => Err(ReformError::NotEntityPattern("object is a variable")),
        Position::Object => match (s, p) {
            (false, false) => Ok(EntityRule::R4),
            (true, false) => Ok(EntityRule::R5),
            (true, true) => Ok(EntityRule::R6),
            (false, true) => Err(ReformError::NotEntityPattern("<s, ?p, e> has no rule")),
        },
        Position::Predicate => Err(ReformError::NotEntityPattern("predicates are not entities")),
    }
}

/// Predicates whose object is a class or property rather than an entity.
fn schema_valued(predicate: &PatternTerm) -> bool {
    matches!(
        predicate.as_const().and_then(Term::as_iri),
        Some(
            vocab::RDF_TYPE
                | vocab::RDFS_SUBCLASS_OF
                | vocab::RDFS_SUBPROPERTY_OF
                | vocab::RDFS_DOMAIN
        )
    )
}

/// Rewrites the entity at `position`: the entity becomes a fresh variable
/// and, except for `<e, ?p, ?o>`, the summary of round `round` is appended
/// as patterns on that variable. The query's own predicate (or, for
/// `<e, P, o>`, the pair `<P, o>`) is never appended.
pub fn reformulate_at(
    pattern: &TriplePattern,
    position: Position,
    graph: &Graph,
    cfg: &SelectionConfig,
    round: usize,
    fresh: &mut FreshVars,
) -> Result<Reformulation, ReformError> {
    let rule = entity_rule(pattern, position)?;
    let entity = pattern
        .get(position)
        .as_const()
        .expect("rule shapes hold a constant here")
        .clone();
    if position == Position::Object && schema_valued(pattern.predicate()) {
        return Err(ReformError::NotEntityPattern(
            "object of a schema statement",
        ));
    }
    let hierarchy = matches!(
        pattern.predicate_iri(),
        Some(vocab::RDFS_SUBCLASS_OF | vocab::RDFS_SUBPROPERTY_OF | vocab::RDFS_DOMAIN)
    );
    if position == Position::Subject && hierarchy {
        return Err(ReformError::NotEntityPattern(
            "subject of a schema statement",
        ));
    }
    if !entity.is_iri() || !graph.is_entity(&entity) {
        return Err(ReformError::NotEntityPattern(
            "constant is not an entity of the graph",
        ));
    }

    let exclusion = match rule {
        EntityRule::R1 | EntityRule::R6 => Exclusion::Nothing,
        EntityRule::R2 | EntityRule::R4 | EntityRule::R5 => Exclusion::Predicate(
            pattern
                .predicate()
                .as_const()
                .expect("constant predicate")
                .clone(),
        ),
        EntityRule::R3 => Exclusion::Pair(Fact::new(
            pattern
                .predicate()
                .as_const()
                .expect("constant predicate")
                .clone(),
            pattern
                .object()
                .as_const()
                .expect("constant object")
                .clone(),
        )),
    };

    let summary = if rule == EntityRule::R1 {
        if round > 0 {
            return Err(ReformError::EmptySummary);
        }
        None
    } else {
        let summary = summarize(&entity, graph, cfg, round, &exclusion);
        if summary.is_empty() {
            return Err(ReformError::EmptySummary);
        }
        Some(summary)
    };

    let variable = fresh.next_var();
    let rewritten = pattern
        .with(position, PatternTerm::var(variable.clone()))
        .expect("variable keeps the pattern valid");
    let mut patterns = vec![rewritten];
    if let Some(summary) = &summary {
        patterns.extend(summary_pattern(summary, &variable).patterns);
    }
    Ok(Reformulation {
        rule,
        position,
        entity,
        variable,
        patterns,
        summary,
    })
}

/// Tries the subject position first, then the object position.
pub fn reformulate_pattern(
    pattern: &TriplePattern,
    graph: &Graph,
    cfg: &SelectionConfig,
    round: usize,
    fresh: &mut FreshVars,
) -> Result<Reformulation, ReformError> {
    match reformulate_at(pattern, Position::Subject, graph, cfg, round, fresh) {
        Err(ReformError::NotEntityPattern(_)) => {
            reformulate_at(pattern, Position::Object, graph, cfg, round, fresh)
        }
        other => other,
    }
}
