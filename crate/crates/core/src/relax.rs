//! Schema relaxations, simple relaxation and variable typing.
//!
//! Each rule rewrites one triple pattern. Relaxations widen the answer set
//! (over the RDFS closure); variable typing adds type assertions that every
//! existing match already satisfies.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::query::{FreshVars, PatternTerm, Position, TriplePattern};
use crate::rdf::{vocab, Graph, SchemaIndex, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    Superclass,
    Superproperty,
    LiteralRelax,
    SimpleRelax,
    VariableTyping,
    EntityReform,
}

impl RuleKind {
    pub const ALL: [RuleKind; 6] = [
        RuleKind::Superclass,
        RuleKind::Superproperty,
        RuleKind::LiteralRelax,
        RuleKind::SimpleRelax,
        RuleKind::VariableTyping,
        RuleKind::EntityReform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Superclass => "Superclass",
            RuleKind::Superproperty => "Superproperty",
            RuleKind::LiteralRelax => "LiteralRelax",
            RuleKind::SimpleRelax => "SimpleRelax",
            RuleKind::VariableTyping => "VariableTyping",
            RuleKind::EntityReform => "EntityReform",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One applied rule: which rule, on which body pattern, and what it substituted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RewriteStep {
    pub kind: RuleKind,
    pub source_pattern_index: usize,
    pub detail: String,
}

impl RewriteStep {
    pub fn new(kind: RuleKind, source_pattern_index: usize, detail: impl Into<String>) -> Self {
        let detail = detail.into();
        debug_assert!(!detail.is_empty());
        RewriteStep {
            kind,
            source_pattern_index,
            detail,
        }
    }
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[{}]: {}",
            self.kind, self.source_pattern_index, self.detail
        )
    }
}

/// The rule's precondition does not hold for the pattern. Not a failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule} not applicable: {reason}")]
pub struct NotApplicable {
    pub rule: RuleKind,
    pub reason: &'static str,
}

fn not_applicable(rule: RuleKind, reason: &'static str) -> NotApplicable {
    NotApplicable { rule, reason }
}

fn rdf_type() -> Term {
    Term::named(vocab::RDF_TYPE)
}

/// `<s, type, c1>` ⇒ `<s, type, c2>` for every direct superclass `c2` of `c1`.
pub fn superclass_relax(
    pattern: &TriplePattern,
    schema: &SchemaIndex,
    index: usize,
) -> Result<Vec<(TriplePattern, RewriteStep)>, NotApplicable> {
    const RULE: RuleKind = RuleKind::Superclass;
    if pattern.predicate_iri() != Some(vocab::RDF_TYPE) {
        return Err(not_applicable(RULE, "predicate is not rdf:type"));
    }
    let Some(class) = pattern.object().as_const().filter(|t| t.is_iri()) else {
        return Err(not_applicable(RULE, "object is not a class IRI"));
    };
    Ok(schema
        .direct_superclasses(class)
        .into_iter()
        .map(|sup| {
            let detail = format!("{class} -> {sup}");
            let relaxed = pattern
                .with(Position::Object, PatternTerm::Const(sup))
                .expect("object replacement keeps pattern valid");
            (relaxed, RewriteStep::new(RULE, index, detail))
        })
        .collect())
}

/// `<s, p1, o>` ⇒ `<s, p2, o>` for every direct superproperty `p2` of `p1`.
pub fn superproperty_relax(
    pattern: &TriplePattern,
    schema: &SchemaIndex,
    index: usize,
) -> Result<Vec<(TriplePattern, RewriteStep)>, NotApplicable> {
    const RULE: RuleKind = RuleKind::Superproperty;
    let PatternTerm::Const(property) = pattern.predicate() else {
        return Err(not_applicable(RULE, "predicate is a variable"));
    };
    if pattern.predicate_iri() == Some(vocab::RDF_TYPE) {
        return Err(not_applicable(RULE, "predicate is rdf:type"));
    }
    Ok(schema
        .direct_superproperties(property)
        .into_iter()
        .filter(Term::is_iri)
        .map(|sup| {
            let detail = format!("{property} -> {sup}");
            let relaxed = pattern
                .with(Position::Predicate, PatternTerm::Const(sup))
                .expect("IRI predicate keeps pattern valid");
            (relaxed, RewriteStep::new(RULE, index, detail))
        })
        .collect())
}

/// Replaces a literal object by a fresh variable.
pub fn literal_relax(
    pattern: &TriplePattern,
    fresh: &mut FreshVars,
    index: usize,
) -> Result<(TriplePattern, RewriteStep), NotApplicable> {
    const RULE: RuleKind = RuleKind::LiteralRelax;
    let Some(literal) = pattern.object().as_const().filter(|t| t.is_literal()) else {
        return Err(not_applicable(RULE, "object is not a literal"));
    };
    let var = fresh.next_var();
    let detail = format!("{literal} -> ?{var}");
    let relaxed = pattern
        .with(Position::Object, PatternTerm::Var(var))
        .expect("variable object keeps pattern valid");
    Ok((relaxed, RewriteStep::new(RULE, index, detail)))
}

/// Replaces the constant at `position` by a fresh variable.
pub fn simple_relax(
    pattern: &TriplePattern,
    position: Position,
    fresh: &mut FreshVars,
    index: usize,
) -> Result<(TriplePattern, RewriteStep), NotApplicable> {
    const RULE: RuleKind = RuleKind::SimpleRelax;
    let Some(constant) = pattern.get(position).as_const() else {
        return Err(not_applicable(RULE, "position already holds a variable"));
    };
    let var = fresh.next_var();
    let detail = format!("{} {constant} -> ?{var}", position.name());
    let relaxed = pattern
        .with(position, PatternTerm::Var(var))
        .expect("variable keeps pattern valid");
    Ok((relaxed, RewriteStep::new(RULE, index, detail)))
}

/// Where variable typing takes its classes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TypingSource {
    /// Types shared by every subject matching the pattern; falls back to
    /// `rdfs:domain` of the predicate when nothing matches.
    #[default]
    Observed,
    /// `rdfs:domain` declarations of the predicate only.
    Domain,
}

/// For `<?v, p, e>`, the type assertions `<?v, type, c>` to prepend.
///
/// With observed typing the classes are those held by every subject matching
/// the pattern, reduced to the most specific ones, so every existing match
/// still satisfies the typed pattern list.
pub fn variable_typing(
    pattern: &TriplePattern,
    graph: &Graph,
    source: TypingSource,
) -> Result<Vec<TriplePattern>, NotApplicable> {
    const RULE: RuleKind = RuleKind::VariableTyping;
    let Some(var) = pattern.subject().as_var() else {
        return Err(not_applicable(RULE, "subject is not a variable"));
    };
    let (Some(predicate), Some(object)) =
        (pattern.predicate().as_const(), pattern.object().as_const())
    else {
        return Err(not_applicable(
            RULE,
            "predicate and object must be constants",
        ));
    };
    let schema = graph.schema();
    let domain_classes = || -> BTreeSet<Term> {
        schema
            .domains_of(predicate)
            .map(|d| d.iter().filter(|c| c.is_iri()).cloned().collect())
            .unwrap_or_default()
    };

    let classes: BTreeSet<Term> = match source {
        TypingSource::Domain => domain_classes(),
        TypingSource::Observed => {
            let mut common: Option<BTreeSet<Term>> = None;
            for triple in graph.match_triples(None, Some(predicate), Some(object)) {
                let types: BTreeSet<Term> = schema
                    .types_of(triple.subject())
                    .map(|t| t.iter().filter(|c| c.is_iri()).cloned().collect())
                    .unwrap_or_default();
                common = Some(match common {
                    None => types,
                    Some(acc) => acc.intersection(&types).cloned().collect(),
                });
            }
            common.unwrap_or_else(domain_classes)
        }
    };

    Ok(schema
        .most_specific(&classes)
        .into_iter()
        .map(|class| {
            TriplePattern::new(
                PatternTerm::var(var),
                PatternTerm::Const(rdf_type()),
                PatternTerm::Const(class),
            )
            .expect("type pattern is valid")
        })
        .collect())
}
