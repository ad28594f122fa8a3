use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::rdf::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
    #[error("a literal cannot be the subject of a pattern")]
    LiteralSubject,
    #[error("pattern predicate must be a variable or an IRI, found {0}")]
    InvalidPredicate(String),
    #[error("head variable ?{0} does not occur in the query body")]
    HeadVariableNotInBody(String),
}

/// Variable names start with a letter or underscore, followed by letters,
/// digits or underscores. The underscore lead is reserved for generated
/// variables (`_rlx1`, `_rlx2`, ...).
pub fn is_valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternTerm {
    /// Variable name without the leading `?`.
    Var(String),
    Const(Term),
}

impl PatternTerm {
    pub fn var(name: impl Into<String>) -> Self {
        PatternTerm::Var(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Const(_) => None,
        }
    }

    pub fn as_const(&self) -> Option<&Term> {
        match self {
            PatternTerm::Const(t) => Some(t),
            PatternTerm::Var(_) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, PatternTerm::Var(_))
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Const(t)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => write!(f, "?{v}"),
            PatternTerm::Const(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    Subject,
    Predicate,
    Object,
}

impl Position {
    pub const ALL: [Position; 3] = [Position::Subject, Position::Predicate, Position::Object];

    pub fn name(self) -> &'static str {
        match self {
            Position::Subject => "subject",
            Position::Predicate => "predicate",
            Position::Object => "object",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePattern {
    subject: PatternTerm,
    predicate: PatternTerm,
    object: PatternTerm,
}

fn check_var(term: &PatternTerm) -> Result<(), PatternError> {
    match term {
        PatternTerm::Var(v) if !is_valid_var_name(v) => {
            Err(PatternError::InvalidVariable(v.clone()))
        }
        _ => Ok(()),
    }
}

impl TriplePattern {
    pub fn new(
        subject: PatternTerm,
        predicate: PatternTerm,
        object: PatternTerm,
    ) -> Result<Self, PatternError> {
        check_var(&subject)?;
        check_var(&predicate)?;
        check_var(&object)?;
        if matches!(&subject, PatternTerm::Const(t) if t.is_literal()) {
            return Err(PatternError::LiteralSubject);
        }
        if let PatternTerm::Const(t) = &predicate {
            if !t.is_iri() {
                return Err(PatternError::InvalidPredicate(t.to_string()));
            }
        }
        Ok(TriplePattern {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &PatternTerm {
        &self.subject
    }

    pub fn predicate(&self) -> &PatternTerm {
        &self.predicate
    }

    pub fn object(&self) -> &PatternTerm {
        &self.object
    }

    pub fn get(&self, position: Position) -> &PatternTerm {
        match position {
            Position::Subject => &self.subject,
            Position::Predicate => &self.predicate,
            Position::Object => &self.object,
        }
    }

    /// Copy of the pattern with one position replaced.
    pub fn with(&self, position: Position, term: PatternTerm) -> Result<Self, PatternError> {
        let mut parts = [
            self.subject.clone(),
            self.predicate.clone(),
            self.object.clone(),
        ];
        let slot = match position {
            Position::Subject => 0,
            Position::Predicate => 1,
            Position::Object => 2,
        };
        parts[slot] = term;
        let [s, p, o] = parts;
        TriplePattern::new(s, p, o)
    }

    pub fn terms(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms().into_iter().filter_map(PatternTerm::as_var)
    }

    /// The IRI of a constant predicate.
    pub fn predicate_iri(&self) -> Option<&str> {
        self.predicate.as_const().and_then(Term::as_iri)
    }

    pub(crate) fn map_vars(&self, rename: &impl Fn(&str) -> String) -> TriplePattern {
        let map = |t: &PatternTerm| match t {
            PatternTerm::Var(v) => PatternTerm::Var(rename(v)),
            c => c.clone(),
        };
        TriplePattern {
            subject: map(&self.subject),
            predicate: map(&self.predicate),
            object: map(&self.object),
        }
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

/// Assignment of terms to variables.
pub type Binding = BTreeMap<String, Term>;

/// Replaces every variable bound in `binding` by its term; unbound variables stay.
///
/// Bindings produced by evaluation always keep subject and predicate
/// positions valid; arbitrary bindings are substituted verbatim.
pub fn substitute(pattern: &TriplePattern, binding: &Binding) -> TriplePattern {
    let sub = |t: &PatternTerm| match t {
        PatternTerm::Var(v) => binding
            .get(v)
            .map_or_else(|| t.clone(), |term| PatternTerm::Const(term.clone())),
        c => c.clone(),
    };
    TriplePattern {
        subject: sub(&pattern.subject),
        predicate: sub(&pattern.predicate),
        object: sub(&pattern.object),
    }
}

/// A conjunctive query: projected head variables over a body of triple patterns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BgpQuery {
    head: Vec<String>,
    body: Vec<TriplePattern>,
    distinct: bool,
}

impl BgpQuery {
    pub fn new(
        head: Vec<String>,
        body: Vec<TriplePattern>,
        distinct: bool,
    ) -> Result<Self, PatternError> {
        let mut seen = BTreeSet::new();
        let body: Vec<TriplePattern> = body
            .into_iter()
            .filter(|tp| seen.insert(tp.clone()))
            .collect();
        let vars: BTreeSet<&str> = body.iter().flat_map(TriplePattern::variables).collect();
        if let Some(missing) = head.iter().find(|h| !vars.contains(h.as_str())) {
            return Err(PatternError::HeadVariableNotInBody(missing.clone()));
        }
        Ok(BgpQuery {
            head,
            body,
            distinct,
        })
    }

    pub fn head(&self) -> &[String] {
        &self.head
    }

    pub fn body(&self) -> &[TriplePattern] {
        &self.body
    }

    pub fn is_distinct(&self) -> bool {
        self.distinct
    }

    /// Same head and modifiers over a new body. Repeated patterns are dropped.
    pub fn with_body(&self, body: Vec<TriplePattern>) -> Result<Self, PatternError> {
        BgpQuery::new(self.head.clone(), body, self.distinct)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.body
            .iter()
            .flat_map(TriplePattern::variables)
            .map(str::to_owned)
            .collect()
    }
}

impl fmt::Display for BgpQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT ")?;
        if self.distinct {
            f.write_str("DISTINCT ")?;
        }
        if self.head.is_empty() {
            f.write_str("* ")?;
        }
        for h in &self.head {
            write!(f, "?{h} ")?;
        }
        f.write_str("WHERE {")?;
        for tp in &self.body {
            write!(f, " {tp} .")?;
        }
        f.write_str(" }")
    }
}

/// Generator of variable names that do not occur in a given query.
#[derive(Debug, Clone)]
pub struct FreshVars {
    used: BTreeSet<String>,
    counter: usize,
}

impl FreshVars {
    pub fn for_query(query: &BgpQuery) -> Self {
        let mut used = query.variables();
        used.extend(query.head.iter().cloned());
        FreshVars { used, counter: 0 }
    }

    pub fn next_var(&mut self) -> String {
        loop {
            self.counter += 1;
            let name = format!("_rlx{}", self.counter);
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}
