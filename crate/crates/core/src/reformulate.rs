//! Candidate generation and execution.
//!
//! Candidates are produced level by level: level `n + 1` applies every
//! enabled rule to every pattern of every level-`n` candidate. Entity
//! constants are reformulated instead of simply relaxed when entity
//! reformulation applies. Duplicates up to variable renaming are dropped.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entity::{reformulate_at, SelectionConfig};
use crate::query::{
    evaluate, BgpQuery, FreshVars, PatternTerm, Position, SolutionSet, TriplePattern,
};
use crate::rdf::{Graph, Term};
use crate::relax::{
    literal_relax, simple_relax, superclass_relax, superproperty_relax, variable_typing,
    RewriteStep, RuleKind, TypingSource,
};

/// A rewritten query and the steps that produced it from the original.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub query: BgpQuery,
    pub steps: Vec<RewriteStep>,
    /// Number of applied steps; 0 for the original.
    pub level: usize,
    /// Summary round of the last entity reformulation step, 0 otherwise.
    pub round: usize,
}

impl Candidate {
    pub fn original(query: BgpQuery) -> Self {
        Candidate {
            query,
            steps: Vec::new(),
            level: 0,
            round: 0,
        }
    }

    pub fn rules(&self) -> Vec<RuleKind> {
        self.steps.iter().map(|s| s.kind).collect()
    }
}

/// Rule sets selected by `--mode`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Mode {
    Relax,
    Reform,
    #[default]
    Both,
}

impl Mode {
    pub fn rules(self) -> BTreeSet<RuleKind> {
        use RuleKind::*;
        let rules: &[RuleKind] = match self {
            Mode::Relax => &[SimpleRelax, Superclass, Superproperty, LiteralRelax],
            Mode::Reform => &[
                EntityReform,
                VariableTyping,
                Superclass,
                Superproperty,
                LiteralRelax,
            ],
            Mode::Both => &RuleKind::ALL,
        };
        rules.iter().copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationConfig {
    pub max_level: usize,
    /// Cap on emitted candidates, the original included.
    pub max_candidates: usize,
    /// Stop once the emitted candidates together have this many distinct answers.
    pub answer_threshold: Option<usize>,
    pub selection: SelectionConfig,
    pub enable_rules: BTreeSet<RuleKind>,
    pub typing: TypingSource,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            max_level: 2,
            max_candidates: 50,
            answer_threshold: None,
            selection: SelectionConfig::default(),
            enable_rules: Mode::Both.rules(),
            typing: TypingSource::Observed,
        }
    }
}

impl GenerationConfig {
    pub fn with_rules(rules: impl IntoIterator<Item = RuleKind>) -> Self {
        GenerationConfig {
            enable_rules: rules.into_iter().collect(),
            ..GenerationConfig::default()
        }
    }

    fn enabled(&self, rule: RuleKind) -> bool {
        self.enable_rules.contains(&rule)
    }
}

struct Child {
    body: Vec<TriplePattern>,
    step: RewriteStep,
    round: usize,
}

fn replace(body: &[TriplePattern], index: usize, with: Vec<TriplePattern>) -> Vec<TriplePattern> {
    let mut out = Vec::with_capacity(body.len() + with.len());
    out.extend_from_slice(&body[..index]);
    out.extend(with);
    out.extend_from_slice(&body[index + 1..]);
    out
}

fn typing_children(query: &BgpQuery, graph: &Graph, cfg: &GenerationConfig) -> Vec<Child> {
    let body = query.body();
    let mut children = Vec::new();
    for (i, tp) in body.iter().enumerate() {
        let Ok(types) = variable_typing(tp, graph, cfg.typing) else {
            continue;
        };
        let new: Vec<TriplePattern> = types.into_iter().filter(|t| !body.contains(t)).collect();
        if new.is_empty() {
            continue;
        }
        let detail = new
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" . ");
        let mut typed = body[..i].to_vec();
        typed.extend(new);
        typed.extend_from_slice(&body[i..]);
        children.push(Child {
            body: typed,
            step: RewriteStep::new(RuleKind::VariableTyping, i, detail),
            round: 0,
        });
    }
    children
}

fn entity_children(
    query: &BgpQuery,
    index: usize,
    position: Position,
    graph: &Graph,
    cfg: &GenerationConfig,
) -> Vec<Child> {
    let tp = &query.body()[index];
    let mut children = Vec::new();
    // Rounds run until the summary is exhausted; the candidate cap bounds them too.
    for round in 0..cfg.max_candidates {
        let mut fresh = FreshVars::for_query(query);
        let Ok(r) = reformulate_at(tp, position, graph, &cfg.selection, round, &mut fresh) else {
            break;
        };
        let facts = r.summary.as_ref().map_or(0, |s| s.ranked.len());
        let detail = format!(
            "{} {} {} -> ?{} with {facts} facts, round {round}",
            r.rule,
            position.name(),
            r.entity,
            r.variable
        );
        children.push(Child {
            body: replace(query.body(), index, r.patterns),
            step: RewriteStep::new(RuleKind::EntityReform, index, detail),
            round,
        });
    }
    children
}

fn expand(cand: &Candidate, graph: &Graph, cfg: &GenerationConfig) -> Vec<Child> {
    let query = &cand.query;
    let body = query.body();
    let mut children = Vec::new();
    if cand.level == 0 && cfg.enabled(RuleKind::VariableTyping) {
        children.extend(typing_children(query, graph, cfg));
    }
    let schema = graph.schema();
    for (i, tp) in body.iter().enumerate() {
        let mut schema_steps = Vec::new();
        if cfg.enabled(RuleKind::Superclass) {
            schema_steps.extend(superclass_relax(tp, schema, i).unwrap_or_default());
        }
        if cfg.enabled(RuleKind::Superproperty) {
            schema_steps.extend(superproperty_relax(tp, schema, i).unwrap_or_default());
        }
        for (relaxed, step) in schema_steps {
            children.push(Child {
                body: replace(body, i, vec![relaxed]),
                step,
                round: 0,
            });
        }
        if cfg.enabled(RuleKind::LiteralRelax) {
            let mut fresh = FreshVars::for_query(query);
            if let Ok((relaxed, step)) = literal_relax(tp, &mut fresh, i) {
                children.push(Child {
                    body: replace(body, i, vec![relaxed]),
                    step,
                    round: 0,
                });
            }
        }
        for position in Position::ALL {
            let Some(constant) = tp.get(position).as_const() else {
                continue;
            };
            if constant.is_literal() {
                continue;
            }
            let mut reformed = Vec::new();
            if cfg.enabled(RuleKind::EntityReform) && position != Position::Predicate {
                reformed = entity_children(query, i, position, graph, cfg);
            }
            if reformed.is_empty() && cfg.enabled(RuleKind::SimpleRelax) {
                let mut fresh = FreshVars::for_query(query);
                if let Ok((relaxed, step)) = simple_relax(tp, position, &mut fresh, i) {
                    children.push(Child {
                        body: replace(body, i, vec![relaxed]),
                        step,
                        round: 0,
                    });
                }
            }
            children.extend(reformed);
        }
    }
    children
}

/// Variables that may be renamed: everything outside the head.
fn free_vars(query: &BgpQuery) -> BTreeSet<String> {
    let head: BTreeSet<&str> = query.head().iter().map(String::as_str).collect();
    query
        .variables()
        .into_iter()
        .filter(|v| !head.contains(v.as_str()))
        .collect()
}

/// Body with renamable variables blanked out; equal for queries that are
/// equal up to renaming.
fn signature(query: &BgpQuery) -> (Vec<String>, bool, Vec<TriplePattern>) {
    let free = free_vars(query);
    let mut body: Vec<TriplePattern> = query
        .body()
        .iter()
        .map(|tp| {
            tp.map_vars(&|v| {
                if free.contains(v) {
                    String::new()
                } else {
                    v.to_string()
                }
            })
        })
        .collect();
    body.sort();
    (query.head().to_vec(), query.is_distinct(), body)
}

/// Whether a bijective renaming of non-head variables maps `a`'s body onto `b`'s.
pub fn equivalent_up_to_renaming(a: &BgpQuery, b: &BgpQuery) -> bool {
    if a.head() != b.head()
        || a.is_distinct() != b.is_distinct()
        || a.body().len() != b.body().len()
    {
        return false;
    }
    let free_a = free_vars(a);
    let free_b = free_vars(b);
    if free_a.len() != free_b.len() {
        return false;
    }

    struct Renaming<'q> {
        free_a: &'q BTreeSet<String>,
        free_b: &'q BTreeSet<String>,
        fwd: BTreeMap<&'q str, &'q str>,
        back: BTreeMap<&'q str, &'q str>,
    }

    impl<'q> Renaming<'q> {
        fn unify(
            &mut self,
            x: &'q PatternTerm,
            y: &'q PatternTerm,
            added: &mut Vec<&'q str>,
        ) -> bool {
            match (x, y) {
                (PatternTerm::Const(c), PatternTerm::Const(d)) => c == d,
                (PatternTerm::Var(v), PatternTerm::Var(w)) => {
                    match (self.free_a.contains(v), self.free_b.contains(w)) {
                        (false, false) => v == w,
                        (true, true) => match (self.fwd.get(v.as_str()), self.back.get(w.as_str()))
                        {
                            (Some(m), _) => *m == w.as_str(),
                            (None, Some(_)) => false,
                            (None, None) => {
                                self.fwd.insert(v, w);
                                self.back.insert(w, v);
                                added.push(v);
                                true
                            }
                        },
                        _ => false,
                    }
                }
                _ => false,
            }
        }

        fn undo(&mut self, added: Vec<&'q str>) {
            for v in added {
                let w = self.fwd.remove(v).expect("added mapping");
                self.back.remove(w);
            }
        }

        fn search(
            &mut self,
            a: &'q [TriplePattern],
            b: &'q [TriplePattern],
            used: &mut [bool],
        ) -> bool {
            let Some((first, rest)) = a.split_first() else {
                return true;
            };
            for (j, candidate) in b.iter().enumerate() {
                if used[j] {
                    continue;
                }
                let mut added = Vec::new();
                let ok = first
                    .terms()
                    .into_iter()
                    .zip(candidate.terms())
                    .all(|(x, y)| self.unify(x, y, &mut added));
                if ok {
                    used[j] = true;
                    if self.search(rest, b, used) {
                        return true;
                    }
                    used[j] = false;
                }
                self.undo(added);
            }
            false
        }
    }

    let mut renaming = Renaming {
        free_a: &free_a,
        free_b: &free_b,
        fwd: BTreeMap::new(),
        back: BTreeMap::new(),
    };
    let mut used = vec![false; b.body().len()];
    renaming.search(a.body(), b.body(), &mut used)
}
/// Seen queries, bucketed by signature.
#[derive(Default)]
struct Seen {
    buckets: BTreeMap<(Vec<String>, bool, Vec<TriplePattern>), Vec<BgpQuery>>,
}

impl Seen {
    /// Records `query`; false when an equivalent query was already recorded.
    fn insert(&mut self, query: &BgpQuery) -> bool {
        let bucket = self.buckets.entry(signature(query)).or_default();
        if bucket.iter().any(|q| equivalent_up_to_renaming(q, query)) {
            return false;
        }
        bucket.push(query.clone());
        true
    }
}

struct Threshold<'g> {
    graph: &'g Graph,
    limit: Option<usize>,
    answers: BTreeSet<Vec<Term>>,
}

impl Threshold<'_> {
    /// Adds the candidate's answers; true once the limit is reached.
    fn reached_after(&mut self, query: &BgpQuery) -> bool {
        let Some(limit) = self.limit else {
            return false;
        };
        self.answers
            .extend(evaluate(query, self.graph).rows().iter().cloned());
        self.answers.len() >= limit
    }
}

/// Generates candidates breadth-first by level. The first candidate is
/// always the unmodified input. Output is ordered by level, then by
/// generation order, and truncated by `max_candidates` and the answer
/// threshold.
pub fn generate(query: &BgpQuery, graph: &Graph, cfg: &GenerationConfig) -> Vec<Candidate> {
    let max_candidates = cfg.max_candidates.max(1);
    let mut seen = Seen::default();
    let mut threshold = Threshold {
        graph,
        limit: cfg.answer_threshold,
        answers: BTreeSet::new(),
    };
    let original = Candidate::original(query.clone());
    seen.insert(query);
    let mut out = vec![original.clone()];
    if threshold.reached_after(query) || out.len() >= max_candidates {
        return out;
    }

    let mut frontier = vec![original];
    for level in 1..=cfg.max_level {
        let mut next = Vec::new();
        for cand in &frontier {
            for child in expand(cand, graph, cfg) {
                let Ok(q) = cand.query.with_body(child.body) else {
                    continue;
                };
                if !seen.insert(&q) {
                    continue;
                }
                let mut steps = cand.steps.clone();
                steps.push(child.step);
                let new = Candidate {
                    query: q,
                    steps,
                    level,
                    round: child.round,
                };
                let stop = threshold.reached_after(&new.query);
                out.push(new.clone());
                next.push(new);
                if stop || out.len() >= max_candidates {
                    return out;
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    out
}

/// A candidate with its answers and the answers the original lacks.
#[derive(Debug, Clone)]
pub struct ExecutedCandidate {
    pub candidate: Candidate,
    pub solutions: SolutionSet,
    pub new_answers: Vec<Vec<Term>>,
}

/// Evaluates every candidate, in parallel, preserving input order. New
/// answers are computed against the first level-0 candidate; without one,
/// all answers are new.
pub fn execute_all(candidates: &[Candidate], graph: &Graph) -> Vec<ExecutedCandidate> {
    let solutions: Vec<SolutionSet> = candidates
        .par_iter()
        .map(|c| evaluate(&c.query, graph))
        .collect();
    let original: BTreeSet<&[Term]> = candidates
        .iter()
        .position(|c| c.level == 0)
        .map(|i| solutions[i].row_set())
        .unwrap_or_default();
    let new_answers: Vec<Vec<Vec<Term>>> = solutions
        .iter()
        .map(|s| {
            let mut rows: Vec<Vec<Term>> = s
                .rows()
                .iter()
                .filter(|r| !original.contains(r.as_slice()))
                .cloned()
                .collect();
            rows.dedup();
            rows
        })
        .collect();
    candidates
        .iter()
        .cloned()
        .zip(solutions)
        .zip(new_answers)
        .map(|((candidate, solutions), new_answers)| ExecutedCandidate {
            candidate,
            solutions,
            new_answers,
        })
        .collect()
}
