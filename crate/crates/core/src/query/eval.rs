//! Backtracking BGP evaluation over the graph indexes.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use super::pattern::{BgpQuery, Binding, PatternTerm};
use crate::rdf::{Graph, Term, TermId};

/// Projected answers of one evaluation.
///
/// Rows are sorted in term order; with `DISTINCT` they are also unique.
#[derive(Debug, Clone)]
pub struct SolutionSet {
    head: Vec<String>,
    rows: Vec<Vec<Term>>,
    elapsed: Duration,
}

impl SolutionSet {
    pub fn head(&self) -> &[String] {
        &self.head
    }

    pub fn rows(&self) -> &[Vec<Term>] {
        &self.rows
    }

    pub fn answer_count(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn elapsed(&self) -> Duration {
        self.elapsed
    }

    pub fn elapsed_ms(&self) -> u64 {
        u64::try_from(self.elapsed.as_millis()).unwrap_or(u64::MAX)
    }

    pub fn row_set(&self) -> BTreeSet<&[Term]> {
        self.rows.iter().map(Vec::as_slice).collect()
    }

    pub fn bindings(&self) -> impl Iterator<Item = Binding> + '_ {
        self.rows
            .iter()
            .map(|row| self.head.iter().cloned().zip(row.iter().cloned()).collect())
    }
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Const(TermId),
    Var(usize),
}

struct Plan<'g> {
    graph: &'g Graph,
    patterns: Vec<[Slot; 3]>,
    head: Vec<usize>,
}

/// Greedy join order: repeatedly take the pattern with the most positions
/// bound (constants or already-bound variables); ties go to the earlier pattern.
fn join_order(patterns: &[[Slot; 3]], var_count: usize) -> Vec<usize> {
    let mut bound = vec![false; var_count];
    let mut remaining: Vec<usize> = (0..patterns.len()).collect();
    let mut order = Vec::with_capacity(patterns.len());
    while !remaining.is_empty() {
        let score = |i: usize| {
            patterns[i]
                .iter()
                .filter(|slot| match slot {
                    Slot::Const(_) => true,
                    Slot::Var(v) => bound[*v],
                })
                .count()
        };
        let (pick, _) = remaining
            .iter()
            .enumerate()
            .max_by(|(_, &a), (_, &b)| score(a).cmp(&score(b)).then(b.cmp(&a)))
            .expect("non-empty");
        let chosen = remaining.remove(pick);
        for slot in &patterns[chosen] {
            if let Slot::Var(v) = slot {
                bound[*v] = true;
            }
        }
        order.push(chosen);
    }
    order
}

impl Plan<'_> {
    fn search(&self, depth: usize, slots: &mut Vec<Option<TermId>>, out: &mut Vec<Vec<TermId>>) {
        let Some(pattern) = self.patterns.get(depth) else {
            out.push(
                self.head
                    .iter()
                    .map(|&v| slots[v].expect("head bound"))
                    .collect(),
            );
            return;
        };
        let value = |slot: &Slot, slots: &[Option<TermId>]| match slot {
            Slot::Const(id) => Some(*id),
            Slot::Var(v) => slots[*v],
        };
        let (s, p, o) = (
            value(&pattern[0], slots),
            value(&pattern[1], slots),
            value(&pattern[2], slots),
        );
        for (ks, kp, ko) in self.graph.match_ids(s, p, o) {
            let mut newly_bound = Vec::new();
            let mut consistent = true;
            for (slot, got) in pattern.iter().zip([ks, kp, ko]) {
                if let Slot::Var(v) = slot {
                    match slots[*v] {
                        Some(existing) if existing != got => {
                            consistent = false;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            slots[*v] = Some(got);
                            newly_bound.push(*v);
                        }
                    }
                }
            }
            if consistent {
                self.search(depth + 1, slots, out);
            }
            for v in newly_bound {
                slots[v] = None;
            }
        }
    }
}

/// Evaluates the query over `graph`. The graph is expected to be closed when
/// answers over the RDFS closure are wanted; evaluation itself only reads
/// stored triples.
pub fn evaluate(query: &BgpQuery, graph: &Graph) -> SolutionSet {
    let start = Instant::now();
    let head = query.head().to_vec();

    let mut var_index: BTreeMap<&str, usize> = BTreeMap::new();
    let mut compiled = Vec::with_capacity(query.body().len());
    let mut unknown_constant = false;
    for tp in query.body() {
        let mut slots = [Slot::Var(0); 3];
        for (slot, term) in slots.iter_mut().zip(tp.terms()) {
            *slot = match term {
                PatternTerm::Var(v) => {
                    let next = var_index.len();
                    Slot::Var(*var_index.entry(v.as_str()).or_insert(next))
                }
                PatternTerm::Const(t) => match graph.term_id(t) {
                    Some(id) => Slot::Const(id),
                    None => {
                        unknown_constant = true;
                        Slot::Const(TermId::MAX)
                    }
                },
            };
        }
        compiled.push(slots);
    }

    let mut rows = Vec::new();
    if !unknown_constant {
        let order = join_order(&compiled, var_index.len());
        let plan = Plan {
            graph,
            patterns: order.iter().map(|&i| compiled[i]).collect(),
            head: head.iter().map(|h| var_index[h.as_str()]).collect(),
        };
        let mut slots = vec![None; var_index.len()];
        let mut ids = Vec::new();
        plan.search(0, &mut slots, &mut ids);
        rows = ids
            .into_iter()
            .map(|row| row.into_iter().map(|id| graph.term(id).clone()).collect())
            .collect();
    }
    rows.sort();
    if query.is_distinct() {
        rows.dedup();
    }
    SolutionSet {
        head,
        rows,
        elapsed: start.elapsed(),
    }
}
