//! Seeded property checks shared by the proptest suite and the acceptance
//! runner. Each returns `Err` with a description of the first violation.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use kg_reform::entity::{
    fact_set, rank, reformulate_at, summarize, EntityRule, Exclusion, LogBase, SelectionConfig,
    SummaryMode,
};
use kg_reform::query::{evaluate, BgpQuery, FreshVars, PatternTerm, Position, TriplePattern};
use kg_reform::rdf::{compute_closure, Graph, Term, Triple};
use kg_reform::reformulate::{
    equivalent_up_to_renaming, execute_all, generate, GenerationConfig, Mode,
};
use kg_reform::relax::{variable_typing, TypingSource};

use super::oracle::{
    brute_force_eval, equivalent_brute, naive_closure, sort_and_greedy, OracleGraph,
};
use super::random::{self, knowledge_graph, rng, schema_graph, small_graph, A, B};

type Check = Result<(), String>;

fn row_set(query: &BgpQuery, g: &Graph) -> BTreeSet<Vec<Term>> {
    evaluate(query, g).rows().iter().cloned().collect()
}

fn closed(triples: Vec<Triple>) -> Graph {
    compute_closure(Graph::build(triples))
}

pub fn random_selection(r: &mut ChaCha8Rng) -> SelectionConfig {
    let mut namespaces = vec![A.to_string(), B.to_string()];
    namespaces.shuffle(r);
    namespaces.truncate(r.gen_range(0..=2));
    let mut blacklist = BTreeSet::new();
    if r.gen_bool(0.2) {
        blacklist.insert(format!("{A}q"));
    }
    SelectionConfig {
        k: r.gen_range(1..=4),
        blacklist,
        namespace_priority: namespaces,
        exclude_literals: r.gen_bool(0.8),
        exclude_unique: r.gen_bool(0.8),
        include_type_facts: r.gen_bool(0.5),
        mode: SummaryMode::KSummary,
        log_base: LogBase::Natural,
    }
}

fn with_pattern_replaced(q: &BgpQuery, i: usize, patterns: &[TriplePattern]) -> BgpQuery {
    let mut body = q.body().to_vec();
    body.splice(i..=i, patterns.iter().cloned());
    q.with_body(body)
        .expect("same head over a superset of variables")
}

/// Summaries of every entity equal the sort-and-greedy oracle.
pub fn ranking_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let triples = knowledge_graph(&mut r, 60, 300);
    let oracle_triples = naive_closure(&triples);
    let g = closed(triples);
    let cfg = random_selection(&mut r);
    let og = OracleGraph::new(&oracle_triples);
    if og.entity_count() != g.count_entities() {
        return Err(format!(
            "entity count {} vs oracle {}",
            g.count_entities(),
            og.entity_count()
        ));
    }
    for e in og.entities() {
        let want = sort_and_greedy(og.scored_facts(e, &cfg), cfg.k);
        let got: Vec<(Term, Term)> = summarize(e, &g, &cfg, 0, &Exclusion::Nothing)
            .facts()
            .map(|f| (f.predicate.clone(), f.object.clone()))
            .collect();
        if got != want {
            return Err(format!("entity {e}: got {got:?}, oracle {want:?}"));
        }
    }
    Ok(())
}

/// Evaluation equals exhaustive assignment enumeration and does not depend
/// on pattern order.
pub fn eval_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let triples = small_graph(&mut r, 50);
    let q = random::query(&mut r, &triples, 3);
    let set: BTreeSet<Triple> = triples.iter().cloned().collect();
    let g = Graph::build(triples);
    let got = evaluate(&q, &g).rows().to_vec();
    let want = brute_force_eval(&q, &set);
    if got != want {
        return Err(format!(
            "{q}: got {} rows, brute force {}",
            got.len(),
            want.len()
        ));
    }
    let mut body = q.body().to_vec();
    body.shuffle(&mut r);
    let shuffled = q.with_body(body).unwrap();
    if evaluate(&shuffled, &g).rows() != got.as_slice() {
        return Err(format!("{q}: pattern order changes the answers"));
    }
    Ok(())
}

/// Closure equals the naive fixpoint and is idempotent.
pub fn closure_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let triples = schema_graph(&mut r, 200);
    let want = naive_closure(&triples);
    let once = closed(triples);
    let got: BTreeSet<Triple> = once.triples().collect();
    if got != want {
        let missing: Vec<_> = want
            .difference(&got)
            .take(3)
            .map(ToString::to_string)
            .collect();
        let extra: Vec<_> = got
            .difference(&want)
            .take(3)
            .map(ToString::to_string)
            .collect();
        return Err(format!("missing {missing:?}, extra {extra:?}"));
    }
    let twice: BTreeSet<Triple> = closed(got.iter().cloned().collect()).triples().collect();
    if twice != got {
        return Err("closure is not idempotent".into());
    }
    Ok(())
}

/// Containment counts of one case: (relaxations, reformulations).
#[derive(Debug, Default, Clone, Copy)]
pub struct Containment {
    pub relaxations: usize,
    pub reformulations: usize,
}

/// (a) one relaxation step keeps every answer, (b) every entity
/// reformulation keeps every answer, (c) a reformulation answers no more
/// than the simple relaxation of the same constant. Exclusions are
/// respected along the way.
pub fn containment_case(seed: u64) -> Result<Containment, String> {
    let mut r = rng(seed);
    let g = closed(knowledge_graph(&mut r, 12, 60));
    let all: Vec<Triple> = g.triples().collect();
    let q = random::query(&mut r, &all, 3);
    let base = row_set(&q, &g);
    let mut counts = Containment::default();

    let mut cfg = GenerationConfig::with_rules(Mode::Relax.rules());
    cfg.max_level = 1;
    cfg.max_candidates = usize::MAX;
    for c in generate(&q, &g, &cfg).iter().skip(1) {
        counts.relaxations += 1;
        let answers = row_set(&c.query, &g);
        if !base.is_subset(&answers) {
            return Err(format!("(a) {} lost answers of {q}", c.query));
        }
    }

    let mut sel = random_selection(&mut r);
    if r.gen_bool(0.3) {
        sel.mode = SummaryMode::PerFeature;
    }
    for (i, tp) in q.body().iter().enumerate() {
        for pos in Position::ALL {
            if tp.get(pos).as_const().is_none() {
                continue;
            }
            for round in 0..4 {
                let mut fresh = FreshVars::for_query(&q);
                let Ok(reform) = reformulate_at(tp, pos, &g, &sel, round, &mut fresh) else {
                    break;
                };
                counts.reformulations += 1;
                if let Some(summary) = &reform.summary {
                    for f in summary.facts() {
                        let violated = match reform.rule {
                            EntityRule::R2 | EntityRule::R4 | EntityRule::R5 => {
                                tp.predicate().as_const() == Some(&f.predicate)
                            }
                            EntityRule::R3 => {
                                tp.predicate().as_const() == Some(&f.predicate)
                                    && tp.object().as_const() == Some(&f.object)
                            }
                            _ => false,
                        };
                        if violated {
                            return Err(format!(
                                "{:?} on {tp} kept excluded fact {f}",
                                reform.rule
                            ));
                        }
                    }
                }
                let reformed = with_pattern_replaced(&q, i, &reform.patterns);
                let answers = row_set(&reformed, &g);
                if !base.is_subset(&answers) {
                    return Err(format!("(b) {reformed} lost answers of {q}"));
                }
                let sibling = with_pattern_replaced(&q, i, &reform.patterns[..1]);
                if !answers.is_subset(&row_set(&sibling, &g)) {
                    return Err(format!("(c) {reformed} exceeds {sibling}"));
                }
            }
        }
    }
    Ok(counts)
}

/// Replacing an entity by a variable that keeps any subset of the entity's
/// facts preserves every answer.
pub fn fact_subset_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let g = closed(knowledge_graph(&mut r, 12, 60));
    let all: Vec<Triple> = g.triples().collect();
    let q = random::query(&mut r, &all, 3);
    let base = row_set(&q, &g);
    for (i, tp) in q.body().iter().enumerate() {
        for pos in [Position::Subject, Position::Object] {
            let Some(e) = tp.get(pos).as_const().filter(|t| g.is_entity(t)) else {
                continue;
            };
            let mut fresh = FreshVars::for_query(&q);
            let v = fresh.next_var();
            let mut patterns = vec![tp.with(pos, PatternTerm::var(v.clone())).unwrap()];
            for f in fact_set(e, &g).facts {
                if r.gen_bool(0.5) {
                    patterns.push(
                        TriplePattern::new(
                            PatternTerm::var(v.clone()),
                            PatternTerm::Const(f.predicate),
                            PatternTerm::Const(f.object),
                        )
                        .unwrap(),
                    );
                }
            }
            let reformed = with_pattern_replaced(&q, i, &patterns);
            if !base.is_subset(&row_set(&reformed, &g)) {
                return Err(format!("{reformed} lost answers of {q}"));
            }
        }
    }
    Ok(())
}

/// Observed variable typing neither adds nor removes answers.
pub fn typing_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let g = closed(knowledge_graph(&mut r, 12, 60));
    let all: Vec<Triple> = g.triples().collect();
    let q = random::query(&mut r, &all, 3);
    let base = row_set(&q, &g);
    for (i, tp) in q.body().iter().enumerate() {
        let Ok(types) = variable_typing(tp, &g, TypingSource::Observed) else {
            continue;
        };
        let mut patterns = types;
        patterns.push(tp.clone());
        let typed = with_pattern_replaced(&q, i, &patterns);
        if row_set(&typed, &g) != base {
            return Err(format!("{typed} changes the answers of {q}"));
        }
    }
    Ok(())
}

/// Adding a conjunct never adds answers.
pub fn monotonicity_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let g = closed(knowledge_graph(&mut r, 12, 60));
    let all: Vec<Triple> = g.triples().collect();
    let q = random::query(&mut r, &all, 3);
    let extra = random::query(&mut r, &all, 1);
    let mut body = q.body().to_vec();
    body.extend(extra.body().iter().cloned());
    let bigger = q.with_body(body).unwrap();
    if !row_set(&bigger, &g).is_subset(&row_set(&q, &g)) {
        return Err(format!("{bigger} answers more than {q}"));
    }
    Ok(())
}

/// Generation is deterministic, respects its caps and level order, never
/// emits two equivalent queries, and execution keeps candidate order.
pub fn generation_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let g = closed(knowledge_graph(&mut r, 12, 60));
    let all: Vec<Triple> = g.triples().collect();
    let q = random::query(&mut r, &all, 3);
    let mut cfg = GenerationConfig {
        max_level: r.gen_range(1..=3),
        max_candidates: r.gen_range(1..=30),
        answer_threshold: r.gen_bool(0.3).then(|| r.gen_range(1..=20)),
        selection: random_selection(&mut r),
        enable_rules: [Mode::Relax, Mode::Reform, Mode::Both]
            .choose(&mut r)
            .unwrap()
            .rules(),
        ..GenerationConfig::default()
    };
    if r.gen_bool(0.3) {
        cfg.selection.mode = SummaryMode::PerFeature;
    }
    let cands = generate(&q, &g, &cfg);
    if cands != generate(&q, &g, &cfg) {
        return Err("generation is not deterministic".into());
    }
    if cands.is_empty() || cands[0].query != q || cands[0].level != 0 {
        return Err("the original does not come first".into());
    }
    if cands.len() > cfg.max_candidates {
        return Err(format!(
            "{} candidates over a cap of {}",
            cands.len(),
            cfg.max_candidates
        ));
    }
    for w in cands.windows(2) {
        if w[0].level > w[1].level {
            return Err("levels decrease".into());
        }
    }
    for c in &cands {
        if c.level != c.steps.len() || c.level > cfg.max_level {
            return Err(format!(
                "bad level {} with {} steps",
                c.level,
                c.steps.len()
            ));
        }
        if c.level > 0 && !c.rules().iter().all(|k| cfg.enable_rules.contains(k)) {
            return Err("disabled rule applied".into());
        }
    }
    for (i, a) in cands.iter().enumerate() {
        for b in &cands[i + 1..] {
            if equivalent_brute(&a.query, &b.query) {
                return Err(format!("equivalent candidates {} and {}", a.query, b.query));
            }
        }
    }
    if let Some(limit) = cfg.answer_threshold {
        // Only the last candidate may reach the threshold.
        let mut seen = BTreeSet::new();
        for (i, c) in cands.iter().enumerate() {
            seen.extend(row_set(&c.query, &g));
            if seen.len() >= limit && i + 1 != cands.len() {
                return Err(format!(
                    "threshold {limit} reached at {i} but generation went on"
                ));
            }
        }
    }
    let executed = execute_all(&cands, &g);
    let base = row_set(&q, &g);
    for (c, e) in cands.iter().zip(&executed) {
        if &e.candidate != c || e.solutions.rows() != evaluate(&c.query, &g).rows() {
            return Err("execution reorders or changes candidates".into());
        }
        if e.new_answers.iter().any(|row| base.contains(row)) {
            return Err("a new answer was already an original answer".into());
        }
    }
    Ok(())
}

/// The renaming check agrees with a brute-force permutation search.
pub fn renaming_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let triples = small_graph(&mut r, 30);
    let q = random::query(&mut r, &triples, 3);
    let free: Vec<String> = q
        .variables()
        .into_iter()
        .filter(|v| !q.head().contains(v))
        .collect();
    let mut targets: Vec<String> = (0..free.len()).map(|i| format!("w{i}")).collect();
    targets.shuffle(&mut r);
    let rename = |t: &PatternTerm| match t.as_var().and_then(|v| free.iter().position(|f| f == v)) {
        Some(i) => PatternTerm::var(targets[i].clone()),
        None => t.clone(),
    };
    let mut body: Vec<TriplePattern> = q
        .body()
        .iter()
        .map(|tp| {
            TriplePattern::new(
                rename(tp.subject()),
                rename(tp.predicate()),
                rename(tp.object()),
            )
            .unwrap()
        })
        .collect();
    body.shuffle(&mut r);
    let renamed = q.with_body(body).unwrap();
    if !equivalent_up_to_renaming(&q, &renamed) || !equivalent_brute(&q, &renamed) {
        return Err(format!("{q} and {renamed} should be equivalent"));
    }
    let other = random::query(&mut r, &triples, 3);
    if equivalent_up_to_renaming(&q, &other) != equivalent_brute(&q, &other) {
        return Err(format!(
            "{q} vs {other}: renaming check disagrees with brute force"
        ));
    }
    Ok(())
}

/// A rank is zero exactly when every entity holds the fact or the object
/// occurs once.
pub fn rank_zero_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let triples = knowledge_graph(&mut r, 20, 80);
    let oracle_triples = naive_closure(&triples);
    let og = OracleGraph::new(&oracle_triples);
    let g = closed(triples);
    let cfg = SelectionConfig::default();
    for e in og.entities() {
        for f in fact_set(e, &g).facts {
            let ranked = rank(&f, &g, &cfg);
            let df = og.holders(&f.predicate, &f.object);
            let zero = df == og.entity_count() || og.object_count(&f.object) == 1;
            if ranked.specificity < 0.0 || ranked.popularity < 0.0 || (ranked.rank == 0.0) != zero {
                return Err(format!("{e} {f}: rank {} (df {df})", ranked.rank));
            }
        }
    }
    Ok(())
}

/// Summaries under log base 2 and 10 select the same facts in the same
/// order as under the natural log, for every entity, both modes and the
/// first few rounds. Returns the number of summaries compared.
pub fn base_invariance(g: &Graph, base_cfg: &SelectionConfig) -> Result<usize, String> {
    let mut compared = 0;
    let entities: Vec<Term> = g.entities().cloned().collect();
    for mode in [SummaryMode::KSummary, SummaryMode::PerFeature] {
        for include_type_facts in [false, true] {
            for e in &entities {
                for round in 0..4 {
                    let pick = |log_base| -> Vec<(Term, Term)> {
                        let cfg = SelectionConfig {
                            mode,
                            include_type_facts,
                            log_base,
                            ..base_cfg.clone()
                        };
                        summarize(e, g, &cfg, round, &Exclusion::Nothing)
                            .facts()
                            .map(|f| (f.predicate.clone(), f.object.clone()))
                            .collect()
                    };
                    let natural = pick(LogBase::Natural);
                    for base in [LogBase::Two, LogBase::Ten] {
                        let other = pick(base);
                        if other != natural {
                            return Err(format!(
                                "{e} round {round} {mode:?} {base:?}: {other:?} vs {natural:?}"
                            ));
                        }
                    }
                    compared += 1;
                }
            }
        }
    }
    Ok(compared)
}

/// Answer counts of the failed university query and its rewrites.
#[derive(Debug, Clone)]
pub struct LubmCounts {
    pub triples: usize,
    pub original: usize,
    pub reformulations: Vec<usize>,
    /// The same constant replaced by a plain variable.
    pub relaxation: usize,
    /// Both constants of the query relaxed.
    pub full_relaxation: usize,
    pub elapsed: std::time::Duration,
}

/// Per-feature entity reformulation of the department in the failed
/// query: 0 = original < every reformulation <= simple relaxation.
pub fn lubm_case() -> Result<LubmCounts, String> {
    use kg_reform::relax::{simple_relax, RuleKind};

    use super::lubm;

    let start = std::time::Instant::now();
    let triples = lubm::generate(7);
    let n = triples.len();
    let g = closed(triples);
    let q = lubm::q2();
    let cfg = GenerationConfig {
        max_level: 1,
        selection: SelectionConfig {
            mode: SummaryMode::PerFeature,
            include_type_facts: true,
            ..SelectionConfig::default()
        },
        enable_rules: [RuleKind::EntityReform].into_iter().collect(),
        ..GenerationConfig::default()
    };
    let executed = execute_all(&generate(&q, &g, &cfg), &g);
    let original = executed[0].solutions.answer_count();
    let reformulations: Vec<usize> = executed[1..]
        .iter()
        .map(|e| e.solutions.answer_count())
        .collect();

    let mut fresh = FreshVars::for_query(&q);
    let mut relax_at = |q: &BgpQuery, local: &str| -> BgpQuery {
        let i = q
            .body()
            .iter()
            .position(|tp| tp.predicate_iri().is_some_and(|p| p.ends_with(local)))
            .expect("pattern present");
        let (relaxed, _) = simple_relax(&q.body()[i], Position::Object, &mut fresh, i).unwrap();
        with_pattern_replaced(q, i, &[relaxed])
    };
    let sibling = relax_at(&q, "#worksFor");
    let both = relax_at(&sibling, "#researchInterest");
    let counts = LubmCounts {
        triples: n,
        original,
        reformulations,
        relaxation: evaluate(&sibling, &g).answer_count(),
        full_relaxation: evaluate(&both, &g).answer_count(),
        elapsed: start.elapsed(),
    };
    let holds = counts.original == 0
        && !counts.reformulations.is_empty()
        && counts
            .reformulations
            .iter()
            .all(|&c| 0 < c && c <= counts.relaxation)
        && counts.relaxation <= counts.full_relaxation
        && executed[1..]
            .iter()
            .all(|e| e.candidate.rules() == [RuleKind::EntityReform]);
    if holds {
        Ok(counts)
    } else {
        Err(format!("{counts:?}"))
    }
}
