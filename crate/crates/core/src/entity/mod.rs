//! Entity facts, fact ranking, entity summaries and the entity
//! reformulation rules.
//!
//! A fact of entity `e` is a `<p, o>` pair with `<e, p, o>` in the closed
//! graph. Facts are ranked by `specificity × popularity`, where specificity
//! is `log(|E| / #entities holding the fact)` and popularity is
//! `log(#triples with object o)`. A summary keeps the top `k` facts with
//! pairwise distinct object ranges.

mod facts;
mod reform;
mod scoring;
mod select;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use facts::{fact_set, filter_facts, Fact, FactSet};
pub use reform::{
    entity_rule, reformulate_at, reformulate_pattern, EntityRule, ReformError, Reformulation,
};
pub use scoring::{popularity, range_of, rank, specificity, RankedFact};
pub use select::{
    dedup_properties, group_and_select, local_name, per_feature_select, summarize, summary_pattern,
    EntitySummary, Exclusion, SummaryPattern,
};

/// How summaries are assembled from ranked facts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SummaryMode {
    /// Up to `k` facts with distinct ranges; round `r` takes the `r+1`-th
    /// member of every range group.
    #[default]
    KSummary,
    /// One fact per reformulation; round `r` takes the `r+1`-th ranked fact.
    PerFeature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
    Ten,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
            LogBase::Ten => x.log10(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    pub k: usize,
    pub blacklist: BTreeSet<String>,
    /// IRI prefixes, highest priority first. Breaks rank ties between
    /// predicates sharing a local name.
    pub namespace_priority: Vec<String>,
    pub exclude_literals: bool,
    pub exclude_unique: bool,
    pub include_type_facts: bool,
    pub mode: SummaryMode,
    pub log_base: LogBase,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            k: 3,
            blacklist: BTreeSet::new(),
            namespace_priority: Vec::new(),
            exclude_literals: true,
            exclude_unique: true,
            include_type_facts: false,
            mode: SummaryMode::KSummary,
            log_base: LogBase::Natural,
        }
    }
}

/// Reads an IRI-per-line file body: blank lines and `#` comments are
/// skipped, surrounding angle brackets are optional. A `#` only starts a
/// comment at the start of a line or after whitespace, so fragment IRIs
/// survive.
pub fn parse_iri_list(text: &str) -> Vec<String> {
    fn strip_comment(line: &str) -> &str {
        let mut prev_ws = true;
        for (i, ch) in line.char_indices() {
            if ch == '#' && prev_ws {
                return &line[..i];
            }
            prev_ws = ch.is_whitespace();
        }
        line
    }
    text.lines()
        .map(|line| strip_comment(line).trim())
        .filter(|line| !line.is_empty())
        .map(|line| {
            line.strip_prefix('<')
                .and_then(|l| l.strip_suffix('>'))
                .unwrap_or(line)
                .to_string()
        })
        .collect()
}
