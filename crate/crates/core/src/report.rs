//! Run reports: JSON, TSV and plain text renderings of executed candidates.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::Term;
use crate::reformulate::ExecutedCandidate;

/// Answers listed per candidate.
pub const SAMPLE_SIZE: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OriginalReport {
    pub query: String,
    pub answer_count: usize,
    pub time_ms: u64,
    pub answers: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub id: usize,
    pub level: usize,
    pub rules_applied: Vec<String>,
    pub steps: Vec<String>,
    pub round: usize,
    pub query: String,
    pub answer_count: usize,
    pub new_answer_count: usize,
    pub time_ms: u64,
    pub sample_answers: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub original: OriginalReport,
    pub candidates: Vec<CandidateReport>,
}

fn render_rows<'a>(rows: impl IntoIterator<Item = &'a Vec<Term>>) -> Vec<Vec<String>> {
    rows.into_iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect()
}

fn cell<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("cell serializes")
}

impl RunReport {
    /// `executed[0]` must be the original query; the rest become candidates
    /// numbered from 1 in order.
    pub fn from_executed(executed: &[ExecutedCandidate]) -> RunReport {
        let (first, rest) = executed
            .split_first()
            .expect("the original is always executed");
        let original = OriginalReport {
            query: first.candidate.query.to_string(),
            answer_count: first.solutions.answer_count(),
            time_ms: first.solutions.elapsed_ms(),
            answers: render_rows(first.solutions.rows()),
        };
        let candidates = rest
            .iter()
            .enumerate()
            .map(|(i, e)| CandidateReport {
                id: i + 1,
                level: e.candidate.level,
                rules_applied: e
                    .candidate
                    .rules()
                    .iter()
                    .map(|r| r.name().to_string())
                    .collect(),
                steps: e.candidate.steps.iter().map(ToString::to_string).collect(),
                round: e.candidate.round,
                query: e.candidate.query.to_string(),
                answer_count: e.solutions.answer_count(),
                new_answer_count: e.new_answers.len(),
                time_ms: e.solutions.elapsed_ms(),
                sample_answers: render_rows(e.solutions.rows().iter().take(SAMPLE_SIZE)),
            })
            .collect();
        RunReport {
            original,
            candidates,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub const TSV_HEADER: &'static str =
        "id\tlevel\trules_applied\tsteps\tround\tanswer_count\tnew_answer_count\ttime_ms\tquery\tanswers";

    /// One row per query, the original first with id 0. List-valued cells
    /// hold compact JSON arrays so that every value survives a round trip.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::TSV_HEADER);
        out.push('\n');
        let o = &self.original;
        let _ = writeln!(
            out,
            "0\t0\t[]\t[]\t0\t{}\t0\t{}\t{}\t{}",
            o.answer_count,
            o.time_ms,
            o.query,
            cell(&o.answers)
        );
        for c in &self.candidates {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                c.id,
                c.level,
                cell(&c.rules_applied),
                cell(&c.steps),
                c.round,
                c.answer_count,
                c.new_answer_count,
                c.time_ms,
                c.query,
                cell(&c.sample_answers)
            );
        }
        out
    }

    /// Inverse of [`RunReport::to_tsv`].
    pub fn from_tsv(text: &str) -> Result<RunReport, TsvError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header == Self::TSV_HEADER => {}
            _ => {
                return Err(TsvError {
                    line: 1,
                    message: "missing header".into(),
                })
            }
        }
        let mut original = None;
        let mut candidates = Vec::new();
        for (idx, line) in lines {
            let line_no = idx + 1;
            let err = |message: String| TsvError {
                line: line_no,
                message,
            };
            let cells: Vec<&str> = line.split('\t').collect();
            let [id, level, rules, steps, round, count, new_count, time, query, answers] =
                cells[..]
            else {
                return Err(err(format!("expected 10 cells, found {}", cells.len())));
            };
            let num = |s: &str| s.parse::<usize>().map_err(|e| err(format!("{s:?}: {e}")));
            let list =
                |s: &str| serde_json::from_str::<Vec<String>>(s).map_err(|e| err(e.to_string()));
            let rows = serde_json::from_str::<Vec<Vec<String>>>(answers)
                .map_err(|e| err(e.to_string()))?;
            let id = num(id)?;
            let time_ms = num(time)? as u64;
            if id == 0 {
                original = Some(OriginalReport {
                    query: query.to_string(),
                    answer_count: num(count)?,
                    time_ms,
                    answers: rows,
                });
            } else {
                candidates.push(CandidateReport {
                    id,
                    level: num(level)?,
                    rules_applied: list(rules)?,
                    steps: list(steps)?,
                    round: num(round)?,
                    query: query.to_string(),
                    answer_count: num(count)?,
                    new_answer_count: num(new_count)?,
                    time_ms,
                    sample_answers: rows,
                });
            }
        }
        let original = original.ok_or(TsvError {
            line: 2,
            message: "missing original row".into(),
        })?;
        Ok(RunReport {
            original,
            candidates,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let o = &self.original;
        let _ = writeln!(out, "original: {}", o.query);
        let _ = writeln!(out, "  answers: {} ({} ms)", o.answer_count, o.time_ms);
        for row in o.answers.iter().take(SAMPLE_SIZE) {
            let _ = writeln!(out, "    {}", row.join(" "));
        }
        if o.answers.len() > SAMPLE_SIZE {
            let _ = writeln!(out, "    ... {} more", o.answers.len() - SAMPLE_SIZE);
        }
        for c in &self.candidates {
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "#{} level {} [{}]",
                c.id,
                c.level,
                c.rules_applied.join(", ")
            );
            for step in &c.steps {
                let _ = writeln!(out, "  step: {step}");
            }
            let _ = writeln!(out, "  query: {}", c.query);
            let _ = writeln!(
                out,
                "  answers: {} (new {}) ({} ms)",
                c.answer_count, c.new_answer_count, c.time_ms
            );
            for row in &c.sample_answers {
                let _ = writeln!(out, "    {}", row.join(" "));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("TSV line {line}: {message}")]
pub struct TsvError {
    pub line: usize,
    pub message: String,
}
