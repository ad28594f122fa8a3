//! Command-line driver: load data, parse the query, generate and execute
//! candidates, print a report.
//!
//! Exit codes: 0 on success, 1 on unreadable or malformed input, 2 on
//! usage errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use thiserror::Error;

use crate::entity::{parse_iri_list, SelectionConfig, SummaryMode};
use crate::query::{parse_query, BgpQuery, QueryError};
use crate::rdf::{compute_closure, parse_ntriples, scope_blank_nodes, Graph, ParseError};
use crate::reformulate::{execute_all, generate, GenerationConfig, Mode};
use crate::report::RunReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Relax,
    Reform,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Relax => Mode::Relax,
            ModeArg::Reform => Mode::Reform,
            ModeArg::Both => Mode::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Tsv,
    Text,
}

/// Relax and reformulate a query over an RDF graph.
#[derive(Debug, Parser)]
#[command(name = "kg-reform", version)]
struct Args {
    /// N-Triples file; repeat to merge several files.
    #[arg(long = "data", value_name = "FILE.nt", required = true)]
    data: Vec<PathBuf>,
    /// Query file (SELECT ... WHERE { ... }).
    #[arg(long, value_name = "FILE.rq")]
    query: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    mode: ModeArg,
    /// Summary size.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    max_level: u32,
    /// Cap on reported queries, the original included.
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(1..))]
    max_candidates: u32,
    /// Stop generating once this many distinct answers are found.
    #[arg(long, value_name = "K")]
    answer_threshold: Option<usize>,
    /// File with one property IRI per line never used in summaries.
    #[arg(long, value_name = "FILE")]
    blacklist: Option<PathBuf>,
    /// File with one IRI prefix per line, highest priority first.
    #[arg(long, value_name = "FILE")]
    namespace_priority: Option<PathBuf>,
    /// One summary fact per reformulation instead of k-fact summaries.
    #[arg(long)]
    per_feature: bool,
    /// Allow rdf:type facts in summaries.
    #[arg(long)]
    include_type_facts: bool,
    /// Use the data as given, without RDFS closure.
    #[arg(long)]
    no_closure: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read data file {path}: {source}")]
    DataIo { path: PathBuf, source: io::Error },
    #[error("data parse error in {path}: {source}")]
    DataParse { path: PathBuf, source: ParseError },
    #[error("cannot read query file {path}: {source}")]
    QueryIo { path: PathBuf, source: io::Error },
    #[error("query parse error in {path}: {source}")]
    QueryParse { path: PathBuf, source: QueryError },
    #[error("cannot read {path}: {source}")]
    ListIo { path: PathBuf, source: io::Error },
    #[error("cannot write report: {0}")]
    Output(#[from] io::Error),
}

fn load_graph(paths: &[PathBuf], closure: bool) -> Result<Graph, CliError> {
    let mut triples = Vec::new();
    for (i, path) in paths.iter().enumerate() {
        let file = File::open(path).map_err(|source| CliError::DataIo {
            path: path.clone(),
            source,
        })?;
        let parsed = parse_ntriples(BufReader::new(file)).map_err(|source| match source {
            ParseError::Io(source) => CliError::DataIo {
                path: path.clone(),
                source,
            },
            source => CliError::DataParse {
                path: path.clone(),
                source,
            },
        })?;
        // Blank node labels are local to their file.
        if paths.len() > 1 {
            triples.extend(scope_blank_nodes(parsed, &format!("f{i}")));
        } else {
            triples.extend(parsed);
        }
    }
    let graph = Graph::build(triples);
    Ok(if closure {
        compute_closure(graph)
    } else {
        graph
    })
}

fn load_query(path: &Path) -> Result<BgpQuery, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::QueryIo {
        path: path.to_path_buf(),
        source,
    })?;
    parse_query(&text).map_err(|source| CliError::QueryParse {
        path: path.to_path_buf(),
        source,
    })
}

fn read_list(path: &Path) -> Result<Vec<String>, CliError> {
    std::fs::read_to_string(path)
        .map(|text| parse_iri_list(&text))
        .map_err(|source| CliError::ListIo {
            path: path.to_path_buf(),
            source,
        })
}

fn config(args: &Args) -> Result<GenerationConfig, CliError> {
    let mut selection = SelectionConfig {
        k: args.k as usize,
        include_type_facts: args.include_type_facts,
        mode: if args.per_feature {
            SummaryMode::PerFeature
        } else {
            SummaryMode::KSummary
        },
        ..SelectionConfig::default()
    };
    if let Some(path) = &args.blacklist {
        selection.blacklist = read_list(path)?.into_iter().collect();
    }
    if let Some(path) = &args.namespace_priority {
        selection.namespace_priority = read_list(path)?;
    }
    Ok(GenerationConfig {
        max_level: args.max_level as usize,
        max_candidates: args.max_candidates as usize,
        answer_threshold: args.answer_threshold,
        selection,
        enable_rules: Mode::from(args.mode).rules(),
        ..GenerationConfig::default()
    })
}

fn execute(args: &Args, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = config(args)?;
    let query = load_query(&args.query)?;
    let graph = load_graph(&args.data, !args.no_closure)?;
    let candidates = generate(&query, &graph, &cfg);
    let report = RunReport::from_executed(&execute_all(&candidates, &graph));
    let rendered = match args.output {
        OutputFormat::Json => report.to_json() + "\n",
        OutputFormat::Tsv => report.to_tsv(),
        OutputFormat::Text => report.to_text(),
    };
    out.write_all(rendered.as_bytes())?;
    Ok(())
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&args, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
