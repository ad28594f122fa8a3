//! Line-oriented N-Triples reader.
//!
//! Supports the common subset: IRIs in angle brackets, blank nodes as
//! `_:label`, and plain, language-tagged or datatyped literals with the
//! usual backslash escapes. One statement per line, terminated by `.`.

use std::io::BufRead;

use thiserror::Error;

use super::term::{Term, TermError, Triple};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}: {text:?}")]
    Syntax {
        line: usize,
        text: String,
        message: String,
    },
    #[error("read error: {0}")]
    Io(#[from] std::io::Error),
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. } => Some(*line),
            ParseError::Io(_) => None,
        }
    }
}

/// A lexing failure inside a line; `offset` is a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at byte {offset}: {message}")]
pub struct LexError {
    pub offset: usize,
    pub message: String,
}

impl LexError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        LexError {
            offset,
            message: message.into(),
        }
    }
}

/// Reads `<...>` starting at `start` (which must point at `<`). Returns the IRI and the end offset.
pub(crate) fn read_iri_ref(input: &str, start: usize) -> Result<(String, usize), LexError> {
    debug_assert_eq!(input.as_bytes().get(start), Some(&b'<'));
    let rest = &input[start + 1..];
    let Some(close) = rest.find('>') else {
        return Err(LexError::new(start, "unterminated IRI"));
    };
    let iri = &rest[..close];
    match Term::iri(iri) {
        Ok(_) => Ok((unescape(iri, start + 1)?, start + close + 2)),
        Err(TermError::EmptyIri) => Err(LexError::new(start, "empty IRI")),
        Err(_) => Err(LexError::new(start, "whitespace in IRI")),
    }
}

/// Reads a quoted string (single or double quotes) starting at `start`.
pub(crate) fn read_quoted(input: &str, start: usize) -> Result<(String, usize), LexError> {
    let quote = input[start..]
        .chars()
        .next()
        .filter(|c| *c == '"' || *c == '\'')
        .ok_or_else(|| LexError::new(start, "expected a quoted string"))?;
    let body_start = start + 1;
    let mut escaped = false;
    for (i, c) in input[body_start..].char_indices() {
        if escaped {
            escaped = false;
            continue;
        }
        match c {
            '\\' => escaped = true,
            '\n' | '\r' => return Err(LexError::new(start, "line break inside literal")),
            c if c == quote => {
                let raw = &input[body_start..body_start + i];
                return Ok((unescape(raw, body_start)?, body_start + i + 1));
            }
            _ => {}
        }
    }
    Err(LexError::new(start, "unterminated literal"))
}

fn unescape(raw: &str, base: usize) -> Result<String, LexError> {
    if !raw.contains('\\') {
        return Ok(raw.to_owned());
    }
    let mut out = String::with_capacity(raw.len());
    let mut chars = raw.char_indices();
    while let Some((i, c)) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        let Some((_, esc)) = chars.next() else {
            return Err(LexError::new(base + i, "dangling escape"));
        };
        match esc {
            't' => out.push('\t'),
            'n' => out.push('\n'),
            'r' => out.push('\r'),
            'b' => out.push('\u{8}'),
            'f' => out.push('\u{c}'),
            '"' | '\'' | '\\' => out.push(esc),
            'u' | 'U' => {
                let width = if esc == 'u' { 4 } else { 8 };
                let hex: String = chars.by_ref().take(width).map(|(_, h)| h).collect();
                let decoded = (hex.len() == width)
                    .then(|| u32::from_str_radix(&hex, 16).ok())
                    .flatten()
                    .and_then(char::from_u32)
                    .ok_or_else(|| LexError::new(base + i, "invalid unicode escape"))?;
                out.push(decoded);
            }
            other => return Err(LexError::new(base + i, format!("unknown escape \\{other}"))),
        }
    }
    Ok(out)
}

fn is_label_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

/// Reads `_:label` starting at `start`.
pub(crate) fn read_blank(input: &str, start: usize) -> Result<(String, usize), LexError> {
    let rest = &input[start..];
    if !rest.starts_with("_:") {
        return Err(LexError::new(start, "expected blank node"));
    }
    let label_len = rest[2..]
        .char_indices()
        .find(|(_, c)| !is_label_char(*c))
        .map_or(rest.len() - 2, |(i, _)| i);
    if label_len == 0 {
        return Err(LexError::new(start, "empty blank node label"));
    }
    Ok((rest[2..2 + label_len].to_owned(), start + 2 + label_len))
}

/// Reads an optional `@lang` or `^^<dt>` suffix after a literal body.
pub(crate) fn read_literal_suffix(
    input: &str,
    lexical: String,
    pos: usize,
) -> Result<(Term, usize), LexError> {
    let rest = &input[pos..];
    if let Some(tag) = rest.strip_prefix('@') {
        let len = tag
            .char_indices()
            .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '-'))
            .map_or(tag.len(), |(i, _)| i);
        if len == 0 {
            return Err(LexError::new(pos, "empty language tag"));
        }
        return Ok((Term::lang_literal(lexical, &tag[..len]), pos + 1 + len));
    }
    if rest.starts_with("^^<") {
        let (dt, end) = read_iri_ref(input, pos + 2)?;
        return Ok((Term::typed_literal(lexical, dt), end));
    }
    Ok((Term::literal(lexical), pos))
}

fn skip_ws(input: &str, pos: usize) -> usize {
    input[pos..]
        .char_indices()
        .find(|(_, c)| !c.is_whitespace())
        .map_or(input.len(), |(i, _)| pos + i)
}

fn read_term(input: &str, pos: usize) -> Result<(Term, usize), LexError> {
    match input[pos..].chars().next() {
        Some('<') => read_iri_ref(input, pos).map(|(iri, end)| (Term::Iri(iri), end)),
        Some('_') => read_blank(input, pos).map(|(label, end)| (Term::Blank(label), end)),
        Some('"') => {
            let (lexical, end) = read_quoted(input, pos)?;
            read_literal_suffix(input, lexical, end)
        }
        Some(_) => Err(LexError::new(pos, "expected IRI, blank node or literal")),
        None => Err(LexError::new(pos, "unexpected end of line")),
    }
}

/// Parses one statement line. Returns `Ok(None)` for blank and comment lines.
pub fn parse_line(line: &str) -> Result<Option<Triple>, LexError> {
    let mut pos = skip_ws(line, 0);
    if pos == line.len() || line[pos..].starts_with('#') {
        return Ok(None);
    }
    let mut terms = Vec::with_capacity(3);
    for _ in 0..3 {
        let (term, end) = read_term(line, pos)?;
        terms.push(term);
        pos = skip_ws(line, end);
    }
    if !line[pos..].starts_with('.') {
        return Err(LexError::new(pos, "expected '.' terminator"));
    }
    pos = skip_ws(line, pos + 1);
    if pos != line.len() && !line[pos..].starts_with('#') {
        return Err(LexError::new(pos, "trailing content after '.'"));
    }
    let object = terms.pop().expect("three terms");
    let predicate = terms.pop().expect("three terms");
    let subject = terms.pop().expect("three terms");
    Triple::new(subject, predicate, object)
        .map(Some)
        .map_err(|e| LexError::new(0, e.to_string()))
}

/// Parses an N-Triples document. Duplicate statements are kept; the graph
/// deduplicates them on construction.
pub fn parse_ntriples<R: BufRead>(input: R) -> Result<Vec<Triple>, ParseError> {
    let mut triples = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        match parse_line(&line) {
            Ok(Some(triple)) => triples.push(triple),
            Ok(None) => {}
            Err(err) => {
                return Err(ParseError::Syntax {
                    line: idx + 1,
                    text: line,
                    message: err.message,
                })
            }
        }
    }
    Ok(triples)
}

pub fn parse_ntriples_str(input: &str) -> Result<Vec<Triple>, ParseError> {
    parse_ntriples(input.as_bytes())
}

/// Renames every blank node label with a scope prefix so that labels from
/// different documents never collide when merged.
pub fn scope_blank_nodes(triples: Vec<Triple>, scope: &str) -> Vec<Triple> {
    let rename = |t: Term| match t {
        Term::Blank(label) => Term::Blank(format!("{scope}_{label}")),
        other => other,
    };
    triples
        .into_iter()
        .map(|t| {
            let (s, p, o) = t.into_parts();
            Triple::new(rename(s), p, rename(o)).expect("renaming keeps positions valid")
        })
        .collect()
}
