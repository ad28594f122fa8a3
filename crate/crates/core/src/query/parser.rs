//! Parser for the SELECT/WHERE subset of SPARQL used for BGP queries.
//!
//! ```text
//! query   := prefix* SELECT DISTINCT? (var+ | '*') WHERE? '{' triples? '}'
//! prefix  := PREFIX pname ':' '<' iri '>'
//! triples := pattern ('.' pattern)* '.'?
//! term    := ?var | $var | <iri> | prefix:local | literal | 'a'
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use super::pattern::{is_valid_var_name, BgpQuery, PatternError, PatternTerm, TriplePattern};
use crate::rdf::{read_iri_ref, read_quoted, vocab, LexError, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared prefix {prefix:?} at line {line}, column {column}")]
    UndeclaredPrefix {
        prefix: String,
        line: usize,
        column: usize,
    },
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

#[derive(Debug, Clone, PartialEq)]
enum Suffix {
    None,
    Lang(String),
    DatatypeIri(String),
    DatatypeName(String, String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Var(String),
    Iri(String),
    Name(String, String),
    Literal(String, Suffix),
    Integer(String),
    LBrace,
    RBrace,
    Dot,
    Star,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':' | '%')
}

impl<'a> Lexer<'a> {
    fn skip_trivia(&mut self) {
        loop {
            let rest = &self.src[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    fn word_at(&self, start: usize) -> usize {
        let rest = &self.src[start..];
        let mut end = rest
            .char_indices()
            .find(|(_, c)| !is_name_char(*c))
            .map_or(rest.len(), |(i, _)| i);
        // A trailing '.' terminates the pattern rather than the name.
        while end > 0 && rest[..end].ends_with('.') {
            end -= 1;
        }
        start + end
    }

    fn next(&mut self) -> Result<Option<(usize, Tok)>, LexError> {
        self.skip_trivia();
        let start = self.pos;
        let Some(c) = self.src[start..].chars().next() else {
            return Ok(None);
        };
        let tok = match c {
            '{' => {
                self.pos += 1;
                Tok::LBrace
            }
            '}' => {
                self.pos += 1;
                Tok::RBrace
            }
            '.' => {
                self.pos += 1;
                Tok::Dot
            }
            '*' => {
                self.pos += 1;
                Tok::Star
            }
            '<' => {
                let (iri, end) = read_iri_ref(self.src, start)?;
                self.pos = end;
                Tok::Iri(iri)
            }
            '?' | '$' => {
                let end = self.src[start + 1..]
                    .char_indices()
                    .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
                    .map_or(self.src.len(), |(i, _)| start + 1 + i);
                let name = &self.src[start + 1..end];
                if !is_valid_var_name(name) {
                    return Err(LexError {
                        offset: start,
                        message: format!("invalid variable name {name:?}"),
                    });
                }
                self.pos = end;
                Tok::Var(name.to_owned())
            }
            '"' | '\'' => {
                let (lexical, end) = read_quoted(self.src, start)?;
                self.pos = end;
                let suffix = self.literal_suffix()?;
                Tok::Literal(lexical, suffix)
            }
            c if is_name_char(c) => {
                let end = self.word_at(start);
                if end == start {
                    return Err(LexError {
                        offset: start,
                        message: format!("unexpected character {c:?}"),
                    });
                }
                self.pos = end;
                let word = &self.src[start..end];
                match word.split_once(':') {
                    Some((prefix, local)) => Tok::Name(prefix.to_owned(), local.to_owned()),
                    None if word.bytes().all(|b| b.is_ascii_digit()) => {
                        Tok::Integer(word.to_owned())
                    }
                    None => Tok::Word(word.to_owned()),
                }
            }
            c => {
                return Err(LexError {
                    offset: start,
                    message: format!("unexpected character {c:?}"),
                })
            }
        };
        Ok(Some((start, tok)))
    }

    fn literal_suffix(&mut self) -> Result<Suffix, LexError> {
        let rest = &self.src[self.pos..];
        if let Some(tag) = rest.strip_prefix('@') {
            let len = tag
                .char_indices()
                .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '-'))
                .map_or(tag.len(), |(i, _)| i);
            if len == 0 {
                return Err(LexError {
                    offset: self.pos,
                    message: "empty language tag".into(),
                });
            }
            self.pos += 1 + len;
            return Ok(Suffix::Lang(tag[..len].to_owned()));
        }
        if rest.starts_with("^^<") {
            let (iri, end) = read_iri_ref(self.src, self.pos + 2)?;
            self.pos = end;
            return Ok(Suffix::DatatypeIri(iri));
        }
        if rest.starts_with("^^") {
            let start = self.pos + 2;
            let end = self.word_at(start);
            let word = &self.src[start..end];
            let Some((prefix, local)) = word.split_once(':') else {
                return Err(LexError {
                    offset: start,
                    message: "expected datatype after ^^".into(),
                });
            };
            self.pos = end;
            return Ok(Suffix::DatatypeName(prefix.to_owned(), local.to_owned()));
        }
        Ok(Suffix::None)
    }
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<(usize, Tok)>,
    idx: usize,
    prefixes: BTreeMap<String, String>,
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl<'a> Parser<'a> {
    fn error_at(&self, offset: usize, message: impl Into<String>) -> QueryError {
        let (line, column) = line_col(self.src, offset);
        QueryError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.idx)
            .map_or(self.src.len(), |(o, _)| *o)
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.idx).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let tok = self.tokens.get(self.idx).cloned();
        self.idx += 1;
        tok
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(kw))
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), QueryError> {
        if self.peek_keyword(kw) {
            self.idx += 1;
            Ok(())
        } else {
            Err(self.error_at(self.here(), format!("expected {kw}")))
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), QueryError> {
        if self.peek() == Some(&tok) {
            self.idx += 1;
            Ok(())
        } else {
            Err(self.error_at(self.here(), format!("expected {what}")))
        }
    }

    fn expand(&self, offset: usize, prefix: &str, local: &str) -> Result<String, QueryError> {
        match self.prefixes.get(prefix) {
            Some(ns) => Ok(format!("{ns}{local}")),
            None => {
                let (line, column) = line_col(self.src, offset);
                Err(QueryError::UndeclaredPrefix {
                    prefix: prefix.to_owned(),
                    line,
                    column,
                })
            }
        }
    }

    fn prologue(&mut self) -> Result<(), QueryError> {
        while self.peek_keyword("PREFIX") {
            self.idx += 1;
            let at = self.here();
            let Some((_, Tok::Name(prefix, local))) = self.bump() else {
                return Err(self.error_at(at, "expected prefix name"));
            };
            if !local.is_empty() {
                return Err(self.error_at(at, "prefix declaration must end with ':'"));
            }
            let at = self.here();
            let Some((_, Tok::Iri(ns))) = self.bump() else {
                return Err(self.error_at(at, "expected namespace IRI"));
            };
            self.prefixes.insert(prefix, ns);
        }
        Ok(())
    }

    fn term(&mut self) -> Result<PatternTerm, QueryError> {
        let at = self.here();
        let Some((offset, tok)) = self.bump() else {
            return Err(self.error_at(at, "unexpected end of query"));
        };
        let term = match tok {
            Tok::Var(v) => return Ok(PatternTerm::Var(v)),
            Tok::Iri(iri) => Term::Iri(iri),
            Tok::Name(prefix, local) => Term::Iri(self.expand(offset, &prefix, &local)?),
            Tok::Word(w) if w == "a" => Term::named(vocab::RDF_TYPE),
            Tok::Integer(n) => Term::typed_literal(n, vocab::XSD_INTEGER),
            Tok::Literal(lexical, suffix) => match suffix {
                Suffix::None => Term::literal(lexical),
                Suffix::Lang(tag) => Term::lang_literal(lexical, tag),
                Suffix::DatatypeIri(dt) => Term::typed_literal(lexical, dt),
                Suffix::DatatypeName(prefix, local) => {
                    Term::typed_literal(lexical, self.expand(offset, &prefix, &local)?)
                }
            },
            other => return Err(self.error_at(offset, format!("unexpected {other:?}"))),
        };
        Ok(PatternTerm::Const(term))
    }

    fn pattern(&mut self) -> Result<TriplePattern, QueryError> {
        let at = self.here();
        let s = self.term()?;
        let p = self.term()?;
        let o = self.term()?;
        TriplePattern::new(s, p, o).map_err(|e| self.error_at(at, e.to_string()))
    }

    fn query(&mut self) -> Result<BgpQuery, QueryError> {
        self.prologue()?;
        self.expect_keyword("SELECT")?;
        let distinct = self.peek_keyword("DISTINCT");
        if distinct {
            self.idx += 1;
        }
        let mut head = Vec::new();
        let mut star = false;
        if self.peek() == Some(&Tok::Star) {
            self.idx += 1;
            star = true;
        } else {
            while let Some(Tok::Var(v)) = self.peek() {
                head.push(v.clone());
                self.idx += 1;
            }
            if head.is_empty() {
                return Err(self.error_at(self.here(), "expected projection variables or '*'"));
            }
        }
        if self.peek_keyword("WHERE") {
            self.idx += 1;
        }
        self.expect(Tok::LBrace, "'{'")?;
        let mut body = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            body.push(self.pattern()?);
            match self.peek() {
                Some(Tok::Dot) => self.idx += 1,
                Some(Tok::RBrace) => {}
                _ => return Err(self.error_at(self.here(), "expected '.' or '}'")),
            }
        }
        self.idx += 1;
        if self.idx < self.tokens.len() {
            return Err(self.error_at(self.here(), "unexpected content after '}'"));
        }
        if star {
            for tp in &body {
                for v in tp.variables() {
                    if !head.iter().any(|h| h == v) {
                        head.push(v.to_owned());
                    }
                }
            }
        }
        Ok(BgpQuery::new(head, body, distinct)?)
    }
}

/// Parses query text; prefixed names are expanded to absolute IRIs.
pub fn parse_query(text: &str) -> Result<BgpQuery, QueryError> {
    let mut lexer = Lexer { src: text, pos: 0 };
    let mut tokens = Vec::new();
    loop {
        match lexer.next() {
            Ok(Some(tok)) => tokens.push(tok),
            Ok(None) => break,
            Err(e) => {
                let (line, column) = line_col(text, e.offset);
                return Err(QueryError::Syntax {
                    line,
                    column,
                    message: e.message,
                });
            }
        }
    }
    Parser {
        src: text,
        tokens,
        idx: 0,
        prefixes: BTreeMap::new(),
    }
    .query()
}
