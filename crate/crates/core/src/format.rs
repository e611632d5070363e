//! Line-oriented text format for automaton files (`.wka`).
//!
//! ```text
//! # L_o = { a^m b^n | m <= n <= 2m }
//! type: wk
//! alphabet: a b
//! states: q
//! initial: q
//! final: q
//! q a b -> q
//! q a bb -> q
//! ```
//!
//! A WK transition line is `<source> <u> <v> -> <target>`, an NFA line is
//! `<source> <label> -> <target>`. `_` stands for the empty word.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{
    validate, Nfa, NfaTransition, StateId, Symbol, WkAutomaton, WkTransition, Word,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Wk,
    Nfa,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Wk => "wk",
            Kind::Nfa => "nfa",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutomatonFile {
    Wk(WkAutomaton),
    Nfa(Nfa),
}

impl AutomatonFile {
    pub fn kind(&self) -> Kind {
        match self {
            AutomatonFile::Wk(_) => Kind::Wk,
            AutomatonFile::Nfa(_) => Kind::Nfa,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header `{0}:`")]
    MissingHeader(&'static str),
    #[error("line {line}: duplicated header `{header}:`")]
    DuplicateHeader { line: usize, header: &'static str },
    #[error("line {line}: unknown state {state}")]
    UnknownState { line: usize, state: String },
    #[error("line {line}: symbol outside alphabet: {symbol}")]
    SymbolOutsideAlphabet { line: usize, symbol: char },
    #[error("line {line}: transition shape does not match `type: {kind}`")]
    ShapeMismatch { line: usize, kind: &'static str },
    #[error("invalid automaton: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

const HEADERS: [&str; 5] = ["type", "alphabet", "states", "initial", "final"];

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

struct Header {
    kind: Kind,
    alphabet: Vec<Symbol>,
    states: Vec<StateId>,
    initial: StateId,
    finals: Vec<StateId>,
}

/// A transition line before its names and symbols are checked against the
/// header.
enum RawLine<'a> {
    Wk { source: &'a str, left: &'a str, right: &'a str, target: &'a str },
    Nfa { source: &'a str, label: &'a str, target: &'a str },
}

struct Raw<'a> {
    header: Header,
    lines: Vec<(usize, RawLine<'a>)>,
}

/// Tokenized non-empty lines with comments stripped, tagged with 1-based line
/// numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

/// If the line is a header, returns its index in [`HEADERS`] and its value
/// tokens.
fn header_of<'a>(toks: &[&'a str]) -> Option<(usize, Vec<&'a str>)> {
    let first = toks[0];
    let (key, rest) = first.split_once(':')?;
    let idx = HEADERS.iter().position(|h| *h == key)?;
    let mut values = Vec::new();
    if !rest.is_empty() {
        values.push(rest);
    }
    values.extend_from_slice(&toks[1..]);
    Some((idx, values))
}

fn state_token(line: usize, tok: &str) -> Result<StateId, ParseError> {
    StateId::new(tok).map_err(|e| syntax(line, e.to_string()))
}

fn parse_raw(text: &str) -> Result<Raw<'_>, ParseError> {
    let mut values: [Option<Vec<&str>>; 5] = Default::default();
    let mut header_lines = [0usize; 5];
    let mut lines_out = Vec::new();
    let mut next_header = 0;

    for (line, toks) in lines(text) {
        if let Some((idx, vals)) = header_of(&toks) {
            if values[idx].is_some() {
                return Err(ParseError::DuplicateHeader { line, header: HEADERS[idx] });
            }
            if idx != next_header {
                return Err(if idx < next_header {
                    syntax(line, format!("header `{}:` out of order", HEADERS[idx]))
                } else {
                    ParseError::MissingHeader(HEADERS[next_header])
                });
            }
            values[idx] = Some(vals);
            header_lines[idx] = line;
            next_header += 1;
            continue;
        }
        if next_header < HEADERS.len() {
            return Err(ParseError::MissingHeader(HEADERS[next_header]));
        }
        let raw = match toks.as_slice() {
            [source, left, right, "->", target] => RawLine::Wk { source, left, right, target },
            [source, label, "->", target] => RawLine::Nfa { source, label, target },
            _ => return Err(syntax(line, "expected `<source> <u> <v> -> <target>` or `<source> <label> -> <target>`")),
        };
        lines_out.push((line, raw));
    }
    if next_header < HEADERS.len() {
        return Err(ParseError::MissingHeader(HEADERS[next_header]));
    }

    let [ty, alphabet, states, initial, finals] = values.map(Option::unwrap);
    let kind = match ty.as_slice() {
        ["wk"] => Kind::Wk,
        ["nfa"] => Kind::Nfa,
        _ => return Err(syntax(header_lines[0], "expected `type: wk` or `type: nfa`")),
    };
    let alphabet = alphabet
        .iter()
        .map(|t| {
            let mut cs = t.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => Symbol::new(c).map_err(|e| syntax(header_lines[1], e.to_string())),
                _ => Err(syntax(header_lines[1], format!("alphabet symbol {t:?} is not a single character"))),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let states = states
        .iter()
        .map(|t| state_token(header_lines[2], t))
        .collect::<Result<Vec<_>, _>>()?;
    let initial = match initial.as_slice() {
        [q] => state_token(header_lines[3], q)?,
        _ => return Err(syntax(header_lines[3], "expected exactly one initial state")),
    };
    let finals = finals
        .iter()
        .map(|t| state_token(header_lines[4], t))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(Raw { header: Header { kind, alphabet, states, initial, finals }, lines: lines_out })
}

fn word_token(line: usize, tok: &str, alphabet: &[Symbol], strict: bool) -> Result<Word, ParseError> {
    if tok == "_" {
        return Ok(Word::empty());
    }
    let mut out = Vec::with_capacity(tok.len());
    for c in tok.chars() {
        let s = Symbol::new(c).map_err(|e| syntax(line, e.to_string()))?;
        if strict && !alphabet.contains(&s) {
            return Err(ParseError::SymbolOutsideAlphabet { line, symbol: c });
        }
        out.push(s);
    }
    Ok(Word::from_symbols(out))
}

fn build(raw: Raw<'_>, strict: bool) -> Result<AutomatonFile, ParseError> {
    let Header { kind, alphabet, states, initial, finals } = raw.header;
    if strict {
        if !states.contains(&initial) {
            return Err(ParseError::Invalid(vec![format!("unknown initial state {initial}")]));
        }
        if let Some(f) = finals.iter().find(|f| !states.contains(f)) {
            return Err(ParseError::Invalid(vec![format!("unknown final state {f}")]));
        }
    }
    let state = |line: usize, tok: &str| -> Result<StateId, ParseError> {
        let q = state_token(line, tok)?;
        if strict && !states.contains(&q) {
            return Err(ParseError::UnknownState { line, state: tok.to_string() });
        }
        Ok(q)
    };

    let file = match kind {
        Kind::Wk => {
            let mut transitions = Vec::new();
            for (line, raw) in raw.lines {
                let RawLine::Wk { source, left, right, target } = raw else {
                    return Err(ParseError::ShapeMismatch { line, kind: "wk" });
                };
                transitions.push(WkTransition {
                    source: state(line, source)?,
                    left: word_token(line, left, &alphabet, strict)?,
                    right: word_token(line, right, &alphabet, strict)?,
                    target: state(line, target)?,
                });
            }
            AutomatonFile::Wk(WkAutomaton { alphabet, states, initial, finals, transitions })
        }
        Kind::Nfa => {
            let mut transitions = Vec::new();
            for (line, raw) in raw.lines {
                let RawLine::Nfa { source, label, target } = raw else {
                    return Err(ParseError::ShapeMismatch { line, kind: "nfa" });
                };
                let word = word_token(line, label, &alphabet, strict)?;
                if word.len() > 1 {
                    return Err(syntax(line, format!("NFA label {label:?} must be one symbol or `_`")));
                }
                transitions.push(NfaTransition {
                    source: state(line, source)?,
                    label: word.symbols().first().copied(),
                    target: state(line, target)?,
                });
            }
            AutomatonFile::Nfa(Nfa { alphabet, states, initial, finals, transitions })
        }
    };

    if strict {
        let violations = match &file {
            AutomatonFile::Wk(a) => validate(a),
            AutomatonFile::Nfa(n) => validate(n),
        };
        if !violations.is_empty() {
            return Err(ParseError::Invalid(violations));
        }
    }
    Ok(file)
}

/// Parses an automaton file and checks every model invariant.
pub fn parse(text: &str) -> Result<AutomatonFile, ParseError> {
    build(parse_raw(text)?, true)
}

/// Parses the grammar only; undeclared states, foreign symbols and
/// duplicates are left for [`validate`] to report.
pub fn parse_unchecked(text: &str) -> Result<AutomatonFile, ParseError> {
    build(parse_raw(text)?, false)
}

fn header_line(out: &mut String, key: &str, items: impl IntoIterator<Item = String>) {
    out.push_str(key);
    out.push(':');
    for it in items {
        out.push(' ');
        out.push_str(&it);
    }
    out.push('\n');
}

/// Canonical text form: fixed header order, declaration order everywhere,
/// single spaces, `_` for λ.
pub fn serialize(file: &AutomatonFile) -> String {
    let mut out = String::new();
    header_line(&mut out, "type", [file.kind().as_str().to_string()]);
    match file {
        AutomatonFile::Wk(a) => {
            header_line(&mut out, "alphabet", a.alphabet.iter().map(|s| s.to_string()));
            header_line(&mut out, "states", a.states.iter().map(|s| s.to_string()));
            header_line(&mut out, "initial", [a.initial.to_string()]);
            header_line(&mut out, "final", a.finals.iter().map(|s| s.to_string()));
            for t in &a.transitions {
                let _ = writeln!(out, "{t}");
            }
        }
        AutomatonFile::Nfa(n) => {
            header_line(&mut out, "alphabet", n.alphabet.iter().map(|s| s.to_string()));
            header_line(&mut out, "states", n.states.iter().map(|s| s.to_string()));
            header_line(&mut out, "initial", [n.initial.to_string()]);
            header_line(&mut out, "final", n.finals.iter().map(|s| s.to_string()));
            for t in &n.transitions {
                let _ = writeln!(out, "{t}");
            }
        }
    }
    out
}
