//! The `wka` command-line front end.
//!
//! Exit codes: 0 when the verdict is positive, 1 when it is negative, 2 on
//! usage, I/O or parse errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::classify::{
    bounded_semantic_determinism, classify, nfa_flags, partition_states, ClassificationReport, Conflict,
    DeterminismKind,
};
use crate::engine::{accepts, enumerate, equivalent_up_to, trace, Equivalence, Trace};
use crate::format::{parse, parse_unchecked, AutomatonFile};
use crate::model::{trim, validate, Symbol, WkAutomaton, Word};
use crate::witness::{bundled_automata, bundled_automata_from_dir, check_records, ClaimsReport};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "wka", version, about = "Simulate and classify sensing 5'->3' Watson-Crick automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a file and list every violated invariant
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the restriction and determinism flags
    Classify {
        file: PathBuf,
        /// Classify the raw automaton instead of its trimmed form
        #[arg(long)]
        no_trim: bool,
        /// Also run the brute-force D/qD check over inputs up to this length
        #[arg(long, value_name = "L")]
        bounded: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Decide membership of WORD ("" for the empty word)
    Accept {
        file: PathBuf,
        word: String,
        /// Print the accepting computation
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print a shortest accepting computation for WORD
    Trace {
        file: PathBuf,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// List accepted words up to a length, in length-lex order
    Enumerate {
        file: PathBuf,
        #[arg(long, value_name = "L")]
        max_len: usize,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compare two bounded languages
    Compare {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, value_name = "L")]
        max_len: usize,
        /// Do not ignore the empty word
        #[arg(long)]
        strict_empty: bool,
        #[arg(long)]
        json: bool,
    },
    /// Replay the bundled example claims
    Claims {
        #[arg(long, value_name = "L", default_value_t = 10)]
        max_len: usize,
        #[arg(long)]
        json: bool,
        /// Read the corpus from this directory instead of the built-in copy
        #[arg(long, value_name = "DIR")]
        corpus: Option<PathBuf>,
    },
}

struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

type CliResult = Result<i32, CliError>;

/// Runs one invocation; `argv[0]` is the program name.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_TRUE
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_ERROR
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Validate { file, json } => cmd_validate(&file, json, out),
        Command::Classify { file, no_trim, bounded, json } => cmd_classify(&file, !no_trim, bounded, json, out),
        Command::Accept { file, word, trace, json } => cmd_accept(&file, &word, trace, json, "accept", out),
        Command::Trace { file, word, json } => cmd_accept(&file, &word, true, json, "trace", out),
        Command::Enumerate { file, max_len, count, json } => cmd_enumerate(&file, max_len, count, json, out),
        Command::Compare { file1, file2, max_len, strict_empty, json } => {
            cmd_compare(&file1, &file2, max_len, !strict_empty, json, out)
        }
        Command::Claims { max_len, json, corpus } => cmd_claims(max_len, json, corpus.as_deref(), out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<AutomatonFile, CliError> {
    parse(&read(path)?).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn as_wk(file: &AutomatonFile) -> WkAutomaton {
    match file {
        AutomatonFile::Wk(a) => a.clone(),
        AutomatonFile::Nfa(n) => crate::classify::embed_nfa_to_wk(n),
    }
}

fn input_word(s: &str, alphabet: &[Symbol]) -> Result<Word, CliError> {
    let w = Word::parse(s)?;
    if let Some(bad) = w.symbols().iter().find(|c| !alphabet.contains(c)) {
        return Err(CliError(format!("symbol {bad} of {s:?} is not in the alphabet")));
    }
    Ok(w)
}

/// One JSON result line. The five common fields are always present.
fn json_line(
    out: &mut dyn Write,
    command: &str,
    verdict: Value,
    evidence: Value,
    words: Value,
    counterexample: Value,
    extra: Vec<(&str, Value)>,
) -> std::io::Result<()> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("verdict".into(), verdict);
    m.insert("evidence".into(), evidence);
    m.insert("words".into(), words);
    m.insert("counterexample".into(), counterexample);
    for (k, v) in extra {
        m.insert(k.into(), v);
    }
    writeln!(out, "{}", Value::Object(m))
}

fn cmd_validate(path: &Path, json: bool, out: &mut dyn Write) -> CliResult {
    let file = parse_unchecked(&read(path)?).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    let violations = match &file {
        AutomatonFile::Wk(a) => validate(a),
        AutomatonFile::Nfa(n) => validate(n),
    };
    let clean = violations.is_empty();
    if json {
        json_line(out, "validate", json!(clean), json!(violations), Value::Null, Value::Null, vec![])?;
    } else if clean {
        writeln!(out, "ok")?;
    } else {
        for v in &violations {
            writeln!(out, "{v}")?;
        }
    }
    Ok(if clean { EXIT_TRUE } else { EXIT_FALSE })
}

fn conflict_text(c: &Conflict) -> String {
    format!("at {}: [{}] and [{}]", c.state, c.first, c.second)
}

fn print_report(out: &mut dyn Write, r: &ClassificationReport) -> std::io::Result<()> {
    let rows = [
        ("stateless (N)", r.stateless, None),
        ("all_final (F)", r.all_final, None),
        ("simple (S)", r.simple, None),
        ("one_limited (1)", r.one_limited, None),
        ("state_deterministic (sD)", r.state_deterministic, r.evidence.state_deterministic.as_ref()),
        ("deterministic (D)", r.deterministic, r.evidence.deterministic.as_ref()),
        ("quasi_deterministic (qD)", r.quasi_deterministic, r.evidence.quasi_deterministic.as_ref()),
    ];
    for (name, v, ev) in rows {
        writeln!(out, "{name}: {v}")?;
        if let Some(c) = ev {
            writeln!(out, "  conflict {}", conflict_text(c))?;
        }
    }
    Ok(())
}

fn cmd_classify(path: &Path, use_trim: bool, bounded: Option<usize>, json: bool, out: &mut dyn Write) -> CliResult {
    let file = load(path)?;
    let wk = as_wk(&file);
    let report = classify(&wk, use_trim);
    let subject = if use_trim { trim(&wk) } else { wk };

    let mut agree = true;
    let mut semantic = Vec::new();
    if let Some(l) = bounded {
        for (kind, exact) in [
            (DeterminismKind::Deterministic, report.deterministic),
            (DeterminismKind::QuasiDeterministic, report.quasi_deterministic),
        ] {
            let v = bounded_semantic_determinism(&subject, kind, l);
            agree &= v.holds == exact;
            semantic.push((kind, exact, v));
        }
    }
    let nfa = match &file {
        AutomatonFile::Nfa(n) => Some((nfa_flags(n), partition_states(n).ok())),
        AutomatonFile::Wk(_) => None,
    };

    if json {
        let mut extra = vec![("report", serde_json::to_value(&report)?)];
        if let Some((flags, part)) = &nfa {
            extra.push(("nfa", serde_json::to_value(flags)?));
            extra.push(("partition", serde_json::to_value(part)?));
        }
        if bounded.is_some() {
            let sem: Vec<Value> = semantic
                .iter()
                .map(|(kind, exact, v)| json!({"kind": kind, "exact": exact, "bounded": v.holds, "counterexample": v.counterexample}))
                .collect();
            extra.push(("bounded", json!({"max_len": bounded, "agree": agree, "checks": sem})));
        }
        json_line(out, "classify", json!(agree), serde_json::to_value(&report.evidence)?, Value::Null, Value::Null, extra)?;
    } else {
        print_report(out, &report)?;
        if let Some((flags, part)) = &nfa {
            writeln!(out, "nfa is_dfa: {}", flags.is_dfa)?;
            writeln!(out, "nfa lambda_free: {}", flags.is_lambda_free)?;
            writeln!(out, "nfa state_deterministic: {}", flags.state_deterministic)?;
            writeln!(out, "nfa quasi_deterministic: {}", flags.quasi_deterministic)?;
            if let Some(p) = part {
                let show = |s: &std::collections::BTreeSet<crate::model::StateId>| {
                    s.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ")
                };
                writeln!(out, "partition Q_d: {}", show(&p.q_d))?;
                writeln!(out, "partition Q_s: {}", show(&p.q_s))?;
            }
        }
        for (kind, exact, v) in &semantic {
            let status = if v.holds == *exact { "agrees" } else { "DISAGREES" };
            writeln!(out, "bounded {kind:?} up to {}: {} ({status})", bounded.unwrap_or(0), v.holds)?;
            if let Some(cx) = &v.counterexample {
                writeln!(out, "  input {} at {}: [{}] and [{}]", cx.input, cx.configuration, cx.first, cx.second)?;
            }
        }
    }
    Ok(if agree { EXIT_TRUE } else { EXIT_FALSE })
}

fn trace_lines(t: &Trace) -> Vec<String> {
    let mut lines = Vec::new();
    for (i, c) in t.configurations.iter().enumerate() {
        match t.transitions.get(i) {
            Some(tr) => lines.push(format!("{} {} {} {}", c.state, c.lo, c.hi, tr)),
            None => lines.push(format!("{} {} {} accept", c.state, c.lo, c.hi)),
        }
    }
    lines
}

fn cmd_accept(path: &Path, word: &str, want_trace: bool, json: bool, command: &str, out: &mut dyn Write) -> CliResult {
    let wk = as_wk(&load(path)?);
    let w = input_word(word, &wk.alphabet)?;
    let (ok, tr) = if want_trace {
        let tr = trace(&wk, &w);
        (tr.is_some(), tr)
    } else {
        (accepts(&wk, &w), None)
    };
    if json {
        let evidence = tr.as_ref().map(serde_json::to_value).transpose()?.unwrap_or(Value::Null);
        json_line(out, command, json!(ok), evidence, json!([w]), Value::Null, vec![])?;
    } else {
        writeln!(out, "{}", if ok { "accepted" } else { "rejected" })?;
        if let Some(t) = &tr {
            for l in trace_lines(t) {
                writeln!(out, "{l}")?;
            }
        }
    }
    Ok(if ok { EXIT_TRUE } else { EXIT_FALSE })
}

fn cmd_enumerate(path: &Path, max_len: usize, count: bool, json: bool, out: &mut dyn Write) -> CliResult {
    let wk = as_wk(&load(path)?);
    let words = enumerate(&wk, max_len);
    if json {
        let list = if count { Value::Null } else { json!(words) };
        json_line(out, "enumerate", json!(true), Value::Null, list, Value::Null, vec![("count", json!(words.len()))])?;
    } else if count {
        writeln!(out, "{}", words.len())?;
    } else {
        for w in &words {
            writeln!(out, "{w}")?;
        }
    }
    Ok(EXIT_TRUE)
}

fn cmd_compare(p1: &Path, p2: &Path, max_len: usize, modulo_empty: bool, json: bool, out: &mut dyn Write) -> CliResult {
    let a = as_wk(&load(p1)?);
    let b = as_wk(&load(p2)?);
    let verdict = equivalent_up_to(&a, &b, max_len, modulo_empty)?;
    let cx = match &verdict {
        Equivalence::Equal => None,
        Equivalence::Counterexample(w) => Some(w.clone()),
    };
    if json {
        let side = cx.as_ref().map(|w| if accepts(&a, w) { "first" } else { "second" });
        json_line(
            out,
            "compare",
            json!(cx.is_none()),
            Value::Null,
            Value::Null,
            json!(cx),
            vec![("accepted_by", json!(side)), ("max_len", json!(max_len))],
        )?;
    } else {
        match &cx {
            None => writeln!(out, "equivalent up to length {max_len}")?,
            Some(w) => {
                let side = if accepts(&a, w) { p1 } else { p2 };
                writeln!(out, "counterexample: {w} (accepted only by {})", side.display())?
            }
        }
    }
    Ok(if cx.is_none() { EXIT_TRUE } else { EXIT_FALSE })
}

fn print_claims(out: &mut dyn Write, report: &ClaimsReport, max_len: usize, json: bool) -> std::io::Result<()> {
    for r in &report.records {
        let Some(v) = &r.verdict else { continue };
        if json {
            json_line(
                out,
                "claims",
                json!(v.passed()),
                json!(v.details),
                Value::Null,
                Value::Null,
                vec![
                    ("claim_id", json!(r.claim_id)),
                    ("file", json!(r.file)),
                    ("oracle_id", json!(r.oracle_id)),
                    ("bound", json!(r.bound)),
                    ("language_match", json!(v.language_match)),
                    ("flags_match", json!(v.flags_match)),
                    ("expected", serde_json::to_value(r.expected).unwrap_or(Value::Null)),
                ],
            )?;
        } else {
            let tag = if v.passed() { "PASS" } else { "FAIL" };
            let ok = |b: bool| if b { "ok" } else { "MISMATCH" };
            writeln!(
                out,
                "{tag} {:<18} {:<16} language={} flags={}",
                r.claim_id,
                r.file,
                ok(v.language_match),
                ok(v.flags_match)
            )?;
            for d in &v.details {
                writeln!(out, "    {d}")?;
            }
        }
    }
    if json {
        json_line(
            out,
            "claims",
            json!(report.all_passed()),
            Value::Null,
            Value::Null,
            Value::Null,
            vec![("summary", json!({"passed": report.passed, "failed": report.failed, "max_len": max_len}))],
        )
    } else {
        writeln!(out, "{} passed, {} failed (max_len {max_len})", report.passed, report.failed)
    }
}

fn cmd_claims(max_len: usize, json: bool, corpus: Option<&Path>, out: &mut dyn Write) -> CliResult {
    let records = match corpus {
        Some(dir) => bundled_automata_from_dir(dir)?,
        None => bundled_automata(),
    };
    let report = check_records(records, max_len)?;
    print_claims(out, &report, max_len, json)?;
    Ok(if report.all_passed() { EXIT_TRUE } else { EXIT_FALSE })
}
