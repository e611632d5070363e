//! Core domain types for sensing 5'→3' Watson-Crick automata and classical
//! finite automata.
//!
//! The two-head model works on a plain tape: the left head reads a prefix of
//! the unread segment, the right head reads a suffix, and the computation is
//! over once the heads meet. Transitions read a word with each head, either
//! of which may be empty (λ).

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Characters that cannot be used as input symbols because the file format
/// reserves them.
const RESERVED: &[char] = &['_', '#', '>', '-'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid symbol {0:?}: must be a printable non-whitespace ASCII character other than _ # > -")]
    InvalidSymbol(char),
    #[error("invalid state name {0:?}: must be a nonempty identifier of letters, digits and underscores other than `_`")]
    InvalidStateName(String),
}

/// A single input letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(char);

impl Symbol {
    pub fn new(ch: char) -> Result<Self, ModelError> {
        if ch.is_ascii_graphic() && !RESERVED.contains(&ch) {
            Ok(Symbol(ch))
        } else {
            Err(ModelError::InvalidSymbol(ch))
        }
    }

    pub fn as_char(self) -> char {
        self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_char(self.0)
    }
}

/// A finite word; the empty word is λ.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Parses a bare string of symbols. `""` and `"_"` both denote λ.
    pub fn parse(s: &str) -> Result<Self, ModelError> {
        if s == "_" {
            return Ok(Word::empty());
        }
        s.chars().map(Symbol::new).collect::<Result<Vec<_>, _>>().map(Word)
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(s: &[Symbol]) -> Self {
        Word(s.to_vec())
    }
}

/// Renders λ as `_`, matching the file format.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("_");
        }
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct StateId(String);

impl StateId {
    pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
        let name = name.into();
        let ok = !name.is_empty()
            && name != "_"
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if ok {
            Ok(StateId(name))
        } else {
            Err(ModelError::InvalidStateName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `target ∈ δ(source, left, right)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WkTransition {
    pub source: StateId,
    pub left: Word,
    pub right: Word,
    pub target: StateId,
}

impl WkTransition {
    pub fn new(source: &StateId, left: Word, right: Word, target: &StateId) -> Self {
        WkTransition { source: source.clone(), left, right, target: target.clone() }
    }
}

impl fmt::Display for WkTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} -> {}", self.source, self.left, self.right, self.target)
    }
}

/// A sensing 5'→3' Watson-Crick automaton.
///
/// Sets are kept as vectors in declaration order so that serialization and
/// tie-breaking are deterministic. Use [`validate`] to check the invariants
/// (no duplicates, everything declared).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WkAutomaton {
    pub alphabet: Vec<Symbol>,
    pub states: Vec<StateId>,
    pub initial: StateId,
    pub finals: Vec<StateId>,
    pub transitions: Vec<WkTransition>,
}

/// An NFA transition label: a letter or λ (`None`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NfaTransition {
    pub source: StateId,
    pub label: Option<Symbol>,
    pub target: StateId,
}

impl fmt::Display for NfaTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label {
            Some(s) => write!(f, "{} {} -> {}", self.source, s, self.target),
            None => write!(f, "{} _ -> {}", self.source, self.target),
        }
    }
}

/// A finite automaton with single-letter or λ transitions (NFA+λ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    pub alphabet: Vec<Symbol>,
    pub states: Vec<StateId>,
    pub initial: StateId,
    pub finals: Vec<StateId>,
    pub transitions: Vec<NfaTransition>,
}

/// A configuration on a fixed input: the unread segment is `input[lo..hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Configuration {
    pub state: StateId,
    pub lo: usize,
    pub hi: usize,
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.state, self.lo, self.hi)
    }
}

/// Anything with the 5-tuple shape; lets `validate` and the graph helpers
/// serve both automaton kinds.
pub trait Automaton {
    fn alphabet(&self) -> &[Symbol];
    fn states(&self) -> &[StateId];
    fn initial(&self) -> &StateId;
    fn finals(&self) -> &[StateId];
    /// `(source, target)` of every transition, in declaration order.
    fn edges(&self) -> Vec<(&StateId, &StateId)>;
    /// Violations specific to the transition payload.
    fn transition_violations(&self) -> Vec<String>;

    fn is_final(&self, q: &StateId) -> bool {
        self.finals().contains(q)
    }
}

impl Automaton for WkAutomaton {
    fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }
    fn states(&self) -> &[StateId] {
        &self.states
    }
    fn initial(&self) -> &StateId {
        &self.initial
    }
    fn finals(&self) -> &[StateId] {
        &self.finals
    }
    fn edges(&self) -> Vec<(&StateId, &StateId)> {
        self.transitions.iter().map(|t| (&t.source, &t.target)).collect()
    }
    fn transition_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for t in &self.transitions {
            for w in [&t.left, &t.right] {
                for s in w.symbols() {
                    if !self.alphabet.contains(s) {
                        out.push(format!("symbol {s} outside alphabet in transition {t}"));
                    }
                }
            }
            if !seen.insert(t) {
                out.push(format!("duplicate transition {t}"));
            }
        }
        out
    }
}

impl Automaton for Nfa {
    fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }
    fn states(&self) -> &[StateId] {
        &self.states
    }
    fn initial(&self) -> &StateId {
        &self.initial
    }
    fn finals(&self) -> &[StateId] {
        &self.finals
    }
    fn edges(&self) -> Vec<(&StateId, &StateId)> {
        self.transitions.iter().map(|t| (&t.source, &t.target)).collect()
    }
    fn transition_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for t in &self.transitions {
            if let Some(s) = t.label {
                if !self.alphabet.contains(&s) {
                    out.push(format!("symbol {s} outside alphabet in transition {t}"));
                }
            }
            if !seen.insert(t) {
                out.push(format!("duplicate transition {t}"));
            }
        }
        out
    }
}

/// Lists every broken structural invariant; empty means the automaton is valid.
pub fn validate<A: Automaton + ?Sized>(a: &A) -> Vec<String> {
    let mut out = Vec::new();

    let mut seen = HashSet::new();
    for s in a.alphabet() {
        if !seen.insert(s) {
            out.push(format!("duplicate symbol {s} in alphabet"));
        }
    }
    let mut declared = HashSet::new();
    for q in a.states() {
        if !declared.insert(q) {
            out.push(format!("duplicate state {q}"));
        }
    }
    if !declared.contains(a.initial()) {
        out.push(format!("unknown initial state {}", a.initial()));
    }
    let mut seen_final = HashSet::new();
    for f in a.finals() {
        if !declared.contains(f) {
            out.push(format!("unknown final state {f}"));
        } else if !seen_final.insert(f) {
            out.push(format!("duplicate final state {f}"));
        }
    }
    for (src, dst) in a.edges() {
        if !declared.contains(src) {
            out.push(format!("unknown source state {src}"));
        }
        if !declared.contains(dst) {
            out.push(format!("unknown target state {dst}"));
        }
    }
    out.extend(a.transition_violations());
    out
}

fn search<'a>(
    start: impl IntoIterator<Item = &'a StateId>,
    adj: &HashMap<&'a StateId, Vec<&'a StateId>>,
) -> BTreeSet<StateId> {
    let mut seen: HashSet<&StateId> = HashSet::new();
    let mut queue: VecDeque<&StateId> = VecDeque::new();
    for s in start {
        if seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(q) = queue.pop_front() {
        for &n in adj.get(q).into_iter().flatten() {
            if seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    seen.into_iter().cloned().collect()
}

/// States reachable from the initial state along transition edges, ignoring
/// what the transitions read.
pub fn graph_reachable<A: Automaton + ?Sized>(a: &A) -> BTreeSet<StateId> {
    let mut adj: HashMap<&StateId, Vec<&StateId>> = HashMap::new();
    for (s, t) in a.edges() {
        adj.entry(s).or_default().push(t);
    }
    search([a.initial()], &adj)
}

/// States from which some final state is reachable.
pub fn graph_coreachable<A: Automaton + ?Sized>(a: &A) -> BTreeSet<StateId> {
    let mut adj: HashMap<&StateId, Vec<&StateId>> = HashMap::new();
    for (s, t) in a.edges() {
        adj.entry(t).or_default().push(s);
    }
    search(a.finals(), &adj)
}

/// States lying on some path from the initial state to a final state.
fn useful_states<A: Automaton + ?Sized>(a: &A) -> BTreeSet<StateId> {
    let co = graph_coreachable(a);
    graph_reachable(a).into_iter().filter(|q| co.contains(q)).collect()
}

/// Restricts the automaton to states on some accepting path.
///
/// If the initial state itself is useless the result is the bare initial
/// state with no transitions.
pub fn trim(a: &WkAutomaton) -> WkAutomaton {
    let keep = useful_states(a);
    if !keep.contains(&a.initial) {
        return WkAutomaton {
            alphabet: a.alphabet.clone(),
            states: vec![a.initial.clone()],
            initial: a.initial.clone(),
            finals: vec![],
            transitions: vec![],
        };
    }
    WkAutomaton {
        alphabet: a.alphabet.clone(),
        states: a.states.iter().filter(|q| keep.contains(*q)).cloned().collect(),
        initial: a.initial.clone(),
        finals: a.finals.iter().filter(|q| keep.contains(*q)).cloned().collect(),
        transitions: a
            .transitions
            .iter()
            .filter(|t| keep.contains(&t.source) && keep.contains(&t.target))
            .cloned()
            .collect(),
    }
}

/// Same as [`trim`] for finite automata.
pub fn trim_nfa(n: &Nfa) -> Nfa {
    let keep = useful_states(n);
    if !keep.contains(&n.initial) {
        return Nfa {
            alphabet: n.alphabet.clone(),
            states: vec![n.initial.clone()],
            initial: n.initial.clone(),
            finals: vec![],
            transitions: vec![],
        };
    }
    Nfa {
        alphabet: n.alphabet.clone(),
        states: n.states.iter().filter(|q| keep.contains(*q)).cloned().collect(),
        initial: n.initial.clone(),
        finals: n.finals.iter().filter(|q| keep.contains(*q)).cloned().collect(),
        transitions: n
            .transitions
            .iter()
            .filter(|t| keep.contains(&t.source) && keep.contains(&t.target))
            .cloned()
            .collect(),
    }
}

/// The longest word read by a single head in a single transition.
pub fn radius(a: &WkAutomaton) -> usize {
    a.transitions.iter().map(|t| t.left.len().max(t.right.len())).max().unwrap_or(0)
}
