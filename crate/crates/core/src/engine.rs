//! Operational semantics of sensing 5'→3' WK automata.
//!
//! A step from `(q, lo, hi)` by `(q, u, v, p)` requires `u` to be the next
//! `|u|` unread letters from the left, `v` the last `|v|` unread letters from
//! the right, and the two reads not to overlap. A word is accepted when a
//! final state is reached with `lo == hi`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::model::{Configuration, StateId, Symbol, WkAutomaton, WkTransition, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(String, String),
}

/// Index-based view of a valid automaton used by the search routines.
pub(crate) struct Compiled<'a> {
    pub(crate) automaton: &'a WkAutomaton,
    pub(crate) initial: usize,
    pub(crate) finals: Vec<bool>,
    /// transition indices by source state, in declaration order
    pub(crate) out: Vec<Vec<usize>>,
    pub(crate) targets: Vec<usize>,
}

impl<'a> Compiled<'a> {
    pub(crate) fn new(a: &'a WkAutomaton) -> Self {
        let index: HashMap<&StateId, usize> =
            a.states.iter().enumerate().map(|(i, q)| (q, i)).collect();
        let mut finals = vec![false; a.states.len()];
        for f in &a.finals {
            finals[index[f]] = true;
        }
        let mut out = vec![Vec::new(); a.states.len()];
        let mut targets = Vec::with_capacity(a.transitions.len());
        for (i, t) in a.transitions.iter().enumerate() {
            out[index[&t.source]].push(i);
            targets.push(index[&t.target]);
        }
        Compiled { automaton: a, initial: index[&a.initial], finals, out, targets }
    }

    pub(crate) fn state(&self, i: usize) -> &StateId {
        &self.automaton.states[i]
    }

    pub(crate) fn transition(&self, i: usize) -> &WkTransition {
        &self.automaton.transitions[i]
    }

    /// Cursors after applying transition `t` at `(lo, hi)`, if it applies.
    pub(crate) fn apply(&self, t: usize, input: &[Symbol], lo: usize, hi: usize) -> Option<(usize, usize)> {
        let tr = &self.automaton.transitions[t];
        let (u, v) = (tr.left.symbols(), tr.right.symbols());
        if u.len() + v.len() > hi - lo {
            return None;
        }
        let (nlo, nhi) = (lo + u.len(), hi - v.len());
        (input[lo..nlo] == *u && input[nhi..hi] == *v).then_some((nlo, nhi))
    }

    /// Applicable transitions at `(q, lo, hi)` with their successor cursors.
    pub(crate) fn successors<'s>(
        &'s self,
        q: usize,
        input: &'s [Symbol],
        lo: usize,
        hi: usize,
    ) -> impl Iterator<Item = (usize, usize, usize)> + 's {
        self.out[q].iter().filter_map(move |&t| self.apply(t, input, lo, hi).map(|(l, h)| (t, l, h)))
    }
}

/// Every configuration reachable in one step, with the transition used.
pub fn step(a: &WkAutomaton, input: &Word, c: &Configuration) -> Vec<(Configuration, WkTransition)> {
    let ca = Compiled::new(a);
    let Some(q) = a.states.iter().position(|s| *s == c.state) else {
        return Vec::new();
    };
    if c.lo > c.hi || c.hi > input.len() {
        return Vec::new();
    }
    ca.successors(q, input.symbols(), c.lo, c.hi)
        .map(|(t, lo, hi)| {
            (Configuration { state: ca.state(ca.targets[t]).clone(), lo, hi }, ca.transition(t).clone())
        })
        .collect()
}

struct ConfigSpace {
    n: usize,
}

impl ConfigSpace {
    fn index(&self, q: usize, lo: usize, hi: usize) -> usize {
        (q * (self.n + 1) + lo) * (self.n + 1) + hi
    }
}

/// Membership by breadth-first search over `(state, lo, hi)`.
pub fn accepts(a: &WkAutomaton, w: &Word) -> bool {
    let ca = Compiled::new(a);
    accepts_compiled(&ca, w.symbols())
}

pub(crate) fn accepts_compiled(ca: &Compiled<'_>, input: &[Symbol]) -> bool {
    let n = input.len();
    let space = ConfigSpace { n };
    let mut seen = vec![false; ca.finals.len() * (n + 1) * (n + 1)];
    let mut queue = VecDeque::new();
    seen[space.index(ca.initial, 0, n)] = true;
    queue.push_back((ca.initial, 0, n));
    while let Some((q, lo, hi)) = queue.pop_front() {
        if lo == hi && ca.finals[q] {
            return true;
        }
        for (t, nlo, nhi) in ca.successors(q, input, lo, hi) {
            let p = ca.targets[t];
            let k = space.index(p, nlo, nhi);
            if !seen[k] {
                seen[k] = true;
                queue.push_back((p, nlo, nhi));
            }
        }
    }
    false
}

/// An accepting computation: `configurations[i+1]` follows from
/// `configurations[i]` by `transitions[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub input: Word,
    pub configurations: Vec<Configuration>,
    pub transitions: Vec<WkTransition>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }
}

/// A shortest accepting computation; ties go to the earliest-declared
/// transitions.
pub fn trace(a: &WkAutomaton, w: &Word) -> Option<Trace> {
    let ca = Compiled::new(a);
    let input = w.symbols();
    let n = input.len();
    let space = ConfigSpace { n };
    // parent[k] = (previous config index, transition)
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut seen = vec![false; ca.finals.len() * (n + 1) * (n + 1)];
    let mut queue = VecDeque::new();
    let start = space.index(ca.initial, 0, n);
    seen[start] = true;
    queue.push_back((ca.initial, 0, n));

    let mut found = None;
    while let Some((q, lo, hi)) = queue.pop_front() {
        if lo == hi && ca.finals[q] {
            found = Some((q, lo, hi));
            break;
        }
        for (t, nlo, nhi) in ca.successors(q, input, lo, hi) {
            let p = ca.targets[t];
            let k = space.index(p, nlo, nhi);
            if !seen[k] {
                seen[k] = true;
                parent.insert(k, (space.index(q, lo, hi), t));
                queue.push_back((p, nlo, nhi));
            }
        }
    }

    let (q, lo, hi) = found?;
    let decode = |k: usize| {
        let hi = k % (n + 1);
        let lo = (k / (n + 1)) % (n + 1);
        let q = k / ((n + 1) * (n + 1));
        Configuration { state: ca.state(q).clone(), lo, hi }
    };
    let mut configurations = vec![Configuration { state: ca.state(q).clone(), lo, hi }];
    let mut transitions = Vec::new();
    let mut k = space.index(q, lo, hi);
    while let Some(&(prev, t)) = parent.get(&k) {
        transitions.push(ca.transition(t).clone());
        configurations.push(decode(prev));
        k = prev;
    }
    configurations.reverse();
    transitions.reverse();
    Some(Trace { input: w.clone(), configurations, transitions })
}

/// Sort key for length-lexicographic order under the alphabet's declaration
/// order.
pub fn length_lex_key(alphabet: &[Symbol], w: &Word) -> (usize, Vec<usize>) {
    let rank = |s: &Symbol| alphabet.iter().position(|x| x == s).unwrap_or(usize::MAX);
    (w.len(), w.symbols().iter().map(rank).collect())
}

pub fn sort_length_lex(alphabet: &[Symbol], words: &mut [Word]) {
    words.sort_by_cached_key(|w| length_lex_key(alphabet, w));
}

/// All words over `alphabet` of length at most `max_len`, in length-lex order.
pub fn words_up_to(alphabet: &[Symbol], max_len: usize) -> impl Iterator<Item = Word> + '_ {
    (0..=max_len).flat_map(move |len| {
        let k = alphabet.len();
        let count = if len == 0 { 1 } else if k == 0 { 0 } else { k.pow(len as u32) };
        (0..count).map(move |mut code| {
            let mut digits = vec![alphabet.first().copied(); len];
            for slot in digits.iter_mut().rev() {
                *slot = Some(alphabet[code % k]);
                code /= k;
            }
            Word::from_symbols(digits.into_iter().map(Option::unwrap).collect())
        })
    })
}

/// The accepted words of length at most `max_len`, in length-lex order.
///
/// Searches over `(state, x, y)` where `x` is what the left head has read and
/// `y` what the right head has read; `x·y` is emitted at final states.
pub fn enumerate(a: &WkAutomaton, max_len: usize) -> Vec<Word> {
    let ca = Compiled::new(a);
    let mut seen: HashSet<(usize, Vec<Symbol>, Vec<Symbol>)> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut found: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let start = (ca.initial, Vec::new(), Vec::new());
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some((q, x, y)) = queue.pop_front() {
        if ca.finals[q] {
            let word = Word::from_symbols(x.iter().chain(y.iter()).copied().collect());
            found.insert(length_lex_key(&a.alphabet, &word));
        }
        for &t in &ca.out[q] {
            let tr = ca.transition(t);
            if x.len() + y.len() + tr.left.len() + tr.right.len() > max_len {
                continue;
            }
            let mut nx = x.clone();
            nx.extend_from_slice(tr.left.symbols());
            let mut ny = tr.right.symbols().to_vec();
            ny.extend_from_slice(&y);
            let next = (ca.targets[t], nx, ny);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    found
        .into_iter()
        .map(|(_, ranks)| Word::from_symbols(ranks.into_iter().map(|r| a.alphabet[r]).collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "counterexample", rename_all = "snake_case")]
pub enum Equivalence {
    Equal,
    Counterexample(Word),
}

fn same_alphabet(a: &[Symbol], b: &[Symbol]) -> bool {
    let sa: BTreeSet<_> = a.iter().collect();
    let sb: BTreeSet<_> = b.iter().collect();
    sa == sb
}

/// Compares the bounded languages of two automata over the same alphabet.
/// With `modulo_empty` the empty word is ignored on both sides.
pub fn equivalent_up_to(
    a: &WkAutomaton,
    b: &WkAutomaton,
    max_len: usize,
    modulo_empty: bool,
) -> Result<Equivalence, EngineError> {
    if !same_alphabet(&a.alphabet, &b.alphabet) {
        let show = |s: &[Symbol]| s.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        return Err(EngineError::AlphabetMismatch(show(&a.alphabet), show(&b.alphabet)));
    }
    let keep = |w: &Word| !(modulo_empty && w.is_empty());
    let la: BTreeSet<Word> = enumerate(a, max_len).into_iter().filter(keep).collect();
    let lb: BTreeSet<Word> = enumerate(b, max_len).into_iter().filter(keep).collect();
    Ok(la
        .symmetric_difference(&lb)
        .min_by_key(|w| length_lex_key(&a.alphabet, w))
        .cloned()
        .map_or(Equivalence::Equal, Equivalence::Counterexample))
}
