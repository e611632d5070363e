//! Random automaton families and independent reference implementations
//! shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wk_automata::model::NfaTransition;
use wk_automata::{Nfa, StateId, Symbol, WkAutomaton, WkTransition, Word};

pub fn ab() -> Vec<Symbol> {
    vec![Symbol::new('a').unwrap(), Symbol::new('b').unwrap()]
}

pub fn state(i: usize) -> StateId {
    StateId::new(format!("q{i}")).unwrap()
}

pub fn word(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn word_from(ix: &[usize]) -> Word {
    let ab = ab();
    Word::from_symbols(ix.iter().map(|&i| ab[i]).collect())
}

/// Shape of a random WK automaton before names are attached.
#[derive(Debug, Clone)]
pub struct WkShape {
    pub states: usize,
    pub finals: Vec<bool>,
    pub transitions: Vec<(usize, Vec<usize>, Vec<usize>, usize)>,
}

pub fn build_wk(shape: &WkShape) -> WkAutomaton {
    let mut transitions: Vec<WkTransition> = Vec::new();
    for (s, u, v, t) in &shape.transitions {
        let tr = WkTransition::new(&state(*s), word_from(u), word_from(v), &state(*t));
        if !transitions.contains(&tr) {
            transitions.push(tr);
        }
    }
    WkAutomaton {
        alphabet: ab(),
        states: (0..shape.states).map(state).collect(),
        initial: state(0),
        finals: (0..shape.states).filter(|&i| shape.finals[i]).map(state).collect(),
        transitions,
    }
}

/// Random WK automata over {a, b} with at most `max_states` states,
/// `max_trans` transitions and radius at most `max_radius`.
pub fn wk_strategy(max_states: usize, max_trans: usize, max_radius: usize) -> impl Strategy<Value = WkAutomaton> {
    (1..=max_states)
        .prop_flat_map(move |n| {
            let word = prop::collection::vec(0..2usize, 0..=max_radius);
            let trans = prop::collection::vec((0..n, word.clone(), word, 0..n), 0..=max_trans);
            (Just(n), prop::collection::vec(any::<bool>(), n), trans)
        })
        .prop_map(|(states, finals, transitions)| build_wk(&WkShape { states, finals, transitions }))
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<usize> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..2)).collect()
}

/// The seeded family used by the acceptance suite.
pub fn random_wk(seed: u64, max_states: usize, max_trans: usize, max_radius: usize) -> WkAutomaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_states);
    let finals = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let k = rng.gen_range(0..=max_trans);
    let transitions = (0..k)
        .map(|_| {
            let s = rng.gen_range(0..n);
            let u = random_word(&mut rng, max_radius);
            let v = random_word(&mut rng, max_radius);
            (s, u, v, rng.gen_range(0..n))
        })
        .collect();
    build_wk(&WkShape { states: n, finals, transitions })
}

#[derive(Debug, Clone)]
pub struct NfaShape {
    pub states: usize,
    pub finals: Vec<bool>,
    /// label 0 = λ, 1 = a, 2 = b
    pub transitions: Vec<(usize, usize, usize)>,
}

pub fn build_nfa(shape: &NfaShape) -> Nfa {
    let ab = ab();
    let mut transitions: Vec<NfaTransition> = Vec::new();
    for &(s, l, t) in &shape.transitions {
        let tr = NfaTransition { source: state(s), label: (l > 0).then(|| ab[l - 1]), target: state(t) };
        if !transitions.contains(&tr) {
            transitions.push(tr);
        }
    }
    Nfa {
        alphabet: ab,
        states: (0..shape.states).map(state).collect(),
        initial: state(0),
        finals: (0..shape.states).filter(|&i| shape.finals[i]).map(state).collect(),
        transitions,
    }
}

pub fn nfa_strategy(max_states: usize, max_trans: usize) -> impl Strategy<Value = Nfa> {
    (1..=max_states)
        .prop_flat_map(move |n| {
            let trans = prop::collection::vec((0..n, 0..3usize, 0..n), 0..=max_trans);
            (Just(n), prop::collection::vec(any::<bool>(), n), trans)
        })
        .prop_map(|(states, finals, transitions)| build_nfa(&NfaShape { states, finals, transitions }))
}

pub fn random_nfa(seed: u64, max_states: usize, max_trans: usize) -> Nfa {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_states);
    let finals = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let k = rng.gen_range(0..=max_trans);
    let transitions = (0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(0..3), rng.gen_range(0..n))).collect();
    build_nfa(&NfaShape { states: n, finals, transitions })
}

/// Membership by plain recursion on the unread segment, without any visited
/// set. Runs of λ,λ-steps longer than |Q|-1 are cut (a shortest accepting
/// run never repeats a configuration), and the total depth is capped at
/// (|w|+1)·|Q|.
pub fn naive_accepts(a: &WkAutomaton, w: &[Symbol]) -> bool {
    fn go(a: &WkAutomaton, q: &StateId, rest: &[Symbol], lambda_run: usize, depth: usize, cap: usize) -> bool {
        if rest.is_empty() && a.finals.contains(q) {
            return true;
        }
        if depth == cap {
            return false;
        }
        for t in a.transitions.iter().filter(|t| &t.source == q) {
            let (u, v) = (t.left.symbols(), t.right.symbols());
            if u.len() + v.len() > rest.len() || !rest.starts_with(u) || !rest.ends_with(v) {
                continue;
            }
            let idle = u.is_empty() && v.is_empty();
            if idle && lambda_run + 1 >= a.states.len() {
                continue;
            }
            let next_run = if idle { lambda_run + 1 } else { 0 };
            if go(a, &t.target, &rest[u.len()..rest.len() - v.len()], next_run, depth + 1, cap) {
                return true;
            }
        }
        false
    }
    go(a, &a.initial, w, 0, 0, (w.len() + 1) * a.states.len())
}

/// Standard NFA+λ simulation by λ-closed state sets.
pub fn nfa_simulate(n: &Nfa, w: &[Symbol]) -> bool {
    use std::collections::BTreeSet;
    let closure = |mut set: BTreeSet<StateId>| {
        loop {
            let more: Vec<StateId> = n
                .transitions
                .iter()
                .filter(|t| t.label.is_none() && set.contains(&t.source) && !set.contains(&t.target))
                .map(|t| t.target.clone())
                .collect();
            if more.is_empty() {
                return set;
            }
            set.extend(more);
        }
    };
    let mut cur = closure(BTreeSet::from([n.initial.clone()]));
    for s in w {
        let next = n
            .transitions
            .iter()
            .filter(|t| t.label == Some(*s) && cur.contains(&t.source))
            .map(|t| t.target.clone())
            .collect();
        cur = closure(next);
    }
    cur.iter().any(|q| n.finals.contains(q))
}
