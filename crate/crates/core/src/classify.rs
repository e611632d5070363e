//! Restriction classes (N, F, S, 1) and the three determinism notions:
//! deterministic (D), state-deterministic (sD) and quasi-deterministic (qD).
//!
//! The D and qD checkers are exact and syntactic. A configuration `(q, w)`
//! can occur in some computation for every remaining word `w` exactly when
//! `q` is reachable in the transition graph: if a path from the initial
//! state to `q` reads `x` on the left and `y` on the right, the input `x·w·y`
//! gets there. Two transitions out of `q` are enabled together on some `w`
//! iff their left words are prefix-comparable and their right words are
//! suffix-comparable (take `w` = longer left word · longer right word).
//! [`bounded_semantic_determinism`] checks the same properties by brute force
//! over inputs and is used to cross-check the exact deciders.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{words_up_to, Compiled};
use crate::model::{
    graph_reachable, radius, trim, Automaton, Configuration, Nfa, StateId, Symbol, WkAutomaton,
    WkTransition, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("not quasi-deterministic: state {0} violates the partition conditions")]
    NotQuasiDeterministic(StateId),
}

pub fn prefix_comparable(u1: &[Symbol], u2: &[Symbol]) -> bool {
    u1.starts_with(u2) || u2.starts_with(u1)
}

pub fn suffix_comparable(v1: &[Symbol], v2: &[Symbol]) -> bool {
    v1.ends_with(v2) || v2.ends_with(v1)
}

/// Two transitions out of `state` that violate a determinism property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub state: StateId,
    pub first: WkTransition,
    pub second: WkTransition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub holds: bool,
    pub evidence: Option<Conflict>,
}

impl Decision {
    fn from_conflict(evidence: Option<Conflict>) -> Self {
        Decision { holds: evidence.is_none(), evidence }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct StructuralFlags {
    pub stateless: bool,
    pub all_final: bool,
    pub simple: bool,
    pub one_limited: bool,
}

pub fn structural_flags(a: &WkAutomaton) -> StructuralFlags {
    let finals: BTreeSet<&StateId> = a.finals.iter().collect();
    let states: BTreeSet<&StateId> = a.states.iter().collect();
    let all_final = finals == states;
    StructuralFlags {
        stateless: all_final && states.len() == 1 && states.contains(&a.initial),
        all_final,
        simple: a.transitions.iter().all(|t| t.left.is_empty() || t.right.is_empty()),
        one_limited: a.transitions.iter().all(|t| t.left.len() + t.right.len() == 1),
    }
}

/// sD: all transitions leaving a state go to the same state.
pub fn is_state_deterministic(a: &WkAutomaton) -> Decision {
    for q in &a.states {
        let mut out = a.transitions.iter().filter(|t| t.source == *q);
        if let Some(first) = out.next() {
            if let Some(second) = out.find(|t| t.target != first.target) {
                return Decision::from_conflict(Some(Conflict {
                    state: q.clone(),
                    first: first.clone(),
                    second: second.clone(),
                }));
            }
        }
    }
    Decision::from_conflict(None)
}

/// First pair of co-enabled transitions at a reachable state; with
/// `targets_only` the pair must also disagree on the target.
fn co_enabled_conflict(a: &WkAutomaton, use_trim: bool, targets_only: bool) -> Option<Conflict> {
    let trimmed;
    let a = if use_trim {
        trimmed = trim(a);
        &trimmed
    } else {
        a
    };
    let reachable = graph_reachable(a);
    for q in a.states.iter().filter(|q| reachable.contains(*q)) {
        let out: Vec<&WkTransition> = a.transitions.iter().filter(|t| t.source == *q).collect();
        for (i, t1) in out.iter().enumerate() {
            for t2 in &out[i + 1..] {
                if targets_only && t1.target == t2.target {
                    continue;
                }
                if prefix_comparable(t1.left.symbols(), t2.left.symbols())
                    && suffix_comparable(t1.right.symbols(), t2.right.symbols())
                {
                    return Some(Conflict { state: q.clone(), first: (*t1).clone(), second: (*t2).clone() });
                }
            }
        }
    }
    None
}

/// qD: in every possible configuration all applicable transitions agree on
/// the next state.
pub fn is_quasi_deterministic(a: &WkAutomaton, use_trim: bool) -> Decision {
    Decision::from_conflict(co_enabled_conflict(a, use_trim, true))
}

/// D: at most one transition applies in every possible configuration. Two
/// co-enabled transitions count even when their targets coincide.
pub fn is_deterministic(a: &WkAutomaton, use_trim: bool) -> Decision {
    Decision::from_conflict(co_enabled_conflict(a, use_trim, false))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeterminismKind {
    #[serde(rename = "D")]
    Deterministic,
    #[serde(rename = "qD")]
    QuasiDeterministic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemanticCounterexample {
    pub input: Word,
    pub configuration: Configuration,
    pub first: WkTransition,
    pub second: WkTransition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemanticVerdict {
    pub holds: bool,
    pub counterexample: Option<SemanticCounterexample>,
}

/// The bound at which a conflict at any reachable state must show up: a
/// path to the state plus both conflicting reads.
pub fn default_semantic_bound(a: &WkAutomaton) -> usize {
    2 * (a.states.len() + 1) * radius(a)
}

/// Brute-force check of D or qD: runs every input of length at most
/// `max_len` (in length-lex order), visits every configuration reachable
/// from the initial one and inspects the transitions applicable there.
pub fn bounded_semantic_determinism(a: &WkAutomaton, kind: DeterminismKind, max_len: usize) -> SemanticVerdict {
    let ca = Compiled::new(a);
    for input in words_up_to(&a.alphabet, max_len) {
        if let Some(cx) = first_conflict_on(&ca, &input, kind) {
            return SemanticVerdict { holds: false, counterexample: Some(cx) };
        }
    }
    SemanticVerdict { holds: true, counterexample: None }
}

fn first_conflict_on(ca: &Compiled<'_>, input: &Word, kind: DeterminismKind) -> Option<SemanticCounterexample> {
    let syms = input.symbols();
    let n = syms.len();
    let idx = |q: usize, lo: usize, hi: usize| (q * (n + 1) + lo) * (n + 1) + hi;
    let mut seen = vec![false; ca.finals.len() * (n + 1) * (n + 1)];
    let mut stack = vec![(ca.initial, 0, n)];
    seen[idx(ca.initial, 0, n)] = true;
    while let Some((q, lo, hi)) = stack.pop() {
        let enabled: Vec<(usize, usize, usize)> = ca.successors(q, syms, lo, hi).collect();
        let clash = match kind {
            DeterminismKind::Deterministic => (enabled.len() >= 2).then(|| (enabled[0].0, enabled[1].0)),
            DeterminismKind::QuasiDeterministic => enabled.first().and_then(|&(t0, _, _)| {
                enabled
                    .iter()
                    .find(|&&(t, _, _)| ca.targets[t] != ca.targets[t0])
                    .map(|&(t, _, _)| (t0, t))
            }),
        };
        if let Some((t1, t2)) = clash {
            return Some(SemanticCounterexample {
                input: input.clone(),
                configuration: Configuration { state: ca.state(q).clone(), lo, hi },
                first: ca.transition(t1).clone(),
                second: ca.transition(t2).clone(),
            });
        }
        for (t, nlo, nhi) in enabled {
            let p = ca.targets[t];
            if !seen[idx(p, nlo, nhi)] {
                seen[idx(p, nlo, nhi)] = true;
                stack.push((p, nlo, nhi));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Evidence {
    pub state_deterministic: Option<Conflict>,
    pub deterministic: Option<Conflict>,
    pub quasi_deterministic: Option<Conflict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub stateless: bool,
    pub all_final: bool,
    pub simple: bool,
    pub one_limited: bool,
    pub state_deterministic: bool,
    pub deterministic: bool,
    pub quasi_deterministic: bool,
    pub evidence: Evidence,
}

/// Runs every exact checker. With `use_trim` all flags describe the trimmed
/// automaton.
pub fn classify(a: &WkAutomaton, use_trim: bool) -> ClassificationReport {
    let trimmed;
    let a = if use_trim {
        trimmed = trim(a);
        &trimmed
    } else {
        a
    };
    let s = structural_flags(a);
    let sd = is_state_deterministic(a);
    let d = is_deterministic(a, false);
    let qd = is_quasi_deterministic(a, false);
    ClassificationReport {
        stateless: s.stateless,
        all_final: s.all_final,
        simple: s.simple,
        one_limited: s.one_limited,
        state_deterministic: sd.holds,
        deterministic: d.holds,
        quasi_deterministic: qd.holds,
        evidence: Evidence {
            state_deterministic: sd.evidence,
            deterministic: d.evidence,
            quasi_deterministic: qd.evidence,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NfaFlags {
    pub is_dfa: bool,
    pub is_lambda_free: bool,
    pub state_deterministic: bool,
    pub quasi_deterministic: bool,
}

/// Targets of the transitions leaving `q`, split into λ-targets and
/// per-letter targets.
fn nfa_successors<'a>(n: &'a Nfa, q: &StateId) -> (BTreeSet<&'a StateId>, Vec<(Symbol, BTreeSet<&'a StateId>)>) {
    let mut lambda = BTreeSet::new();
    let mut letters: Vec<(Symbol, BTreeSet<&StateId>)> = Vec::new();
    for t in n.transitions.iter().filter(|t| t.source == *q) {
        match t.label {
            None => {
                lambda.insert(&t.target);
            }
            Some(s) => match letters.iter_mut().find(|(x, _)| *x == s) {
                Some((_, set)) => {
                    set.insert(&t.target);
                }
                None => letters.push((s, BTreeSet::from([&t.target]))),
            },
        }
    }
    (lambda, letters)
}

fn nfa_state_is_qd(n: &Nfa, q: &StateId) -> bool {
    let (lambda, letters) = nfa_successors(n, q);
    match lambda.len() {
        0 => letters.iter().all(|(_, set)| set.len() <= 1),
        1 => {
            let p = lambda.first().unwrap();
            letters.iter().all(|(_, set)| set.iter().all(|x| x == p))
        }
        _ => false,
    }
}

pub fn nfa_flags(n: &Nfa) -> NfaFlags {
    let is_lambda_free = n.transitions.iter().all(|t| t.label.is_some());
    let per_letter_unique = n.states.iter().all(|q| nfa_successors(n, q).1.iter().all(|(_, s)| s.len() <= 1));
    let state_deterministic = n.states.iter().all(|q| {
        let targets: BTreeSet<_> = n.transitions.iter().filter(|t| t.source == *q).map(|t| &t.target).collect();
        targets.len() <= 1
    });
    NfaFlags {
        is_dfa: is_lambda_free && per_letter_unique,
        is_lambda_free,
        state_deterministic,
        quasi_deterministic: n.states.iter().all(|q| nfa_state_is_qd(n, q)),
    }
}

/// States of a quasi-deterministic NFA split into `q_d` (no λ-move, at most
/// one successor per letter) and `q_s` (a single λ-successor that every
/// letter-move also goes to).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatePartition {
    pub q_d: BTreeSet<StateId>,
    pub q_s: BTreeSet<StateId>,
}

pub fn partition_states(n: &Nfa) -> Result<StatePartition, ClassifyError> {
    let mut part = StatePartition { q_d: BTreeSet::new(), q_s: BTreeSet::new() };
    for q in &n.states {
        if !nfa_state_is_qd(n, q) {
            return Err(ClassifyError::NotQuasiDeterministic(q.clone()));
        }
        let has_lambda = n.transitions.iter().any(|t| t.source == *q && t.label.is_none());
        if has_lambda {
            part.q_s.insert(q.clone());
        } else {
            part.q_d.insert(q.clone());
        }
    }
    Ok(part)
}

/// Views a finite automaton as a WK automaton whose right head never moves.
pub fn embed_nfa_to_wk(n: &Nfa) -> WkAutomaton {
    WkAutomaton {
        alphabet: n.alphabet.clone(),
        states: n.states.clone(),
        initial: n.initial().clone(),
        finals: n.finals.clone(),
        transitions: n
            .transitions
            .iter()
            .map(|t| WkTransition {
                source: t.source.clone(),
                left: Word::from_symbols(t.label.into_iter().collect()),
                right: Word::empty(),
                target: t.target.clone(),
            })
            .collect(),
    }
}
