//! Witness languages as executable membership predicates, the bundled
//! corpus of example automata with the classification each one is expected
//! to carry, and a harness that replays those claims at a length bound.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::classify::{
    bounded_semantic_determinism, classify, embed_nfa_to_wk, nfa_flags, ClassificationReport,
    DeterminismKind, NfaFlags,
};
use crate::engine::{enumerate, length_lex_key, words_up_to};
use crate::format::{parse, AutomatonFile, ParseError};
use crate::model::{trim, Symbol, WkAutomaton, Word};

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("claim {claim}: unresolved oracle id {oracle}")]
    UnresolvedOracle { claim: String, oracle: String },
    #[error("max_len must be at least 1")]
    BadBound,
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
}

pub type Membership = Arc<dyn Fn(&[Symbol]) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct LanguageOracle {
    pub id: String,
    pub alphabet: Vec<Symbol>,
    pub member: Membership,
    pub description: String,
}

impl LanguageOracle {
    pub fn new(
        id: &str,
        alphabet: &str,
        description: &str,
        member: impl Fn(&str) -> bool + Send + Sync + 'static,
    ) -> Self {
        LanguageOracle {
            id: id.to_string(),
            alphabet: alphabet.chars().map(|c| Symbol::new(c).expect("oracle alphabet")).collect(),
            member: Arc::new(move |w: &[Symbol]| {
                let s: String = w.iter().map(|c| c.as_char()).collect();
                member(&s)
            }),
            description: description.to_string(),
        }
    }

    pub fn accepts(&self, w: &Word) -> bool {
        (self.member)(w.symbols())
    }

    /// Members of length at most `max_len`, in length-lex order.
    pub fn bounded_language(&self, max_len: usize) -> Vec<Word> {
        words_up_to(&self.alphabet, max_len).filter(|w| self.accepts(w)).collect()
    }
}

impl fmt::Debug for LanguageOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LanguageOracle")
            .field("id", &self.id)
            .field("alphabet", &self.alphabet)
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}

/// `(i, j)` when `w = a^i b^j`.
fn a_then_b(w: &str) -> Option<(usize, usize)> {
    let i = w.chars().take_while(|&c| c == 'a').count();
    let rest = &w[i..];
    rest.chars().all(|c| c == 'b').then_some((i, rest.len()))
}

fn is_aaa_ab_bbb(w: &str) -> bool {
    let Some(mid) = w.strip_prefix("aaa").and_then(|r| r.strip_suffix("bbb")) else {
        return false;
    };
    mid.len() % 2 == 0 && mid.as_bytes().chunks(2).all(|c| c == b"ab")
}

pub fn oracle_registry() -> Vec<LanguageOracle> {
    vec![
        LanguageOracle::new("L_o", "ab", "a^m b^n with m <= n <= 2m", |w| {
            a_then_b(w).is_some_and(|(m, n)| m <= n && n <= 2 * m)
        }),
        LanguageOracle::new("anbn_union_anb2n", "ab", "a^n b^n + a^n b^2n", |w| {
            a_then_b(w).is_some_and(|(m, n)| n == m || n == 2 * m)
        }),
        LanguageOracle::new("bab_plus_b", "ab", "b*ab* + b*", |w| w.chars().filter(|&c| c == 'a').count() <= 1),
        LanguageOracle::new("bab", "ab", "b*ab*", |w| w.chars().filter(|&c| c == 'a').count() == 1),
        LanguageOracle::new("ba_plus_a", "ab", "ba* + a*", |w| {
            let rest = w.strip_prefix('b').unwrap_or(w);
            rest.chars().all(|c| c == 'a')
        }),
        LanguageOracle::new("palindromes_ab", "ab", "palindromes over {a, b}", |w| {
            w.chars().eq(w.chars().rev())
        }),
        LanguageOracle::new("anbn", "ab", "a^n b^n", |w| a_then_b(w).is_some_and(|(m, n)| m == n)),
        LanguageOracle::new("even_blocks", "ab", "a^2n b^2n + a^2(n+1) b^2n", |w| {
            a_then_b(w).is_some_and(|(i, j)| j % 2 == 0 && (i == j || i == j + 2))
        }),
        LanguageOracle::new("aaa_ab_bbb", "ab", "aaa(ab)*bbb", is_aaa_ab_bbb),
        LanguageOracle::new("binary_integers", "+~01", "(+|~)?(0|1)(0|1)*, ~ is the minus sign", |w| {
            let digits = w.strip_prefix(['+', '~']).unwrap_or(w);
            !digits.is_empty() && digits.chars().all(|c| c == '0' || c == '1')
        }),
    ]
}

pub fn find_oracle(id: &str) -> Option<LanguageOracle> {
    oracle_registry().into_iter().find(|o| o.id == id)
}

/// `reach[i]` is true when `w[..i]` is a concatenation of words from `parts`.
fn star_prefixes(parts: &[Vec<Symbol>], w: &[Symbol]) -> Vec<bool> {
    let mut reach = vec![false; w.len() + 1];
    reach[0] = true;
    for i in 0..w.len() {
        if !reach[i] {
            continue;
        }
        for p in parts {
            if !p.is_empty() && w[i..].starts_with(p) {
                reach[i + p.len()] = true;
            }
        }
    }
    reach
}

/// Membership in `V*·U*`, the shape of every stateless simple language.
pub fn vstar_ustar_oracle(v: &[Word], u: &[Word]) -> LanguageOracle {
    let mut alphabet: Vec<Symbol> = Vec::new();
    for s in v.iter().chain(u).flat_map(|w| w.symbols()) {
        if !alphabet.contains(s) {
            alphabet.push(*s);
        }
    }
    let vs: Vec<Vec<Symbol>> = v.iter().map(|w| w.symbols().to_vec()).collect();
    // U* membership of a suffix is V-style membership on reversed words
    let us_rev: Vec<Vec<Symbol>> = u.iter().map(|w| w.symbols().iter().rev().copied().collect()).collect();
    let show = |ws: &[Word]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("+");
    LanguageOracle {
        id: format!("vstar_ustar({};{})", show(v), show(u)),
        alphabet,
        member: Arc::new(move |w: &[Symbol]| {
            let left = star_prefixes(&vs, w);
            let rev: Vec<Symbol> = w.iter().rev().copied().collect();
            let right = star_prefixes(&us_rev, &rev);
            (0..=w.len()).any(|k| left[k] && right[w.len() - k])
        }),
        description: format!("({})*({})*", show(v), show(u)),
    }
}

/// The flags a claim asserts; `None` means the claim says nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ExpectedFlags {
    pub stateless: Option<bool>,
    pub all_final: Option<bool>,
    pub simple: Option<bool>,
    pub one_limited: Option<bool>,
    pub state_deterministic: Option<bool>,
    pub deterministic: Option<bool>,
    pub quasi_deterministic: Option<bool>,
    pub nfa_is_dfa: Option<bool>,
    pub nfa_state_deterministic: Option<bool>,
    pub nfa_quasi_deterministic: Option<bool>,
}

impl ExpectedFlags {
    /// `(name, expected, actual)` for every asserted flag that disagrees.
    fn mismatches(&self, wk: &ClassificationReport, nfa: Option<&NfaFlags>) -> Vec<(&'static str, bool, Option<bool>)> {
        let pairs = [
            ("stateless", self.stateless, Some(wk.stateless)),
            ("all_final", self.all_final, Some(wk.all_final)),
            ("simple", self.simple, Some(wk.simple)),
            ("one_limited", self.one_limited, Some(wk.one_limited)),
            ("state_deterministic", self.state_deterministic, Some(wk.state_deterministic)),
            ("deterministic", self.deterministic, Some(wk.deterministic)),
            ("quasi_deterministic", self.quasi_deterministic, Some(wk.quasi_deterministic)),
            ("nfa_is_dfa", self.nfa_is_dfa, nfa.map(|f| f.is_dfa)),
            ("nfa_state_deterministic", self.nfa_state_deterministic, nfa.map(|f| f.state_deterministic)),
            ("nfa_quasi_deterministic", self.nfa_quasi_deterministic, nfa.map(|f| f.quasi_deterministic)),
        ];
        pairs
            .into_iter()
            .filter_map(|(name, want, got)| want.filter(|w| got != Some(*w)).map(|w| (name, w, got)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimVerdict {
    pub language_match: bool,
    pub flags_match: bool,
    pub details: Vec<String>,
}

impl ClaimVerdict {
    pub fn passed(&self) -> bool {
        self.language_match && self.flags_match
    }
}

#[derive(Debug, Clone)]
pub struct ClaimRecord {
    pub claim_id: String,
    /// corpus file name the automaton was loaded from
    pub file: String,
    pub automaton: AutomatonFile,
    pub oracle_id: Option<String>,
    pub expected: ExpectedFlags,
    pub bound: usize,
    pub verdict: Option<ClaimVerdict>,
}

impl ClaimRecord {
    /// The automaton as a WK automaton; finite automata are embedded.
    pub fn wk(&self) -> WkAutomaton {
        match &self.automaton {
            AutomatonFile::Wk(a) => a.clone(),
            AutomatonFile::Nfa(n) => embed_nfa_to_wk(n),
        }
    }
}

struct Entry {
    id: &'static str,
    file: &'static str,
    text: &'static str,
    oracle: &'static str,
    expected: ExpectedFlags,
}

fn registry() -> Vec<Entry> {
    let t = Some(true);
    let f = Some(false);
    let none = ExpectedFlags::default();
    vec![
        Entry {
            id: "Lo_stateless",
            file: "lo.wka",
            text: include_str!("../../../corpus/lo.wka"),
            oracle: "L_o",
            expected: ExpectedFlags {
                stateless: t,
                all_final: t,
                state_deterministic: t,
                quasi_deterministic: t,
                deterministic: f,
                ..none
            },
        },
        Entry {
            id: "anbn_stateless",
            file: "anbn.wka",
            text: include_str!("../../../corpus/anbn.wka"),
            oracle: "anbn",
            expected: ExpectedFlags { stateless: t, quasi_deterministic: t, ..none },
        },
        Entry {
            id: "palindrome_qDF1",
            file: "palindrome.wka",
            text: include_str!("../../../corpus/palindrome.wka"),
            oracle: "palindromes_ab",
            expected: ExpectedFlags {
                all_final: t,
                one_limited: t,
                simple: t,
                quasi_deterministic: t,
                deterministic: t,
                ..none
            },
        },
        Entry {
            id: "even_blocks_qDFS",
            file: "even_blocks.wka",
            text: include_str!("../../../corpus/even_blocks.wka"),
            oracle: "even_blocks",
            expected: ExpectedFlags {
                all_final: t,
                simple: t,
                state_deterministic: t,
                quasi_deterministic: t,
                one_limited: f,
                ..none
            },
        },
        Entry {
            id: "aaa_ab_bbb_qDF",
            file: "aaa_ab_bbb.wka",
            text: include_str!("../../../corpus/aaa_ab_bbb.wka"),
            oracle: "aaa_ab_bbb",
            expected: ExpectedFlags {
                all_final: t,
                state_deterministic: t,
                quasi_deterministic: t,
                simple: f,
                ..none
            },
        },
        Entry {
            id: "bab_qD1",
            file: "bab.wka",
            text: include_str!("../../../corpus/bab.wka"),
            oracle: "bab",
            expected: ExpectedFlags {
                one_limited: t,
                simple: t,
                quasi_deterministic: t,
                deterministic: t,
                all_final: f,
                stateless: f,
                state_deterministic: f,
                ..none
            },
        },
        Entry {
            id: "ba_plus_a_qDF1",
            file: "ba_plus_a.wka",
            text: include_str!("../../../corpus/ba_plus_a.wka"),
            oracle: "ba_plus_a",
            expected: ExpectedFlags { all_final: t, one_limited: t, simple: t, quasi_deterministic: t, ..none },
        },
        Entry {
            id: "binary_int_nfa",
            file: "binary_int.wka",
            text: include_str!("../../../corpus/binary_int.wka"),
            oracle: "binary_integers",
            expected: ExpectedFlags {
                nfa_quasi_deterministic: t,
                nfa_state_deterministic: f,
                nfa_is_dfa: f,
                quasi_deterministic: t,
                deterministic: f,
                ..none
            },
        },
        Entry {
            id: "bab_plus_b_dfa",
            file: "bab_plus_b.wka",
            text: include_str!("../../../corpus/bab_plus_b.wka"),
            oracle: "bab_plus_b",
            expected: ExpectedFlags {
                quasi_deterministic: t,
                deterministic: t,
                state_deterministic: f,
                nfa_is_dfa: t,
                ..none
            },
        },
    ]
}

fn record(e: &Entry, automaton: AutomatonFile) -> ClaimRecord {
    ClaimRecord {
        claim_id: e.id.to_string(),
        file: e.file.to_string(),
        automaton,
        oracle_id: Some(e.oracle.to_string()),
        expected: e.expected,
        bound: 0,
        verdict: None,
    }
}

/// The built-in corpus, compiled into the library.
pub fn bundled_automata() -> Vec<ClaimRecord> {
    registry()
        .iter()
        .map(|e| {
            let a = parse(e.text).unwrap_or_else(|err| panic!("bundled {}: {err}", e.file));
            record(e, a)
        })
        .collect()
}

/// The same claims, with the automata read from `dir/<file>.wka`.
pub fn bundled_automata_from_dir(dir: &Path) -> Result<Vec<ClaimRecord>, WitnessError> {
    registry()
        .iter()
        .map(|e| {
            let path = dir.join(e.file);
            let text = std::fs::read_to_string(&path).map_err(|source| WitnessError::Io { path: path.clone(), source })?;
            let a = parse(&text).map_err(|source| WitnessError::Parse { path, source })?;
            Ok(record(e, a))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ClaimsReport {
    pub records: Vec<ClaimRecord>,
    pub passed: usize,
    pub failed: usize,
}

impl ClaimsReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

fn check_one(rec: &ClaimRecord, oracle: Option<&LanguageOracle>, max_len: usize) -> ClaimVerdict {
    let wk = rec.wk();
    let mut details = Vec::new();

    let language_match = match oracle {
        None => true,
        Some(o) => {
            let sa: BTreeSet<&Symbol> = wk.alphabet.iter().collect();
            let so: BTreeSet<&Symbol> = o.alphabet.iter().collect();
            if sa != so {
                details.push(format!("oracle {} alphabet differs from the automaton's", o.id));
                false
            } else {
                let got: BTreeSet<Word> = enumerate(&wk, max_len).into_iter().filter(|w| !w.is_empty()).collect();
                let want: BTreeSet<Word> =
                    o.bounded_language(max_len).into_iter().filter(|w| !w.is_empty()).collect();
                let diff = got.symmetric_difference(&want).min_by_key(|w| length_lex_key(&wk.alphabet, w));
                if let Some(w) = diff {
                    let side = if got.contains(w) { "accepted but not in" } else { "in but not accepted against" };
                    details.push(format!("word {w} {side} oracle {}", o.id));
                }
                diff.is_none()
            }
        }
    };

    let report = classify(&wk, true);
    let nfa = match &rec.automaton {
        AutomatonFile::Nfa(n) => Some(nfa_flags(n)),
        AutomatonFile::Wk(_) => None,
    };
    let mut flags_match = true;
    for (name, want, got) in rec.expected.mismatches(&report, nfa.as_ref()) {
        flags_match = false;
        details.push(format!("{name}: expected {want}, got {got:?}"));
    }

    let trimmed = trim(&wk);
    for (kind, exact) in [
        (DeterminismKind::Deterministic, report.deterministic),
        (DeterminismKind::QuasiDeterministic, report.quasi_deterministic),
    ] {
        let sem = bounded_semantic_determinism(&trimmed, kind, max_len);
        if sem.holds != exact {
            flags_match = false;
            details.push(format!("{kind:?}: exact checker says {exact}, bounded search to {max_len} says {}", sem.holds));
        }
    }

    ClaimVerdict { language_match, flags_match, details }
}

/// Replays every record at `max_len`, filling in the verdicts.
pub fn check_records(records: Vec<ClaimRecord>, max_len: usize) -> Result<ClaimsReport, WitnessError> {
    if max_len == 0 {
        return Err(WitnessError::BadBound);
    }
    let oracles = oracle_registry();
    let mut resolved = Vec::with_capacity(records.len());
    for rec in &records {
        let o = match &rec.oracle_id {
            None => None,
            Some(id) => Some(oracles.iter().find(|o| &o.id == id).ok_or_else(|| WitnessError::UnresolvedOracle {
                claim: rec.claim_id.clone(),
                oracle: id.clone(),
            })?),
        };
        resolved.push(o);
    }

    let verdicts: Vec<ClaimVerdict> = std::thread::scope(|s| {
        let handles: Vec<_> = records
            .iter()
            .zip(&resolved)
            .map(|(rec, o)| s.spawn(move || check_one(rec, *o, max_len)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("claim check panicked")).collect()
    });

    let mut records = records;
    let mut passed = 0;
    for (rec, v) in records.iter_mut().zip(verdicts) {
        rec.bound = max_len;
        if v.passed() {
            passed += 1;
        }
        rec.verdict = Some(v);
    }
    let failed = records.len() - passed;
    Ok(ClaimsReport { records, passed, failed })
}

/// Replays the built-in corpus.
pub fn check_claims(max_len: usize) -> Result<ClaimsReport, WitnessError> {
    check_records(bundled_automata(), max_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn oracle(id: &str) -> LanguageOracle {
        find_oracle(id).unwrap()
    }

    #[test]
    fn oracle_spot_checks() {
        assert!(oracle("L_o").accepts(&w("aabbb")));
        assert!(!oracle("L_o").accepts(&w("aab")));
        assert!(oracle("palindromes_ab").accepts(&w("aba")));
        assert!(!oracle("palindromes_ab").accepts(&w("ab")));
        assert!(oracle("aaa_ab_bbb").accepts(&w("aaabbb")));
        assert!(oracle("aaa_ab_bbb").accepts(&w("aaaababbbb")));
        assert!(!oracle("aaa_ab_bbb").accepts(&w("aaababbb")));
        assert!(oracle("even_blocks").accepts(&w("aa")));
        assert!(!oracle("even_blocks").accepts(&w("aab")));
        assert!(oracle("ba_plus_a").accepts(&w("baa")));
        assert!(!oracle("ba_plus_a").accepts(&w("aba")));
        assert!(oracle("binary_integers").accepts(&w("~0")));
        assert!(!oracle("binary_integers").accepts(&w("+")));
        assert!(!oracle("binary_integers").accepts(&w("1+")));
        assert!(oracle("anbn_union_anb2n").accepts(&w("abb")));
        assert!(!oracle("anbn_union_anb2n").accepts(&w("abbb")));
        assert!(oracle("bab_plus_b").accepts(&w("bbb")));
        assert!(!oracle("bab").accepts(&w("bbb")));
    }

    #[test]
    fn registry_has_every_oracle() {
        let ids: Vec<String> = oracle_registry().into_iter().map(|o| o.id).collect();
        for id in [
            "L_o", "anbn_union_anb2n", "bab_plus_b", "bab", "ba_plus_a", "palindromes_ab", "anbn", "even_blocks",
            "aaa_ab_bbb", "binary_integers",
        ] {
            assert!(ids.iter().any(|x| x == id), "{id}");
        }
    }

    #[test]
    fn vstar_ustar_examples() {
        let o = vstar_ustar_oracle(&[w("ab")], &[w("b")]);
        assert!(o.accepts(&w("abb")));
        assert!(!o.accepts(&w("bab")));
        let e = vstar_ustar_oracle(&[], &[]);
        assert!(e.accepts(&w("")));
        assert!(!e.accepts(&w("a")));
        assert!(vstar_ustar_oracle(&[w("a")], &[w("a")]).accepts(&w("aaa")));
    }

    /// Direct enumeration of decompositions, independent of the DP.
    fn in_star_brute(parts: &[Word], s: &[Symbol]) -> bool {
        s.is_empty() || parts.iter().any(|p| !p.is_empty() && s.starts_with(p.symbols()) && in_star_brute(parts, &s[p.len()..]))
    }

    #[test]
    fn vstar_ustar_matches_brute_force() {
        let v = [w("ab"), w("b")];
        let u = [w("ba"), w("aa")];
        let o = vstar_ustar_oracle(&v, &u);
        for word in words_up_to(&o.alphabet, 8) {
            let s = word.symbols();
            let brute = (0..=s.len()).any(|k| in_star_brute(&v, &s[..k]) && in_star_brute(&u, &s[k..]));
            assert_eq!(o.accepts(&word), brute, "{word}");
        }
    }

    #[test]
    fn bundled_records_are_well_formed() {
        let recs = bundled_automata();
        assert!(recs.len() >= 9);
        for r in &recs {
            let violations = match &r.automaton {
                AutomatonFile::Wk(a) => validate(a),
                AutomatonFile::Nfa(n) => validate(n),
            };
            assert!(violations.is_empty(), "{}: {violations:?}", r.claim_id);
            let o = find_oracle(r.oracle_id.as_deref().unwrap()).expect("oracle resolves");
            let sa: BTreeSet<_> = r.wk().alphabet.into_iter().collect();
            let so: BTreeSet<_> = o.alphabet.into_iter().collect();
            assert_eq!(sa, so, "{}", r.claim_id);
        }
    }

    #[test]
    fn claims_pass_at_ten() {
        let report = check_claims(10).unwrap();
        for r in &report.records {
            let v = r.verdict.as_ref().unwrap();
            assert!(v.passed(), "{}: {:?}", r.claim_id, v.details);
        }
        assert!(report.all_passed());
    }

    #[test]
    fn wrong_expected_flag_fails() {
        let mut recs = bundled_automata();
        recs.retain(|r| r.claim_id == "Lo_stateless");
        recs[0].expected.deterministic = Some(true);
        let report = check_records(recs, 6).unwrap();
        let v = report.records[0].verdict.as_ref().unwrap();
        assert!(v.language_match);
        assert!(!v.flags_match);
        assert_eq!(report.failed, 1);
    }

    #[test]
    fn unresolved_oracle_is_an_error() {
        let mut recs = bundled_automata();
        recs[0].oracle_id = Some("nope".into());
        assert!(matches!(check_records(recs, 4), Err(WitnessError::UnresolvedOracle { .. })));
        assert!(matches!(check_claims(0), Err(WitnessError::BadBound)));
    }

    #[test]
    fn lo_language_at_six() {
        let lo = bundled_automata().into_iter().find(|r| r.claim_id == "Lo_stateless").unwrap();
        let got: Vec<String> = enumerate(&lo.wk(), 6).iter().map(|w| w.to_string()).collect();
        assert_eq!(got, ["_", "ab", "abb", "aabb", "aabbb", "aaabbb", "aabbbb"]);
        assert_eq!(oracle("L_o").bounded_language(6), enumerate(&lo.wk(), 6));
    }

    #[test]
    fn anbn_fails_pumping_spot_check() {
        // every split x·y·z of a^p b^p with |xy| <= p, |y| >= 1 pumps out
        let o = oracle("anbn");
        for p in 1..=6 {
            let s: String = "a".repeat(p) + &"b".repeat(p);
            for i in 0..p {
                for j in i + 1..=p {
                    let (x, y, z) = (&s[..i], &s[i..j], &s[j..]);
                    let pumped = format!("{x}{y}{y}{z}");
                    assert!(!o.accepts(&w(&pumped)), "{pumped}");
                }
            }
        }
    }
}
