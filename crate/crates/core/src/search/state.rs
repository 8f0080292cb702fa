//! Mutable state of one search path: eertree, period table, and the
//! symmetry-breaking and Lyndon bookkeeping, all undoable per symbol.

use super::period::{brute_force_periodic_suffix, PeriodTable};
use super::Threshold;
use crate::eertree::Eertree;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    Ok,
    ViolatesRichness,
    ViolatesPower,
}

/// Canonical relabelling: the word starts with 0 and every new symbol is
/// one more than the largest symbol used so far.
pub fn canonical_extension_filter(word: &[u8], a: u8) -> bool {
    match word.iter().max() {
        None => a == 0,
        Some(&m) => a <= m + 1,
    }
}

/// True iff some proper nonempty suffix `s` of `word` is lexicographically
/// smaller than the prefix of `word` of the same length. A suffix equal to
/// a prefix does not count as smaller.
pub fn lyndon_prune(word: &[u8]) -> bool {
    (1..word.len()).any(|i| {
        let s = &word[i..];
        s < &word[..s.len()]
    })
}

const NOT_PRENECKLACE: u32 = 0;

/// Incremental form of [`lyndon_prune`]: keeps, per prefix, the length of
/// its longest Lyndon prefix, or `NOT_PRENECKLACE` once a smaller suffix
/// has appeared.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LyndonTracker {
    period: Vec<u32>,
}

impl LyndonTracker {
    fn next(&self, word: &[u8], a: u8) -> u32 {
        let n = word.len();
        match self.period.last() {
            None => 1,
            Some(&NOT_PRENECKLACE) => NOT_PRENECKLACE,
            Some(&p) => {
                let b = word[n - p as usize];
                if a == b {
                    p
                } else if a > b {
                    n as u32 + 1
                } else {
                    NOT_PRENECKLACE
                }
            }
        }
    }

    /// Whether `word + a` has a proper suffix smaller than itself.
    #[inline]
    pub fn prunes(&self, word: &[u8], a: u8) -> bool {
        self.next(word, a) == NOT_PRENECKLACE
    }

    pub fn push(&mut self, word: &[u8], a: u8) {
        let p = self.next(word, a);
        self.period.push(p);
    }

    pub fn pop(&mut self) {
        self.period.pop();
    }

    pub fn is_pruned(&self) -> bool {
        self.period.last() == Some(&NOT_PRENECKLACE)
    }
}

#[derive(Debug, Clone)]
pub struct SearchState {
    alphabet: u8,
    tree: Eertree,
    periods: PeriodTable,
    // max_symbol[i]: largest symbol among the first i + 1 symbols.
    max_symbol: Vec<u8>,
    lyndon: LyndonTracker,
}

impl SearchState {
    pub fn new(alphabet: u8, threshold: Threshold) -> Self {
        SearchState {
            alphabet,
            tree: Eertree::new(alphabet),
            periods: PeriodTable::new(threshold),
            max_symbol: Vec::new(),
            lyndon: LyndonTracker::default(),
        }
    }

    /// Replays `word`, returning the index of the first symbol that fails.
    pub fn from_word(alphabet: u8, threshold: Threshold, word: &[u8]) -> Result<Self, (usize, Extension)> {
        let mut state = SearchState::new(alphabet, threshold);
        for (i, &a) in word.iter().enumerate() {
            if a >= alphabet {
                return Err((i, Extension::ViolatesRichness));
            }
            match state.extend_check(a) {
                Extension::Ok => {}
                other => return Err((i, other)),
            }
        }
        Ok(state)
    }

    pub fn word(&self) -> &[u8] {
        self.tree.word()
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    /// Largest symbol allowed next by the canonical-relabelling rule (inclusive).
    #[inline]
    pub fn canonical_limit(&self) -> u8 {
        match self.max_symbol.last() {
            None => 0,
            Some(&m) => (m + 1).min(self.alphabet - 1),
        }
    }

    #[inline]
    pub fn lyndon_prunes(&self, a: u8) -> bool {
        self.lyndon.prunes(self.word(), a)
    }

    /// Appends `a` if the result stays rich and power-free; otherwise the
    /// state is left unchanged.
    pub fn extend_check(&mut self, a: u8) -> Extension {
        assert!(a < self.alphabet, "symbol {a} outside alphabet");
        if !self.tree.append(a).expect("symbol in alphabet").created_new {
            self.tree.undo().expect("just appended");
            return Extension::ViolatesRichness;
        }
        let word = self.tree.word();
        let prev = &word[..word.len() - 1];
        if self.periods.would_violate(prev, a) {
            self.tree.undo().expect("just appended");
            return Extension::ViolatesPower;
        }
        self.periods.push(prev, a);
        self.lyndon.push(prev, a);
        let max = self.max_symbol.last().map_or(a, |&m| m.max(a));
        self.max_symbol.push(max);
        Extension::Ok
    }

    pub fn undo(&mut self) {
        self.periods.pop(self.tree.word());
        self.tree.undo().expect("undo on empty search state");
        self.max_symbol.pop();
        self.lyndon.pop();
    }

    /// Compares incremental data with direct recomputation.
    pub fn check_consistency(&self) -> Result<(), String> {
        let w = self.word();
        if self.tree.distinct_palindromes() != w.len() {
            return Err(format!(
                "palindrome count {} differs from depth {}",
                self.tree.distinct_palindromes(),
                w.len()
            ));
        }
        for p in 1..=w.len() + 1 {
            let fast = self.periods.longest_suffix_with_period(p);
            let slow = brute_force_periodic_suffix(w, p);
            if fast != slow {
                return Err(format!("period {p}: table has {fast}, direct scan gives {slow}"));
            }
        }
        let prunable = lyndon_prune(w);
        let tracked = self.lyndon.is_pruned();
        if prunable != tracked {
            return Err(format!("Lyndon tracking says {tracked}, direct check says {prunable}"));
        }
        Ok(())
    }
}
