//! Online forbidden-power detection.
//!
//! For the current word `w` of length `n`, `suffix[p]` is the length of the
//! longest suffix of `w` having period `p`. Appending a symbol `a` at
//! position `n` turns `suffix[p]` into `suffix[p] + 1` when `a = w[n - p]`
//! and into `p` otherwise. A factor with exponent at least `t` exists iff
//! some prefix has `suffix[p] >= t·p`, so checking every append suffices.

use super::Threshold;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodTable {
    // suffix[p] for 1 <= p <= n; index 0 unused.
    suffix: Vec<u32>,
    // forbidden[p]: smallest length L with L/p >= threshold.
    forbidden: Vec<u32>,
    // (p, previous value) for entries reset on a mismatch.
    resets: Vec<(u32, u32)>,
    marks: Vec<u32>,
    threshold: Threshold,
}

impl PeriodTable {
    pub fn new(threshold: Threshold) -> Self {
        PeriodTable {
            suffix: vec![0],
            forbidden: vec![0],
            resets: Vec::new(),
            marks: Vec::new(),
            threshold,
        }
    }

    pub fn len(&self) -> usize {
        self.suffix.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `suffix[p]` for the current word; `p > n` gives `n`.
    pub fn longest_suffix_with_period(&self, p: usize) -> usize {
        assert!(p >= 1);
        if p < self.suffix.len() {
            self.suffix[p] as usize
        } else {
            self.len()
        }
    }

    fn ensure_forbidden(&mut self, upto: usize) {
        while self.forbidden.len() <= upto {
            let p = self.forbidden.len();
            self.forbidden.push(self.threshold.min_forbidden_length(p) as u32);
        }
    }

    /// Whether appending `a` to `word` would create a suffix with a
    /// forbidden exponent. `word` is the current word, without `a`.
    #[inline]
    pub fn would_violate(&mut self, word: &[u8], a: u8) -> bool {
        let n = word.len();
        debug_assert_eq!(n, self.len());
        self.ensure_forbidden(n + 1);
        // p = n + 1 gives a suffix of length n + 1 = p, exponent 1.
        (1..=n).any(|p| word[n - p] == a && self.suffix[p] + 1 >= self.forbidden[p])
    }

    /// Records the append of `a`; `word` excludes `a`.
    pub fn push(&mut self, word: &[u8], a: u8) {
        let n = word.len();
        debug_assert_eq!(n, self.len());
        self.marks.push(self.resets.len() as u32);
        for p in 1..=n {
            if word[n - p] == a {
                self.suffix[p] += 1;
            } else if self.suffix[p] != p as u32 {
                self.resets.push((p as u32, self.suffix[p]));
                self.suffix[p] = p as u32;
            }
        }
        self.suffix.push(n as u32 + 1);
    }

    /// Reverts the last `push`; `word` is the word after the push.
    pub fn pop(&mut self, word: &[u8]) {
        let n = word.len() - 1;
        let a = word[n];
        self.suffix.pop();
        let mark = self.marks.pop().expect("pop without push") as usize;
        for p in 1..=n {
            if word[n - p] == a {
                self.suffix[p] -= 1;
            }
        }
        for &(p, old) in &self.resets[mark..] {
            self.suffix[p as usize] = old;
        }
        self.resets.truncate(mark);
    }
}

/// Longest suffix of `word` with period `p`, by direct comparison.
pub fn brute_force_periodic_suffix(word: &[u8], p: usize) -> usize {
    let n = word.len();
    if p >= n {
        return n;
    }
    let mut len = p;
    while len < n && word[n - 1 - len] == word[n - 1 - len + p] {
        len += 1;
    }
    len
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Exponent;
    use rand::{Rng, SeedableRng};

    fn table(n: u64, d: u64) -> PeriodTable {
        PeriodTable::new(Threshold::Rational(Exponent::new(n, d).unwrap()))
    }

    #[test]
    fn cube_is_forbidden_at_27_10() {
        let mut t = table(27, 10);
        let mut w = Vec::new();
        for _ in 0..2 {
            assert!(!t.would_violate(&w, 0));
            t.push(&w, 0);
            w.push(0);
        }
        assert!(t.would_violate(&w, 0));
        assert!(!t.would_violate(&w, 1));
    }

    #[test]
    fn incremental_matches_brute_force_with_undo() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let mut t = table(100, 1);
        let mut w: Vec<u8> = Vec::new();
        for _ in 0..5000 {
            if w.is_empty() || rng.gen_bool(0.65) {
                let a = rng.gen_range(0..3);
                t.push(&w, a);
                w.push(a);
            } else {
                t.pop(&w);
                w.pop();
            }
            for p in 1..=w.len() + 1 {
                assert_eq!(t.longest_suffix_with_period(p), brute_force_periodic_suffix(&w, p));
            }
        }
    }

    #[test]
    fn push_pop_restores_table() {
        let mut t = table(5, 2);
        let w = [0u8, 1, 0, 0, 1, 0, 1];
        let mut cur = Vec::new();
        for &a in &w[..4] {
            t.push(&cur, a);
            cur.push(a);
        }
        let snapshot = t.clone();
        for &a in &w[4..] {
            t.push(&cur, a);
            cur.push(a);
        }
        for _ in 4..w.len() {
            t.pop(&cur);
            cur.pop();
        }
        assert_eq!(t, snapshot);
    }
}
