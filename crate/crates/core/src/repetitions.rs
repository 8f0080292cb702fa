//! Periods, exponents, maximal repetitions and critical exponents of finite
//! words, plus the closed forms for the highest powers occurring in `r`.
//!
//! The scans here are per-period: for every candidate period `p` the word is
//! compared with itself shifted by `p`, and maximal stretches of agreement
//! give the repetitions of that period. That is quadratic, which is fine for
//! the prefix lengths analysed (a few times 10^4).

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{cmp_with_sqrt2_multiple, compare_to_surd, ExactError, Exponent, SurdThreshold};
use crate::numeration::{pell, NumerationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepetitionError {
    #[error("operation requires a nonempty word")]
    EmptyWord,
    #[error("index {index} is below the minimum {min}")]
    IndexTooSmall { index: usize, min: usize },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Numeration(#[from] NumerationError),
}

/// Smallest `p >= 1` with `w[i] = w[i + p]` wherever both exist.
pub fn smallest_period(w: &[u8]) -> Result<usize, RepetitionError> {
    if w.is_empty() {
        return Err(RepetitionError::EmptyWord);
    }
    // Longest proper border via the prefix function.
    let mut fail = vec![0usize; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    Ok(w.len() - fail[w.len() - 1])
}

pub fn exponent_of(w: &[u8]) -> Result<Exponent, RepetitionError> {
    let p = smallest_period(w)?;
    Ok(Exponent::new(w.len() as u64, p as u64)?)
}

/// False iff `w = u^k` for some `k >= 2`.
pub fn is_primitive(w: &[u8]) -> Result<bool, RepetitionError> {
    let p = smallest_period(w)?;
    Ok(p == w.len() || !w.len().is_multiple_of(p))
}

/// The factor `w[start .. start + extension + period]` has period `period`,
/// is not extendable to the right with that period, and is not extendable to
/// the left either.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MaximalRep {
    pub start: usize,
    pub extension: usize,
    pub period: usize,
}

impl MaximalRep {
    pub fn len(&self) -> usize {
        self.extension + self.period
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exponent(&self) -> Exponent {
        Exponent::new(self.len() as u64, self.period as u64).expect("period is positive")
    }
}

/// Maximal agreement stretches `(start, extension)` for shift `p`, including
/// empty stretches, in increasing `start` order.
fn stretches(w: &[u8], p: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = w.len();
    let last_start = n.saturating_sub(p);
    let mut i = 0usize;
    let mut done = p == 0 || p > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let start = i;
        let mut len = 0;
        while start + len + p < n && w[start + len] == w[start + len + p] {
            len += 1;
        }
        if start + len >= last_start {
            done = true;
        } else {
            i = start + len + 1;
        }
        Some((start, len))
    })
}

/// The first maximal repetition of period `p` with the longest extension.
pub fn longest_repetition(w: &[u8], p: usize) -> Option<MaximalRep> {
    stretches(w, p)
        .fold(None, |best: Option<(usize, usize)>, (start, ext)| match best {
            Some((_, e)) if e >= ext => best,
            _ => Some((start, ext)),
        })
        .map(|(start, extension)| MaximalRep { start, extension, period: p })
}

/// Longest extension for each period: `result[p]` for `1 <= p <= |w|`
/// (`result[0]` is unused and zero).
pub fn longest_extension_per_period(w: &[u8]) -> Vec<usize> {
    let n = w.len();
    let mut out: Vec<usize> = (0..=n)
        .into_par_iter()
        .map(|p| {
            if p == 0 {
                return 0;
            }
            let mut best = 0;
            let mut run = 0;
            for j in 0..n - p {
                if w[j] == w[j + p] {
                    run += 1;
                    best = best.max(run);
                } else {
                    run = 0;
                }
            }
            best
        })
        .collect();
    if let Some(first) = out.first_mut() {
        *first = 0;
    }
    out
}

/// All maximal repetitions with exponent at least `min_exponent`, ordered by
/// period and then start.
pub fn maximal_repetitions(w: &[u8], min_exponent: Exponent) -> Vec<MaximalRep> {
    let n = w.len();
    let per_period: Vec<Vec<MaximalRep>> = (1..=n)
        .into_par_iter()
        .map(|p| {
            stretches(w, p)
                .map(|(start, extension)| MaximalRep { start, extension, period: p })
                .filter(|r| r.exponent() >= min_exponent)
                .collect()
        })
        .collect();
    per_period.into_iter().flatten().collect()
}

/// Largest exponent of any nonempty factor.
pub fn critical_exponent(w: &[u8]) -> Result<Exponent, RepetitionError> {
    if w.is_empty() {
        return Err(RepetitionError::EmptyWord);
    }
    let ext = longest_extension_per_period(w);
    let best = (1..=w.len())
        .map(|p| Exponent::new((ext[p] + p) as u64, p as u64).expect("p >= 1"))
        .max()
        .expect("nonempty");
    Ok(best)
}

/// Smallest periods `p` of the factors with exponent `>= threshold`.
///
/// A stretch of period `p` whose factor actually has a smaller period (as in
/// `0000` for `p = 2`) is counted under that smaller period instead.
pub fn high_power_periods(w: &[u8], threshold: Exponent) -> BTreeSet<usize> {
    maximal_repetitions(w, threshold)
        .into_iter()
        .filter(|r| smallest_period(&w[r.start..r.start + r.len()]) == Ok(r.period))
        .map(|r| r.period)
        .collect()
}

/// `(n, p)` with `n = P_{m+2} - 1` and `p = P_{m+1} + P_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PredictedPower {
    pub m: usize,
    pub extension: u64,
    pub period: u64,
    pub exponent: Exponent,
}

pub fn predicted_highest_power(m: usize) -> Result<PredictedPower, RepetitionError> {
    if m < 1 {
        return Err(RepetitionError::IndexTooSmall { index: m, min: 1 });
    }
    let extension = pell(m + 2)? - 1;
    let period = pell(m + 1)?
        .checked_add(pell(m)?)
        .ok_or(NumerationError::PellOverflow(m + 1))?;
    let exponent = Exponent::new(
        extension.checked_add(period).ok_or(ExactError::Overflow)?,
        period,
    )?;
    Ok(PredictedPower { m, extension, period, exponent })
}

pub fn predicted_highest_powers(max_m: usize) -> Result<Vec<PredictedPower>, RepetitionError> {
    (1..=max_m).map(predicted_highest_power).collect()
}

/// `e_m = 2 + (P_{m+1} - 1)/(P_{m+1} + P_m)`.
pub fn highest_power_exponent(m: usize) -> Result<Exponent, RepetitionError> {
    Ok(predicted_highest_power(m)?.exponent)
}

/// Checks, exactly, that `e_m` lies strictly below
/// `2 + (√2 + 1 + 1/P_m² - 1/P_m)/(√2 + 2 - 1/P_m²)` and that
/// `e_m < e_{m+1} < 2 + √2/2`.
pub fn critexp_bound_check(m: usize) -> Result<bool, RepetitionError> {
    if m < 4 {
        return Err(RepetitionError::IndexTooSmall { index: m, min: 4 });
    }
    let pm = pell(m)? as i128;
    let pm1 = pell(m + 1)? as i128;
    // e_m - 2 = u/v; bound - 2 = (A + B√2)/(C + B√2) after scaling by P_m².
    let (u, v) = (pm1 - 1, pm1 + pm);
    let sq = pm.checked_mul(pm).ok_or(ExactError::Overflow)?;
    let (a, b, c) = (sq - pm + 1, sq, 2 * sq - 1);
    // u/v < (A + B√2)/(C + B√2)  <=>  uC - vA < (v - u)·B·√2
    let lhs = u
        .checked_mul(c)
        .zip(v.checked_mul(a))
        .and_then(|(x, y)| x.checked_sub(y))
        .ok_or(ExactError::Overflow)?;
    let rhs = (v - u).checked_mul(b).ok_or(ExactError::Overflow)?;
    let below_bound = cmp_with_sqrt2_multiple(lhs, rhs)? == Ordering::Less;

    let e_m = highest_power_exponent(m)?;
    let e_next = highest_power_exponent(m + 1)?;
    let limit = SurdThreshold::rich_binary();
    let increasing = e_m < e_next;
    let next_below_limit = compare_to_surd(e_next, limit)? == Ordering::Less;
    Ok(below_bound && increasing && next_below_limit)
}

/// True iff `(2 + √2/2) - e_m < eps_num/eps_den`, decided exactly.
pub fn limit_gap_below(m: usize, eps: Exponent) -> Result<bool, RepetitionError> {
    let e = highest_power_exponent(m)?;
    // limit - e < eps  <=>  limit < e + eps
    let num = (e.numerator() as i128)
        .checked_mul(eps.denominator() as i128)
        .zip((eps.numerator() as i128).checked_mul(e.denominator() as i128))
        .and_then(|(x, y)| x.checked_add(y))
        .ok_or(ExactError::Overflow)?;
    let den = (e.denominator() as i128)
        .checked_mul(eps.denominator() as i128)
        .ok_or(ExactError::Overflow)?;
    Ok(SurdThreshold::rich_binary().cmp_rational(num, den)? == Ordering::Greater)
}
