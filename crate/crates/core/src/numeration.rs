//! Pell numbers and the canonical Pell numeration system.
//!
//! Every nonnegative integer `n` has a unique representation
//! `n = sum d_i * P_{i+1}` with digits in `{0, 1, 2}`, the least significant
//! digit at most 1, and every digit 2 followed (towards the least significant
//! end) by a 0. Digits are kept least-significant-first; textual forms are
//! most-significant-first.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumerationError {
    #[error("Pell number P_{0} does not fit in 64 bits")]
    PellOverflow(usize),
    #[error("value of Pell representation does not fit in 64 bits")]
    DecodeOverflow,
    #[error("invalid Pell digit {0:?} (expected 0, 1 or 2)")]
    InvalidDigit(char),
    #[error("empty digit string")]
    Empty,
}

/// Returns `P_n`, failing instead of wrapping once the value leaves `u64`.
pub fn pell(n: usize) -> Result<u64, NumerationError> {
    let (mut prev, mut cur) = (1u64, 0u64); // P_{-1} = 1, P_0 = 0
    for _ in 0..n {
        let next = cur
            .checked_mul(2)
            .and_then(|v| v.checked_add(prev))
            .ok_or(NumerationError::PellOverflow(n))?;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `P_1, P_2, ...` up to the largest one not exceeding `limit`.
fn pell_weights_up_to(limit: u64) -> Vec<u64> {
    let mut weights = vec![1u64, 2];
    loop {
        let n = weights.len();
        match weights[n - 1]
            .checked_mul(2)
            .and_then(|v| v.checked_add(weights[n - 2]))
        {
            Some(next) if next <= limit => weights.push(next),
            _ => break,
        }
    }
    while weights.last().is_some_and(|&w| w > limit) {
        weights.pop();
    }
    weights
}

/// A Pell representation; `digits[i]` is the coefficient of `P_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PellRep {
    digits: Vec<u8>,
}

impl PellRep {
    /// Builds a representation from least-significant-first digits.
    /// Most significant zeros are dropped; other canonicality rules are not enforced.
    pub fn from_lsd_digits(mut digits: Vec<u8>) -> Result<Self, NumerationError> {
        if let Some(&d) = digits.iter().find(|&&d| d > 2) {
            return Err(NumerationError::InvalidDigit(char::from(b'0' + d.min(9))));
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(PellRep { digits })
    }

    pub fn from_msd_digits(digits: &[u8]) -> Result<Self, NumerationError> {
        Self::from_lsd_digits(digits.iter().rev().copied().collect())
    }

    pub fn digits_lsd(&self) -> &[u8] {
        &self.digits
    }

    pub fn digits_msd(&self) -> impl Iterator<Item = u8> + '_ {
        self.digits.iter().rev().copied()
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Greedy most-significant-first expansion.
    pub fn encode(n: u64) -> Self {
        if n == 0 {
            return PellRep::default();
        }
        let weights = pell_weights_up_to(n);
        let mut digits = vec![0u8; weights.len()];
        let mut rem = n;
        for (i, &w) in weights.iter().enumerate().rev() {
            let d = rem / w;
            digits[i] = d as u8;
            rem -= d * w;
        }
        debug_assert_eq!(rem, 0);
        PellRep::from_lsd_digits(digits).expect("greedy digits are at most 2")
    }

    pub fn decode(&self) -> Result<u64, NumerationError> {
        let (mut prev, mut cur) = (0u64, 1u64); // P_0, P_1
        let mut total = 0u64;
        for (i, &d) in self.digits.iter().enumerate() {
            if i > 0 {
                let next = cur
                    .checked_mul(2)
                    .and_then(|v| v.checked_add(prev))
                    .ok_or(NumerationError::DecodeOverflow)?;
                prev = cur;
                cur = next;
            }
            total = (d as u64)
                .checked_mul(cur)
                .and_then(|v| v.checked_add(total))
                .ok_or(NumerationError::DecodeOverflow)?;
        }
        Ok(total)
    }

    pub fn is_canonical(&self) -> bool {
        if self.digits.last() == Some(&0) {
            return false;
        }
        if self.digits.first().is_some_and(|&d| d > 1) {
            return false;
        }
        self.digits
            .iter()
            .enumerate()
            .all(|(i, &d)| d <= 2 && (d < 2 || (i > 0 && self.digits[i - 1] == 0)))
    }

    /// Matches `0*1100*` read most-significant-first.
    pub fn is_high_power_shape(&self) -> bool {
        let n = self.digits.len();
        n >= 3
            && self.digits[n - 1] == 1
            && self.digits[n - 2] == 1
            && self.digits[..n - 2].iter().all(|&d| d == 0)
    }
}

/// True iff `p = P_n + P_{n-1}` for some `n >= 3`.
pub fn is_high_power_period(p: u64) -> bool {
    p >= 1 && PellRep::encode(p).is_high_power_shape()
}

impl fmt::Display for PellRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.digits.is_empty() {
            return f.write_str("0");
        }
        for d in self.digits_msd() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for PellRep {
    type Err = NumerationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(NumerationError::Empty);
        }
        let digits = s
            .chars()
            .map(|c| match c {
                '0'..='2' => Ok(c as u8 - b'0'),
                _ => Err(NumerationError::InvalidDigit(c)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        PellRep::from_msd_digits(&digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn msd(s: &str) -> PellRep {
        s.parse().unwrap()
    }

    #[test]
    fn pell_values() {
        assert_eq!(pell(0), Ok(0));
        assert_eq!(pell(1), Ok(1));
        assert_eq!(pell(5), Ok(29));
        assert_eq!(pell(40), Ok(723_573_111_879_672));
    }

    #[test]
    fn pell_overflow_is_reported() {
        let last_ok = (0..).take_while(|&n| pell(n).is_ok()).last().unwrap();
        assert!(last_ok >= 50);
        assert_eq!(pell(last_ok + 1), Err(NumerationError::PellOverflow(last_ok + 1)));
        assert!(pell(200).is_err());
    }

    #[test]
    fn encode_examples() {
        assert_eq!(PellRep::encode(7).to_string(), "110");
        assert_eq!(PellRep::encode(11).to_string(), "201");
        assert!(PellRep::encode(0).is_empty());
        assert_eq!(PellRep::encode(0).to_string(), "0");
    }

    #[test]
    fn decode_examples() {
        assert_eq!(msd("110").decode(), Ok(7));
        assert_eq!(msd("201").decode(), Ok(11));
        assert_eq!(PellRep::default().decode(), Ok(0));
        assert_eq!(msd("0").decode(), Ok(0));
    }

    #[test]
    fn canonical_examples() {
        assert!(msd("110").is_canonical());
        assert!(!msd("12").is_canonical());
        assert!(!msd("21").is_canonical());
        assert!(msd("2020").is_canonical());
        assert!(PellRep::default().is_canonical());
    }

    #[test]
    fn parse_rejects_bad_digits() {
        assert_eq!("13".parse::<PellRep>(), Err(NumerationError::InvalidDigit('3')));
        assert_eq!("".parse::<PellRep>(), Err(NumerationError::Empty));
    }

    #[test]
    fn high_power_period_examples() {
        assert!(is_high_power_period(7));
        assert!(is_high_power_period(17));
        assert!(!is_high_power_period(6));
        assert!(!is_high_power_period(3));
    }

    #[test]
    fn round_trip_first_million() {
        for n in 0..=1_000_000u64 {
            let r = PellRep::encode(n);
            assert!(r.is_canonical(), "{n} -> {r}");
            assert_eq!(r.decode(), Ok(n));
        }
    }

    #[test]
    fn encoding_is_order_isomorphic() {
        let key = |r: &PellRep| (r.len(), r.digits_msd().collect::<Vec<_>>());
        let mut prev = key(&PellRep::encode(0));
        for n in 1..200_000u64 {
            let cur = key(&PellRep::encode(n));
            assert!(prev < cur, "order broken at {n}");
            prev = cur;
        }
    }

    #[test]
    fn high_power_periods_match_closed_form() {
        let limit = 10_000u64;
        let mut expected = Vec::new();
        for n in 3.. {
            let p = pell(n).unwrap() + pell(n - 1).unwrap();
            if p > limit {
                break;
            }
            expected.push(p);
        }
        let found: Vec<u64> = (1..=limit).filter(|&p| is_high_power_period(p)).collect();
        assert_eq!(found, expected);
        assert_eq!(&found[..4], &[7, 17, 41, 99]);
    }

    #[test]
    fn canonical_count_matches_value_count() {
        // Canonical strings of length <= L enumerate exactly [0, P_{L+1}).
        let len = 8;
        let mut count = 0u64;
        let mut digits = vec![0u8; len];
        loop {
            let rep = PellRep::from_lsd_digits(digits.clone()).unwrap();
            let padded_ok = rep.is_canonical();
            if padded_ok {
                count += 1;
                assert!(rep.decode().unwrap() < pell(len + 1).unwrap());
            }
            let mut i = 0;
            while i < len && digits[i] == 2 {
                digits[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
            digits[i] += 1;
        }
        assert_eq!(count, pell(len + 1).unwrap());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip_u64(n in 0u64..u64::MAX / 4) {
                let r = PellRep::encode(n);
                prop_assert!(r.is_canonical());
                prop_assert_eq!(r.decode().unwrap(), n);
                let reparsed: PellRep = r.to_string().parse().unwrap();
                prop_assert_eq!(reparsed, r);
            }
        }
    }
}
