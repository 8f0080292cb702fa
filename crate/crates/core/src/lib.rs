//! Palindromic richness and repetitions in infinite words.
//!
//! The crate builds the binary rich word `r = tau(phi^omega(0))`, checks its
//! richness and repetition structure with exact arithmetic, and runs
//! backtracking searches for long rich words avoiding high powers.

pub mod eertree;
pub mod exact;
pub mod generators;
pub mod numeration;
pub mod repetitions;
pub mod reproduce;
pub mod search;

use thiserror::Error;

/// Words are sequences of small symbols `0..=9`.
pub type Word = Vec<u8>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("invalid symbol {ch:?} at position {pos} (expected a digit 0-9)")]
    InvalidSymbol { ch: char, pos: usize },
}

/// Parses a string of digit characters into symbols. Surrounding whitespace is ignored.
pub fn parse_symbols(s: &str) -> Result<Word, SymbolError> {
    s.trim()
        .chars()
        .enumerate()
        .map(|(pos, ch)| match ch {
            '0'..='9' => Ok(ch as u8 - b'0'),
            _ => Err(SymbolError::InvalidSymbol { ch, pos }),
        })
        .collect()
}

pub fn render_symbols(w: &[u8]) -> String {
    w.iter().map(|&s| char::from(b'0' + s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_round_trip() {
        assert_eq!(parse_symbols("0120\n").unwrap(), vec![0, 1, 2, 0]);
        assert_eq!(render_symbols(&[0, 1, 2, 0]), "0120");
        assert_eq!(parse_symbols("01a"), Err(SymbolError::InvalidSymbol { ch: 'a', pos: 2 }));
        assert!(parse_symbols("").unwrap().is_empty());
    }
}
