use std::fmt;

use crate::error::{Error, Result};
use crate::typespace::Symbol;

/// A length-`n` string over the alphabet `[0, q)`.
///
/// The textual wire format is a digit string (`"00110"`), which covers
/// alphabets up to q = 10; the in-memory form has no such limit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequence {
    symbols: Vec<Symbol>,
}

impl Sequence {
    /// Validates every symbol against the alphabet size.
    pub fn new(symbols: Vec<Symbol>, q: usize) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::LengthMismatch {
                expected: 1,
                got: 0,
            });
        }
        for &s in &symbols {
            if s as usize >= q {
                return Err(Error::SymbolOutOfRange {
                    symbol: s as usize,
                    q,
                });
            }
        }
        Ok(Sequence { symbols })
    }

    /// Wraps symbols the caller already knows to be in range.
    pub(crate) fn from_raw(symbols: Vec<Symbol>) -> Self {
        Sequence { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Parses a digit string such as `"0211"` over `[0, q)`.
    pub fn parse(text: &str, q: usize) -> Result<Self> {
        let mut symbols = Vec::with_capacity(text.len());
        for ch in text.chars() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| Error::Parse(format!("invalid sequence digit {ch:?}")))?;
            symbols.push(d as Symbol);
        }
        Sequence::new(symbols, q)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            debug_assert!(s < 10, "digit wire format covers q <= 10");
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Iterates over all q^n sequences in lexicographic order of the symbol
/// string itself (odometer order, leftmost symbol most significant).
pub fn all_sequences(q: usize, n: usize) -> SequenceIter {
    SequenceIter {
        q,
        current: vec![0; n],
        done: false,
    }
}

pub struct SequenceIter {
    q: usize,
    current: Vec<Symbol>,
    done: bool,
}

impl Iterator for SequenceIter {
    type Item = Sequence;

    fn next(&mut self) -> Option<Sequence> {
        if self.done {
            return None;
        }
        let out = Sequence::from_raw(self.current.clone());
        // odometer increment, least-significant digit on the right
        let mut i = self.current.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if (self.current[i] as usize) + 1 < self.q {
                self.current[i] += 1;
                for d in &mut self.current[i + 1..] {
                    *d = 0;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_display_roundtrip() {
        let x = Sequence::parse("0211", 3).unwrap();
        assert_eq!(x.symbols(), &[0, 2, 1, 1]);
        assert_eq!(x.to_string(), "0211");
    }

    #[test]
    fn parse_rejects_out_of_alphabet_digits() {
        assert_eq!(
            Sequence::parse("012", 2).unwrap_err().name(),
            "SymbolOutOfRange"
        );
        assert_eq!(Sequence::parse("0a1", 2).unwrap_err().name(), "ParseError");
    }

    #[test]
    fn iterator_covers_the_whole_space() {
        let all: Vec<Sequence> = all_sequences(3, 2).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0].to_string(), "00");
        assert_eq!(all[8].to_string(), "22");
        let mut sorted = all.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 9, "no duplicates");
    }
}
