use crate::error::{Error, Result};
use crate::typespace::Sequence;

/// A symbol is an integer in `[0, q)`.
pub type Symbol = u8;

/// Group operation over the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOp {
    Add,
    Sub,
}

/// The source/key alphabet of size `q >= 2`, carrying the cyclic-group
/// arithmetic used for masking. Addition and subtraction are taken mod `q`,
/// which is all the encryption and decryption maps require.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet {
    q: usize,
}

impl Alphabet {
    /// Largest supported alphabet (symbols are stored as `u8`).
    pub const MAX_Q: usize = 256;

    pub fn new(q: usize) -> Result<Self> {
        if !(2..=Self::MAX_Q).contains(&q) {
            return Err(Error::InvalidAlphabet(q));
        }
        Ok(Alphabet { q })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// log2(q), the bits carried by one symbol.
    pub fn log2_q(&self) -> f64 {
        (self.q as f64).log2()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        (s as usize) < self.q
    }

    pub fn check(&self, s: Symbol) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange {
                symbol: s as usize,
                q: self.q,
            })
        }
    }

    /// `(a + b) mod q`. Callers must pass in-range symbols.
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        debug_assert!(self.contains(a) && self.contains(b));
        ((a as usize + b as usize) % self.q) as Symbol
    }

    /// `(a - b) mod q`, the inverse of `add` in the second argument.
    pub fn sub(&self, a: Symbol, b: Symbol) -> Symbol {
        debug_assert!(self.contains(a) && self.contains(b));
        ((a as usize + self.q - b as usize) % self.q) as Symbol
    }

    /// Range-checked group operation.
    pub fn group_op(&self, a: Symbol, b: Symbol, op: GroupOp) -> Result<Symbol> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            GroupOp::Add => self.add(a, b),
            GroupOp::Sub => self.sub(a, b),
        })
    }

    /// Componentwise `a + b` over the group.
    pub fn add_seq(&self, a: &Sequence, b: &Sequence) -> Result<Sequence> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        let symbols = a
            .symbols()
            .iter()
            .zip(b.symbols())
            .map(|(&x, &y)| self.add(x, y))
            .collect();
        Ok(Sequence::from_raw(symbols))
    }

    /// Componentwise `a - b` over the group.
    pub fn sub_seq(&self, a: &Sequence, b: &Sequence) -> Result<Sequence> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        let symbols = a
            .symbols()
            .iter()
            .zip(b.symbols())
            .map(|(&x, &y)| self.sub(x, y))
            .collect();
        Ok(Sequence::from_raw(symbols))
    }
}

/// Free-standing checked form of the group operation.
pub fn group_op(a: Symbol, b: Symbol, op: GroupOp, q: usize) -> Result<Symbol> {
    Alphabet::new(q)?.group_op(a, b, op)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_add_sub() {
        assert_eq!(group_op(3, 4, GroupOp::Add, 5).unwrap(), 2);
        assert_eq!(group_op(0, 2, GroupOp::Sub, 5).unwrap(), 3);
        assert_eq!(group_op(1, 1, GroupOp::Add, 2).unwrap(), 0);
    }

    #[test]
    fn add_sub_are_mutually_inverse() {
        for q in 2..=7usize {
            let alpha = Alphabet::new(q).unwrap();
            for a in 0..q as Symbol {
                for b in 0..q as Symbol {
                    assert_eq!(alpha.sub(alpha.add(a, b), b), a, "q={q} a={a} b={b}");
                    assert_eq!(alpha.add(alpha.sub(a, b), b), a, "q={q} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn out_of_range_symbol_is_rejected() {
        let err = group_op(5, 0, GroupOp::Add, 5).unwrap_err();
        assert_eq!(err.name(), "SymbolOutOfRange");
    }

    #[test]
    fn tiny_alphabet_is_rejected() {
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(0).is_err());
    }
}
