//! The encryption/decryption pair: admitted plaintexts are encoded to an
//! m-symbol block and masked with the compressed key, everything else is
//! masked with the raw key; either way the result is written as a
//! fixed-length bit string, and the receiver branches on that length alone.

use std::fmt;

use crate::bits::{from_bits, to_bits, BitString};
use crate::codec::{Branch, CodecOutput, SchemeParams, UniversalCode};
use crate::error::{Error, Result};
use crate::keycomp::{KeyCompressor, KeyMethod};
use crate::typespace::{Alphabet, Sequence};

/// A ciphertext bit string of one of the scheme's two lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ciphertext {
    pub bits: BitString,
}

impl Ciphertext {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Ciphertext {
            bits: BitString::parse(text)?,
        })
    }
}

impl fmt::Display for Ciphertext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

/// An immutable scheme instance: universal code plus key compressor built
/// from the same parameters. Encryption and decryption are pure.
#[derive(Debug, Clone)]
pub struct CipherScheme {
    code: UniversalCode,
    comp: KeyCompressor,
    alphabet: Alphabet,
}

impl CipherScheme {
    pub fn new(code: UniversalCode, comp: KeyCompressor) -> Result<Self> {
        let p = code.params();
        if comp.q() != p.q() || comp.n() != p.n() || comp.m() != p.m() {
            return Err(Error::ParamsMismatch);
        }
        if p.l1() == p.l2() && !p.code_is_full() {
            return Err(Error::LengthCollision { bits: p.l1() });
        }
        let alphabet = Alphabet::new(p.q())?;
        Ok(CipherScheme {
            code,
            comp,
            alphabet,
        })
    }

    /// Builds code and compressor from scratch.
    pub fn from_params(params: SchemeParams, method: KeyMethod) -> Result<Self> {
        let comp = KeyCompressor::new(&params, method)?;
        let code = UniversalCode::build(params)?;
        CipherScheme::new(code, comp)
    }

    pub fn code(&self) -> &UniversalCode {
        &self.code
    }

    pub fn compressor(&self) -> &KeyCompressor {
        &self.comp
    }

    pub fn params(&self) -> &SchemeParams {
        self.code.params()
    }

    /// Encrypts one block. The ciphertext length depends only on the
    /// plaintext (through its branch), never on the key.
    pub fn encrypt(&self, key: &Sequence, x: &Sequence) -> Result<Ciphertext> {
        let p = self.params();
        if key.len() != p.n() {
            return Err(Error::LengthMismatch {
                expected: p.n(),
                got: key.len(),
            });
        }
        let encoded = self.code.encode(x)?;
        let bits = match encoded.branch {
            Branch::Compressed => {
                let k_short = self.comp.compress(key)?;
                let masked = self.alphabet.add_seq(&k_short, &encoded.payload)?;
                to_bits(&masked, p.q(), p.l1())?
            }
            Branch::Raw => {
                let masked = self.alphabet.add_seq(key, &encoded.payload)?;
                to_bits(&masked, p.q(), p.l2())?
            }
        };
        Ok(Ciphertext { bits })
    }

    /// Decrypts one block, branching on the ciphertext length.
    pub fn decrypt(&self, key: &Sequence, c: &Ciphertext) -> Result<Sequence> {
        let p = self.params();
        if key.len() != p.n() {
            return Err(Error::LengthMismatch {
                expected: p.n(),
                got: key.len(),
            });
        }
        if c.len() == p.l1() {
            let masked = from_bits(&c.bits, p.m(), p.q())?;
            let k_short = self.comp.compress(key)?;
            let payload = self.alphabet.sub_seq(&masked, &k_short)?;
            self.code.decode(&CodecOutput {
                branch: Branch::Compressed,
                payload,
            })
        } else if c.len() == p.l2() {
            let masked = from_bits(&c.bits, p.n(), p.q())?;
            self.alphabet.sub_seq(&masked, key)
        } else {
            Err(Error::BadLength {
                got: c.len(),
                l1: p.l1(),
                l2: p.l2(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::Mode;
    use crate::typespace::all_sequences;

    fn tiny_scheme() -> CipherScheme {
        // q=2, n=3, R=0 practical: C = {000, 111}, m = 1, L1 = 1, L2 = 3
        let params = SchemeParams::new(2, 3, 0.0, Mode::Practical).unwrap();
        assert_eq!(params.m(), 1);
        CipherScheme::from_params(params, KeyMethod::Balanced).unwrap()
    }

    #[test]
    fn hand_computed_short_branch() {
        let sch = tiny_scheme();
        let k = Sequence::parse("010", 2).unwrap();
        let x = Sequence::parse("000", 2).unwrap();
        let c = sch.encrypt(&k, &x).unwrap();
        assert_eq!(c.to_string(), "0");
        assert_eq!(sch.decrypt(&k, &c).unwrap(), x);
    }

    #[test]
    fn hand_computed_raw_branch() {
        let sch = tiny_scheme();
        let k = Sequence::parse("010", 2).unwrap();
        let x = Sequence::parse("011", 2).unwrap();
        let c = sch.encrypt(&k, &x).unwrap();
        assert_eq!(c.to_string(), "001");
        assert_eq!(sch.decrypt(&k, &c).unwrap(), x);
    }

    #[test]
    fn zero_key_exposes_the_encoder() {
        let params = SchemeParams::new(2, 8, 0.8, Mode::Practical).unwrap();
        let sch = CipherScheme::from_params(params, KeyMethod::Balanced).unwrap();
        let zeros = Sequence::parse("00000000", 2).unwrap();
        for x in all_sequences(2, 8) {
            if !sch.code().contains(&x) {
                continue;
            }
            let c = sch.encrypt(&zeros, &x).unwrap();
            let direct = to_bits(
                &sch.code().encode(&x).unwrap().payload,
                2,
                sch.params().l1(),
            )
            .unwrap();
            assert_eq!(c.bits, direct);
        }
    }

    #[test]
    fn perfect_decryption_exhaustive_small() {
        for mode in [Mode::Paper, Mode::Practical] {
            for method in [KeyMethod::Balanced, KeyMethod::Linear { seed: 3 }] {
                let params = SchemeParams::new(2, 4, 0.7, mode).unwrap();
                let sch = CipherScheme::from_params(params, method).unwrap();
                for k in all_sequences(2, 4) {
                    for x in all_sequences(2, 4) {
                        let c = sch.encrypt(&k, &x).unwrap();
                        assert_eq!(sch.decrypt(&k, &c).unwrap(), x, "k={k} x={x}");
                    }
                }
            }
        }
    }

    #[test]
    fn length_depends_only_on_plaintext() {
        let params = SchemeParams::new(3, 4, 0.8, Mode::Practical).unwrap();
        let sch = CipherScheme::from_params(params, KeyMethod::Balanced).unwrap();
        for x in all_sequences(3, 4) {
            let mut lengths = std::collections::HashSet::new();
            for k in all_sequences(3, 4) {
                lengths.insert(sch.encrypt(&k, &x).unwrap().len());
            }
            assert_eq!(lengths.len(), 1, "length must not vary with the key");
        }
    }

    #[test]
    fn per_key_injectivity() {
        let params = SchemeParams::new(2, 6, 0.6, Mode::Practical).unwrap();
        let sch = CipherScheme::from_params(params, KeyMethod::Balanced).unwrap();
        for k in all_sequences(2, 6) {
            let mut seen = std::collections::HashSet::new();
            for x in all_sequences(2, 6) {
                let c = sch.encrypt(&k, &x).unwrap();
                assert!(seen.insert(c.to_string()), "collision under key {k}");
            }
        }
    }

    #[test]
    fn bad_length_is_rejected() {
        let sch = tiny_scheme();
        let k = Sequence::parse("010", 2).unwrap();
        let c = Ciphertext::parse("01").unwrap(); // neither 1 nor 3 bits
        assert_eq!(sch.decrypt(&k, &c).unwrap_err().name(), "BadLength");
    }

    #[test]
    fn corrupted_short_branch_surfaces_as_error() {
        // practical q=2 n=8 R=0.8: |C| = 18 < 2^5, so some 5-bit values are
        // outside the code image for a fixed key
        let params = SchemeParams::new(2, 8, 0.8, Mode::Practical).unwrap();
        let sch = CipherScheme::from_params(params, KeyMethod::Balanced).unwrap();
        let k = Sequence::parse("00000000", 2).unwrap();
        let mut saw_error = false;
        for v in 0..32u32 {
            let bits = BitString::from_biguint(&v.into(), 5).unwrap();
            if let Err(e) = sch.decrypt(&k, &Ciphertext { bits }) {
                assert_eq!(e.name(), "IndexOutOfRange");
                saw_error = true;
            }
        }
        assert!(saw_error, "some corrupted ciphertexts must be rejected");
    }
}
