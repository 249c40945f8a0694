//! Fixed-width binary expressions of symbol blocks: the injective maps that
//! turn an m- or n-symbol payload into a bit string of predetermined length
//! (most-significant bit first), and their inverses.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::typespace::Sequence;

/// A bit string rendered as `'0'`/`'1'` text, most-significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn to_biguint(&self) -> BigUint {
        let mut v = BigUint::zero();
        for &b in &self.bits {
            v <<= 1;
            if b {
                v += 1u32;
            }
        }
        v
    }

    /// Writes `value` as exactly `len` bits; the value must fit.
    pub fn from_biguint(value: &BigUint, len: usize) -> Result<Self> {
        if value.bits() as usize > len {
            return Err(Error::ValueOutOfRange {
                value: value.clone(),
                q: 2,
                t: len,
            });
        }
        let bits = (0..len)
            .rev()
            .map(|i| value.bit(i as u64))
            .collect();
        Ok(BitString { bits })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid bit {other:?}"))),
            })
            .collect::<Result<_>>()?;
        Ok(BitString { bits })
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Base-q value of a payload, most-significant symbol first.
pub fn payload_value(payload: &Sequence, q: usize) -> BigUint {
    let mut v = BigUint::zero();
    for &s in payload.symbols() {
        v = v * q + BigUint::from(s as usize);
    }
    v
}

/// Base-q digits of `value`, exactly `width` symbols, most-significant
/// first. The caller guarantees `value < q^width`.
pub(crate) fn value_to_payload(value: &BigUint, q: usize, width: usize) -> Sequence {
    let mut digits = vec![0u8; width];
    let mut v = value.clone();
    let qq = BigUint::from(q);
    for slot in digits.iter_mut().rev() {
        let rem = &v % &qq;
        *slot = rem.to_u64_digits().first().copied().unwrap_or(0) as u8;
        v /= &qq;
    }
    debug_assert!(v.is_zero(), "value must fit in {width} base-{q} digits");
    Sequence::new(digits, q).expect("digits are reduced mod q")
}

/// Writes the base-q value of a t-symbol payload as exactly `len_bits` bits.
/// Injective whenever `q^t <= 2^len_bits`; larger payload spaces are
/// rejected.
pub fn to_bits(payload: &Sequence, q: usize, len_bits: usize) -> Result<BitString> {
    let t = payload.len();
    let capacity_ok = BigUint::from(q).pow(t as u32) <= (BigUint::from(1u32) << len_bits);
    if !capacity_ok {
        return Err(Error::CapacityExceeded {
            q,
            t,
            bits: len_bits,
        });
    }
    BitString::from_biguint(&payload_value(payload, q), len_bits)
}

/// Inverse of `to_bits`: recovers the t-symbol payload, rejecting bit
/// values at or above `q^t`.
pub fn from_bits(bits: &BitString, t: usize, q: usize) -> Result<Sequence> {
    let value = bits.to_biguint();
    if value >= BigUint::from(q).pow(t as u32) {
        return Err(Error::ValueOutOfRange { value, q, t });
    }
    Ok(value_to_payload(&value, q, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ternary_payload_example() {
        let payload = Sequence::parse("21", 3).unwrap();
        let bits = to_bits(&payload, 3, 4).unwrap();
        assert_eq!(bits.to_string(), "0111"); // value 7
        assert_eq!(from_bits(&bits, 2, 3).unwrap(), payload);
    }

    #[test]
    fn binary_payload_is_identity() {
        let payload = Sequence::parse("101", 2).unwrap();
        let bits = to_bits(&payload, 2, 3).unwrap();
        assert_eq!(bits.to_string(), "101");
    }

    #[test]
    fn capacity_is_enforced() {
        let payload = Sequence::parse("22", 3).unwrap();
        let err = to_bits(&payload, 3, 3).unwrap_err();
        assert_eq!(err.name(), "CapacityExceeded"); // 3^2 = 9 > 2^3
    }

    #[test]
    fn oversized_bit_values_are_rejected() {
        let bits = BitString::parse("1000").unwrap(); // value 8 >= 3^1... use t=1
        let err = from_bits(&bits, 1, 3).unwrap_err();
        assert_eq!(err.name(), "ValueOutOfRange");
    }

    #[test]
    fn bitstring_parse_display() {
        let b = BitString::parse("010011").unwrap();
        assert_eq!(b.to_string(), "010011");
        assert_eq!(b.len(), 6);
        assert!(BitString::parse("01x").is_err());
    }

    #[test]
    fn roundtrip_exhaustive_small() {
        use crate::typespace::all_sequences;
        for (q, t, len) in [(2usize, 5usize, 5usize), (3, 3, 5), (3, 4, 7)] {
            for payload in all_sequences(q, t) {
                let bits = to_bits(&payload, q, len).unwrap();
                assert_eq!(bits.len(), len);
                assert_eq!(from_bits(&bits, t, q).unwrap(), payload);
            }
        }
    }
}
