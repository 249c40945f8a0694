use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::typespace::{Distribution, Sequence};

/// The empirical composition ("type") of a length-`n` string: `counts[s]`
/// occurrences of symbol `s`, summing to `n`.
///
/// Types are ordered canonically by lexicographically descending count
/// vectors, so `(n, 0, ..., 0)` comes first and `(0, ..., 0, n)` last. All
/// class sizes and ranks are exact big integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeVector {
    counts: Vec<usize>,
}

impl TypeVector {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::InvalidTypeVector(format!(
                "need at least 2 symbol counts, got {}",
                counts.len()
            )));
        }
        if counts.iter().sum::<usize>() == 0 {
            return Err(Error::InvalidTypeVector("total count must be >= 1".into()));
        }
        Ok(TypeVector { counts })
    }

    /// The type of a string.
    pub fn of_sequence(x: &Sequence, q: usize) -> TypeVector {
        let mut counts = vec![0usize; q];
        for &s in x.symbols() {
            counts[s as usize] += 1;
        }
        TypeVector { counts }
    }

    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn q(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of strings with this type: `n! / prod_s counts[s]!`.
    pub fn class_size(&self) -> BigUint {
        let mut result = BigUint::one();
        let mut placed = 0usize;
        // running product of binomials: C(placed + c, c) per symbol
        for &c in &self.counts {
            for i in 1..=c {
                placed += 1;
                result = result * BigUint::from(placed) / BigUint::from(i);
            }
        }
        result
    }

    /// The empirical distribution `counts / n`.
    pub fn empirical(&self) -> Distribution {
        let n = self.n() as f64;
        let probs = self.counts.iter().map(|&c| c as f64 / n).collect();
        Distribution::new(probs).expect("counts/n is a valid distribution")
    }

    /// Entropy of the empirical distribution, in bits.
    pub fn entropy(&self) -> f64 {
        let n = self.n() as f64;
        self.counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.log2()
            })
            .sum()
    }

    /// Probability of any single string of this type under i.i.d. `p`.
    pub fn sequence_prob(&self, p: &Distribution) -> f64 {
        debug_assert_eq!(p.q(), self.q());
        let mut prob = 1.0;
        for (s, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                prob *= p.probs()[s].powi(c as i32);
            }
        }
        prob
    }

    /// Total probability of the type class under i.i.d. `p`.
    pub fn class_prob(&self, p: &Distribution) -> f64 {
        big_to_f64(&self.class_size()) * self.sequence_prob(p)
    }

    /// Canonical order: lexicographically descending count vectors.
    pub fn canonical_cmp(&self, other: &TypeVector) -> Ordering {
        other.counts.cmp(&self.counts)
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Lossy conversion used only where probabilities are assembled; exact
/// below 2^53, which covers every feasible block length here.
pub(crate) fn big_to_f64(v: &BigUint) -> f64 {
    let mut out = 0.0f64;
    for d in v.to_u64_digits().iter().rev() {
        out = out * 18446744073709551616.0 + *d as f64;
    }
    out
}

/// All compositions of `n` into `q` parts, in canonical order. The list has
/// `C(n+q-1, q-1)` entries.
pub fn enumerate_types(n: usize, q: usize) -> Vec<TypeVector> {
    fn rec(remaining: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<TypeVector>) {
        if parts == 1 {
            prefix.push(remaining);
            out.push(TypeVector {
                counts: prefix.clone(),
            });
            prefix.pop();
            return;
        }
        for c in (0..=remaining).rev() {
            prefix.push(c);
            rec(remaining - c, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    assert!(n >= 1 && q >= 2);
    let mut out = Vec::new();
    rec(n, q, &mut Vec::with_capacity(q), &mut out);
    out
}

/// `C(n+q-1, q-1)`, the number of types.
pub fn num_types(n: usize, q: usize) -> BigUint {
    let mut result = BigUint::one();
    for i in 1..q {
        result = result * BigUint::from(n + i) / BigUint::from(i);
    }
    result
}

/// Binary-searches a canonically ordered slice of types.
pub(crate) fn find_type(sorted: &[TypeVector], t: &TypeVector) -> Option<usize> {
    sorted
        .binary_search_by(|probe| probe.canonical_cmp(t))
        .ok()
}

/// Lexicographic rank of `x` among all strings of its type, by multinomial
/// prefix counting; no enumeration.
pub fn rank_in_class(x: &Sequence, q: usize) -> BigUint {
    let t = TypeVector::of_sequence(x, q);
    let mut remaining = t.counts.clone();
    // completions = multinomial of the remaining counts
    let mut completions = t.class_size();
    let n = x.len();
    let mut rank = BigUint::zero();
    for (i, &sym) in x.symbols().iter().enumerate() {
        let slots = n - i;
        for s in 0..sym as usize {
            if remaining[s] > 0 {
                // strings that continue with the smaller symbol s
                rank += &completions * BigUint::from(remaining[s]) / BigUint::from(slots);
            }
        }
        completions = completions * BigUint::from(remaining[sym as usize]) / BigUint::from(slots);
        remaining[sym as usize] -= 1;
    }
    rank
}

/// Inverse of `rank_in_class`: the unique string of type `t` with the given
/// lexicographic rank.
pub fn unrank_in_class(t: &TypeVector, rank: &BigUint) -> Result<Sequence> {
    let size = t.class_size();
    if rank >= &size {
        return Err(Error::RankOutOfRange {
            rank: rank.clone(),
            size,
        });
    }
    let n = t.n();
    let mut remaining = t.counts.clone();
    let mut completions = t.class_size();
    let mut r = rank.clone();
    let mut symbols = Vec::with_capacity(n);
    for i in 0..n {
        let slots = n - i;
        for s in 0..t.q() {
            if remaining[s] == 0 {
                continue;
            }
            let with_s = &completions * BigUint::from(remaining[s]) / BigUint::from(slots);
            if r < with_s {
                symbols.push(s as u8);
                completions = with_s;
                remaining[s] -= 1;
                break;
            }
            r -= with_s;
        }
    }
    debug_assert_eq!(symbols.len(), n);
    Ok(Sequence::from_raw(symbols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typespace::all_sequences;
    use num_traits::ToPrimitive;

    #[test]
    fn type_of_counts_symbols() {
        let x = Sequence::parse("00110", 2).unwrap();
        assert_eq!(TypeVector::of_sequence(&x, 2).counts(), &[3, 2]);
        let y = Sequence::parse("012", 3).unwrap();
        assert_eq!(TypeVector::of_sequence(&y, 3).counts(), &[1, 1, 1]);
        let z = Sequence::parse("1111", 2).unwrap();
        assert_eq!(TypeVector::of_sequence(&z, 2).counts(), &[0, 4]);
    }

    #[test]
    fn enumeration_order_and_count() {
        let types = enumerate_types(2, 2);
        let counts: Vec<&[usize]> = types.iter().map(|t| t.counts()).collect();
        assert_eq!(counts, vec![&[2, 0][..], &[1, 1][..], &[0, 2][..]]);

        // stars and bars: C(6, 2) = 15
        assert_eq!(enumerate_types(4, 3).len(), 15);
        assert_eq!(num_types(4, 3).to_usize().unwrap(), 15);

        let tiny = enumerate_types(1, 2);
        assert_eq!(tiny.len(), 2);
        assert_eq!(tiny[0].counts(), &[1, 0]);
        assert_eq!(tiny[1].counts(), &[0, 1]);
    }

    #[test]
    fn enumeration_is_canonically_sorted() {
        for (n, q) in [(5, 2), (4, 3), (3, 4)] {
            let types = enumerate_types(n, q);
            for w in types.windows(2) {
                assert_eq!(w[0].canonical_cmp(&w[1]), Ordering::Less);
            }
            assert_eq!(BigUint::from(types.len()), num_types(n, q));
        }
    }

    #[test]
    fn class_sizes() {
        assert_eq!(
            TypeVector::new(vec![2, 2]).unwrap().class_size(),
            BigUint::from(6u32)
        );
        assert_eq!(
            TypeVector::new(vec![4, 0]).unwrap().class_size(),
            BigUint::from(1u32)
        );
        // multinomial 4!/(1! 1! 2!) = 12
        assert_eq!(
            TypeVector::new(vec![1, 1, 2]).unwrap().class_size(),
            BigUint::from(12u32)
        );
    }

    #[test]
    fn class_sizes_partition_the_space() {
        for q in 2..=3usize {
            for n in 1..=10usize {
                let total: BigUint = enumerate_types(n, q)
                    .iter()
                    .map(|t| t.class_size())
                    .sum();
                assert_eq!(total, BigUint::from(q).pow(n as u32), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn rank_matches_sorted_enumeration() {
        // independent oracle: enumerate the class and sort lexicographically
        let t = TypeVector::new(vec![2, 2]).unwrap();
        let mut class: Vec<Sequence> = all_sequences(2, 4)
            .filter(|x| TypeVector::of_sequence(x, 2) == t)
            .collect();
        class.sort_by(|a, b| a.symbols().cmp(b.symbols()));
        let rendered: Vec<String> = class.iter().map(|x| x.to_string()).collect();
        assert_eq!(
            rendered,
            vec!["0011", "0101", "0110", "1001", "1010", "1100"]
        );
        for (i, x) in class.iter().enumerate() {
            assert_eq!(rank_in_class(x, 2), BigUint::from(i));
            assert_eq!(&unrank_in_class(&t, &BigUint::from(i)).unwrap(), x);
        }
    }

    #[test]
    fn rank_unrank_examples() {
        let x = Sequence::parse("0011", 2).unwrap();
        assert_eq!(rank_in_class(&x, 2), BigUint::zero());
        let y = Sequence::parse("0101", 2).unwrap();
        assert_eq!(rank_in_class(&y, 2), BigUint::one());
        let z = Sequence::parse("1100", 2).unwrap();
        assert_eq!(rank_in_class(&z, 2), BigUint::from(5u32));

        let t40 = TypeVector::new(vec![4, 0]).unwrap();
        assert_eq!(
            unrank_in_class(&t40, &BigUint::zero()).unwrap().to_string(),
            "0000"
        );
        let t22 = TypeVector::new(vec![2, 2]).unwrap();
        assert_eq!(
            unrank_in_class(&t22, &BigUint::from(5u32))
                .unwrap()
                .to_string(),
            "1100"
        );
        let w = Sequence::parse("0110", 2).unwrap();
        assert_eq!(
            unrank_in_class(&t22, &rank_in_class(&w, 2)).unwrap(),
            w
        );
    }

    #[test]
    fn unrank_rejects_out_of_range() {
        let t = TypeVector::new(vec![2, 2]).unwrap();
        let err = unrank_in_class(&t, &BigUint::from(6u32)).unwrap_err();
        assert_eq!(err.name(), "RankOutOfRange");
    }

    #[test]
    fn rank_unrank_exhaustive_small() {
        for (q, max_n) in [(2usize, 8usize), (3, 6)] {
            for n in 1..=max_n {
                for x in all_sequences(q, n) {
                    let t = TypeVector::of_sequence(&x, q);
                    let r = rank_in_class(&x, q);
                    assert!(r < t.class_size());
                    assert_eq!(unrank_in_class(&t, &r).unwrap(), x, "q={q} n={n}");
                }
            }
        }
    }

    #[test]
    fn sequence_prob_depends_only_on_type() {
        let p = Distribution::new(vec![0.6, 0.4]).unwrap();
        for n in 1..=8usize {
            for x in all_sequences(2, n) {
                let t = TypeVector::of_sequence(&x, 2);
                let direct = p.sequence_prob(&x);
                let via_type = t.sequence_prob(&p);
                assert!((direct - via_type).abs() < 1e-15, "n={n} x={x}");
            }
        }
    }
}
