//! Key compression: the map from an n-symbol key to the m-symbol block that
//! masks the short branch, together with the exact distribution of the
//! compressed key and its uniformity deficit.
//!
//! The default (`Balanced`) map orders all of `X^n` by (canonical type
//! order, in-class lexicographic rank) and sends the g-th string to
//! `g mod q^m`. It uses no knowledge of the key statistics, hands every
//! target either `floor` or `ceil` of its fair share of each type class,
//! and is exactly uniform for uniform keys whenever `m <= n`. A seeded
//! random linear map over `Z_q` is provided for comparison experiments
//! only; no bound is claimed for it.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::bits::{payload_value, value_to_payload};
use crate::codec::SchemeParams;
use crate::error::{Error, Result};
use crate::exponents::exponent_f;
use crate::typespace::{
    all_sequences, big_to_f64, enumerate_types, find_type, rank_in_class, Distribution,
    Sequence, TypeVector,
};

/// How keys are compressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyMethod {
    Balanced,
    Linear { seed: u64 },
}

impl std::fmt::Display for KeyMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KeyMethod::Balanced => write!(f, "balanced"),
            KeyMethod::Linear { seed } => write!(f, "linear(seed={seed})"),
        }
    }
}

/// Deterministic key-compression map for fixed `(q, n, m)` and method.
#[derive(Debug, Clone)]
pub struct KeyCompressor {
    q: usize,
    n: usize,
    m: usize,
    method: KeyMethod,
    /// every type of length n, canonical order (balanced bookkeeping)
    types: Vec<TypeVector>,
    /// cumulative class sizes over `types`
    offsets: Vec<BigUint>,
    /// m x n matrix over Z_q, linear method only
    matrix: Vec<Vec<u8>>,
}

impl KeyCompressor {
    pub fn new(params: &SchemeParams, method: KeyMethod) -> Result<Self> {
        Self::with_block_len(params.q(), params.n(), params.m(), method)
    }

    /// Compressor for an arbitrary block length, independent of any scheme;
    /// useful for comparing compression maps across `m`.
    pub fn with_block_len(q: usize, n: usize, m: usize, method: KeyMethod) -> Result<Self> {
        crate::typespace::Alphabet::new(q)?;
        if n == 0 || m == 0 {
            return Err(Error::LengthMismatch {
                expected: 1,
                got: 0,
            });
        }
        let types = enumerate_types(n, q);
        let mut offsets = Vec::with_capacity(types.len());
        let mut acc = BigUint::zero();
        for t in &types {
            offsets.push(acc.clone());
            acc += t.class_size();
        }
        let matrix = match method {
            KeyMethod::Balanced => Vec::new(),
            KeyMethod::Linear { seed } => {
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                (0..m)
                    .map(|_| (0..n).map(|_| rng.random_range(0..q as u32) as u8).collect())
                    .collect()
            }
        };
        Ok(KeyCompressor {
            q,
            n,
            m,
            method,
            types,
            offsets,
            matrix,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn method(&self) -> KeyMethod {
        self.method
    }

    /// Position of `k` in the global (type order, in-class rank) order of
    /// `X^n`.
    pub fn global_rank(&self, k: &Sequence) -> Result<BigUint> {
        self.check_key(k)?;
        let t = TypeVector::of_sequence(k, self.q);
        let i = find_type(&self.types, &t).expect("every type is enumerated");
        Ok(&self.offsets[i] + rank_in_class(k, self.q))
    }

    /// The compressed key block of `k`.
    pub fn compress(&self, k: &Sequence) -> Result<Sequence> {
        self.check_key(k)?;
        match self.method {
            KeyMethod::Balanced => {
                let g = self.global_rank(k)?;
                let v = g % BigUint::from(self.q).pow(self.m as u32);
                Ok(value_to_payload(&v, self.q, self.m))
            }
            KeyMethod::Linear { .. } => {
                let symbols = self
                    .matrix
                    .iter()
                    .map(|row| {
                        let dot: usize = row
                            .iter()
                            .zip(k.symbols())
                            .map(|(&a, &b)| a as usize * b as usize)
                            .sum();
                        (dot % self.q) as u8
                    })
                    .collect();
                Ok(Sequence::new(symbols, self.q).expect("reduced mod q"))
            }
        }
    }

    /// Exact distribution of the compressed key under i.i.d. `p_k`.
    ///
    /// The balanced method uses a closed per-type form: each type class
    /// occupies one contiguous run of global positions, so its image under
    /// `mod q^m` is a constant base count plus one cyclic window, and the
    /// target probabilities are piecewise constant over O(#types) segments.
    /// The linear method falls back to enumeration and inherits its size
    /// precondition.
    pub fn compressed_distribution(&self, p_k: &Distribution) -> Result<CompressedKeyDist> {
        if p_k.q() != self.q {
            return Err(Error::InvalidDistribution(format!(
                "key distribution has {} entries, alphabet has {}",
                p_k.q(),
                self.q
            )));
        }
        match self.method {
            KeyMethod::Balanced => self.balanced_distribution(p_k),
            KeyMethod::Linear { .. } => {
                let dense = self.pushforward_by_enumeration(p_k)?;
                let h_tilde = entropy_of_dense(&dense);
                Ok(CompressedKeyDist {
                    q: self.q,
                    m: self.m,
                    form: DistForm::Dense(dense),
                    h_tilde,
                    exactly_uniform: false,
                })
            }
        }
    }

    fn balanced_distribution(&self, p_k: &Distribution) -> Result<CompressedKeyDist> {
        let log_q = (self.q as f64).log2();
        if self.m as f64 * log_q > 120.0 || self.n as f64 * log_q > 120.0 {
            return Err(Error::InstanceTooLarge(format!(
                "closed-form pushforward needs q^m and q^n within u128, got q={} n={} m={}",
                self.q, self.n, self.m
            )));
        }
        let qm_big = BigUint::from(self.q).pow(self.m as u32);
        let qm = qm_big.to_u128().expect("guarded above");

        // per type: full cycles land on every target, the remainder covers
        // one cyclic window starting at the class's first global position
        let mut base_int: u128 = 0;
        let mut base_prob = 0.0f64;
        let mut windows: Vec<(u128, u128, f64)> = Vec::new();
        for (t, off) in self.types.iter().zip(&self.offsets) {
            let size = t.class_size();
            let cycles = &size / &qm_big;
            let rem = (&size % &qm_big).to_u128().expect("below q^m");
            let pi = t.sequence_prob(p_k);
            base_int += cycles.to_u128().expect("guarded above");
            base_prob += big_to_f64(&cycles) * pi;
            if rem > 0 {
                let start = (off % &qm_big).to_u128().expect("below q^m");
                windows.push((start, rem, pi));
            }
        }

        let mut cuts: Vec<u128> = vec![0];
        for &(a, r, _) in &windows {
            cuts.push(a);
            cuts.push((a + r) % qm);
        }
        cuts.sort_unstable();
        cuts.dedup();

        let covers = |a: u128, r: u128, s: u128| -> bool {
            let end = a + r;
            if end <= qm {
                a <= s && s < end
            } else {
                s >= a || s < end - qm
            }
        };

        let mut segments = Vec::with_capacity(cuts.len());
        let mut counts = Vec::with_capacity(cuts.len());
        for (i, &start) in cuts.iter().enumerate() {
            let end = if i + 1 < cuts.len() { cuts[i + 1] } else { qm };
            if end == start {
                continue;
            }
            let mut prob = base_prob;
            let mut cover = 0u128;
            for &(a, r, pi) in &windows {
                if covers(a, r, start) {
                    prob += pi;
                    cover += 1;
                }
            }
            segments.push(Segment {
                start,
                end,
                prob,
            });
            counts.push(base_int + cover);
        }

        let (h_tilde, exactly_uniform) = if p_k.is_uniform() {
            // integer preimage counts make the uniform-key case exact
            let first = counts[0];
            if counts.iter().all(|&c| c == first) && first > 0 {
                (self.m as f64 * log_q, true)
            } else {
                let total = (self.q as f64).powi(self.n as i32);
                let mut h = 0.0;
                for (seg, &c) in segments.iter().zip(&counts) {
                    if c > 0 {
                        let p = c as f64 / total;
                        h -= (seg.end - seg.start) as f64 * p * p.log2();
                    }
                }
                (h, false)
            }
        } else {
            let mut h = 0.0;
            for seg in &segments {
                if seg.prob > 0.0 {
                    h -= (seg.end - seg.start) as f64 * seg.prob * seg.prob.log2();
                }
            }
            (h, false)
        };

        Ok(CompressedKeyDist {
            q: self.q,
            m: self.m,
            form: DistForm::Segments(segments),
            h_tilde,
            exactly_uniform,
        })
    }

    /// Brute-force pushforward over all q^n keys; the oracle the closed
    /// form is checked against, and the only exact path for the linear
    /// method.
    pub fn pushforward_by_enumeration(&self, p_k: &Distribution) -> Result<Vec<f64>> {
        let log_q = (self.q as f64).log2();
        if self.n as f64 * log_q > 24.0 {
            return Err(Error::InstanceTooLarge(format!(
                "enumeration over q^n needs q^n <= 2^24, got q={} n={}",
                self.q, self.n
            )));
        }
        if self.m as f64 * log_q > 26.0 {
            return Err(Error::InstanceTooLarge(format!(
                "dense pushforward needs q^m <= 2^26, got q={} m={}",
                self.q, self.m
            )));
        }
        let qm = (self.q as u128).pow(self.m as u32) as usize;
        let mut dense = vec![0.0f64; qm];
        for k in all_sequences(self.q, self.n) {
            let v = payload_value(&self.compress(&k)?, self.q)
                .to_usize()
                .expect("q^m guarded");
            dense[v] += p_k.sequence_prob(&k);
        }
        Ok(dense)
    }

    fn check_key(&self, k: &Sequence) -> Result<()> {
        if k.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: k.len(),
            });
        }
        for &s in k.symbols() {
            if s as usize >= self.q {
                return Err(Error::SymbolOutOfRange {
                    symbol: s as usize,
                    q: self.q,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Segment {
    start: u128,
    end: u128,
    prob: f64,
}

#[derive(Debug, Clone)]
enum DistForm {
    Segments(Vec<Segment>),
    Dense(Vec<f64>),
}

/// Exact distribution of the compressed key.
#[derive(Debug, Clone)]
pub struct CompressedKeyDist {
    q: usize,
    m: usize,
    form: DistForm,
    h_tilde: f64,
    exactly_uniform: bool,
}

impl CompressedKeyDist {
    /// `H(K~^m)` in bits.
    pub fn h_tilde(&self) -> f64 {
        self.h_tilde
    }

    /// Whether the distribution was recognized as exactly uniform over the
    /// target space (integer preimage counts all equal).
    pub fn exactly_uniform(&self) -> bool {
        self.exactly_uniform
    }

    /// Materializes the q^m probability vector.
    pub fn dense(&self) -> Result<Vec<f64>> {
        if self.m as f64 * (self.q as f64).log2() > 26.0 {
            return Err(Error::InstanceTooLarge(format!(
                "dense expansion needs q^m <= 2^26, got q={} m={}",
                self.q, self.m
            )));
        }
        match &self.form {
            DistForm::Dense(v) => Ok(v.clone()),
            DistForm::Segments(segs) => {
                let qm = (self.q as u128).pow(self.m as u32) as usize;
                let mut dense = vec![0.0f64; qm];
                for seg in segs {
                    for slot in &mut dense[seg.start as usize..seg.end as usize] {
                        *slot = seg.prob;
                    }
                }
                Ok(dense)
            }
        }
    }
}

fn entropy_of_dense(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// The uniformity deficit `m log q - H(K~^m)` together with the decay bound
/// it is compared against (computed from the key exponent `F`).
#[derive(Debug, Clone, Copy)]
pub struct DeficitReport {
    pub h_tilde: f64,
    pub deficit: f64,
    pub prop3_rhs: f64,
}

/// Exact deficit of the compressed key plus the bound value
/// `(R_n + 1/2) (n+1)^{3q} 2^{-n [F(R|p_K) - gamma_n]}`.
pub fn deficit_report(
    comp: &KeyCompressor,
    params: &SchemeParams,
    p_k: &Distribution,
) -> Result<DeficitReport> {
    if comp.m() != params.m() || comp.q() != params.q() || comp.n() != params.n() {
        return Err(Error::ParamsMismatch);
    }
    let dist = comp.compressed_distribution(p_k)?;
    let m_bits = comp.m() as f64 * (comp.q() as f64).log2();
    let deficit = if dist.exactly_uniform() {
        0.0
    } else {
        (m_bits - dist.h_tilde()).max(0.0)
    };
    let f = exponent_f(params.rate(), p_k)?.value;
    let nf = params.n() as f64;
    let prop3_rhs = (params.rate_n() + 0.5)
        * (nf + 1.0).powi(3 * params.q() as i32)
        * (-nf * (f - params.gamma_n())).exp2();
    Ok(DeficitReport {
        h_tilde: dist.h_tilde(),
        deficit,
        prop3_rhs,
    })
}
