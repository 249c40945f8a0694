//! The universal two-length source code: parameter derivation, construction
//! of the admitted-type code `C^n(R)`, and the encoder/decoder pair.
//!
//! A string is admitted exactly when the entropy of its type is at most `R`;
//! admitted strings are indexed by cumulative type offset plus in-class
//! lexicographic rank and emitted as an m-symbol block, everything else
//! passes through unchanged. The two resulting codeword bit lengths are the
//! whole wire format: the decoder branches on length alone.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bits::value_to_payload;
use crate::error::{Error, Result};
use crate::report::fmt12;
use crate::typespace::{
    enumerate_types, find_type, rank_in_class, unrank_in_class, Distribution, Sequence,
    TypeVector,
};

/// Tolerance when admitting a boundary type with `H(type) = R`.
const ADMIT_TOL: f64 = 1e-12;

/// How the short-branch block length `m` is chosen.
///
/// * `Paper` follows the construction's published parameter choices
///   (`gamma_n` inflation, `m = floor(n R_n / log q)`), which is what the
///   finite-n bounds are stated for.
/// * `Practical` picks the smallest `m` with `q^m >= |C|`, so desk-scale
///   runs actually compress.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Paper,
    Practical,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Paper => write!(f, "paper"),
            Mode::Practical => write!(f, "practical"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Mode::Paper),
            "practical" => Ok(Mode::Practical),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// All derived parameters of a scheme instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeParams {
    q: usize,
    n: usize,
    rate: f64,
    mode: Mode,
    gamma_n: f64,
    rate_n: f64,
    m: usize,
    l1: usize,
    l2: usize,
    code_size: BigUint,
    code_is_full: bool,
}

impl SchemeParams {
    /// Derives every parameter but does not enforce the wire-format rule
    /// that the two codeword lengths differ; bound sweeps need parameters
    /// even at rates where the lengths collide.
    pub fn derive(q: usize, n: usize, rate: f64, mode: Mode) -> Result<Self> {
        crate::typespace::Alphabet::new(q)?;
        if n == 0 {
            return Err(Error::LengthMismatch {
                expected: 1,
                got: 0,
            });
        }
        let log_q = (q as f64).log2();
        if !(0.0..=log_q + 1e-12).contains(&rate) || rate.is_nan() {
            return Err(Error::InvalidRate { rate });
        }
        let nf = n as f64;
        let gamma_n = (q as f64 * (nf + 1.0).log2() + log_q) / nf;
        let rate_n = rate + gamma_n;
        let l2 = (nf * log_q).ceil() as usize;

        let (code_size, code_is_full) = admitted_code_size(q, n, rate);
        let (m, l1) = match mode {
            Mode::Paper => {
                let m = (nf * rate_n / log_q).floor() as usize;
                let l1 = (nf * rate_n).ceil() as usize;
                debug_assert!(
                    m as f64 * log_q <= nf * rate_n + 1e-9
                        && nf * rate_n <= (m as f64 + 1.0) * log_q + 1e-9,
                    "block choice must sandwich n*R_n"
                );
                (m, l1)
            }
            Mode::Practical => {
                let mut m = 0usize;
                let mut cap = BigUint::from(1u32);
                while cap < code_size {
                    cap *= q;
                    m += 1;
                }
                let l1 = (m as f64 * log_q).ceil() as usize;
                (m, l1)
            }
        };
        Ok(SchemeParams {
            q,
            n,
            rate,
            mode,
            gamma_n,
            rate_n,
            m,
            l1,
            l2,
            code_size,
            code_is_full,
        })
    }

    /// Derives and validates the wire format: both branch lengths must
    /// differ unless the raw branch is structurally unreachable.
    pub fn new(q: usize, n: usize, rate: f64, mode: Mode) -> Result<Self> {
        let params = Self::derive(q, n, rate, mode)?;
        if params.l1 == params.l2 && !params.code_is_full {
            return Err(Error::LengthCollision { bits: params.l1 });
        }
        Ok(params)
    }

    pub fn q(&self) -> usize {
        self.q
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn rate(&self) -> f64 {
        self.rate
    }
    pub fn mode(&self) -> Mode {
        self.mode
    }
    pub fn gamma_n(&self) -> f64 {
        self.gamma_n
    }
    pub fn rate_n(&self) -> f64 {
        self.rate_n
    }
    /// Short-branch block length in symbols.
    pub fn m(&self) -> usize {
        self.m
    }
    /// Short-branch codeword length in bits.
    pub fn l1(&self) -> usize {
        self.l1
    }
    /// Raw-branch codeword length in bits.
    pub fn l2(&self) -> usize {
        self.l2
    }
    pub fn code_size(&self) -> &BigUint {
        &self.code_size
    }
    /// Whether the code admits every string (no raw branch reachable).
    pub fn code_is_full(&self) -> bool {
        self.code_is_full
    }
    pub fn log2_q(&self) -> f64 {
        (self.q as f64).log2()
    }
}

fn admitted_code_size(q: usize, n: usize, rate: f64) -> (BigUint, bool) {
    let mut size = BigUint::zero();
    let mut all = true;
    for t in enumerate_types(n, q) {
        if t.entropy() <= rate + ADMIT_TOL {
            size += t.class_size();
        } else {
            all = false;
        }
    }
    (size, all)
}

/// Which branch a codec output travelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Compressed,
    Raw,
}

/// Encoder output: an m-symbol block for admitted strings, the string
/// itself otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodecOutput {
    pub branch: Branch,
    pub payload: Sequence,
}

/// The ordered code `C^n(R)`: admitted types in canonical order with
/// cumulative start indices. Immutable after construction.
#[derive(Debug, Clone)]
pub struct UniversalCode {
    params: SchemeParams,
    admitted: Vec<TypeVector>,
    offsets: Vec<BigUint>,
    size: BigUint,
}

impl UniversalCode {
    pub fn build(params: SchemeParams) -> Result<Self> {
        let mut admitted = Vec::new();
        let mut offsets = Vec::new();
        let mut size = BigUint::zero();
        for t in enumerate_types(params.n, params.q) {
            if t.entropy() <= params.rate + ADMIT_TOL {
                offsets.push(size.clone());
                size += t.class_size();
                admitted.push(t);
            }
        }
        debug_assert_eq!(size, params.code_size);

        // cardinality bound |C| <= (n+1)^q 2^{nR}, compared through logs;
        // the slack is never smaller than a factor of n+1
        let log2_size = size.bits() as f64; // upper bound on log2
        let bound = params.q as f64 * ((params.n + 1) as f64).log2()
            + params.n as f64 * params.rate;
        debug_assert!(
            log2_size - 1.0 <= bound,
            "cardinality bound violated: 2^{log2_size} vs 2^{bound}"
        );

        let capacity = BigUint::from(params.q).pow(params.m as u32);
        if size > capacity {
            return Err(Error::InjectionImpossible {
                size,
                q: params.q,
                m: params.m,
            });
        }
        Ok(UniversalCode {
            params,
            admitted,
            offsets,
            size,
        })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn admitted_types(&self) -> &[TypeVector] {
        &self.admitted
    }

    pub fn offsets(&self) -> &[BigUint] {
        &self.offsets
    }

    pub fn size(&self) -> &BigUint {
        &self.size
    }

    fn admitted_index(&self, t: &TypeVector) -> Option<usize> {
        find_type(&self.admitted, t)
    }

    pub fn contains(&self, x: &Sequence) -> bool {
        self.admitted_index(&TypeVector::of_sequence(x, self.params.q))
            .is_some()
    }

    /// Code index of an admitted string: type offset plus in-class rank.
    pub fn index_of(&self, x: &Sequence) -> Option<BigUint> {
        let t = TypeVector::of_sequence(x, self.params.q);
        let i = self.admitted_index(&t)?;
        Some(&self.offsets[i] + rank_in_class(x, self.params.q))
    }

    pub fn encode(&self, x: &Sequence) -> Result<CodecOutput> {
        self.check_block(x)?;
        match self.index_of(x) {
            Some(index) => Ok(CodecOutput {
                branch: Branch::Compressed,
                payload: value_to_payload(&index, self.params.q, self.params.m),
            }),
            None => Ok(CodecOutput {
                branch: Branch::Raw,
                payload: x.clone(),
            }),
        }
    }

    pub fn decode(&self, y: &CodecOutput) -> Result<Sequence> {
        match y.branch {
            Branch::Compressed => {
                if y.payload.len() != self.params.m {
                    return Err(Error::LengthMismatch {
                        expected: self.params.m,
                        got: y.payload.len(),
                    });
                }
                let index = crate::bits::payload_value(&y.payload, self.params.q);
                if index >= self.size {
                    return Err(Error::IndexOutOfRange {
                        index,
                        size: self.size.clone(),
                    });
                }
                // last admitted type whose offset is <= index
                let i = self.offsets.partition_point(|off| off <= &index) - 1;
                let residual = &index - &self.offsets[i];
                unrank_in_class(&self.admitted[i], &residual)
            }
            Branch::Raw => {
                self.check_block(&y.payload)?;
                Ok(y.payload.clone())
            }
        }
    }

    /// Probability that a source string is admitted, summed per type.
    pub fn prob_in_code(&self, p: &Distribution) -> f64 {
        self.admitted.iter().map(|t| t.class_prob(p)).sum()
    }

    fn check_block(&self, x: &Sequence) -> Result<()> {
        if x.len() != self.params.n {
            return Err(Error::LengthMismatch {
                expected: self.params.n,
                got: x.len(),
            });
        }
        for &s in x.symbols() {
            if s as usize >= self.params.q {
                return Err(Error::SymbolOutOfRange {
                    symbol: s as usize,
                    q: self.params.q,
                });
            }
        }
        Ok(())
    }

    /// Deterministic structured text summary of the codebook.
    pub fn summary(&self) -> String {
        let p = &self.params;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "universal code: q={} n={} R={} mode={}",
            p.q,
            p.n,
            fmt12(p.rate),
            p.mode
        );
        let _ = writeln!(
            out,
            "gamma_n={} R_n={}",
            fmt12(p.gamma_n),
            fmt12(p.rate_n)
        );
        let _ = writeln!(out, "admitted types: {}", self.admitted.len());
        for (t, off) in self.admitted.iter().zip(&self.offsets) {
            let _ = writeln!(out, "  ({t}) size {} offset {off}", t.class_size());
        }
        let _ = writeln!(out, "|C| = {}", self.size);
        let _ = writeln!(out, "m = {}, L1 = {} bits, L2 = {} bits", p.m, p.l1, p.l2);
        out
    }
}
