use std::fmt;

use crate::error::{Error, Result};
use crate::typespace::{Sequence, Symbol};

/// Tolerance on the unit-sum constraint.
pub const SUM_TOL: f64 = 1e-12;

/// A probability vector over the alphabet `[0, q)`. All entropic quantities
/// are in bits (logarithms to base 2).
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidDistribution(format!(
                "need at least 2 entries, got {}",
                probs.len()
            )));
        }
        if probs.len() > 256 {
            return Err(Error::InvalidDistribution(format!(
                "at most 256 entries supported, got {}",
                probs.len()
            )));
        }
        for &p in &probs {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(Error::InvalidDistribution(format!(
                    "entry {p} outside [0, 1]"
                )));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        Ok(Distribution { probs })
    }

    pub fn uniform(q: usize) -> Self {
        Distribution {
            probs: vec![1.0 / q as f64; q],
        }
    }

    pub fn point_mass(q: usize, s: Symbol) -> Result<Self> {
        if s as usize >= q {
            return Err(Error::SymbolOutOfRange {
                symbol: s as usize,
                q,
            });
        }
        let mut probs = vec![0.0; q];
        probs[s as usize] = 1.0;
        Ok(Distribution { probs })
    }

    pub fn q(&self) -> usize {
        self.probs.len()
    }

    pub fn prob(&self, s: Symbol) -> f64 {
        self.probs[s as usize]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn is_uniform(&self) -> bool {
        let first = self.probs[0];
        self.probs.iter().all(|&p| p == first)
    }

    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|&&p| p > 0.0).count()
    }

    /// Shannon entropy `H(p) = -sum p(x) log2 p(x)` with `0 log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        self.probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }

    /// `D(p || r)` in bits; `+inf` when `p` puts mass where `r` has none.
    pub fn kl_divergence(&self, r: &Distribution) -> f64 {
        assert_eq!(self.q(), r.q(), "divergence needs a common alphabet");
        let mut d = 0.0;
        for (&p, &rp) in self.probs.iter().zip(&r.probs) {
            if p > 0.0 {
                if rp == 0.0 {
                    return f64::INFINITY;
                }
                d += p * (p / rp).log2();
            }
        }
        d
    }

    /// Probability of a string under the i.i.d. extension of `p`.
    pub fn sequence_prob(&self, x: &Sequence) -> f64 {
        x.symbols().iter().map(|&s| self.prob(s)).product()
    }

    /// Parses `"0.9,0.1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let probs: Vec<f64> = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad probability {t:?}: {e}")))
            })
            .collect::<Result<_>>()?;
        Distribution::new(probs)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.probs.iter().map(|p| format!("{p}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).log2();
    }
    h
}
