//! Numerical solvers for the two rate exponents that govern the scheme:
//!
//! * `E(R|p)`  — min of `D(P||p)` over distributions with `H(P) >= R`,
//! * `F(R|p)`  — min of `[H(P)-R]^+ + D(P||p)` over all distributions,
//!
//! plus the admissibility thresholds derived from `H(X)` and `H(K)`.
//!
//! Both minimizations are solved over the tilted family `P ∝ p^s`, where
//! every stationary point of the Lagrangian lives; an exhaustive simplex
//! grid oracle (`grid_oracle`) independently verifies the solver on small
//! alphabets.

use crate::error::{Error, Result};
use crate::typespace::Distribution;

/// Which exponent a caller wants from the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentKind {
    E,
    F,
}

/// How an exponent value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Tilted,
    Grid,
}

/// An exponent value in bits, with the minimizing distribution when one
/// exists (`None` only for the infeasible `+inf` case).
#[derive(Debug, Clone)]
pub struct ExponentResult {
    pub value: f64,
    pub argmin: Option<Distribution>,
    pub method: SolveMethod,
}

/// Bisection tolerance on `H(P_beta) = R`.
const ENTROPY_TOL: f64 = 1e-10;
/// Golden-section tolerance on the tilt parameter for `F`.
const TILT_TOL: f64 = 1e-8;
/// Largest tilt scanned before switching to the limit point.
const TILT_MAX: f64 = 64.0;

/// The tilted distribution `P_s ∝ p^s` restricted to the support of `p`,
/// computed in the log domain to survive large tilts.
fn tilted(p: &Distribution, s: f64) -> Distribution {
    let logs: Vec<Option<f64>> = p
        .probs()
        .iter()
        .map(|&v| if v > 0.0 { Some(v.log2()) } else { None })
        .collect();
    let max_log = logs
        .iter()
        .flatten()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs
        .iter()
        .map(|l| match l {
            Some(lg) => (s * (lg - max_log)).exp2(),
            None => 0.0,
        })
        .collect();
    let z: f64 = weights.iter().sum();
    Distribution::new(weights.iter().map(|w| w / z).collect())
        .expect("tilted family stays on the simplex")
}

/// `min { D(P||p) : H(P) >= R }`, solved on the boundary `H(P) = R` by
/// bisection over the tilted family. Returns 0 when `p` itself is feasible
/// and `+inf` when no distribution on the support of `p` reaches entropy
/// `R`.
pub fn exponent_e(rate: f64, p: &Distribution) -> Result<ExponentResult> {
    if rate < 0.0 || rate.is_nan() {
        return Err(Error::InvalidRate { rate });
    }
    let h_p = p.entropy();
    if h_p >= rate {
        return Ok(ExponentResult {
            value: 0.0,
            argmin: Some(p.clone()),
            method: SolveMethod::Tilted,
        });
    }
    let h_max = (p.support_size() as f64).log2();
    if rate > h_max {
        return Ok(ExponentResult {
            value: f64::INFINITY,
            argmin: None,
            method: SolveMethod::Tilted,
        });
    }
    // H(P_beta) falls monotonically from h_max at beta=0 to H(p) at beta=1.
    // Bisect to full f64 depth: near beta=0 the entropy curve is flat (zero
    // derivative), so stopping on |H - R| alone would leave the divergence
    // several orders short of ENTROPY_TOL.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if tilted(p, mid).entropy() > rate {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let argmin = tilted(p, 0.5 * (lo + hi));
    debug_assert!((argmin.entropy() - rate).abs() <= ENTROPY_TOL);
    Ok(ExponentResult {
        value: argmin.kl_divergence(p),
        argmin: Some(argmin),
        method: SolveMethod::Tilted,
    })
}

fn f_objective(rate: f64, p: &Distribution, cand: &Distribution) -> f64 {
    (cand.entropy() - rate).max(0.0) + cand.kl_divergence(p)
}

/// The `s -> inf` limit of the tilted family: uniform over the maximizers
/// of `p`.
fn tilted_limit(p: &Distribution) -> Distribution {
    let max_p = p.probs().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = p
        .probs()
        .iter()
        .map(|&v| if v == max_p { 1.0 } else { 0.0 })
        .collect();
    let z: f64 = weights.iter().sum();
    Distribution::new(weights.iter().map(|w| w / z).collect()).expect("valid limit")
}

/// `min [H(P)-R]^+ + D(P||p)` over all `P`, solved by a coarse scan of the
/// tilted family for tilts `s >= 1` followed by golden-section refinement;
/// tilts below 1 only increase both terms.
pub fn exponent_f(rate: f64, p: &Distribution) -> Result<ExponentResult> {
    if rate < 0.0 || rate.is_nan() {
        return Err(Error::InvalidRate { rate });
    }
    if rate >= p.entropy() {
        return Ok(ExponentResult {
            value: 0.0,
            argmin: Some(p.clone()),
            method: SolveMethod::Tilted,
        });
    }
    let eval = |s: f64| f_objective(rate, p, &tilted(p, s));

    let steps = 1024usize;
    let width = TILT_MAX - 1.0;
    let mut best_i = 0usize;
    let mut best_val = f64::INFINITY;
    for i in 0..=steps {
        let s = 1.0 + width * i as f64 / steps as f64;
        let v = eval(s);
        if v < best_val {
            best_val = v;
            best_i = i;
        }
    }
    let mut a = 1.0 + width * best_i.saturating_sub(1) as f64 / steps as f64;
    let mut b = 1.0 + width * (best_i + 1).min(steps) as f64 / steps as f64;

    // golden-section refinement of the unimodal bracket
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    while b - a > TILT_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval(d);
        }
    }
    let s_star = 0.5 * (a + b);
    let mut argmin = tilted(p, s_star);
    let mut value = f_objective(rate, p, &argmin);

    // the family closure: uniform over the maximizers of p
    let limit = tilted_limit(p);
    let limit_val = f_objective(rate, p, &limit);
    if limit_val < value {
        value = limit_val;
        argmin = limit;
    }
    Ok(ExponentResult {
        value,
        argmin: Some(argmin),
        method: SolveMethod::Tilted,
    })
}

/// Exhaustive minimization over the probability simplex discretized with
/// the given step; an independent upper-bounding oracle for both exponents
/// on alphabets of size 2 and 3.
pub fn grid_oracle(
    rate: f64,
    p: &Distribution,
    which: ExponentKind,
    step: f64,
) -> Result<f64> {
    if rate < 0.0 || rate.is_nan() {
        return Err(Error::InvalidRate { rate });
    }
    if !(step > 0.0 && step <= 1e-3 + 1e-15) {
        return Err(Error::Parse(format!("grid step must be in (0, 1e-3], got {step}")));
    }
    let cells = (1.0 / step).round() as usize;
    let objective = |cand: &Distribution| -> f64 {
        match which {
            ExponentKind::E => {
                if cand.entropy() >= rate {
                    cand.kl_divergence(p)
                } else {
                    f64::INFINITY
                }
            }
            ExponentKind::F => (cand.entropy() - rate).max(0.0) + cand.kl_divergence(p),
        }
    };
    let mut best = f64::INFINITY;
    match p.q() {
        2 => {
            for i in 0..=cells {
                let a = i as f64 / cells as f64;
                let cand = Distribution::new(vec![a, 1.0 - a]).expect("on-simplex");
                let v = objective(&cand);
                if v < best {
                    best = v;
                }
            }
        }
        3 => {
            for i in 0..=cells {
                let a = i as f64 / cells as f64;
                for j in 0..=(cells - i) {
                    let b = j as f64 / cells as f64;
                    let c = (cells - i - j) as f64 / cells as f64;
                    let cand = Distribution::new(vec![a, b, c]).expect("on-simplex");
                    let v = objective(&cand);
                    if v < best {
                        best = v;
                    }
                }
            }
        }
        q => return Err(Error::GridUnsupported(q)),
    }
    Ok(best)
}

/// The two admissibility thresholds together with the entropies that define
/// the positivity window of the exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateThresholds {
    pub h_x: f64,
    pub h_k: f64,
    /// `H(X)` when `H(X) < H(K)`, otherwise `+inf`.
    pub r_star: f64,
    /// `H(X)` when `H(X) <= H(K)`, otherwise `+inf`.
    pub r_star2: f64,
}

pub fn rate_thresholds(p_x: &Distribution, p_k: &Distribution) -> RateThresholds {
    assert_eq!(p_x.q(), p_k.q(), "thresholds need a common alphabet");
    let h_x = p_x.entropy();
    let h_k = p_k.entropy();
    let r_star = if h_x < h_k { h_x } else { f64::INFINITY };
    let r_star2 = if h_x <= h_k { h_x } else { f64::INFINITY };
    RateThresholds {
        h_x,
        h_k,
        r_star,
        r_star2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(v: &[f64]) -> Distribution {
        Distribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn e_is_zero_when_p_is_feasible() {
        let p = dist(&[0.9, 0.1]);
        let r = exponent_e(0.3, &p).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.argmin.unwrap(), p);
    }

    #[test]
    fn e_at_full_rate_is_divergence_from_uniform() {
        let p = dist(&[0.9, 0.1]);
        let r = exponent_e(1.0, &p).unwrap();
        let expect = Distribution::uniform(2).kl_divergence(&p);
        assert!((r.value - expect).abs() < 1e-8, "{} vs {expect}", r.value);
        assert!((expect - 0.736965594166206).abs() < 1e-12);
    }

    #[test]
    fn e_above_log_q_is_infinite() {
        let p = dist(&[0.9, 0.1]);
        let r = exponent_e(1.5, &p).unwrap();
        assert!(r.value.is_infinite());
        assert!(r.argmin.is_none());
    }

    #[test]
    fn e_boundary_argmin_has_entropy_r() {
        let p = dist(&[0.9, 0.1]);
        for rate in [0.6, 0.8, 0.95] {
            let r = exponent_e(rate, &p).unwrap();
            let h = r.argmin.unwrap().entropy();
            assert!((h - rate).abs() < 1e-9, "H(argmin) = {h} at R = {rate}");
        }
    }

    #[test]
    fn e_respects_restricted_support() {
        // p lives on 2 of 3 symbols; entropy above log2(2) is unreachable
        let p = dist(&[0.7, 0.3, 0.0]);
        assert!(exponent_e(1.2, &p).unwrap().value.is_infinite());
        let at_edge = exponent_e(1.0, &p).unwrap();
        assert!(at_edge.value.is_finite());
    }

    #[test]
    fn f_is_zero_at_high_rate() {
        let p = dist(&[0.9, 0.1]);
        let r = exponent_f(0.6, &p).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn f_for_uniform_key_is_log_q_minus_r() {
        let p = Distribution::uniform(2);
        for rate in [0.0, 0.25, 0.4, 0.9] {
            let r = exponent_f(rate, &p).unwrap();
            assert!(
                (r.value - (1.0 - rate)).abs() < 1e-8,
                "F({rate}) = {}",
                r.value
            );
        }
        let p3 = Distribution::uniform(3);
        let r = exponent_f(0.4, &p3).unwrap();
        assert!((r.value - (3f64.log2() - 0.4)).abs() < 1e-8);
    }

    #[test]
    fn f_handles_tied_maxima() {
        // optimum sits at the family limit: uniform over the two maximizers
        let p = dist(&[0.4, 0.4, 0.2]);
        let rate = 0.5;
        let r = exponent_f(rate, &p).unwrap();
        let expect = -(0.4f64).log2() - rate; // E_P[-log p] - R on the cheap pair
        assert!((r.value - expect).abs() < 1e-8, "{} vs {expect}", r.value);
    }

    #[test]
    fn solver_matches_grid_oracle() {
        let p = dist(&[0.8, 0.2]);
        for rate in [0.3, 0.5, 0.8, 0.95] {
            let e = exponent_e(rate, &p).unwrap().value;
            let eg = grid_oracle(rate, &p, ExponentKind::E, 1e-4).unwrap();
            assert!((e - eg).abs() < 1e-3, "E {e} vs {eg} at R={rate}");
            let f = exponent_f(rate, &p).unwrap().value;
            let fg = grid_oracle(rate, &p, ExponentKind::F, 1e-4).unwrap();
            assert!((f - fg).abs() < 1e-3, "F {f} vs {fg} at R={rate}");
        }
    }

    #[test]
    fn grid_oracle_rejects_large_alphabets() {
        let p = Distribution::uniform(4);
        assert_eq!(
            grid_oracle(0.5, &p, ExponentKind::E, 1e-3)
                .unwrap_err()
                .name(),
            "GridUnsupported"
        );
    }

    #[test]
    fn negative_rate_is_rejected() {
        let p = dist(&[0.5, 0.5]);
        assert!(exponent_e(-0.1, &p).is_err());
        assert!(exponent_f(-0.1, &p).is_err());
    }

    #[test]
    fn thresholds_follow_their_definitions() {
        let skew = dist(&[0.9, 0.1]);
        let unif = Distribution::uniform(2);

        let t = rate_thresholds(&skew, &unif);
        assert!((t.r_star - 0.468995593589281).abs() < 1e-12);
        assert_eq!(t.r_star, t.r_star2);

        let t = rate_thresholds(&unif, &skew);
        assert!(t.r_star.is_infinite() && t.r_star2.is_infinite());

        // equal entropies: strict definition blows up, weak one does not
        let t = rate_thresholds(&skew, &skew);
        assert!(t.r_star.is_infinite());
        assert!((t.r_star2 - skew.entropy()).abs() < 1e-15);
        assert!(t.r_star2 <= t.r_star);
    }

    #[test]
    fn e_monotone_f_antitone_in_rate() {
        let p = dist(&[0.75, 0.25]);
        let mut prev_e = -1.0;
        let mut prev_f = f64::INFINITY;
        for i in 0..=100 {
            let rate = i as f64 / 100.0;
            let e = exponent_e(rate, &p).unwrap().value;
            let f = exponent_f(rate, &p).unwrap().value;
            assert!(e >= prev_e - 1e-9, "E not monotone at {rate}");
            assert!(f <= prev_f + 1e-9, "F not antitone at {rate}");
            prev_e = e;
            prev_f = f;
        }
    }

    #[test]
    fn zero_exactly_on_the_closed_boundary() {
        let p = dist(&[0.9, 0.1]);
        let h = p.entropy();
        assert_eq!(exponent_e(h, &p).unwrap().value, 0.0);
        assert_eq!(exponent_f(h, &p).unwrap().value, 0.0);
        assert!(exponent_e(h + 1e-6, &p).unwrap().value > 0.0);
        assert!(exponent_f(h - 1e-6, &p).unwrap().value > 0.0);
    }
}
