//! Deterministic numeric formatting for reports: every emitted number is
//! fixed at 12 significant digits so repeated runs diff byte-identically.

use serde_json::Value;

/// 12-significant-digit text form; infinities render as `inf`/`-inf`.
pub fn fmt12(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{x:.11e}")
}

/// Rounds to 12 significant digits, for JSON payloads.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    // round via the decimal text form to keep ties consistent with fmt12
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// JSON number at 12 significant digits; non-finite values become strings
/// so they survive serialization intact.
pub fn json_num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(round12(x))
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(fmt12(x)))
    } else {
        Value::String(fmt12(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_are_deterministic() {
        assert_eq!(fmt12(0.468995593589281), "4.68995593589e-1");
        assert_eq!(fmt12(f64::INFINITY), "inf");
        assert_eq!(fmt12(f64::NEG_INFINITY), "-inf");
        assert_eq!(round12(1.0), 1.0);
        let x = 0.123456789012345678;
        assert_eq!(round12(x), 0.123456789012);
    }

    #[test]
    fn json_numbers_survive_infinity() {
        assert_eq!(json_num(f64::INFINITY), Value::String("inf".into()));
        assert!(json_num(1.5).is_number());
    }
}
