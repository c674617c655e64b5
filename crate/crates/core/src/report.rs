//! Self-describing assertion records shared by audits and reports.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub expected: Value,
    pub observed: Value,
    pub margin: f64,
    pub pass: bool,
}

impl Assertion {
    pub fn new(
        name: impl Into<String>,
        expected: impl Into<Value>,
        observed: impl Into<Value>,
        margin: f64,
        pass: bool,
    ) -> Assertion {
        Assertion {
            name: name.into(),
            expected: expected.into(),
            observed: observed.into(),
            margin,
            pass,
        }
    }

    /// `observed == expected` for exact (integer or boolean) quantities.
    pub fn exact<T: Into<Value> + PartialEq + Clone>(name: impl Into<String>, expected: T, observed: T) -> Assertion {
        let pass = expected == observed;
        Assertion::new(name, expected, observed, 0.0, pass)
    }

    /// `|observed - expected| < margin`.
    pub fn close(name: impl Into<String>, expected: f64, observed: f64, margin: f64) -> Assertion {
        let pass = (observed - expected).abs() < margin;
        Assertion::new(name, expected, observed, margin, pass)
    }

    /// `observed < bound - margin`.
    pub fn below(name: impl Into<String>, bound: f64, observed: f64, margin: f64) -> Assertion {
        let pass = observed < bound - margin;
        Assertion::new(name, format!("< {}", sig12(bound)), observed, margin, pass)
    }

    /// `observed > bound + margin`.
    pub fn above(name: impl Into<String>, bound: f64, observed: f64, margin: f64) -> Assertion {
        let pass = observed > bound + margin;
        Assertion::new(name, format!("> {}", sig12(bound)), observed, margin, pass)
    }

    /// `observed <= bound + margin`.
    pub fn at_most(name: impl Into<String>, bound: f64, observed: f64, margin: f64) -> Assertion {
        let pass = observed <= bound + margin;
        Assertion::new(name, format!("<= {}", sig12(bound)), observed, margin, pass)
    }
}

pub fn all_pass(assertions: &[Assertion]) -> bool {
    assertions.iter().all(|a| a.pass)
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Rounds every floating-point number inside a JSON tree to 12 significant
/// digits; integers are left alone.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            if let Some(x) = num.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(sig12(x)) {
                    *num = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(sig12(5.778457514497254), 5.77845751450);
        assert_eq!(sig12(4.0), 4.0);
        let mut v = serde_json::json!({"a": 1, "b": [0.1234567890123456, 2]});
        round_floats(&mut v);
        assert_eq!(v.to_string(), r#"{"a":1,"b":[0.123456789012,2]}"#);
    }

    #[test]
    fn constructors() {
        assert!(Assertion::close("x", 1.0, 1.0 + 1e-10, 1e-8).pass);
        assert!(!Assertion::below("x", 1.0, 1.0, 1e-9).pass);
        assert!(Assertion::at_most("x", 1.0, 1.0 + 1e-10, 1e-9).pass);
        assert!(Assertion::exact("n", 3u64, 3u64).pass);
    }
}
