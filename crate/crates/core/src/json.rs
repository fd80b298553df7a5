//! Canonical JSON for reports: sorted keys, floats rounded to 12 significant
//! digits, non-finite values as the strings `"inf"`, `"-inf"` and `"nan"`.

use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Types that render as a flat report object.
pub trait ToJson {
    fn to_json(&self) -> Value;
}

/// Rounds to 12 significant digits; the shortest representation of the
/// rounded value is what gets printed.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn float(x: f64) -> Value {
    if x.is_nan() {
        Value::from("nan")
    } else if x.is_infinite() {
        Value::from(if x > 0.0 { "inf" } else { "-inf" })
    } else {
        // -0.0 prints as "-0.0"; normalize
        Value::from(round12(x) + 0.0)
    }
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

pub fn opt_float(x: Option<f64>) -> Value {
    x.map_or(Value::Null, float)
}

/// Pretty-printed report with a `schema_version` field, newline terminated.
pub fn render(report: &impl ToJson) -> String {
    let mut value = report.to_json();
    if let Value::Object(map) = &mut value {
        map.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    } else {
        let mut map = Map::new();
        map.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
        map.insert("value".into(), value);
        value = Value::Object(map);
    }
    let mut s = serde_json::to_string_pretty(&value).expect("values are serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    struct Sample;
    impl ToJson for Sample {
        fn to_json(&self) -> Value {
            json!({"zeta": float(1.0 / 3.0), "alpha": float(f64::INFINITY), "mid": float(-0.0)})
        }
    }

    #[test]
    fn rounding_to_twelve_digits() {
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(2.0), 2.0);
        assert_eq!(round12(123456789.1234), 123456789.123);
        assert_eq!(round12(1e-20 / 3.0), 3.33333333333e-21);
    }

    #[test]
    fn rendering_is_canonical() {
        let s = render(&Sample);
        assert_eq!(
            s,
            "{\n  \"alpha\": \"inf\",\n  \"mid\": 0.0,\n  \"schema_version\": 1,\n  \"zeta\": 0.333333333333\n}\n"
        );
        assert_eq!(s, render(&Sample));
    }
}
