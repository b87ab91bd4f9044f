//! Report and CSV formatting.

use apsflow::family::HermitianFamily;
use apsflow::spectral::track_eigenpaths;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// Times are written as decimal strings in the shortest round-trip form.
pub fn time_str(t: f64) -> String {
    format!("{t}")
}

pub fn times_str(ts: &[f64]) -> Vec<String> {
    ts.iter().map(|&t| time_str(t)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl Serialize, actual: impl Serialize, passed: bool) -> Check {
        Check {
            name: name.into(),
            expected: serde_json::to_value(expected).unwrap_or(Value::Null),
            actual: serde_json::to_value(actual).unwrap_or(Value::Null),
            passed,
        }
    }

    pub fn equal<T: Serialize + PartialEq>(name: impl Into<String>, expected: T, actual: T) -> Check {
        let passed = expected == actual;
        Check::new(name, &expected, &actual, passed)
    }

    pub fn at_most(name: impl Into<String>, bound: f64, actual: f64) -> Check {
        Check::new(name, format!("<= {bound:e}"), actual, actual <= bound)
    }

    pub fn within(name: impl Into<String>, range: [f64; 2], actual: f64) -> Check {
        Check::new(name, range, actual, actual >= range[0] && actual <= range[1])
    }
}

/// Report file contents: pretty JSON with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports are plain JSON values");
    text.push('\n');
    text
}

/// `t,lambda_1,...,lambda_n` with nearest-neighbour path matching.
pub fn eigenpath_csv(family: &HermitianFamily, samples: usize) -> apsflow::Result<String> {
    let samples = samples.max(2);
    let horizon = family.horizon();
    let times: Vec<f64> = (0..samples)
        .map(|k| if k + 1 == samples { horizon } else { horizon * k as f64 / (samples - 1) as f64 })
        .collect();
    let paths = track_eigenpaths(family, &times)?;
    let mut out = String::from("t");
    for j in 1..=family.dim() {
        out.push_str(&format!(",lambda_{j}"));
    }
    out.push('\n');
    for (t, row) in times.iter().zip(&paths) {
        out.push_str(&time_str(*t));
        for v in row {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    Ok(out)
}

/// `block,j,sigma` rows for named singular-value profiles.
pub fn singular_value_csv(profiles: &[(&str, &[f64])]) -> String {
    let mut out = String::from("block,j,sigma\n");
    for (name, values) in profiles {
        for (j, s) in values.iter().enumerate() {
            out.push_str(&format!("{name},{},{s:e}\n", j + 1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use apsflow::family::{constant, linear_diagonal};
    use apsflow::linalg;

    #[test]
    fn constant_eigenpaths_are_flat() {
        let f = constant(linalg::real_diagonal(&[-1.0, 2.0]), 1.0).unwrap();
        let csv = eigenpath_csv(&f, 3).unwrap();
        assert_eq!(csv, "t,lambda_1,lambda_2\n0,-1,2\n0.5,-1,2\n1,-1,2\n");
    }

    #[test]
    fn ramp_column_crosses_at_half() {
        let f = linear_diagonal(&[-1.0], &[2.0], 1.0).unwrap();
        let csv = eigenpath_csv(&f, 5).unwrap();
        assert!(csv.contains("\n0.5,0\n"), "{csv}");
    }

    #[test]
    fn times_render_as_short_decimals() {
        assert_eq!(time_str(0.1 + 0.2), "0.30000000000000004");
        assert_eq!(time_str(1.0), "1");
    }
}
