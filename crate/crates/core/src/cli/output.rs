//! Artifact writers: rounded numbers, CSV tables and the JSON document.

use serde_json::{json, Map, Value};

use super::config::RunConfig;

/// Rounds to `precision` significant digits and prints the shortest decimal
/// that reads back to the rounded value. Non-finite values print as `inf`,
/// `-inf` or `nan`.
pub fn format_number(v: f64, precision: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(v, precision);
    let a = r.abs();
    if r == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn round_sig(v: f64, precision: usize) -> f64 {
    let s = format!("{:.*e}", precision.saturating_sub(1), v);
    let r: f64 = s.parse().expect("formatted float parses");
    // Avoid "-0" in artifacts.
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// JSON number at the configured precision, or a string for non-finite
/// values.
pub fn number(v: f64, precision: usize) -> Value {
    if v.is_finite() {
        json!(round_sig(v, precision))
    } else {
        Value::String(format_number(v, precision))
    }
}

/// One named comparison against a reference.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// `|value - reference| <= tolerance * |reference|`, or absolute when the
    /// reference is zero.
    pub fn relative(name: &str, value: f64, reference: f64, tolerance: f64) -> Self {
        let scale = if reference == 0.0 { 1.0 } else { reference.abs() };
        Self {
            name: name.into(),
            value,
            reference,
            tolerance,
            pass: (value - reference).abs() <= tolerance * scale,
        }
    }

    /// `value <= reference`; `tolerance` is recorded as given.
    pub fn at_most(name: &str, value: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            reference,
            tolerance,
            pass: value <= reference + tolerance,
        }
    }

    /// A boolean condition, stored as 1/0 against reference 1.
    pub fn flag(name: &str, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            reference: 1.0,
            tolerance: 0.0,
            pass: ok,
        }
    }
}

/// Header plus rows of numbers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Everything a subcommand produces.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
    pub table: Table,
    /// Physical units of the table columns, for the comment row.
    pub units: Vec<String>,
}

impl Report {
    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

pub fn render_csv(report: &Report, config: &RunConfig) -> String {
    let p = config.output.precision;
    let mut out = String::new();
    out.push_str(&report.table.columns.join(","));
    out.push('\n');
    out.push_str(&format!(
        "# units: {}; config_sha256={}; tol.quadrature={}; tol.series={}\n",
        report.units.join(","),
        config.hash(),
        format_number(config.tol.quadrature, 17),
        format_number(config.tol.series, 17),
    ));
    for row in &report.table.rows {
        let cells: Vec<String> = row.iter().map(|v| format_number(*v, p)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn manifest(config: &RunConfig) -> Value {
    let entries: Map<String, Value> = config
        .entries()
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    json!({
        "config": entries,
        "config_text": config.to_text(),
        "config_sha256": config.hash(),
        "version": env!("CARGO_PKG_VERSION"),
    })
}

pub fn render_json(report: &Report, config: &RunConfig) -> String {
    let p = config.output.precision;
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "value": number(c.value, p),
                "reference": number(c.reference, p),
                "tolerance": number(c.tolerance, p),
                "pass": c.pass,
            })
        })
        .collect();
    let doc = json!({
        "manifest": manifest(config),
        "results": Value::Object(report.results.clone()),
        "checks": checks,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(format_number(1.0 / 6.0, 7), "0.1666667");
        assert_eq!(format_number(1.0 / 3.0, 17), format!("{}", 1.0 / 3.0));
        assert_eq!(format_number(f64::INFINITY, 6), "inf");
        assert_eq!(format_number(-0.0, 6), "0");
        assert_eq!(format_number(123456.0, 6), "123456");
        assert_eq!(format_number(4.0660654831e-16, 10), "4.066065483e-16");
        assert_eq!(format_number(2.5e20, 8), "2.5e20");
    }

    #[test]
    fn non_finite_json() {
        assert_eq!(number(f64::INFINITY, 8), Value::String("inf".into()));
        assert_eq!(number(0.5, 8), json!(0.5));
    }

    #[test]
    fn checks() {
        assert!(Check::relative("a", 1.0 + 1e-7, 1.0, 1e-6).pass);
        assert!(!Check::relative("a", 1.1, 1.0, 1e-6).pass);
        assert!(Check::relative("zero", 1e-9, 0.0, 1e-6).pass);
        assert!(Check::at_most("b", -1.0, -0.95, 0.0).pass);
        assert!(!Check::flag("c", false).pass);
    }
}
