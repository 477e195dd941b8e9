use std::io::Write;
use std::path::Path;

use bcov_core::exact::TruncatedSeries;
use bcov_core::ring::RingElement;
use bcov_core::Error;
use serde_json::{json, Map, Value};

/// One asserted identity. `first_failure` is the exponent of the first
/// differing coefficient when the check is series-valued.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub passed: bool,
    pub first_failure: Option<i64>,
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>, anchor: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            passed: true,
            first_failure: None,
            detail: None,
        }
    }

    pub fn fail(name: impl Into<String>, anchor: impl Into<String>, at: Option<i64>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            passed: false,
            first_failure: at,
            detail: Some(detail.into()),
        }
    }

    /// Compares two series through `order`.
    pub fn series(name: &str, anchor: &str, lhs: &TruncatedSeries, rhs: &TruncatedSeries, order: i64) -> Self {
        if lhs.order() < order || rhs.order() < order {
            return Check::fail(
                name,
                anchor,
                None,
                format!("series known only through order {}", lhs.order().min(rhs.order())),
            );
        }
        match lhs.truncate(order).first_difference(&rhs.truncate(order)) {
            None => Check::pass(name, anchor),
            Some(k) => Check::fail(name, anchor, Some(k), format!("{} vs {}", lhs.coeff(k), rhs.coeff(k))),
        }
    }

    /// Maps a core result onto a check: `Mismatch` and `Consistency` are
    /// failed identities, anything else is passed through as an error.
    pub fn from_result(name: &str, anchor: &str, r: bcov_core::Result<()>) -> Result<Self, Error> {
        match r {
            Ok(()) => Ok(Check::pass(name, anchor)),
            Err(Error::Mismatch { exponent, .. }) => Ok(Check::fail(name, anchor, Some(exponent), "identity fails")),
            Err(e @ Error::Consistency { .. }) => Ok(Check::fail(name, anchor, None, e.to_string())),
            Err(e) => Err(e),
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "anchor": self.anchor,
            "passed": self.passed,
            "first_failure": self.first_failure,
            "detail": self.detail,
        })
    }
}

#[derive(Debug)]
pub struct RunReport {
    pub command: String,
    pub model: String,
    pub orders: Map<String, Value>,
    pub checks: Vec<Check>,
    pub payload: Map<String, Value>,
    pub warnings: Vec<String>,
    /// Named series for the CSV table, in insertion order.
    pub tables: Vec<(String, TruncatedSeries)>,
}

impl RunReport {
    pub fn new(command: &str, model: &str) -> Self {
        RunReport {
            command: command.into(),
            model: model.into(),
            orders: Map::new(),
            checks: Vec::new(),
            payload: Map::new(),
            warnings: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn order(&mut self, name: &str, n: i64) {
        self.orders.insert(name.into(), json!(n));
    }

    pub fn series(&mut self, name: &str, s: &TruncatedSeries) {
        self.payload.insert(name.into(), series_json(s));
        self.tables.push((name.into(), s.clone()));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "model": self.model,
            "orders": self.orders,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "payload": self.payload,
            "warnings": self.warnings,
            "passed": self.passed(),
        })
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
        writeln!(out)
    }

    /// One row per exponent, one column per series; cells beyond a
    /// series' order are left empty.
    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec!["exponent".to_string()];
        header.extend(self.tables.iter().map(|(n, _)| n.clone()));
        w.write_record(&header)?;
        let lo = self.tables.iter().map(|(_, s)| s.start()).min().unwrap_or(0);
        let hi = self.tables.iter().map(|(_, s)| s.order()).max().unwrap_or(-1);
        for k in lo..=hi {
            let mut row = vec![k.to_string()];
            for (_, s) in &self.tables {
                row.push(if k <= s.order() { s.coeff(k).to_string() } else { String::new() });
            }
            w.write_record(&row)?;
        }
        w.flush()
    }
}

/// `{"var", "start", "order", "coeffs"}` with coefficients as `"p/q"`
/// strings from `start` through `order`.
pub fn series_json(s: &TruncatedSeries) -> Value {
    let coeffs: Vec<String> = (s.start()..=s.order()).map(|k| s.coeff(k).to_string()).collect();
    json!({
        "var": s.var().symbol().to_string(),
        "start": s.start(),
        "order": s.order(),
        "coeffs": coeffs,
    })
}

/// Monomial to coefficient map; each monomial of a homogeneous element
/// determines its coefficient type, so the monomial text is a unique key.
pub fn element_json(e: &RingElement) -> Value {
    let mut m = Map::new();
    for (key, c) in e.terms() {
        m.insert(key.mono.to_string(), json!(c.to_string()));
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bcov_core::exact::{rat, Var};

    #[test]
    fn series_coefficients_are_fraction_strings() {
        let s = TruncatedSeries::from_coeffs(Var::Q, 0, vec![rat(1, 1), rat(-3, 4)], 2);
        let v = series_json(&s);
        assert_eq!(v["coeffs"], json!(["1", "-3/4", "0"]));
        assert_eq!(v["var"], json!("q"));
    }

    #[test]
    fn keys_come_out_sorted() {
        let mut r = RunReport::new("pf", "m");
        r.payload.insert("zeta".into(), json!(1));
        r.payload.insert("alpha".into(), json!(2));
        let text = serde_json::to_string(&r.to_json()).unwrap();
        assert!(text.find("alpha").unwrap() < text.find("zeta").unwrap());
        assert!(text.find("\"checks\"").unwrap() < text.find("\"command\"").unwrap());
    }
}
