//! Run reports and their JSON / CSV renderings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use orbitzeta_core::arith::Val;
use orbitzeta_core::liealg::StructureReport;
use orbitzeta_core::zeta::ZetaPolynomial;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecSummary {
    pub p: i64,
    pub rank: usize,
    /// `"inf"` for abelian lattices.
    pub uniformity: String,
    pub perfect: bool,
    pub m_l: Option<u32>,
}

impl SpecSummary {
    pub fn new(p: i64, rank: usize, report: &StructureReport) -> Self {
        Self {
            p,
            rank,
            uniformity: report.uniformity.to_string(),
            perfect: report.perfect,
            m_l: report.m_l,
        }
    }
}

/// Rows for the CSV rendering.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub algebra: String,
    /// Options that affect the result; threads and cache settings are left out.
    pub options: BTreeMap<String, Value>,
    pub summary: SpecSummary,
    pub results: Value,
    /// Outcome of the commands that verify something.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
    #[serde(skip)]
    pub table: Table,
}

pub fn write_report(report: &RunReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            // serde_json's map is ordered by key, which makes the output canonical.
            let value = serde_json::to_value(report).expect("reports serialize");
            let mut out = serde_json::to_vec_pretty(&value).expect("values serialize");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&report.table.header).expect("in-memory write");
            for row in &report.table.rows {
                w.write_record(row).expect("in-memory write");
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

/// A JSON number when it fits in 64 bits, a decimal string otherwise.
pub fn json_int(x: &BigInt) -> Value {
    if let Some(v) = x.to_i64() {
        Value::from(v)
    } else if let Some(v) = x.to_u64() {
        Value::from(v)
    } else {
        Value::String(x.to_string())
    }
}

/// Always `"num/den"`, also for integers.
pub fn rat_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn poly_json(poly: &ZetaPolynomial) -> Value {
    Value::Array(poly.coeffs().iter().map(|c| Value::String(rat_string(c))).collect())
}

pub fn degree_string(p: i64, i: u32) -> String {
    format!("{p}^{i}")
}

pub fn val_json(v: Val) -> Value {
    match v {
        Val::Finite(x) => Value::from(x),
        Val::Infinite => Value::String("inf".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> RunReport {
        let mut table = Table::new(&["i", "lambda_i", "status"]);
        table.push(vec!["0".into(), "27".into(), "exact".into()]);
        RunReport {
            command: "lambda".into(),
            algebra: "x".into(),
            options: BTreeMap::from([("imax".to_string(), Value::from(0))]),
            summary: SpecSummary {
                p: 3,
                rank: 3,
                uniformity: "1".into(),
                perfect: true,
                m_l: Some(1),
            },
            results: serde_json::json!({"zeta": ["27/1"], "entries": []}),
            passed: None,
            table,
        }
    }

    #[test]
    fn json_keys_are_sorted() {
        let text = String::from_utf8(write_report(&report(), Format::Json)).unwrap();
        let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("algebra") < pos("command"));
        assert!(pos("command") < pos("options"));
        assert!(pos("entries") < pos("zeta"));
        assert!(!text.contains("passed"));
    }

    #[test]
    fn csv_rows() {
        let text = String::from_utf8(write_report(&report(), Format::Csv)).unwrap();
        assert_eq!(text, "i,lambda_i,status\n0,27,exact\n");
    }

    #[test]
    fn big_integers_become_strings() {
        assert_eq!(json_int(&BigInt::from(5)), Value::from(5));
        let big = BigInt::from(u64::MAX) * 10;
        assert_eq!(json_int(&big), Value::String(big.to_string()));
        assert_eq!(rat_string(&BigRational::from_integer(7.into())), "7/1");
    }
}
