//! Structured pass/fail records produced by the verification harnesses.

use serde_json::{json, Map, Value};

use crate::rational::{format_rational, Rational};

/// One compared index: both routes' values and whether they agree.
#[derive(Debug, Clone)]
pub struct IndexCheck {
    pub index: u64,
    pub lhs: Rational,
    pub rhs: Rational,
    pub pass: bool,
}

impl IndexCheck {
    /// Exact comparison; passes iff the two sides are equal.
    pub fn exact(index: u64, lhs: Rational, rhs: Rational) -> Self {
        let pass = lhs == rhs;
        IndexCheck { index, lhs, rhs, pass }
    }

    /// Bound comparison; passes iff lhs < rhs.
    pub fn bounded(index: u64, lhs: Rational, rhs: Rational) -> Self {
        let pass = lhs < rhs;
        IndexCheck { index, lhs, rhs, pass }
    }
}

/// One row of the two-route coefficient audit.
#[derive(Debug, Clone)]
pub struct CoefficientRow {
    pub l: u32,
    pub printed: Rational,
    pub derived: Rational,
}

impl CoefficientRow {
    pub fn agree(&self) -> bool {
        self.printed == self.derived
    }
}

/// Per-index results plus the coefficient audit for one verification run.
///
/// `overall` is the conjunction of the per-index passes; disagreement
/// between the two coefficient routes is recorded but does not fail the
/// report.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    check: String,
    params: Vec<(String, String)>,
    per_index: Vec<IndexCheck>,
    coefficient_table: Vec<CoefficientRow>,
    overall: bool,
}

impl VerificationReport {
    pub fn new(
        check: impl Into<String>,
        params: Vec<(String, String)>,
        per_index: Vec<IndexCheck>,
        coefficient_table: Vec<CoefficientRow>,
    ) -> Self {
        let overall = per_index.iter().all(|c| c.pass);
        VerificationReport {
            check: check.into(),
            params,
            per_index,
            coefficient_table,
            overall,
        }
    }

    pub fn check(&self) -> &str {
        &self.check
    }

    pub fn params(&self) -> &[(String, String)] {
        &self.params
    }

    pub fn per_index(&self) -> &[IndexCheck] {
        &self.per_index
    }

    pub fn coefficient_table(&self) -> &[CoefficientRow] {
        &self.coefficient_table
    }

    pub fn passed(&self) -> bool {
        self.overall
    }

    pub fn failures(&self) -> usize {
        self.per_index.iter().filter(|c| !c.pass).count()
    }

    /// JSON form:
    /// `{"check", "params", "per_index": [{"n","lhs","rhs","pass"}],
    ///   "coefficient_table": [{"l","printed","derived","agree"}], "pass"}`.
    pub fn to_json(&self) -> Value {
        let mut params = Map::new();
        for (key, value) in &self.params {
            params.insert(key.clone(), Value::String(value.clone()));
        }
        let per_index: Vec<Value> = self
            .per_index
            .iter()
            .map(|c| {
                json!({
                    "n": c.index,
                    "lhs": format_rational(&c.lhs),
                    "rhs": format_rational(&c.rhs),
                    "pass": c.pass,
                })
            })
            .collect();
        let coefficient_table: Vec<Value> = self
            .coefficient_table
            .iter()
            .map(|row| {
                json!({
                    "l": row.l,
                    "printed": format_rational(&row.printed),
                    "derived": format_rational(&row.derived),
                    "agree": row.agree(),
                })
            })
            .collect();
        json!({
            "check": self.check,
            "params": params,
            "per_index": per_index,
            "coefficient_table": coefficient_table,
            "pass": self.overall,
        })
    }
}
