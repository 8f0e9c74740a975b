//! Tabular output shared by all subcommands, rendered as TSV or JSON.

use freechaos::{BigRational, Complex64};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Rational(BigRational),
    Float(f64),
    Text(String),
    Flag(bool),
    Empty,
}

impl Cell {
    fn tsv(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Rational(r) if r.denom().is_one() => r.numer().to_string(),
            Cell::Rational(r) => r.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Flag(true) => "ok".into(),
            Cell::Flag(false) => "FAIL".into(),
            Cell::Empty => "-".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(n) => match n.to_i64() {
                Some(v) => json!(v),
                None => json!(n.to_string()),
            },
            Cell::Rational(r) if r.denom().is_one() => Cell::Int(r.numer().clone()).json(),
            Cell::Rational(r) => json!(r.to_string()),
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(x) => json!(x.to_string()),
            Cell::Text(s) => json!(s),
            Cell::Flag(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v.into())
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Numeric values of either mode; complex values are reported by real part.
pub trait ToCell {
    fn cell(&self) -> Cell;
    fn as_f64(&self) -> f64;
}

impl ToCell for BigRational {
    fn cell(&self) -> Cell {
        Cell::Rational(self.clone())
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl ToCell for Complex64 {
    fn cell(&self) -> Cell {
        Cell::Float(self.re)
    }

    fn as_f64(&self) -> f64 {
        self.re
    }
}

impl ToCell for f64 {
    fn cell(&self) -> Cell {
        Cell::Float(*self)
    }

    fn as_f64(&self) -> f64 {
        *self
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            tables: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// One `# name` header per table, a header row, then data rows.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (k, table) in self.tables.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            out.push_str(&format!("# {}\n{}\n", table.name, table.columns.join("\t")));
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::tsv).collect();
                out.push_str(&cells.join("\t"));
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let tables: Vec<Value> = self
            .tables
            .iter()
            .map(|t| {
                let rows: Vec<Value> = t
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                    .collect();
                json!({ "name": t.name, "columns": t.columns, "rows": rows })
            })
            .collect();
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect();
        let doc = json!({
            "command": self.command,
            "passed": self.passed(),
            "tables": tables,
            "checks": checks,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }

    /// Tab-separated `check<TAB>detail` lines for every failed check.
    pub fn failure_list(&self) -> String {
        self.failures()
            .map(|c| format!("FAIL\t{}\t{}\n", c.name, c.detail))
            .collect()
    }
}
