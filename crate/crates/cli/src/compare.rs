//! Cell-by-cell comparison of a result table against a golden table.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use num_traits::{Signed, Zero};
use optrr::{BigFloat, PrecisionConfig, Real};

use crate::document::{ResultDocument, Table};
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub enum Tolerance {
    Abs(String),
    Rel(String),
}

impl Tolerance {
    /// `abs:<x>` or `rel:<x>`; a bare number is relative.
    pub fn parse(s: &str) -> CliResult<Self> {
        let (kind, value) = s.split_once(':').unwrap_or(("rel", s));
        let value = value.trim().to_string();
        if BigFloat::parse_decimal(&value).is_none_or(|v| v.lt_zero()) {
            return Err(CliError::Config(format!("bad tolerance '{s}'")));
        }
        match kind.trim() {
            "abs" => Ok(Tolerance::Abs(value)),
            "rel" => Ok(Tolerance::Rel(value)),
            other => Err(CliError::Config(format!("unknown tolerance kind '{other}'"))),
        }
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tolerance::Abs(v) => write!(f, "abs:{v}"),
            Tolerance::Rel(v) => write!(f, "rel:{v}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CompareOptions {
    pub default: Tolerance,
    pub columns: HashMap<String, Tolerance>,
    /// Working digits for parsing both tables.
    pub digits: u32,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            default: Tolerance::Rel("1e-10".into()),
            columns: HashMap::new(),
            digits: 120,
        }
    }
}

impl CompareOptions {
    /// Adds a `COLUMN=TOL` override.
    pub fn push_override(&mut self, spec: &str) -> CliResult<()> {
        let (col, tol) = spec
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("tolerance override '{spec}' is not COLUMN=TOL")))?;
        self.columns.insert(col.trim().to_string(), Tolerance::parse(tol)?);
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellCheck {
    pub key: String,
    pub column: String,
    pub expected: String,
    pub observed: Option<String>,
    pub deviation: Option<String>,
    pub tolerance: Tolerance,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Comparison {
    pub cells: Vec<CellCheck>,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellCheck> {
        self.cells.iter().filter(|c| !c.pass)
    }

    pub fn report(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            out.push_str(&format!(
                "{} {}[{}] expected {} observed {} deviation {} ({})\n",
                if c.pass { "ok  " } else { "FAIL" },
                c.column,
                c.key,
                c.expected,
                c.observed.as_deref().unwrap_or("-"),
                c.deviation.as_deref().unwrap_or("-"),
                c.tolerance,
            ));
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} cells checked, {failed} failed\n", self.cells.len()));
        out
    }
}

/// Reads a result document (`.json`) or a CSV table.
pub fn load_table(path: &Path) -> CliResult<Table> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    if path.extension().is_some_and(|e| e == "json") {
        Ok(ResultDocument::from_json(&text)?.table())
    } else {
        Table::from_csv(&text)
    }
}

/// Checks every non-empty golden cell. Rows are matched on the golden
/// table's first column; text cells must match exactly.
pub fn compare_tables(result: &Table, golden: &Table, opts: &CompareOptions) -> CliResult<Comparison> {
    let precision = PrecisionConfig::new(opts.digits)?;
    let _guard = precision.activate::<BigFloat>();
    let key = golden
        .headers
        .first()
        .ok_or_else(|| CliError::Io("golden table has no columns".into()))?;
    let result_key = result
        .column(key)
        .ok_or_else(|| CliError::Mismatch(format!("result has no key column '{key}'")))?;
    let mut cmp = Comparison::default();
    for g in &golden.rows {
        let k = g.first().cloned().unwrap_or_default();
        let row = result.rows.iter().find(|r| r.get(result_key) == Some(&k));
        for (j, name) in golden.headers.iter().enumerate().skip(1) {
            let expected = g.get(j).cloned().unwrap_or_default();
            if expected.is_empty() {
                continue;
            }
            let tolerance = opts.columns.get(name).unwrap_or(&opts.default).clone();
            let observed = row
                .and_then(|r| result.column(name).and_then(|c| r.get(c)))
                .filter(|v| !v.is_empty())
                .cloned();
            let (pass, deviation) = match &observed {
                None => (false, None),
                Some(o) => check_cell(&expected, o, &tolerance),
            };
            cmp.cells.push(CellCheck {
                key: k.clone(),
                column: name.clone(),
                expected,
                observed,
                deviation,
                tolerance,
                pass,
            });
        }
    }
    Ok(cmp)
}

fn check_cell(expected: &str, observed: &str, tol: &Tolerance) -> (bool, Option<String>) {
    let (Some(e), Some(o)) = (BigFloat::parse_decimal(expected), BigFloat::parse_decimal(observed)) else {
        return (expected == observed, None);
    };
    let diff = (o - &e).abs();
    let (dev, bound) = match tol {
        Tolerance::Abs(t) => (diff, t),
        Tolerance::Rel(t) => {
            let dev = if e.is_zero() { diff } else { diff / e.abs() };
            (dev, t)
        }
    };
    let bound = BigFloat::parse_decimal(bound).expect("tolerance validated on parse");
    (dev <= bound, Some(dev.to_decimal(3)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(h: &[&str], rows: &[&[&str]]) -> Table {
        Table {
            headers: h.iter().map(|s| s.to_string()).collect(),
            rows: rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect(),
        }
    }

    #[test]
    fn per_column_tolerances() {
        let golden = table(&["N", "E0", "gamma_opt"], &[&["4", "1.00000000001", "3.1"], &["8", "1", ""]]);
        let result = table(&["N", "gamma_opt", "E0"], &[&["4", "3.14", "1.0"], &["8", "3.2", "1.0"]]);
        let mut opts = CompareOptions::default();
        let c = compare_tables(&result, &golden, &opts).unwrap();
        assert!(!c.passed());
        opts.push_override("gamma_opt=abs:0.05").unwrap();
        let c = compare_tables(&result, &golden, &opts).unwrap();
        assert!(c.passed(), "{}", c.report());
        assert_eq!(c.cells.len(), 3);
    }

    #[test]
    fn missing_rows_and_digits_beyond_f64() {
        let golden = table(&["N", "E0"], &[&["4", "1.0000000000000000000000000001"], &["9", "2"]]);
        let result = table(&["N", "E0"], &[&["4", "1.0000000000000000000000000002"]]);
        let mut opts = CompareOptions::default();
        opts.push_override("E0=rel:1e-29").unwrap();
        let c = compare_tables(&result, &golden, &opts).unwrap();
        assert_eq!(c.failures().count(), 2);
        opts.push_override("E0=rel:2e-28").unwrap();
        let c = compare_tables(&result, &golden, &opts).unwrap();
        assert_eq!(c.failures().map(|f| f.key.as_str()).collect::<Vec<_>>(), ["9"]);
    }

    #[test]
    fn tolerance_syntax() {
        assert_eq!(Tolerance::parse("abs:1e-3").unwrap(), Tolerance::Abs("1e-3".into()));
        assert_eq!(Tolerance::parse("1e-3").unwrap(), Tolerance::Rel("1e-3".into()));
        assert!(Tolerance::parse("ulp:3").is_err());
        assert!(Tolerance::parse("rel:-1").is_err());
    }
}
