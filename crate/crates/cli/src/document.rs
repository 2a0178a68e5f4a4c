//! Serializable result documents and their tabular views.

use serde::{Deserialize, Serialize};

use crate::config::{Command, RunConfig};
use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = "optrr-result/1";

/// Fixed statement of the Hamiltonian and basis conventions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub one_dim: String,
    pub radial: String,
    pub harmonium: String,
    pub double_well: String,
    pub moments: String,
    pub errors: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            one_dim: "H = -(s/2) d²/dx² + Σ c_k x^k in the oscillator basis of frequency Ω".into(),
            radial: "H = -(s/2) (d²/dr² - l(l+1)/r²) + Σ c_k r^k in the pseudoharmonic basis (Ω, γ); oscillator basis when γ = l + 3/2"
                .into(),
            harmonium: "relative motion: kinetic scale 2, potential ω² r² + λ/r".into(),
            double_well: "H = -(g/2) d²/dx² + (x² - 1/4)²/(2g)".into(),
            moments: "expectation values of x^k or r^k in the normalised eigenvector".into(),
            errors: "relative error |E_N - E_ref| / |E_ref|; absolute error when the reference vanishes".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionMeta {
    pub digits: u32,
    pub tolerance_exponent: i32,
}

/// One basis size of a solve or sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub size: usize,
    pub strategy: String,
    pub omega: String,
    pub sqrt_omega: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    pub trace: String,
    pub boundary_pinned: bool,
    pub states: Vec<usize>,
    pub energies: Vec<Option<String>>,
    pub untrusted: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub errors: Option<Vec<Option<String>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub powers: Vec<String>,
    /// `moments[i][j]` for `states[i]` and `powers[j]`; empty rows for
    /// states beyond the basis.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub moments: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment_errors: Option<Vec<Vec<String>>>,
    /// Full spectrum, written by `solve` only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceMeta {
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    pub energies: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moments: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleLevel {
    pub state_index: usize,
    pub level: usize,
    pub energy: String,
    pub omega_sq: String,
    pub lambda: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub termination: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub moments: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Oracle {
    pub family: String,
    pub p: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub powers: Vec<String>,
    pub levels: Vec<OracleLevel>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplittingRecord {
    pub g: String,
    pub size: usize,
    pub omega_even: String,
    pub omega_odd: String,
    pub even_ground: String,
    pub odd_ground: String,
    pub delta: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema: String,
    pub command: Command,
    pub config: RunConfig,
    pub conventions: Conventions,
    pub precision: PrecisionMeta,
    #[serde(default)]
    pub records: Vec<Record>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceMeta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Oracle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<SplittingRecord>,
    pub timing: Timing,
}

impl ResultDocument {
    pub fn to_json(&self) -> CliResult<String> {
        serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let doc: ResultDocument = serde_json::from_str(text).map_err(|e| CliError::Io(format!("bad result document: {e}")))?;
        if doc.schema != SCHEMA {
            return Err(CliError::Io(format!("unsupported schema '{}'", doc.schema)));
        }
        Ok(doc)
    }

    fn radial(&self) -> bool {
        self.records.iter().any(|r| r.gamma.is_some())
    }

    fn moment_prefix(&self) -> &'static str {
        let one_dim = match (&self.config.potential, &self.config.qes) {
            (Some(p), _) => p.kind == crate::config::KindConfig::OneDim,
            (None, Some(q)) => matches!(q, crate::config::QesConfig::Sextic1d { .. }),
            (None, None) => true,
        };
        if one_dim {
            "x"
        } else {
            "r"
        }
    }

    /// Column-oriented view used for CSV output and comparison.
    pub fn table(&self) -> Table {
        match self.command {
            Command::Solve | Command::Sweep => self.records_table(),
            Command::Qes => self.oracle_table(),
            Command::Splitting => self.splitting_table(),
        }
    }

    fn records_table(&self) -> Table {
        let states = self.records.first().map(|r| r.states.clone()).unwrap_or_default();
        let powers = self.records.first().map(|r| r.powers.clone()).unwrap_or_default();
        let with_errors = self.records.iter().any(|r| r.errors.is_some());
        let suffix = |s: usize| if states.len() > 1 { format!("_{s}") } else { String::new() };
        let q = self.moment_prefix();
        let mut headers = vec!["N".to_string(), "sqrt_omega_opt".into(), "omega_opt".into()];
        if self.radial() {
            headers.push("gamma_opt".into());
        }
        for &s in &states {
            headers.push(format!("E{s}"));
            for k in &powers {
                headers.push(format!("{q}{k}{}", suffix(s)));
            }
            if with_errors {
                headers.push(format!("rel_err{}", suffix(s)));
            }
        }
        let rows = self
            .records
            .iter()
            .map(|r| {
                let mut row = vec![r.size.to_string(), r.sqrt_omega.clone(), r.omega.clone()];
                if self.radial() {
                    row.push(r.gamma.clone().unwrap_or_default());
                }
                for (i, _) in states.iter().enumerate() {
                    row.push(r.energies.get(i).cloned().flatten().unwrap_or_default());
                    for j in 0..powers.len() {
                        row.push(r.moments.get(i).and_then(|m| m.get(j)).cloned().unwrap_or_default());
                    }
                    if with_errors {
                        let e = r.errors.as_ref().and_then(|e| e.get(i).cloned().flatten());
                        row.push(e.unwrap_or_default());
                    }
                }
                row
            })
            .collect();
        Table { headers, rows }
    }

    fn oracle_table(&self) -> Table {
        let Some(o) = &self.oracle else {
            return Table::default();
        };
        let q = self.moment_prefix();
        let mut headers: Vec<String> = ["level", "state_index", "E", "omega_sq", "lambda"].map(String::from).into();
        headers.extend(o.powers.iter().map(|k| format!("{q}{k}")));
        headers.push("residual".into());
        let rows = o
            .levels
            .iter()
            .map(|l| {
                let mut row = vec![
                    l.level.to_string(),
                    l.state_index.to_string(),
                    l.energy.clone(),
                    l.omega_sq.clone(),
                    l.lambda.clone(),
                ];
                row.extend((0..o.powers.len()).map(|j| l.moments.get(j).cloned().unwrap_or_default()));
                row.push(l.residual.clone().unwrap_or_default());
                row
            })
            .collect();
        Table { headers, rows }
    }

    fn splitting_table(&self) -> Table {
        let headers = ["g", "N", "omega_even", "omega_odd", "E_even", "E_odd", "delta_E"].map(String::from).into();
        let rows = self
            .splitting
            .iter()
            .map(|s| {
                vec![
                    s.g.clone(),
                    s.size.to_string(),
                    s.omega_even.clone(),
                    s.omega_odd.clone(),
                    s.even_ground.clone(),
                    s.odd_ground.clone(),
                    s.delta.clone(),
                ]
            })
            .collect();
        Table { headers, rows }
    }

    /// `N log10(δE)` pairs per state, one block per state under a
    /// `# state n` header. Sizes with zero or missing error are skipped.
    pub fn plot_data(&self) -> CliResult<String> {
        let states = self.records.first().map(|r| r.states.clone()).unwrap_or_default();
        if self.records.iter().all(|r| r.errors.is_none()) {
            return Err(CliError::Numeric("no reference: nothing to plot".into()));
        }
        let mut out = String::new();
        for (i, s) in states.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("# state {s}\n"));
            for r in &self.records {
                let Some(err) = r.errors.as_ref().and_then(|e| e.get(i).cloned().flatten()) else {
                    continue;
                };
                if let Some(l) = log10_decimal(&err) {
                    out.push_str(&format!("{} {:.6}\n", r.size, l));
                }
            }
        }
        Ok(out)
    }
}

/// `log10` of a non-negative decimal string, exact in the exponent even far
/// outside the `f64` range.
pub fn log10_decimal(s: &str) -> Option<f64> {
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let m: f64 = mantissa.parse().ok()?;
    if !(m > 0.0) || !m.is_finite() {
        return None;
    }
    Some(m.log10() + exp as f64)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.headers).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn from_csv(text: &str) -> CliResult<Self> {
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        let headers = r.headers().map_err(io)?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|x| x.iter().map(String::from).collect()))
            .collect::<Result<_, _>>()
            .map_err(io)?;
        Ok(Table { headers, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }
}
