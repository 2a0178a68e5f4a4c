//! Declarative run configuration.

use std::path::Path;

use num_traits::Zero;
use optrr::basis::Parity;
use optrr::trace::{strategy_presets, ProblemClass};
use optrr::{BigFloat, PotentialKind, PotentialMp, Power, PrecisionConfig, QesFamilyMp, Real, StrategyMp, Term};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, CliResult};

pub const DEFAULT_DIGITS: u32 = 30;

/// A number written as a decimal string (JSON numbers are accepted too).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num(pub String);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(serde_json::Number),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Text(s) => Num(s.trim().to_string()),
            Raw::Number(n) => Num(n.to_string()),
        })
    }
}

impl Num {
    pub fn new(s: impl Into<String>) -> Self {
        Num(s.into())
    }

    /// Parses at the current working precision; `a/b` fractions are allowed.
    pub fn value(&self, what: &str) -> CliResult<BigFloat> {
        let s = self.0.as_str();
        let parsed = match s.split_once('/') {
            Some((a, b)) => match (BigFloat::parse_decimal(a.trim()), BigFloat::parse_decimal(b.trim())) {
                (Some(a), Some(b)) if !b.is_zero() => Some(a / b),
                _ => None,
            },
            None => BigFloat::parse_decimal(s),
        };
        parsed
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Config(format!("{what}: '{s}' is not a number")))
    }

    pub fn power(&self, what: &str) -> CliResult<Power> {
        Power::parse(&self.0).map_err(|e| CliError::Config(format!("{what}: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    Sweep,
    Qes,
    Splitting,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Qes => "qes",
            Command::Splitting => "splitting",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindConfig {
    OneDim,
    Radial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityConfig {
    Even,
    Odd,
    Full,
}

impl From<ParityConfig> for Parity {
    fn from(p: ParityConfig) -> Self {
        match p {
            ParityConfig::Even => Parity::Even,
            ParityConfig::Odd => Parity::Odd,
            ParityConfig::Full => Parity::Full,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub power: Num,
    pub coeff: Num,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub kind: KindConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<ParityConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kinetic_scale: Option<Num>,
    pub terms: Vec<TermConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisConfig {
    Oscillator,
    PseudoHarmonic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassConfig {
    Oscillator1d,
    RadialPositive,
    RadialSpiked,
    HarmoniumNaive,
    General,
}

impl From<ClassConfig> for ProblemClass {
    fn from(c: ClassConfig) -> Self {
        match c {
            ClassConfig::Oscillator1d => ProblemClass::Oscillator1D,
            ClassConfig::RadialPositive => ProblemClass::RadialPositive,
            ClassConfig::RadialSpiked => ProblemClass::RadialSpiked,
            ClassConfig::HarmoniumNaive => ProblemClass::HarmoniumNaive,
            ClassConfig::General => ProblemClass::General,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StrategyConfig {
    Fixed {
        omega: Num,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<Num>,
    },
    TraceOmega {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<Num>,
    },
    TraceGamma {
        omega: Num,
    },
    TraceJoint,
    /// The recommended split for the potential's class, or for an explicit one.
    Preset {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        class: Option<ClassConfig>,
    },
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig::Preset { class: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum QesConfig {
    #[serde(rename = "sextic-1d")]
    Sextic1d {
        p: usize,
        nu: u8,
        lambda: Num,
    },
    SexticRadial {
        p: usize,
        l: u32,
        lambda: Num,
    },
    Harmonium {
        p: usize,
        l: u32,
        lambda: Num,
        /// Which of the solved ω roots, ordered by excitation.
        #[serde(default)]
        root: usize,
    },
    Spiked {
        p: usize,
        l: u32,
        omega: Num,
        /// Which of the solved λ roots, in descending λ.
        #[serde(default)]
        root: usize,
    },
}

impl QesConfig {
    pub fn family(&self) -> CliResult<QesFamilyMp> {
        Ok(match self {
            QesConfig::Sextic1d { p, nu, lambda } => QesFamilyMp::Sextic1D {
                p: *p,
                nu: *nu,
                lambda: lambda.value("qes.lambda")?,
            },
            QesConfig::SexticRadial { p, l, lambda } => QesFamilyMp::SexticRadial {
                p: *p,
                l: *l,
                lambda: lambda.value("qes.lambda")?,
            },
            QesConfig::Harmonium { p, l, lambda, .. } => QesFamilyMp::Harmonium {
                p: *p,
                l: *l,
                lambda: lambda.value("qes.lambda")?,
            },
            QesConfig::Spiked { p, l, omega, .. } => QesFamilyMp::Spiked {
                p: *p,
                l: *l,
                omega: omega.value("qes.omega")?,
            },
        })
    }

    /// Selected root for families with one exact level per parameter root.
    pub fn root(&self) -> Option<usize> {
        match self {
            QesConfig::Harmonium { root, .. } | QesConfig::Spiked { root, .. } => Some(*root),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ReferenceConfig {
    #[default]
    None,
    Qes,
    #[serde(rename = "self")]
    SelfRun,
    /// JSON file `{"energies": [...], "moments": [[...]]}` aligned with
    /// `states` and `powers`.
    File { path: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplittingConfig {
    pub g: Num,
    pub size: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Both,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

fn default_states() -> Vec<usize> {
    vec![0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential: Option<PotentialConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<BasisConfig>,
    #[serde(default)]
    pub strategy: StrategyConfig,
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(default)]
    pub powers: Vec<Num>,
    #[serde(default = "default_states")]
    pub states: Vec<usize>,
    #[serde(default)]
    pub reference: ReferenceConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qes: Option<QesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<SplittingConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Precision from, in order: the explicit override, the config, the
    /// default.
    pub fn precision(&self, override_digits: Option<u32>) -> CliResult<PrecisionConfig> {
        let digits = override_digits.or(self.precision).unwrap_or(DEFAULT_DIGITS);
        PrecisionConfig::new(digits).map_err(CliError::config)
    }
}

impl PotentialConfig {
    pub fn build(&self) -> CliResult<PotentialMp> {
        let kind = match self.kind {
            KindConfig::OneDim => {
                if self.l.is_some() {
                    return Err(CliError::Config("one-dimensional potentials take a parity, not l".into()));
                }
                PotentialKind::OneDim {
                    parity: self.parity.unwrap_or(ParityConfig::Full).into(),
                }
            }
            KindConfig::Radial => {
                if self.parity.is_some() {
                    return Err(CliError::Config("radial potentials take l, not a parity".into()));
                }
                PotentialKind::Radial { l: self.l.unwrap_or(0) }
            }
        };
        if self.terms.is_empty() {
            return Err(CliError::Config("potential needs at least one term".into()));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.iter().enumerate() {
            let power = t.power.power(&format!("terms[{i}].power"))?;
            if terms.iter().any(|x: &Term<BigFloat>| x.power == power) {
                return Err(CliError::Config(format!("power {power} appears twice")));
            }
            terms.push(Term::new(power, t.coeff.value(&format!("terms[{i}].coeff"))?));
        }
        let pot = PotentialMp::new(kind, terms).map_err(CliError::config)?;
        match &self.kinetic_scale {
            Some(s) => pot.with_kinetic_scale(s.value("kinetic_scale")?).map_err(CliError::config),
            None => Ok(pot),
        }
    }
}

impl StrategyConfig {
    pub fn build(&self, potential: &PotentialMp) -> CliResult<StrategyMp> {
        let opt = |n: &Option<Num>, what: &str| n.as_ref().map(|v| v.value(what)).transpose();
        let s = match self {
            StrategyConfig::Fixed { omega, gamma } => StrategyMp::Fixed {
                omega: omega.value("strategy.omega")?,
                gamma: opt(gamma, "strategy.gamma")?,
            },
            StrategyConfig::TraceOmega { gamma } => StrategyMp::TraceOmega {
                gamma: opt(gamma, "strategy.gamma")?,
            },
            StrategyConfig::TraceGamma { omega } => StrategyMp::TraceGamma {
                omega: omega.value("strategy.omega")?,
            },
            StrategyConfig::TraceJoint => StrategyMp::TraceJoint,
            StrategyConfig::Preset { class } => {
                let class = class.map(ProblemClass::from).unwrap_or_else(|| ProblemClass::classify(potential));
                strategy_presets(class, potential).map_err(CliError::config)?
            }
        };
        check_strategy(&s, potential)?;
        Ok(s)
    }
}

/// Physical constraints on fixed parameters, checked before any work.
fn check_strategy(s: &StrategyMp, potential: &PotentialMp) -> CliResult<()> {
    let radial = matches!(potential.kind, PotentialKind::Radial { .. });
    let (omega, gamma) = match s {
        StrategyMp::Fixed { omega, gamma } => (Some(omega), gamma.as_ref()),
        StrategyMp::TraceOmega { gamma } => (None, gamma.as_ref()),
        StrategyMp::TraceGamma { omega } => (Some(omega), None),
        StrategyMp::TraceJoint => (None, None),
    };
    if let Some(w) = omega {
        if !w.gt_zero() {
            return Err(CliError::Config("Ω must be positive".into()));
        }
    }
    let needs_gamma = matches!(s, StrategyMp::TraceGamma { .. } | StrategyMp::TraceJoint);
    if !radial && (gamma.is_some() || needs_gamma) {
        return Err(CliError::Config("γ applies only to radial potentials".into()));
    }
    if radial {
        let l = potential.angular_momentum().unwrap_or(0);
        let g = gamma
            .cloned()
            .unwrap_or_else(|| BigFloat::from_int(i64::from(l)) + BigFloat::ratio(3, 2));
        let bound = potential.gamma_lower_bound();
        if !needs_gamma && g <= bound {
            return Err(CliError::Config(format!(
                "γ = {} must exceed {} for this potential",
                g.to_decimal(12),
                bound.to_decimal(12)
            )));
        }
    }
    Ok(())
}
