//! Executes a validated configuration and builds its result document.

use std::time::Instant;

use optrr::qes::{exact_energies, exact_moments, exact_wavefunction, residual_check, QesLevel, QesSolution};
use optrr::rr::{level_splitting, moments, solve, sweep, Reference, SweepOptions};
use optrr::{
    BigFloat, OptimizedParams, PotentialKind, PotentialMp, Power, PrecisionConfig, QesFamilyMp, Real, StrategyMp,
};
use serde::Deserialize;

use crate::config::{
    BasisConfig, Command, KindConfig, Num, ParityConfig, PotentialConfig, ReferenceConfig, RunConfig, TermConfig,
};
use crate::document::{
    Conventions, Oracle, OracleLevel, PrecisionMeta, Record, ReferenceMeta, ResultDocument, SplittingRecord, Timing,
    SCHEMA,
};
use crate::error::{CliError, CliResult};

/// Runs `command` on `config`. Everything that can be checked without
/// numerical work is checked before any is done.
pub fn execute(config: &RunConfig, command: Command, digits: Option<u32>) -> CliResult<ResultDocument> {
    if let Some(c) = config.command {
        if c != command {
            return Err(CliError::Config(format!(
                "configuration is for '{}', not '{}'",
                c.name(),
                command.name()
            )));
        }
    }
    let precision = config.precision(digits)?;
    let _guard = precision.activate::<BigFloat>();
    let start = Instant::now();
    let mut doc = ResultDocument {
        schema: SCHEMA.into(),
        command,
        config: RunConfig {
            command: Some(command),
            precision: Some(precision.digits()),
            ..config.clone()
        },
        conventions: Conventions::default(),
        precision: PrecisionMeta {
            digits: precision.digits(),
            tolerance_exponent: precision.tolerance_exponent(),
        },
        records: Vec::new(),
        reference: None,
        oracle: None,
        splitting: None,
        timing: Timing { seconds: 0.0 },
    };
    match command {
        Command::Solve | Command::Sweep => spectral(config, command, &precision, &mut doc)?,
        Command::Qes => oracle(config, &precision, &mut doc)?,
        Command::Splitting => splitting(config, &precision, &mut doc)?,
    }
    doc.timing.seconds = start.elapsed().as_secs_f64();
    Ok(doc)
}

fn text(x: &BigFloat, p: &PrecisionConfig) -> String {
    x.to_decimal(p.digits() as usize)
}

fn powers(config: &RunConfig) -> CliResult<Vec<Power>> {
    config
        .powers
        .iter()
        .enumerate()
        .map(|(i, k)| k.power(&format!("powers[{i}]")))
        .collect()
}

/// The QES spectrum plus the level whose couplings define the potential.
struct Exact {
    family: QesFamilyMp,
    solution: QesSolution<BigFloat>,
    selected: Option<usize>,
}

impl Exact {
    fn load(config: &RunConfig, precision: &PrecisionConfig) -> CliResult<Option<Self>> {
        let Some(q) = &config.qes else {
            return Ok(None);
        };
        let family = q.family()?;
        let solution = exact_energies(&family, precision)?;
        let selected = match q.root() {
            Some(r) if r >= solution.levels.len() => {
                return Err(CliError::Config(format!(
                    "root {r} requested but only {} exist",
                    solution.levels.len()
                )))
            }
            r => r,
        };
        Ok(Some(Exact {
            family,
            solution,
            selected,
        }))
    }

    /// Levels that belong to the Hamiltonian being diagonalised.
    fn levels(&self) -> Vec<&QesLevel<BigFloat>> {
        match self.selected {
            Some(i) => vec![&self.solution.levels[i]],
            None => self.solution.levels.iter().collect(),
        }
    }

    fn potential(&self) -> CliResult<PotentialMp> {
        let level = self.levels()[0];
        Ok(self.family.potential(&level.couplings)?)
    }

    fn level_for(&self, state: usize) -> CliResult<&QesLevel<BigFloat>> {
        self.levels()
            .into_iter()
            .find(|l| l.state_index == state)
            .ok_or_else(|| CliError::Config(format!("no exact level for state {state}")))
    }
}

fn echo_potential(p: &PotentialMp, precision: &PrecisionConfig) -> PotentialConfig {
    let (kind, parity, l) = match p.kind {
        PotentialKind::OneDim { parity } => {
            let parity = match parity {
                optrr::Parity::Even => ParityConfig::Even,
                optrr::Parity::Odd => ParityConfig::Odd,
                optrr::Parity::Full => ParityConfig::Full,
            };
            (KindConfig::OneDim, Some(parity), None)
        }
        PotentialKind::Radial { l } => (KindConfig::Radial, None, Some(l)),
    };
    PotentialConfig {
        kind,
        parity,
        l,
        kinetic_scale: Some(Num::new(text(&p.kinetic_scale, precision))),
        terms: p
            .terms
            .iter()
            .map(|t| TermConfig {
                power: Num::new(t.power.to_string()),
                coeff: Num::new(text(&t.coeff, precision)),
            })
            .collect(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReferenceFile {
    energies: Vec<Num>,
    #[serde(default)]
    moments: Option<Vec<Vec<Num>>>,
}

fn reference(
    config: &RunConfig,
    exact: Option<&Exact>,
    powers: &[Power],
    precision: &PrecisionConfig,
) -> CliResult<Reference<BigFloat>> {
    Ok(match &config.reference {
        ReferenceConfig::None => Reference::None,
        ReferenceConfig::SelfRun => Reference::SelfRun,
        ReferenceConfig::File { path } => {
            let raw = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {path}: {e}")))?;
            let f: ReferenceFile =
                serde_json::from_str(&raw).map_err(|e| CliError::Config(format!("reference file {path}: {e}")))?;
            let energies = f.energies.iter().map(|e| e.value("reference energy")).collect::<CliResult<_>>()?;
            let moments = f
                .moments
                .map(|rows| {
                    rows.iter()
                        .map(|r| r.iter().map(|m| m.value("reference moment")).collect::<CliResult<Vec<_>>>())
                        .collect::<CliResult<Vec<_>>>()
                })
                .transpose()?;
            Reference::Exact { energies, moments }
        }
        ReferenceConfig::Qes => {
            let exact = exact.ok_or_else(|| CliError::Config("reference 'qes' needs a qes block".into()))?;
            let mut energies = Vec::new();
            let mut table = Vec::new();
            for &s in &config.states {
                let level = exact.level_for(s)?;
                energies.push(level.energy.clone());
                if !powers.is_empty() {
                    let state = exact_wavefunction(&exact.family, level, precision)?;
                    table.push(exact_moments(&state, powers, precision)?.values.remove(0));
                }
            }
            let moments = (!powers.is_empty()).then_some(table);
            Reference::Exact { energies, moments }
        }
    })
}

fn check_basis(config: &RunConfig, p: &PotentialMp) -> CliResult<()> {
    let radial = matches!(p.kind, PotentialKind::Radial { .. });
    match config.basis {
        Some(BasisConfig::Oscillator) if radial => {
            Err(CliError::Config("radial potentials use the pseudo-harmonic basis".into()))
        }
        Some(BasisConfig::PseudoHarmonic) if !radial => {
            Err(CliError::Config("one-dimensional potentials use the oscillator basis".into()))
        }
        _ => Ok(()),
    }
}

fn params_record(size: usize, params: &OptimizedParams<BigFloat>, p: &PrecisionConfig) -> Record {
    Record {
        size,
        strategy: params.strategy.name().into(),
        omega: text(&params.omega, p),
        sqrt_omega: text(&params.omega.sqrt(), p),
        gamma: params.gamma.as_ref().map(|g| text(g, p)),
        trace: text(&params.trace, p),
        boundary_pinned: params.boundary_pinned,
        states: Vec::new(),
        energies: Vec::new(),
        untrusted: Vec::new(),
        errors: None,
        powers: Vec::new(),
        moments: Vec::new(),
        moment_errors: None,
        spectrum: None,
    }
}

fn spectral(config: &RunConfig, command: Command, precision: &PrecisionConfig, doc: &mut ResultDocument) -> CliResult<()> {
    let powers = powers(config)?;
    if config.states.is_empty() {
        return Err(CliError::Config("at least one state is required".into()));
    }
    let exact = Exact::load(config, precision)?;
    let potential = match (&config.potential, &exact) {
        (Some(p), _) => p.build()?,
        (None, Some(e)) => e.potential()?,
        (None, None) => return Err(CliError::Config("a potential or a qes block is required".into())),
    };
    check_basis(config, &potential)?;
    if matches!(potential.kind, PotentialKind::OneDim { .. }) {
        if let Some(k) = powers.iter().find(|k| k.as_integer().is_none_or(|k| k < 0)) {
            return Err(CliError::Config(format!("x^{k} is not available in one dimension")));
        }
    }
    let strategy: StrategyMp = config.strategy.build(&potential)?;
    doc.config.potential = Some(echo_potential(&potential, precision));
    let power_names: Vec<String> = powers.iter().map(Power::to_string).collect();
    match command {
        Command::Solve => {
            let &[size] = config.sizes.as_slice() else {
                return Err(CliError::Config("solve takes exactly one basis size".into()));
            };
            if size == 0 {
                return Err(CliError::Config("basis size must be positive".into()));
            }
            let result = solve(&potential, &strategy, size, precision)?;
            let mut rec = params_record(size, &result.params, precision);
            rec.states = config.states.clone();
            rec.energies = config.states.iter().map(|&s| result.energies.get(s).map(|e| text(e, precision))).collect();
            rec.untrusted = config.states.iter().map(|&s| !result.trusted(s)).collect();
            if !powers.is_empty() {
                let present: Vec<usize> = config.states.iter().copied().filter(|&s| s < size).collect();
                let table = moments(&result, &powers, &present)?;
                rec.powers = power_names;
                rec.moments = config
                    .states
                    .iter()
                    .map(|&s| {
                        powers
                            .iter()
                            .filter_map(|&k| table.get(s, k).map(|v| text(v, precision)))
                            .collect()
                    })
                    .collect();
            }
            rec.spectrum = Some(result.energies.iter().map(|e| text(e, precision)).collect());
            doc.records.push(rec);
        }
        Command::Sweep => {
            if config.sizes.is_empty() || config.sizes.windows(2).any(|w| w[0] >= w[1]) || config.sizes[0] == 0 {
                return Err(CliError::Config("sizes must be positive and strictly ascending".into()));
            }
            let options = SweepOptions {
                states: config.states.clone(),
                powers: powers.clone(),
                reference: reference(config, exact.as_ref(), &powers, precision)?,
            };
            let report = sweep(&potential, &strategy, &config.sizes, &options, precision)?;
            let has_ref = report.reference_energies.is_some();
            for row in &report.rows {
                let mut rec = params_record(row.size, &row.params, precision);
                rec.states = report.states.clone();
                rec.energies = row.energies.iter().map(|e| e.as_ref().map(|e| text(e, precision))).collect();
                rec.untrusted = row.untrusted.clone();
                if has_ref {
                    rec.errors = Some(row.errors.iter().map(|e| e.as_ref().map(|e| e.to_decimal(6))).collect());
                }
                if let Some(m) = &row.moments {
                    rec.powers = power_names.clone();
                    rec.moments = report
                        .states
                        .iter()
                        .map(|&s| powers.iter().filter_map(|&k| m.get(s, k).map(|v| text(v, precision))).collect())
                        .collect();
                }
                rec.moment_errors = row
                    .moment_errors
                    .as_ref()
                    .map(|e| e.iter().map(|r| r.iter().map(|x| x.to_decimal(6)).collect()).collect());
                doc.records.push(rec);
            }
            if let Some(e) = &report.reference_energies {
                let source = match config.reference {
                    ReferenceConfig::Qes => "qes",
                    ReferenceConfig::SelfRun => "self",
                    ReferenceConfig::File { .. } => "file",
                    ReferenceConfig::None => "none",
                };
                doc.reference = Some(ReferenceMeta {
                    source: source.into(),
                    size: report.reference_size,
                    energies: e.iter().map(|x| text(x, precision)).collect(),
                    moments: report
                        .reference_moments
                        .as_ref()
                        .map(|m| m.iter().map(|r| r.iter().map(|x| text(x, precision)).collect()).collect()),
                });
            }
        }
        _ => unreachable!("spectral commands only"),
    }
    Ok(())
}

fn oracle(config: &RunConfig, precision: &PrecisionConfig, doc: &mut ResultDocument) -> CliResult<()> {
    let powers = powers(config)?;
    let exact = Exact::load(config, precision)?.ok_or_else(|| CliError::Config("qes needs a qes block".into()))?;
    if matches!(exact.family, QesFamilyMp::Sextic1D { .. }) {
        if let Some(k) = powers.iter().find(|k| k.as_integer().is_none_or(|k| k < 0)) {
            return Err(CliError::Config(format!("x^{k} is not available in one dimension")));
        }
    }
    let mut levels = Vec::new();
    for level in &exact.solution.levels {
        let state = exact_wavefunction(&exact.family, level, precision)?;
        let residual = residual_check(&state, &level.energy, precision)?;
        let moments = if powers.is_empty() {
            Vec::new()
        } else {
            exact_moments(&state, &powers, precision)?.values[0].iter().map(|v| text(v, precision)).collect()
        };
        levels.push(OracleLevel {
            state_index: level.state_index,
            level: exact.family.level_number(level.state_index),
            energy: text(&level.energy, precision),
            omega_sq: text(&level.couplings.omega_sq, precision),
            lambda: text(&level.couplings.lambda, precision),
            termination: Some(state.termination.to_decimal(6)),
            residual: Some(residual.to_decimal(6)),
            moments,
        });
    }
    doc.oracle = Some(Oracle {
        family: exact.family.name().into(),
        p: exact.family.p(),
        powers: powers.iter().map(Power::to_string).collect(),
        levels,
    });
    Ok(())
}

fn splitting(config: &RunConfig, precision: &PrecisionConfig, doc: &mut ResultDocument) -> CliResult<()> {
    let s = config
        .splitting
        .as_ref()
        .ok_or_else(|| CliError::Config("splitting needs a splitting block".into()))?;
    let g = s.g.value("splitting.g")?;
    if !g.gt_zero() {
        return Err(CliError::Config("g must be positive".into()));
    }
    let r = level_splitting(&g, s.size, precision)?;
    doc.splitting = Some(SplittingRecord {
        g: s.g.0.clone(),
        size: r.size,
        omega_even: text(&r.omega_even, precision),
        omega_odd: text(&r.omega_odd, precision),
        even_ground: text(&r.even_ground, precision),
        odd_ground: text(&r.odd_ground, precision),
        delta: text(&r.delta, precision),
    });
    Ok(())
}
