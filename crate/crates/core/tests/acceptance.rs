//! End-to-end acceptance checks, one PASS/FAIL line per criterion.
//!
//! Criterion 7 (the 350-state, 250-digit double-well run) takes tens of
//! minutes; set `OPTRR_SKIP_SLOW=1` to skip it.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_traits::Signed;
use optrr::basis::{ho_power_matrix, Parity, PotentialKind, Term};
use optrr::qes::{
    determinant, exact_energies, exact_moments, exact_wavefunction, recurrence_coeffs, residual_check, Couplings,
};
use optrr::rr::{
    level_splitting, moments, relative_error, scaling_relation, solve, sweep, virial_defect, Reference, ScalingForm,
    SweepOptions,
};
use optrr::trace::{strategy_presets, ProblemClass};
use optrr::{BigFloat, Potential, PotentialMp, Power, PrecisionConfig, QesFamilyMp, Real, StrategyMp};

type Outcome = Result<String, String>;

fn p(digits: u32) -> PrecisionConfig {
    PrecisionConfig::new(digits).unwrap()
}

fn dec(s: &str) -> BigFloat {
    BigFloat::parse_decimal(s).unwrap_or_else(|| panic!("bad literal {s}"))
}

fn int(n: i64) -> BigFloat {
    BigFloat::from_int(n)
}

fn tenth(e: i32) -> BigFloat {
    int(10).powi(e)
}

fn rel(a: &BigFloat, b: &BigFloat) -> BigFloat {
    relative_error(a, b)
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn short(x: &BigFloat) -> String {
    x.to_decimal(3)
}

fn err_str(e: optrr::Error) -> String {
    e.to_string()
}

/// `p² + x² + x⁴`, i.e. kinetic scale 2.
fn quartic_pxx() -> PotentialMp {
    Potential::new(
        PotentialKind::OneDim { parity: Parity::Full },
        vec![Term::new(Power::int(2), int(1)), Term::new(Power::int(4), int(1))],
    )
    .unwrap()
    .with_kinetic_scale(int(2))
    .unwrap()
}

fn criterion_1() -> Outcome {
    let prec = p(40);
    let _g = prec.activate::<BigFloat>();
    let pot = quartic_pxx();
    let trace = StrategyMp::TraceOmega { gamma: None };
    let reference = solve(&pot, &trace, 2 * 80 - 1, &prec).map_err(err_str)?.energies[0].clone();
    let rows = [
        (1, "1.29294233500847", "1.09716442402927e-2"),
        (5, "1.65920419620602", "8.63597923540916e-7"),
        (10, "1.86080663733626", "1.86447406929386e-12"),
        (15, "1.98940338014799", "6.71884044353837e-19"),
        (20, "2.08593508969090", "4.36194667514212e-24"),
    ];
    let mut worst = (int(0), int(0));
    for (n, sqrt_omega, delta) in rows {
        let r = solve(&pot, &trace, 2 * n - 1, &prec).map_err(err_str)?;
        let ds = (r.params.omega.sqrt() - dec(sqrt_omega)).abs();
        let de = (r.energies[0].clone() - &reference).abs();
        let dr = rel(&de, &dec(delta));
        check(ds <= tenth(-10), || format!("N={n}: √Ω off by {}", short(&ds)))?;
        check(dr <= BigFloat::ratio(1, 100), || format!("N={n}: δE₀ = {} vs {delta}", short(&de)))?;
        worst = (worst.0.max_of(ds), worst.1.max_of(dr));
    }
    Ok(format!("max |Δ√Ω| {}, max rel Δ(δE₀) {}", short(&worst.0), short(&worst.1)))
}

fn sextic_1d() -> PotentialMp {
    let w2 = -(int(35) * int(2).sqrt());
    Potential::sextic(w2, int(1), Parity::Even).unwrap()
}

/// Energy and moments of `state` at `size`, checked against a printed row.
fn check_row(
    pot: &PotentialMp,
    size: usize,
    state: usize,
    powers: &[i64],
    row: &[&str],
    tol_e: i32,
    tol_m: i32,
    prec: &PrecisionConfig,
) -> Result<BigFloat, String> {
    let strategy = strategy_presets(ProblemClass::classify(pot), pot).map_err(err_str)?;
    let r = solve(pot, &strategy, size, prec).map_err(err_str)?;
    let de = rel(&r.energies[state], &dec(row[0]));
    check(de <= tenth(tol_e), || format!("N={size} E_{state}: rel error {}", short(&de)))?;
    let ks: Vec<Power> = powers.iter().map(|&k| Power::int(k)).collect();
    let m = moments(&r, &ks, &[state]).map_err(err_str)?;
    let mut worst = de;
    for (j, k) in powers.iter().enumerate() {
        let dm = rel(&m.values[0][j], &dec(row[j + 1]));
        check(dm <= tenth(tol_m), || format!("N={size} state {state} moment {k}: rel error {}", short(&dm)))?;
        worst = worst.max_of(dm);
    }
    Ok(worst)
}

fn criterion_2() -> Outcome {
    let prec = p(30);
    let _g = prec.activate::<BigFloat>();
    let pot = sextic_1d();
    let powers = [2, 6, 10];
    let a = check_row(
        &pot,
        35,
        0,
        &powers,
        &["-40.52625282343567", "2.72643167389269", "23.60630748253899", "242.23182241787521"],
        -13,
        -12,
        &prec,
    )?;
    // n = 16 is the ninth even state
    let b = check_row(
        &pot,
        40,
        8,
        &powers,
        &["40.52625282343567", "2.03737569518631", "35.34280117894960", "856.42125207596973"],
        -13,
        -11,
        &prec,
    )?;
    Ok(format!("worst rel error N=35 n=0 {}, N=40 n=16 {}", short(&a), short(&b)))
}

fn criterion_3() -> Outcome {
    let prec = p(30);
    let _g = prec.activate::<BigFloat>();
    let family = QesFamilyMp::Sextic1D { p: 8, nu: 0, lambda: int(1) };
    let sol = exact_energies(&family, &prec).map_err(err_str)?;
    let e = sol.energies();
    check(e.len() == 9, || format!("{} energies", e.len()))?;
    let sum = e.iter().fold(int(0), |s, x| s + x).abs();
    check(sum <= tenth(-12), || format!("Σ E = {}", short(&sum)))?;
    let extreme = dec("40.52625282343567");
    let lo = (e[0].clone() + &extreme).abs();
    let hi = (e[8].clone() - &extreme).abs();
    check(lo <= tenth(-13) && hi <= tenth(-13), || format!("extremes off by {} / {}", short(&lo), short(&hi)))?;
    let mut worst = int(0);
    for level in &sol.levels {
        let state = exact_wavefunction(&family, level, &prec).map_err(err_str)?;
        let res = residual_check(&state, &level.energy, &prec).map_err(err_str)?;
        check(res <= tenth(-10), || format!("state {} residual {}", level.state_index, short(&res)))?;
        worst = worst.max_of(res);
    }
    Ok(format!("|Σ E| {}, extremes within {}, max residual {}", short(&sum), short(&lo.max_of(hi)), short(&worst)))
}

fn criterion_4() -> Outcome {
    let prec = p(30);
    let _g = prec.activate::<BigFloat>();
    let w2 = -(int(39) * int(2).sqrt());
    let pot = Potential::radial_power(1, w2, int(1), Power::int(6)).unwrap();
    let powers = [2, 6, 10];
    let a = check_row(
        &pot,
        35,
        0,
        &powers,
        &["-48.11353418905196", "2.90220193690738", "27.98886651695584", "314.77282672244337"],
        -13,
        -11,
        &prec,
    )?;
    let b = check_row(
        &pot,
        40,
        8,
        &powers,
        &["48.11353418905197", "2.17593184312375", "42.03139869987743", "1135.66913419894809"],
        -13,
        -11,
        &prec,
    )?;
    Ok(format!("worst rel error N=35 n=0 {}, N=40 n=8 {}", short(&a), short(&b)))
}

/// Strictly decreasing errors on the grid; returns the last one.
fn decreasing(pot: &PotentialMp, strategy: &StrategyMp, exact: &BigFloat, prec: &PrecisionConfig) -> Result<BigFloat, String> {
    let sizes = [10, 20, 40, 60];
    let opts = SweepOptions::ground_state(Reference::Exact {
        energies: vec![exact.clone()],
        moments: None,
    });
    let report = sweep(pot, strategy, &sizes, &opts, prec).map_err(err_str)?;
    let errs: Vec<BigFloat> = report.error_series(0).into_iter().map(|(_, e)| e).collect();
    check(errs.len() == sizes.len(), || "missing sizes in sweep".into())?;
    check(errs.windows(2).all(|w| w[1] < w[0]), || {
        format!("{} errors not decreasing: {:?}", strategy.tag().name(), errs.iter().map(short).collect::<Vec<_>>())
    })?;
    Ok(errs[3].clone())
}

fn criterion_5() -> Outcome {
    let prec = p(30);
    let _g = prec.activate::<BigFloat>();
    let mut notes = Vec::new();
    for (order, expected) in [
        (1, BigFloat::ratio(1, 4)),
        (4, (int(35) - int(3) * int(57).sqrt()) / int(1424)),
    ] {
        let family = QesFamilyMp::Harmonium { p: order, l: 0, lambda: int(1) };
        let sol = exact_energies(&family, &prec).map_err(err_str)?;
        let ground = &sol.levels[0];
        let w = ground.couplings.omega();
        let dw = (w.clone() - &expected).abs();
        check(dw <= tenth(-14), || format!("ω_{order} off by {}", short(&dw)))?;
        let pot = family.potential(&ground.couplings).map_err(err_str)?;
        let naive = strategy_presets(ProblemClass::HarmoniumNaive, &pot).map_err(err_str)?;
        check(
            naive == StrategyMp::Fixed { omega: w.clone(), gamma: Some(BigFloat::ratio(3, 2)) },
            || format!("naive preset is {naive:?}"),
        )?;
        let a = decreasing(&pot, &naive, &ground.energy, &prec)?;
        let b = decreasing(&pot, &StrategyMp::TraceJoint, &ground.energy, &prec)?;
        if order == 1 {
            let bound = tenth(-6);
            check(a <= bound && b <= bound, || format!("δE(60) naive {} / trace {}", short(&a), short(&b)))?;
        }
        notes.push(format!("ω_{order}: δE(60) naive {} trace {}", short(&a), short(&b)));
    }
    Ok(notes.join("; "))
}

fn lambda_2_closed_form() -> BigFloat {
    let inner = (int(1852389) * int(1001).sqrt() / int(478512623)).atan() / int(3);
    int(5) / int(384) * (int(9887) + int(32) * int(333778).sqrt() * inner.cos())
}

fn criterion_6() -> Outcome {
    let prec = p(30);
    let _g = prec.activate::<BigFloat>();
    let spiked = |order| QesFamilyMp::Spiked { p: order, l: 0, omega: int(1) };
    let s0 = exact_energies(&spiked(0), &prec).map_err(err_str)?;
    let d0 = (s0.levels[0].couplings.lambda.clone() - BigFloat::ratio(9, 128)).abs();
    check(d0 <= prec.tolerance::<BigFloat>(), || format!("λ_0(0) off by {}", short(&d0)))?;
    let s2 = exact_energies(&spiked(2), &prec).map_err(err_str)?;
    let lambda = s2.levels[0].couplings.lambda.clone();
    let d2 = (lambda.clone() - lambda_2_closed_form()).abs();
    check(d2 <= tenth(-10), || format!("λ_2(0) off by {}", short(&d2)))?;

    let pot = Potential::spiked(0, int(1), lambda).map_err(err_str)?;
    let rows = [
        (20, "14.48", "6.00021390368223"),
        (40, "17.29", "6.00000223509568"),
        (80, "20.97", "6.00000006213529"),
        (120, "23.61", "6.00000000480818"),
    ];
    let sizes: Vec<usize> = rows.iter().map(|r| r.0).collect();
    let report = sweep(
        &pot,
        &StrategyMp::TraceGamma { omega: int(1) },
        &sizes,
        &SweepOptions::ground_state(Reference::None),
        &prec,
    )
    .map_err(err_str)?;
    let mut worst_e = int(0);
    for (row, (n, gamma, energy)) in report.rows.iter().zip(rows) {
        let g = row.params.gamma.clone().ok_or("no γ in a radial run")?;
        let dg = (g.clone() - dec(gamma)).abs();
        check(dg <= BigFloat::ratio(5, 100), || format!("N={n}: γ_opt {} vs {gamma}", short(&g)))?;
        let e = row.energies[0].clone().ok_or("missing energy")?;
        let de = (e - dec(energy)).abs();
        check(de <= tenth(-9), || format!("N={n}: E₀ off by {}", short(&de)))?;
        worst_e = worst_e.max_of(de);
    }

    let powers = [Power::int(1), Power::int(2), Power::int(6)];
    let mut worst_m = int(0);
    for (sol, family, row) in [
        (&s2, spiked(2), ["2.84561898466095", "8.28185529459909", "737.240860856683"]),
        (&s0, spiked(0), ["1.43226578557733", "2.25844053161144", "29.4482015786915"]),
    ] {
        let state = exact_wavefunction(&family, &sol.levels[0], &prec).map_err(err_str)?;
        let m = exact_moments(&state, &powers, &prec).map_err(err_str)?;
        for (v, want) in m.values[0].iter().zip(row) {
            let d = rel(v, &dec(want));
            check(d <= tenth(-12), || format!("exact moment {} vs {want}", short(v)))?;
            worst_m = worst_m.max_of(d);
        }
    }
    Ok(format!(
        "|Δλ_2(0)| {}, max |ΔE₀| {}, max rel Δ(exact moments) {}",
        short(&d2),
        short(&worst_e),
        short(&worst_m)
    ))
}

/// Reference mantissa of the g = 0.001 splitting. The printed power of ten
/// is 10⁻⁶⁸, a factor 1/g above the value this Hamiltonian gives; the
/// leading instanton estimate below fixes the magnitude independently.
const SPLITTING_MANTISSA: &str = "1.470464454175092501381989964494151981567800350052603528386053333780366050415751935052841826734339932821246748873125608039469420665002677938176074660629119";

fn criterion_7() -> Outcome {
    if std::env::var_os("OPTRR_SKIP_SLOW").is_some() {
        return Ok("SKIPPED (OPTRR_SKIP_SLOW set)".into());
    }
    let prec = p(250);
    let _g = prec.activate::<BigFloat>();
    let g = BigFloat::ratio(1, 1000);
    let s = level_splitting(&g, 350, &prec).map_err(err_str)?;
    let exponent = s.delta.lossy_f64().log10().floor() as i32;
    let mantissa = s.delta.clone() / tenth(exponent);
    let d = rel(&mantissa, &dec(SPLITTING_MANTISSA));
    let digits = -d.lossy_f64().log10();
    check(digits >= 50.0, || {
        format!("ΔE = {} agrees to {digits:.1} leading digits only", s.delta.to_decimal(60))
    })?;
    // (2/√(πg)) e^{-1/(6g)}
    let instanton = int(2) / (BigFloat::pi() * &g).sqrt() * (-(int(1) / (int(6) * &g))).exp();
    let ratio = (s.delta.clone() / instanton).lossy_f64();
    check((0.9..1.1).contains(&ratio), || format!("ΔE / instanton estimate = {ratio:.4}"))?;
    Ok(format!(
        "ΔE = {}, {digits:.1} leading digits agree, ΔE / instanton estimate = {ratio:.4}",
        s.delta.to_decimal(55)
    ))
}

/// Cofactor expansion along the first row.
fn brute_det(m: &[Vec<BigFloat>]) -> BigFloat {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut acc = int(0);
    for j in 0..m.len() {
        if m[0][j] == int(0) {
            continue;
        }
        let minor: Vec<Vec<BigFloat>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = m[0][j].clone() * brute_det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

fn criterion_8() -> Outcome {
    let prec = p(30);
    let _g = prec.activate::<BigFloat>();
    let tiny = tenth(-25);

    // variational monotonicity at fixed parameters
    for (pot, strategy) in [
        (quartic_pxx(), StrategyMp::Fixed { omega: dec("1.7"), gamma: None }),
        (
            Potential::spiked(0, int(1), int(5)).unwrap(),
            StrategyMp::Fixed { omega: int(1), gamma: Some(dec("4.5")) },
        ),
    ] {
        let mut prev: Vec<BigFloat> = Vec::new();
        for n in 1..=16 {
            let e = solve(&pot, &strategy, n, &prec).map_err(err_str)?.energies;
            for (i, (new, old)) in e.iter().zip(&prev).enumerate() {
                check(new.clone() <= old.clone() + &tiny, || format!("ε_{i} rose from N={} to N={n}", n - 1))?;
            }
            prev = e;
        }
    }

    // virial identity on converged states
    let mut worst_virial = int(0);
    let sextic = sextic_1d();
    for (pot, size, states) in [(quartic_pxx(), 81, vec![0, 1, 4]), (sextic.clone(), 40, vec![0, 8])] {
        let strategy = strategy_presets(ProblemClass::classify(&pot), &pot).map_err(err_str)?;
        let r = solve(&pot, &strategy, size, &prec).map_err(err_str)?;
        let big = solve(&pot, &strategy, size + 30, &prec).map_err(err_str)?;
        for s in states {
            let de = rel(&r.energies[s], &big.energies[s]);
            check(de <= tenth(-10), || format!("state {s} not converged at N={size}"))?;
            let v = virial_defect(&r, s).map_err(err_str)?;
            check(v <= tenth(-8), || format!("virial defect {} for state {s}", short(&v)))?;
            worst_virial = worst_virial.max_of(v);
        }
    }

    // dual solves through the scaling relations
    let mu = int(16);
    let w2 = -(int(35) * int(2).sqrt());
    let t = scaling_relation(&(w2.clone() * mu.sqrt()), &mu, Power::int(6), ScalingForm::UnitCoupling).map_err(err_str)?;
    let direct = solve(
        &Potential::sextic(w2.clone() * mu.sqrt(), mu.clone(), Parity::Even).unwrap(),
        &StrategyMp::TraceOmega { gamma: None },
        35,
        &prec,
    )
    .map_err(err_str)?;
    let scaled = solve(
        &Potential::sextic(t.omega_sq.clone(), t.lambda.clone(), Parity::Even).unwrap(),
        &StrategyMp::TraceOmega { gamma: None },
        35,
        &prec,
    )
    .map_err(err_str)?;
    check((t.factor.clone() - int(2)).abs() <= tiny && (t.omega_sq.clone() - &w2).abs() <= tiny, || {
        "sextic transport is not (2, ω², 1)".into()
    })?;
    let mut worst_dual = int(0);
    for i in [0, 4, 8] {
        let d = rel(&direct.energies[i], &(t.factor.clone() * &scaled.energies[i]));
        check(d <= tenth(-10), || format!("sextic dual solve state {i}: {}", short(&d)))?;
        worst_dual = worst_dual.max_of(d);
    }
    let (w, lam) = (int(2), int(3));
    let t = scaling_relation(&w.square(), &lam, Power::int(-6), ScalingForm::UnitFrequency).map_err(err_str)?;
    check((t.lambda.clone() - w.square() * &lam).abs() <= tiny, || "spiked transport is not ω²λ".into())?;
    let strategy = StrategyMp::TraceGamma { omega: w.clone() };
    let direct = solve(&Potential::spiked(0, w.clone(), lam.clone()).unwrap(), &strategy, 60, &prec).map_err(err_str)?;
    let unit = solve(
        &Potential::spiked(0, int(1), t.lambda.clone()).unwrap(),
        &StrategyMp::TraceGamma { omega: int(1) },
        60,
        &prec,
    )
    .map_err(err_str)?;
    for i in [0, 2] {
        let d = rel(&direct.energies[i], &(t.factor.clone() * &unit.energies[i]));
        check(d <= tenth(-8), || format!("spiked dual solve state {i}: {}", short(&d)))?;
        worst_dual = worst_dual.max_of(d);
    }

    // padded products of position matrices
    // sectors only for even factors
    for (k1, k2) in [(1u32, 1u32), (2, 3), (2, 4), (4, 6)] {
        let parities: &[Parity] = if k1 % 2 == 0 && k2 % 2 == 0 {
            &[Parity::Full, Parity::Even, Parity::Odd]
        } else {
            &[Parity::Full]
        };
        for &parity in parities {
            let n = 7;
            let pad = n + (k1 + k2) as usize;
            let a = ho_power_matrix::<BigFloat>(pad, k1, parity);
            let b = ho_power_matrix::<BigFloat>(pad, k2, parity);
            let c = ho_power_matrix::<BigFloat>(n, k1 + k2, parity);
            for i in 0..n {
                for j in 0..n {
                    let prod = (0..pad).fold(int(0), |s, q| s + a.get(i, q).clone() * b.get(q, j));
                    check((prod - c.get(i, j)).abs() <= tiny, || {
                        format!("x^{k1}·x^{k2} ≠ x^{} at ({i},{j}) in the {} sector", k1 + k2, parity.name())
                    })?;
                }
            }
        }
    }

    // continuant against cofactor expansion
    let mut worst_det = int(0);
    for order in 0..=5 {
        let families = [
            QesFamilyMp::Sextic1D { p: order, nu: 1, lambda: dec("0.7") },
            QesFamilyMp::SexticRadial { p: order, l: 2, lambda: dec("1.3") },
            QesFamilyMp::Harmonium { p: order, l: 1, lambda: dec("0.9") },
            QesFamilyMp::Spiked { p: order, l: 0, omega: dec("1.1") },
        ];
        for family in families {
            let c = Couplings { omega_sq: dec("0.37"), lambda: dec("2.3") };
            let energy = dec("1.234");
            let dim = order + 1;
            let mut m = vec![vec![int(0); dim]; dim];
            for nrow in 0..dim {
                let (a, b, cc) = recurrence_coeffs(&family, &c, &energy, nrow);
                m[nrow][nrow] = b;
                if nrow + 1 < dim {
                    m[nrow][nrow + 1] = a;
                }
                if nrow > 0 {
                    m[nrow][nrow - 1] = cc;
                }
            }
            let brute = brute_det(&m);
            let fast = determinant(&family, &c, &energy);
            let d = rel(&fast, &brute);
            check(d <= tenth(-12), || format!("{} p={order}: continuant off by {}", family.name(), short(&d)))?;
            worst_det = worst_det.max_of(d);
        }
    }

    // γ_opt above the r^-6 integrability bound
    let mut min_gamma: Option<BigFloat> = None;
    for lam in ["0.0703125", "1", "369.26"] {
        for l in [0, 2] {
            let pot = Potential::spiked(l, int(1), dec(lam)).unwrap();
            let strategy = strategy_presets(ProblemClass::classify(&pot), &pot).map_err(err_str)?;
            for n in [5, 20, 40] {
                let r = solve(&pot, &strategy, n, &prec).map_err(err_str)?;
                let g = r.params.gamma.clone().ok_or("no γ")?;
                check(g > int(3), || format!("γ_opt = {} at λ={lam}, l={l}, N={n}", short(&g)))?;
                min_gamma = Some(min_gamma.map_or(g.clone(), |m| m.min_of(g)));
            }
        }
    }

    Ok(format!(
        "virial ≤ {}, dual solves ≤ {}, continuant ≤ {}, min γ_opt {}",
        short(&worst_virial),
        short(&worst_dual),
        short(&worst_det),
        short(&min_gamma.unwrap_or_else(|| int(0)))
    ))
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn criterion_9() -> Outcome {
    let prec = p(30);
    let _g = prec.activate::<BigFloat>();
    let sizes = [4, 8, 12, 16, 20, 24];
    let mut steepest_flat = f64::NEG_INFINITY;
    for s in ["-1.5", "-1.8", "-1.95", "-2.05", "-2.2", "-2.5"] {
        for t in [2, 4, 6] {
            let pot = Potential::two_power(0, Power::parse(s).unwrap(), Power::int(t)).unwrap();
            let report = sweep(
                &pot,
                &StrategyMp::TraceJoint,
                &sizes,
                &SweepOptions::ground_state(Reference::SelfRun),
                &prec,
            )
            .map_err(|e| format!("(s,t)=({s},{t}): {e}"))?;
            let series = report.error_series(0);
            let top: Vec<(f64, f64)> = series[series.len() / 2..]
                .iter()
                .map(|(n, e)| (*n as f64, e.lossy_f64().max(f64::MIN_POSITIVE).log10()))
                .collect();
            check(top.len() >= 2, || format!("(s,t)=({s},{t}): too few points"))?;
            let k = slope(&top);
            check(k < 0.0, || format!("(s,t)=({s},{t}): slope {k:.3}"))?;
            steepest_flat = steepest_flat.max(k);
        }
    }
    Ok(format!("18 pairs, least negative slope {steepest_flat:.3} per basis state"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "quartic trace-optimal frequencies and errors", criterion_1),
        (2, "sextic n=0 and n=16 rows", criterion_2),
        (3, "sextic exact levels", criterion_3),
        (4, "radial sextic n=0 and n=8 rows", criterion_4),
        (5, "harmonium frequencies and convergence", criterion_5),
        (6, "spiked oscillator couplings, sweep and moments", criterion_6),
        (7, "double-well splitting at g=0.001", criterion_7),
        (8, "property suite", criterion_8),
        (9, "generalized two-power oscillators", criterion_9),
    ];
    let results: Vec<(u32, &str, Outcome, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(id, name, f)| {
                std::thread::Builder::new()
                    .stack_size(64 << 20)
                    .spawn_scoped(scope, move || {
                        let start = Instant::now();
                        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
                            let msg = e
                                .downcast_ref::<String>()
                                .cloned()
                                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                                .unwrap_or_default();
                            Err(format!("panicked: {msg}"))
                        });
                        let secs = start.elapsed().as_secs_f64();
                        eprintln!("criterion {id} finished after {secs:.1}s");
                        (id, name, out, secs)
                    })
                    .unwrap()
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (id, name, out, secs) in &results {
        match out {
            Ok(msg) => println!("criterion {id} PASS [{secs:.1}s] {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id} FAIL [{secs:.1}s] {name}: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", results.len());
        std::process::exit(1);
    }
}
