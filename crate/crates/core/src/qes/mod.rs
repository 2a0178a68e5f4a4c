//! Quasi-exactly solvable families: three-term recurrences, solvability
//! conditions and the exact states used as reference solutions.

mod wavefunction;

pub use wavefunction::{exact_moments, exact_wavefunction, residual_check, ExactState};

use crate::basis::potential::{Parity, Potential, Power};
use crate::error::{Error, Result};
use crate::numerics::linalg::{eigvalsh, SymMatrix};
use crate::numerics::precision::PrecisionConfig;
use crate::numerics::roots::{continuant_det, poly_roots_real, ScanGrid};
use crate::numerics::scalar::Real;

/// A quasi-solvable family with its free coupling. The remaining parameter
/// is fixed by the solvability conditions.
#[derive(Clone, Debug, PartialEq)]
pub enum QesFamily<T> {
    /// `-½ d²/dx² + ω²x²/2 + λx⁶`, parity `ν`; ω² follows from `p`.
    Sextic1D { p: usize, nu: u8, lambda: T },
    /// Radial analogue with angular momentum `l`.
    SexticRadial { p: usize, l: u32, lambda: T },
    /// `-d²/dr² + l(l+1)/r² + ω²r² + λ/r`; ω is solved for.
    Harmonium { p: usize, l: u32, lambda: T },
    /// `-½ d²/dr² + l(l+1)/(2r²) + ω²r²/2 + λ/r⁶`; λ is solved for.
    Spiked { p: usize, l: u32, omega: T },
}

/// Fully specified potential parameters of one exact solution.
#[derive(Clone, Debug, PartialEq)]
pub struct Couplings<T> {
    pub omega_sq: T,
    pub lambda: T,
}

impl<T: Real> Couplings<T> {
    pub fn omega(&self) -> T {
        self.omega_sq.sqrt()
    }
}

/// The `C_{p+1} = 0` condition of a family.
#[derive(Clone, Debug, PartialEq)]
pub enum Solvability<T> {
    /// The coupling relation fixes ω².
    OmegaSquared(T),
    /// The energy is tied to ω by `E = factor · ω`.
    EnergyPerOmega(T),
}

/// One exactly known level.
#[derive(Clone, Debug, PartialEq)]
pub struct QesLevel<T> {
    pub energy: T,
    pub couplings: Couplings<T>,
    /// Excitation number within the family's symmetry sector.
    pub state_index: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QesSolution<T> {
    pub family: QesFamily<T>,
    pub levels: Vec<QesLevel<T>>,
}

impl<T: Real> QesSolution<T> {
    pub fn energies(&self) -> Vec<T> {
        self.levels.iter().map(|l| l.energy.clone()).collect()
    }
}

impl<T: Real> QesFamily<T> {
    pub fn p(&self) -> usize {
        match self {
            QesFamily::Sextic1D { p, .. }
            | QesFamily::SexticRadial { p, .. }
            | QesFamily::Harmonium { p, .. }
            | QesFamily::Spiked { p, .. } => *p,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            QesFamily::Sextic1D { .. } => "sextic-1d",
            QesFamily::SexticRadial { .. } => "sextic-radial",
            QesFamily::Harmonium { .. } => "harmonium",
            QesFamily::Spiked { .. } => "spiked",
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            QesFamily::Sextic1D { nu, lambda, .. } => {
                if *nu > 1 {
                    return Err(Error::InvalidInput("ν must be 0 or 1".into()));
                }
                positive(lambda, "λ")
            }
            QesFamily::SexticRadial { lambda, .. } | QesFamily::Harmonium { lambda, .. } => positive(lambda, "λ"),
            QesFamily::Spiked { omega, .. } => positive(omega, "ω"),
        }
    }

    /// Potential matching the family's conventions at given couplings.
    pub fn potential(&self, c: &Couplings<T>) -> Result<Potential<T>> {
        match self {
            QesFamily::Sextic1D { nu, .. } => {
                let parity = if *nu == 0 { Parity::Even } else { Parity::Odd };
                Potential::sextic(c.omega_sq.clone(), c.lambda.clone(), parity)
            }
            QesFamily::SexticRadial { l, .. } => {
                Potential::radial_power(*l, c.omega_sq.clone(), c.lambda.clone(), Power::int(6))
            }
            QesFamily::Harmonium { l, .. } => Potential::harmonium(*l, c.omega(), c.lambda.clone()),
            QesFamily::Spiked { l, .. } => Potential::spiked(*l, c.omega(), c.lambda.clone()),
        }
    }

    /// Level number in the full spectrum of the family's Hamiltonian: the
    /// sector index for radial problems, `2i + ν` in one dimension.
    pub fn level_number(&self, state_index: usize) -> usize {
        match self {
            QesFamily::Sextic1D { nu, .. } => 2 * state_index + *nu as usize,
            _ => state_index,
        }
    }
}

fn positive<T: Real>(x: &T, name: &str) -> Result<()> {
    if x.is_finite() && x.gt_zero() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be positive")))
    }
}

/// `(A_n, B_n, C_n)` of the recurrence `A_n a_{n+1} + B_n a_n + C_n a_{n-1} = 0`.
pub fn recurrence_coeffs<T: Real>(family: &QesFamily<T>, c: &Couplings<T>, energy: &T, n: usize) -> (T, T, T) {
    let nn = T::from_len(n);
    let two = T::from_int(2);
    match family {
        QesFamily::Sextic1D { nu, .. } => {
            let nu = T::from_int(i64::from(*nu));
            let a = (two.clone() * &nn + &two + &nu) * &(two.clone() * &nn + T::one() + &nu);
            let b = two.clone() * energy;
            let root = (two.clone() * &c.lambda).sqrt();
            let cc = -c.omega_sq.clone() - (T::from_int(4) * &nn - T::one() + two * &nu) * &root;
            (a, b, cc)
        }
        QesFamily::SexticRadial { l, .. } => {
            let l = T::from_int(i64::from(*l));
            let a = two.clone() * &(nn.clone() + T::one()) * &(T::from_int(3) + two.clone() * &nn + two.clone() * &l);
            let b = two.clone() * energy;
            let root = (two.clone() * &c.lambda).sqrt();
            let cc = -c.omega_sq.clone() - (T::one() + T::from_int(4) * &nn + two * &l) * &root;
            (a, b, cc)
        }
        QesFamily::Harmonium { l, .. } => {
            let l = T::from_int(i64::from(*l));
            let a = (nn.clone() + T::one()) * &(nn.clone() + two.clone() * &l + &two);
            let b = -c.lambda.clone();
            let cc = energy.clone() - (T::one() + two.clone() * &nn + two * &l) * &c.omega();
            (a, b, cc)
        }
        QesFamily::Spiked { l, .. } => {
            let l = T::from_int(i64::from(*l));
            let sigma = (two.clone() * &c.lambda).sqrt();
            let a = -T::from_int(4) * &sigma * &(nn.clone() + T::one());
            let b = -T::ratio(3, 4) - T::from_int(4) * &nn * &(nn.clone() + T::one())
                + l.clone() * &(l + T::one())
                + two.clone() * &sigma * &c.omega();
            let cc = -two.clone() * &(energy.clone() - two * &nn * &c.omega());
            (a, b, cc)
        }
    }
}

/// The relation that makes `C_{p+1}` vanish.
pub fn solvability_condition<T: Real>(family: &QesFamily<T>) -> Solvability<T> {
    let p = T::from_len(family.p());
    let two = T::from_int(2);
    match family {
        QesFamily::Sextic1D { nu, lambda, .. } => Solvability::OmegaSquared(
            -(T::from_int(3) + T::from_int(4) * &p + two.clone() * T::from_int(i64::from(*nu)))
                * &(two * lambda).sqrt(),
        ),
        QesFamily::SexticRadial { l, lambda, .. } => Solvability::OmegaSquared(
            -(T::from_int(5) + T::from_int(4) * &p + two.clone() * T::from_int(i64::from(*l)))
                * &(two * lambda).sqrt(),
        ),
        QesFamily::Harmonium { l, .. } => {
            Solvability::EnergyPerOmega(T::from_int(3) + two.clone() * T::from_int(i64::from(*l)) + two * &p)
        }
        QesFamily::Spiked { .. } => Solvability::EnergyPerOmega(two * &(p + T::one())),
    }
}

/// `D_p`, the `(p+1) × (p+1)` continuant of the recurrence at an energy.
pub fn determinant<T: Real>(family: &QesFamily<T>, c: &Couplings<T>, energy: &T) -> T {
    let p = family.p();
    let (mut a, mut b, mut cc) = (Vec::new(), Vec::new(), Vec::new());
    for n in 0..=p {
        let (an, bn, cn) = recurrence_coeffs(family, c, energy, n);
        a.push(an);
        b.push(bn);
        cc.push(cn);
    }
    continuant_det(&a, &b, &cc, p)
}

/// Energy fixed by the solvability condition, for families where it is.
fn tied_energy<T: Real>(family: &QesFamily<T>, omega: &T) -> Option<T> {
    match solvability_condition(family) {
        Solvability::EnergyPerOmega(f) => Some(f * omega),
        Solvability::OmegaSquared(_) => None,
    }
}

fn root_tol<T: Real>() -> T {
    T::epsilon() * T::from_int(64)
}

fn scan_points(p: usize) -> usize {
    64 * (p + 1) + 1
}

/// Largest Gershgorin row sum of a symmetric tridiagonal matrix with zero
/// diagonal and off-diagonal entries `s`.
fn gershgorin(s: &[f64]) -> f64 {
    let mut g: f64 = 0.0;
    for i in 0..=s.len() {
        let left = if i > 0 { s[i - 1] } else { 0.0 };
        let right = if i < s.len() { s[i] } else { 0.0 };
        g = g.max(left + right);
    }
    g
}

/// All exactly known levels of a family.
pub fn exact_energies<T: Real>(family: &QesFamily<T>, precision: &PrecisionConfig) -> Result<QesSolution<T>> {
    let _guard = precision.activate::<T>();
    family.validate()?;
    let p = family.p();
    let tol = root_tol::<T>();
    let levels = match family {
        QesFamily::Sextic1D { lambda, .. } | QesFamily::SexticRadial { lambda, .. } => {
            let Solvability::OmegaSquared(omega_sq) = solvability_condition(family) else {
                unreachable!("sextic families fix ω²")
            };
            let c = Couplings {
                omega_sq,
                lambda: lambda.clone(),
            };
            let zero = T::zero();
            // off-diagonal products A_{n} C_{n+1} > 0 give a symmetric form
            let offdiag: Vec<T> = (0..p)
                .map(|n| {
                    let (a, _, _) = recurrence_coeffs(family, &c, &zero, n);
                    let (_, _, cn) = recurrence_coeffs(family, &c, &zero, n + 1);
                    (a * &cn).sqrt()
                })
                .collect();
            let bound = gershgorin(&offdiag.iter().map(|x| x.lossy_f64()).collect::<Vec<_>>()) / 2.0;
            let edge = T::from_f64(bound * 1.01 + 1.0).expect("finite bound");
            let scan = poly_roots_real(
                |e: &T| determinant(family, &c, e),
                ScanGrid::Uniform {
                    lo: -edge.clone(),
                    hi: edge,
                    points: scan_points(p),
                },
                p + 1,
                &tol,
            )
            .require_complete(p + 1)?;
            let energies = scan.values();
            if energies.len() != p + 1 {
                return Err(Error::MissingRoots {
                    found: energies.len(),
                    expected: p + 1,
                });
            }
            // cross-check: E = -μ/2 for the eigenvalues μ of the symmetric form
            let j = SymMatrix::from_fn(p + 1, |r, s| {
                if r == s + 1 {
                    offdiag[s].clone()
                } else if s == r + 1 {
                    offdiag[r].clone()
                } else {
                    T::zero()
                }
            });
            let mut mu: Vec<T> = eigvalsh(&j, precision)?.into_iter().map(|m| -m / T::from_int(2)).collect();
            mu.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            let scale = offdiag.iter().fold(T::one(), |m, x| m.max_of(x.abs()));
            for (e, m) in energies.iter().zip(&mu) {
                if (e.clone() - m).abs() > precision.tolerance::<T>().sqrt() * &scale {
                    return Err(Error::QesViolation(format!(
                        "root {} disagrees with the tridiagonal eigenvalue {}",
                        e.to_decimal(20),
                        m.to_decimal(20)
                    )));
                }
            }
            energies
                .into_iter()
                .enumerate()
                .map(|(i, energy)| QesLevel {
                    energy,
                    couplings: c.clone(),
                    state_index: i,
                })
                .collect::<Vec<_>>()
        }
        QesFamily::Harmonium { p, l, lambda } => {
            // with u = 1/√ω the condition is det(-λu I + J) = 0 where J has
            // off-diagonal products A_{n-1} · 2(p+1-n)
            let l = T::from_int(i64::from(*l));
            let prods: Vec<T> = (1..=*p)
                .map(|n| {
                    let nn = T::from_len(n);
                    nn.clone() * &(nn.clone() - T::one() + T::from_int(2) * &l + T::from_int(2))
                        * T::from_int(2)
                        * T::from_len(p + 1 - n)
                })
                .collect();
            let s: Vec<f64> = prods.iter().map(|x| x.lossy_f64().sqrt()).collect();
            let bound = gershgorin(&s) / lambda.lossy_f64();
            let expected = (p + 1) / 2;
            let poly = |u: &T| {
                let b = vec![-lambda.clone() * u; p + 1];
                let a = vec![T::one(); *p];
                let mut c = vec![T::zero()];
                c.extend(prods.iter().cloned());
                continuant_det(&a, &b, &c, *p)
            };
            let hi = T::from_f64(bound * 1.01).expect("finite bound");
            let lo = hi.clone() * T::from_f64(1e-9).expect("constant");
            let scan = poly_roots_real(
                poly,
                ScanGrid::Uniform {
                    lo,
                    hi,
                    points: scan_points(*p),
                },
                expected,
                &tol,
            )
            .require_complete(expected)?;
            // cross-check against the eigenvalues of J
            let j = SymMatrix::from_fn(p + 1, |r, c| {
                if r == c + 1 {
                    prods[c].sqrt()
                } else if c == r + 1 {
                    prods[r].sqrt()
                } else {
                    T::zero()
                }
            });
            let spectrum = eigvalsh(&j, precision)?;
            let cut = spectrum.iter().fold(T::zero(), |m, x| m.max_of(x.abs())) * &precision.tolerance::<T>().sqrt();
            let mut mu: Vec<T> = spectrum.into_iter().filter(|m| *m > cut).collect();
            mu.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            let mut omegas: Vec<T> = scan.values().into_iter().map(|u| T::one() / &u.square()).collect();
            let mut reference: Vec<T> = mu.iter().map(|m| (lambda.clone() / m).square()).collect();
            omegas.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
            reference.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
            if omegas.len() != reference.len()
                || omegas
                    .iter()
                    .zip(&reference)
                    .any(|(a, b)| relative(a, b) > precision.tolerance::<T>().sqrt())
            {
                return Err(Error::QesViolation(format!("harmonium roots disagree with the eigenvalue form: {:?} vs {:?}", omegas.iter().map(|x| x.to_decimal(12)).collect::<Vec<_>>(), reference.iter().map(|x| x.to_decimal(12)).collect::<Vec<_>>())));
            }
            let mut levels = Vec::new();
            for omega in omegas {
                let energy = tied_energy(family, &omega).expect("energy tied to ω");
                let c = Couplings {
                    omega_sq: omega.square(),
                    lambda: lambda.clone(),
                };
                let nodes = series_nodes(family, &c, &energy)?;
                levels.push(QesLevel {
                    energy,
                    couplings: c,
                    state_index: nodes,
                });
            }
            levels.sort_by_key(|l| l.state_index);
            levels
        }
        QesFamily::Spiked { p, l, omega } => {
            // s = (2λ)^{1/4}; det M(s) = 0 with M = diag(β_n + 2ωs²) + s K
            let beta_max = (0..=*p)
                .map(|n| {
                    let n = n as f64;
                    let l = f64::from(*l);
                    (-0.75 - 4.0 * n * (n + 1.0) + l * (l + 1.0)).abs()
                })
                .fold(0.0, f64::max);
            let w = omega.lossy_f64();
            let kentries: Vec<f64> = (1..=*p)
                .map(|n| (16.0 * w * n as f64 * (p + 1 - n) as f64).sqrt())
                .collect();
            let k = gershgorin(&kentries);
            let s_max = (k + (k * k + 8.0 * w * beta_max).sqrt()) / (4.0 * w);
            let energy = tied_energy(family, omega).expect("energy tied to ω");
            let hi = T::from_f64(s_max * 1.01 + 1e-3).expect("finite bound");
            let lo = hi.clone() * T::from_f64(1e-9).expect("constant");
            let two = T::from_int(2);
            let couplings_at = |s: &T| Couplings {
                omega_sq: omega.square(),
                lambda: s.powi(4) / &two,
            };
            let scan = poly_roots_real(
                |s: &T| determinant(family, &couplings_at(s), &energy),
                ScanGrid::Uniform {
                    lo,
                    hi,
                    points: scan_points(*p) * 4,
                },
                p + 1,
                &tol,
            );
            let mut lambdas: Vec<T> = scan.values().iter().map(|s| couplings_at(s).lambda).collect();
            if lambdas.is_empty() {
                return Err(Error::MissingRoots {
                    found: 0,
                    expected: p + 1,
                });
            }
            lambdas.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
            lambdas
                .into_iter()
                .enumerate()
                .map(|(i, lambda)| QesLevel {
                    energy: energy.clone(),
                    couplings: Couplings {
                        omega_sq: omega.square(),
                        lambda,
                    },
                    state_index: i,
                })
                .collect()
        }
    };
    Ok(QesSolution {
        family: family.clone(),
        levels,
    })
}

fn relative<T: Real>(a: &T, b: &T) -> T {
    (a.clone() - b).abs() / &b.abs().max_of(T::epsilon())
}

/// Series coefficients `a_0 = 1, …, a_p` and the would-be `a_{p+1}`.
pub fn series_coefficients<T: Real>(family: &QesFamily<T>, c: &Couplings<T>, energy: &T) -> Result<(Vec<T>, T)> {
    let p = family.p();
    let mut a = vec![T::one()];
    let mut prev = T::zero();
    for n in 0..=p {
        let (an, bn, cn) = recurrence_coeffs(family, c, energy, n);
        if an.is_zero() {
            return Err(Error::QesViolation(format!("A_{n} vanishes")));
        }
        let next = -(bn * &a[n] + cn * &prev) / &an;
        prev = a[n].clone();
        a.push(next);
    }
    let tail = a.pop().expect("p + 2 entries");
    Ok((a, tail))
}

/// Nodes of the series polynomial on the positive axis.
fn series_nodes<T: Real>(family: &QesFamily<T>, c: &Couplings<T>, energy: &T) -> Result<usize> {
    let (a, _) = series_coefficients(family, c, energy)?;
    let p = a.len() - 1;
    if p == 0 {
        return Ok(0);
    }
    let lead = a[p].abs();
    let cauchy = a[..p].iter().fold(T::zero(), |m, x| m.max_of(x.abs() / &lead)) + T::one();
    let variations = a
        .windows(2)
        .filter(|w| (w[0].lt_zero() && w[1].gt_zero()) || (w[0].gt_zero() && w[1].lt_zero()))
        .count();
    if variations == 0 {
        return Ok(0);
    }
    let poly = |y: &T| a.iter().rev().fold(T::zero(), |acc, k| acc * y + k);
    let scan = poly_roots_real(
        poly,
        ScanGrid::Uniform {
            lo: T::zero(),
            hi: cauchy,
            points: 256 * (p + 1),
        },
        variations,
        &root_tol::<T>(),
    );
    Ok(scan.count())
}
