//! Optimized Rayleigh-Ritz spectra of one-dimensional and radial anharmonic
//! oscillators.
//!
//! The nonlinear basis parameters (frequency Ω and, for radial problems, the
//! pseudoharmonic index γ) are fixed by minimising the trace of the truncated
//! Hamiltonian. Everything is generic over [`Real`]; [`BigFloat`] gives
//! arbitrary precision and `f64` is supported for quick runs.

pub mod basis;
pub mod error;
pub mod numerics;
pub mod qes;
pub mod rr;
pub mod trace;

pub use basis::{BasisFamily, BasisSpec, Parity, Potential, PotentialKind, Power, Term};
pub use error::{Error, Result};
pub use numerics::{BigFloat, PrecisionConfig, Real, SymMatrix};
pub use qes::{ExactState, QesFamily, QesLevel, QesSolution};
pub use rr::{ConvergenceReport, MomentTable, SpectralResult};
pub use trace::{OptimizedParams, ProblemClass, Strategy, StrategyTag, TraceObjective};

pub type PotentialMp = Potential<BigFloat>;
pub type PotentialF64 = Potential<f64>;
pub type BasisSpecMp = BasisSpec<BigFloat>;
pub type SymMatrixMp = SymMatrix<BigFloat>;
pub type StrategyMp = Strategy<BigFloat>;
pub type SpectralResultMp = SpectralResult<BigFloat>;
pub type SpectralResultF64 = SpectralResult<f64>;
pub type ConvergenceReportMp = ConvergenceReport<BigFloat>;
pub type MomentTableMp = MomentTable<BigFloat>;
pub type QesFamilyMp = QesFamily<BigFloat>;
