//! Scalar arithmetic, dense symmetric eigensolver, minimizers, root finding
//! and quadrature.

pub mod linalg;
pub mod minimize;
pub mod mp;
pub mod precision;
pub mod quadrature;
pub mod roots;
pub mod scalar;

pub use linalg::{eigh, eigvalsh, EigenDecomposition, SymMatrix};
pub use minimize::{golden_section, minimize_2d, minimize_scalar, Axis, Domain, Min2d, Pinned, ScalarMin, Spacing};
pub use mp::BigFloat;
pub use precision::{PrecisionConfig, PrecisionGuard};
pub use quadrature::{quadrature, quadrature_scaled, QuadDomain, QuadResult};
pub use roots::{continuant_det, continuant_sequence, poly_roots_real, Root, RootScan, ScanGrid};
pub use scalar::Real;
