//! Two-qubit entanglement quantification and verification via uncertainty
//! relations.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: two-qubit kets, operators and density matrices, Pauli
//!   algebra, validation and seeded random states.
//! - [`measures`]: covariances, the covariance-sum measure `G`, Wootters
//!   concurrence, the local uncertainty sum and the nonlocal variance sum `K`.
//! - [`optics`]: SPDC-style state preparation, waveplates, phase-damping
//!   channels and polarization analyzer projectors.
//! - [`counts`]: coincidence-count tables, simulation, CSV I/O and estimators
//!   with first-order Poisson error propagation.
//! - [`tomography`]: linear-inversion reconstruction with projection onto the
//!   physical state set.
//!
//! Everything is generic over [`Real`]; the aliases below fix the scalar to
//! `f64`, which is what the numeric guarantees are stated for.
//!
//! Basis order is `|HH⟩, |HV⟩, |VH⟩, |VV⟩` with `H ↔ |0⟩`, and the Pauli
//! convention is `σ₁ = X` (eigenbasis D/A), `σ₂ = Y` (R/L), `σ₃ = Z` (H/V).

pub mod counts;
pub mod error;
pub mod measures;
pub mod optics;
pub mod qcore;
pub mod scalar;
pub mod tomography;

pub use error::{Error, Result};
pub use scalar::Real;

pub use nalgebra::Complex;

pub type Ket2 = qcore::Ket2<f64>;
pub type Ket4 = qcore::Ket4<f64>;
pub type Op2 = qcore::Op2<f64>;
pub type Op4 = qcore::Op4<f64>;
pub type DensityMatrix = qcore::DensityMatrix<f64>;
pub type CovarianceMatrix = measures::CovarianceMatrix<f64>;
pub type GResult = measures::GResult<f64>;
pub type KResult = measures::KResult<f64>;
pub type KObservables = measures::KObservables<f64>;
pub type SchmidtCoeffs = measures::SchmidtCoeffs<f64>;
pub type LurSpec = measures::LurSpec<f64>;
pub type ChannelSpec = optics::ChannelSpec<f64>;
pub type WaveplateSpec = optics::WaveplateSpec<f64>;
pub type CountsTable = counts::CountsTable<f64>;
pub type EstimatedValue = counts::EstimatedValue<f64>;
pub type PauliVector = tomography::PauliVector<f64>;

/// Single-precision variants.
pub mod f32 {
    pub type DensityMatrix = crate::qcore::DensityMatrix<f32>;
    pub type GResult = crate::measures::GResult<f32>;
    pub type KResult = crate::measures::KResult<f32>;
    pub type SchmidtCoeffs = crate::measures::SchmidtCoeffs<f32>;
    pub type CountsTable = crate::counts::CountsTable<f32>;
}
