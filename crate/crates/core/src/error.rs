use thiserror::Error;

use crate::counts::Setting;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library. Magnitudes are reported as
/// `f64` regardless of the scalar type in use.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Pauli index {0} out of range 0..=3")]
    PauliIndexOutOfRange(u8),
    #[error("identity index not allowed here; use 1, 2 or 3")]
    IdentityIndexNotAllowed,
    #[error("observable is not Hermitian (max |M - M†| = {deviation:e})")]
    NonHermitianObservable { deviation: f64 },
    #[error("operator is not unitary (max |U†U - I| = {deviation:e})")]
    NonUnitary { deviation: f64 },
    #[error("state vector not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },
    #[error("density matrix not Hermitian (max |ρ - ρ†| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("density matrix has negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },
    #[error("{what} = {value} outside its allowed range")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("invalid Schmidt coefficients a = {a}, b = {b}")]
    InvalidSchmidt { a: f64, b: f64 },
    #[error("invalid LUR spec: {0}")]
    InvalidLurSpec(&'static str),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown basis label {label:?}")]
    UnknownLabel { line: usize, label: String },
    #[error("line {line}: duplicate setting {setting}")]
    DuplicateSetting { line: usize, setting: Setting },
    #[error("missing setting {0}")]
    MissingSetting(Setting),
    #[error("no counts in the measurement group containing {0}")]
    EmptyGroup(Setting),
}
