//! Scalar abstraction shared by every module.
//!
//! All state and operator algebra is written against [`Real`], so the same
//! code runs in `f64` (the default, used for every numeric guarantee in the
//! test suite) and in `f32` for memory-light bulk simulation.

use std::fmt::{Debug, Display};

use nalgebra::{Complex, RealField};

/// Real scalar type underlying the complex amplitudes.
///
/// The tolerances are the defaults used by validating operations; they are
/// scaled to the precision of the type.
pub trait Real: RealField + Copy + Debug + Display + num_traits::ToPrimitive {
    /// Tolerance for exact algebra: hermiticity, unitarity, trace, imaginary residues.
    const ALGEBRA_TOL: f64;
    /// Allowed negative residue on eigenvalues of a density matrix.
    const EIGEN_TOL: f64;
    /// Allowed deviation of a ket norm from one.
    const NORM_TOL: f64;

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const ALGEBRA_TOL: f64 = 1e-10;
    const EIGEN_TOL: f64 = 1e-8;
    const NORM_TOL: f64 = 1e-9;

    #[inline]
    fn lit(x: f64) -> Self {
        x
    }
}

impl Real for f32 {
    const ALGEBRA_TOL: f64 = 1e-5;
    const EIGEN_TOL: f64 = 1e-4;
    const NORM_TOL: f64 = 1e-5;

    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn cx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}
