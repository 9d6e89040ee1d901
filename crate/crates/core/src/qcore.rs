//! Exact two-qubit state and operator algebra.
//!
//! Kets and operators are plain `nalgebra` vectors and matrices over
//! `Complex<T>`. The basis order for two-qubit objects is
//! `|HH⟩, |HV⟩, |VH⟩, |VV⟩` (first factor is arm A), with `H ↔ |0⟩`.

use std::fmt;

use nalgebra::{
    Complex, ComplexField, Matrix2, Matrix4, SMatrix, SymmetricEigen, Vector2, Vector4,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{cx, re, Real};

pub type Ket2<T> = Vector2<Complex<T>>;
pub type Ket4<T> = Vector4<Complex<T>>;
pub type Op2<T> = Matrix2<Complex<T>>;
pub type Op4<T> = Matrix4<Complex<T>>;

/// Index into `{I, σ₁, σ₂, σ₃}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliIndex(u8);

impl PauliIndex {
    pub const I: PauliIndex = PauliIndex(0);
    pub const X: PauliIndex = PauliIndex(1);
    pub const Y: PauliIndex = PauliIndex(2);
    pub const Z: PauliIndex = PauliIndex(3);
    /// The three non-identity indices in order.
    pub const LOCAL: [PauliIndex; 3] = [Self::X, Self::Y, Self::Z];
    pub const ALL: [PauliIndex; 4] = [Self::I, Self::X, Self::Y, Self::Z];

    pub fn new(i: u8) -> Result<Self> {
        if i <= 3 {
            Ok(PauliIndex(i))
        } else {
            Err(Error::PauliIndexOutOfRange(i))
        }
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    pub(crate) fn require_local(self) -> Result<Self> {
        if self.is_identity() {
            Err(Error::IdentityIndexNotAllowed)
        } else {
            Ok(self)
        }
    }
}

impl fmt::Display for PauliIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "I"),
            i => write!(f, "σ{i}"),
        }
    }
}

/// Seed for every random draw in the crate. Equal seeds give equal streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RandomSeed(pub u64);

impl RandomSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Rng for the `stream`-th independent substream of this seed.
    pub fn substream(self, stream: u64) -> ChaCha8Rng {
        let mut rng = self.rng();
        rng.set_stream(stream);
        rng
    }

    /// A decorrelated child seed (splitmix64 finaliser over `seed + index`).
    pub fn derive(self, index: u64) -> RandomSeed {
        let mut z = self
            .0
            .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RandomSeed(z ^ (z >> 31))
    }
}

/// Standard Pauli matrix in the `{H, V}` basis.
pub fn pauli_operator<T: Real>(i: PauliIndex) -> Op2<T> {
    let o = cx(0.0, 0.0);
    match i.get() {
        0 => Op2::identity(),
        1 => Op2::new(o, cx(1.0, 0.0), cx(1.0, 0.0), o),
        2 => Op2::new(o, cx(0.0, -1.0), cx(0.0, 1.0), o),
        _ => Op2::new(cx(1.0, 0.0), o, o, cx(-1.0, 0.0)),
    }
}

/// Kronecker product `a ⊗ b`; `a` acts on arm A (the leading index).
pub fn tensor_product<T: Real>(a: &Op2<T>, b: &Op2<T>) -> Op4<T> {
    Op4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

pub fn kron_ket<T: Real>(a: &Ket2<T>, b: &Ket2<T>) -> Ket4<T> {
    Ket4::from_fn(|r, _| a[r / 2] * b[r % 2])
}

/// Two-qubit ket from real amplitudes on `|HH⟩, |HV⟩, |VH⟩, |VV⟩`.
pub fn real_ket<T: Real>(amps: [f64; 4]) -> Ket4<T> {
    Ket4::from_fn(|r, _| cx(amps[r], 0.0))
}

/// `(|HV⟩ − |VH⟩)/√2`.
pub fn singlet<T: Real>() -> Ket4<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    real_ket([0.0, h, -h, 0.0])
}

/// Largest entrywise modulus of `a − b`.
pub fn max_deviation<T: Real, const N: usize>(
    a: &SMatrix<Complex<T>, N, N>,
    b: &SMatrix<Complex<T>, N, N>,
) -> T {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).modulus())
        .fold(T::zero(), |m, d| m.max(d))
}

pub fn hermiticity_deviation<T: Real, const N: usize>(m: &SMatrix<Complex<T>, N, N>) -> T {
    max_deviation(m, &m.adjoint())
}

pub fn unitarity_deviation<T: Real, const N: usize>(m: &SMatrix<Complex<T>, N, N>) -> T {
    max_deviation(&(m.adjoint() * m), &SMatrix::identity())
}

pub fn is_hermitian<T: Real, const N: usize>(m: &SMatrix<Complex<T>, N, N>, tol: T) -> bool {
    hermiticity_deviation(m) <= tol
}

pub fn is_unitary<T: Real, const N: usize>(m: &SMatrix<Complex<T>, N, N>, tol: T) -> bool {
    unitarity_deviation(m) <= tol
}

/// `(M + M†)/2`.
pub fn hermitize<T: Real, const N: usize>(
    m: &SMatrix<Complex<T>, N, N>,
) -> SMatrix<Complex<T>, N, N> {
    (m + m.adjoint()).map(|z| z * re(T::lit(0.5)))
}

pub(crate) fn trace<T: Real, const N: usize>(m: &SMatrix<Complex<T>, N, N>) -> Complex<T> {
    (0..N).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + m[(i, i)])
}

/// `tr(A·B)` without forming the product.
pub(crate) fn trace_of_product<T: Real, const N: usize>(
    a: &SMatrix<Complex<T>, N, N>,
    b: &SMatrix<Complex<T>, N, N>,
) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..N {
        for j in 0..N {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Eigen-decomposition of a Hermitian 4×4 matrix. Only the Hermitian part of
/// the input is used.
pub fn hermitian_eigen<T: Real>(m: &Op4<T>) -> (Vector4<T>, Op4<T>) {
    let eig = SymmetricEigen::new(hermitize(m));
    (eig.eigenvalues, eig.eigenvectors)
}

/// Rebuilds `V diag(f(λ)) V†`.
pub(crate) fn spectral_map<T: Real>(
    values: &Vector4<T>,
    vectors: &Op4<T>,
    f: impl Fn(T) -> T,
) -> Op4<T> {
    let mut out = Op4::zeros();
    for k in 0..4 {
        let v = vectors.column(k);
        out += (v * v.adjoint()) * re(f(values[k]));
    }
    out
}

/// Principal square root of a PSD Hermitian matrix; negative residues clamp to 0.
pub fn psd_sqrt<T: Real>(m: &Op4<T>) -> Op4<T> {
    let (values, vectors) = hermitian_eigen(m);
    spectral_map(&values, &vectors, |x| x.max(T::zero()).sqrt())
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real>(Op4<T>);

impl<T: Real> DensityMatrix<T> {
    /// Wraps a matrix already known to satisfy the invariants.
    pub(crate) fn from_matrix_unchecked(m: Op4<T>) -> Self {
        DensityMatrix(m)
    }

    pub fn new(m: Op4<T>) -> Result<Self> {
        validate_density(&m, T::lit(T::ALGEBRA_TOL))
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(Op4::identity() * re(T::lit(0.25)))
    }

    /// Diagonal state with the given weights on `|HH⟩, |HV⟩, |VH⟩, |VV⟩`.
    pub fn diagonal(weights: [f64; 4]) -> Result<Self> {
        Self::new(Op4::from_diagonal(&Vector4::from_fn(|r, _| {
            cx(weights[r], 0.0)
        })))
    }

    pub fn matrix(&self) -> &Op4<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Op4<T> {
        self.0
    }

    pub fn trace(&self) -> T {
        trace(&self.0).re
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> T {
        trace_of_product(&self.0, &self.0).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [T; 4] {
        let (v, _) = hermitian_eigen(&self.0);
        let mut out = [v[0], v[1], v[2], v[3]];
        out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        out
    }

    /// `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &Self) -> T {
        let (v, _) = hermitian_eigen(&(self.0 - other.0));
        v.iter().fold(T::zero(), |acc, x| acc + x.abs()) * T::lit(0.5)
    }

    /// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`.
    pub fn fidelity(&self, other: &Self) -> T {
        let s = psd_sqrt(&self.0);
        let (v, _) = hermitian_eigen(&(s * other.0 * s));
        let root = v
            .iter()
            .fold(T::zero(), |acc, x| acc + x.max(T::zero()).sqrt());
        (root * root).min(T::one())
    }
}

/// `tr(ρ m)` for a Hermitian observable `m`.
pub fn expectation_value<T: Real>(rho: &DensityMatrix<T>, m: &Op4<T>) -> Result<T> {
    let tol = T::lit(T::ALGEBRA_TOL);
    let dev = hermiticity_deviation(m);
    if dev > tol {
        return Err(Error::NonHermitianObservable {
            deviation: dev.to_f64_lossy(),
        });
    }
    Ok(trace_of_product(&rho.0, m).re)
}

/// `|ψ⟩⟨ψ|` for a normalized ket.
pub fn pure_to_density<T: Real>(psi: &Ket4<T>) -> Result<DensityMatrix<T>> {
    let norm = psi.norm();
    if (norm - T::one()).abs() > T::lit(T::NORM_TOL) {
        return Err(Error::NotNormalized {
            norm: norm.to_f64_lossy(),
        });
    }
    Ok(DensityMatrix(psi * psi.adjoint()))
}

/// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†`.
pub fn apply_local_unitary<T: Real>(
    rho: &DensityMatrix<T>,
    ua: &Op2<T>,
    ub: &Op2<T>,
) -> Result<DensityMatrix<T>> {
    let tol = T::lit(T::ALGEBRA_TOL);
    for u in [ua, ub] {
        let dev = unitarity_deviation(u);
        if dev > tol {
            return Err(Error::NonUnitary {
                deviation: dev.to_f64_lossy(),
            });
        }
    }
    let u = tensor_product(ua, ub);
    Ok(DensityMatrix(u * rho.0 * u.adjoint()))
}

/// Checks hermiticity and trace against `tol`, and the smallest eigenvalue
/// against `-max(tol, T::EIGEN_TOL)`.
pub fn validate_density<T: Real>(m: &Op4<T>, tol: T) -> Result<DensityMatrix<T>> {
    let dev = hermiticity_deviation(m);
    if dev > tol {
        return Err(Error::NotHermitian {
            deviation: dev.to_f64_lossy(),
        });
    }
    let tr = trace(m);
    if (tr - re(T::one())).modulus() > tol {
        return Err(Error::BadTrace {
            trace: tr.re.to_f64_lossy(),
        });
    }
    let (values, _) = hermitian_eigen(m);
    let min = values
        .iter()
        .fold(T::max_value().unwrap(), |a, &b| a.min(b));
    if min < -tol.max(T::lit(T::EIGEN_TOL)) {
        return Err(Error::NegativeEigenvalue {
            value: min.to_f64_lossy(),
        });
    }
    Ok(DensityMatrix(*m))
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    cx(a, b)
}

/// Haar-random pure two-qubit state.
pub fn random_pure_with<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Ket4<T> {
    loop {
        let v = Ket4::from_fn(|_, _| gaussian::<T, R>(rng));
        let n = v.norm();
        if n > T::lit(1e-6) {
            return v.unscale(n);
        }
    }
}

/// Hilbert–Schmidt random mixed state `G G† / tr(G G†)`.
pub fn random_density_with<T: Real, R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix<T> {
    let g = Op4::from_fn(|_, _| gaussian::<T, R>(rng));
    let w = g * g.adjoint();
    let t = trace(&w).re;
    DensityMatrix(hermitize(&w).unscale(t))
}

/// Haar-random single-qubit ket.
pub fn random_qubit_with<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Ket2<T> {
    loop {
        let v = Ket2::from_fn(|_, _| gaussian::<T, R>(rng));
        let n = v.norm();
        if n > T::lit(1e-6) {
            return v.unscale(n);
        }
    }
}

/// Hilbert–Schmidt random single-qubit density matrix.
pub fn random_qubit_density_with<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Op2<T> {
    let g = Op2::from_fn(|_, _| gaussian::<T, R>(rng));
    let w = g * g.adjoint();
    let t = trace(&w).re;
    hermitize(&w).unscale(t)
}

/// Haar-random element of U(2).
pub fn random_unitary2_with<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Op2<T> {
    // A normalized complex pair (α, β) parameterizes SU(2); a uniform global
    // phase completes U(2).
    let v = random_qubit_with::<T, R>(rng);
    let (a, b) = (v[0], v[1]);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let phase = cx::<T>(phi.cos(), phi.sin());
    Op2::new(a, -b.conj(), b, a.conj()) * phase
}

/// Random product state `ρ_A ⊗ ρ_B` with Hilbert–Schmidt marginals.
pub fn random_product_density_with<T: Real, R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix<T> {
    let a = random_qubit_density_with::<T, R>(rng);
    let b = random_qubit_density_with::<T, R>(rng);
    DensityMatrix(tensor_product(&a, &b))
}

pub fn random_pure<T: Real>(seed: RandomSeed) -> Ket4<T> {
    random_pure_with(&mut seed.rng())
}

pub fn random_density<T: Real>(seed: RandomSeed) -> DensityMatrix<T> {
    random_density_with(&mut seed.rng())
}

pub fn random_unitary2<T: Real>(seed: RandomSeed) -> Op2<T> {
    random_unitary2_with(&mut seed.rng())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn basis(i: usize) -> Ket4<f64> {
        let mut a = [0.0; 4];
        a[i] = 1.0;
        real_ket(a)
    }

    fn op(a: u8, b: u8) -> Op4<f64> {
        tensor_product(
            &pauli_operator(PauliIndex::new(a).unwrap()),
            &pauli_operator(PauliIndex::new(b).unwrap()),
        )
    }

    #[test]
    fn pauli_conventions() {
        let h: Ket2<f64> = Ket2::new(cx(1.0, 0.0), cx(0.0, 0.0));
        let v: Ket2<f64> = Ket2::new(cx(0.0, 0.0), cx(1.0, 0.0));
        assert_eq!(pauli_operator::<f64>(PauliIndex::Z) * h, h);
        assert_eq!(pauli_operator::<f64>(PauliIndex::X) * h, v);
        assert_eq!(pauli_operator::<f64>(PauliIndex::I), Op2::identity());
        for i in PauliIndex::ALL {
            let p = pauli_operator::<f64>(i);
            assert!(is_hermitian(&p, 1e-12));
            assert!(is_unitary(&p, 1e-12));
        }
    }

    #[test]
    fn pauli_algebra() {
        for i in PauliIndex::LOCAL {
            let p = pauli_operator::<f64>(i);
            assert!(max_deviation(&(p * p), &Op2::identity()) < 1e-12);
            for j in PauliIndex::LOCAL {
                if i != j {
                    let q = pauli_operator::<f64>(j);
                    assert!((p * q + q * p).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn pauli_index_range() {
        assert_eq!(PauliIndex::new(4), Err(Error::PauliIndexOutOfRange(4)));
        assert_eq!(PauliIndex::new(2).unwrap(), PauliIndex::Y);
    }

    #[test]
    fn tensor_product_examples() {
        assert_eq!(op(0, 0), Op4::identity());
        let zz = op(3, 3);
        let diag = Op4::from_diagonal(&Vector4::new(
            cx(1.0, 0.0),
            cx(-1.0, 0.0),
            cx(-1.0, 0.0),
            cx(1.0, 0.0),
        ));
        assert_eq!(zz, diag);
        assert_eq!(op(1, 1) * basis(0), basis(3));
    }

    #[test]
    fn expectation_examples() {
        let s = pure_to_density(&singlet::<f64>()).unwrap();
        assert_abs_diff_eq!(
            expectation_value(&s, &op(3, 3)).unwrap(),
            -1.0,
            epsilon = 1e-12
        );
        let hh = pure_to_density(&basis(0)).unwrap();
        assert_abs_diff_eq!(
            expectation_value(&hh, &op(3, 0)).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        let mm = DensityMatrix::<f64>::maximally_mixed();
        for a in 0..4u8 {
            for b in 0..4u8 {
                if a + b > 0 {
                    assert_abs_diff_eq!(expectation_value(&mm, &op(a, b)).unwrap(), 0.0);
                }
            }
        }
        let mut bad = op(1, 1);
        bad[(0, 1)] += cx(1e-3, 0.0);
        assert!(matches!(
            expectation_value(&mm, &bad),
            Err(Error::NonHermitianObservable { .. })
        ));
    }

    #[test]
    fn pure_to_density_examples() {
        let hh = pure_to_density(&basis(0)).unwrap();
        assert_eq!(hh.matrix()[(0, 0)], cx(1.0, 0.0));
        assert_abs_diff_eq!(hh.trace(), 1.0);
        let s = pure_to_density(&singlet::<f64>()).unwrap();
        assert_abs_diff_eq!(s.purity(), 1.0, epsilon = 1e-12);
        let half = basis(0) * cx(0.5, 0.0);
        assert_eq!(
            pure_to_density(&half),
            Err(Error::NotNormalized { norm: 0.5 })
        );
    }

    #[test]
    fn local_unitary_examples() {
        let rho = random_density::<f64>(RandomSeed(3));
        let same = apply_local_unitary(&rho, &Op2::identity(), &Op2::identity()).unwrap();
        assert!(max_deviation(same.matrix(), rho.matrix()) < 1e-14);

        let s = pure_to_density(&singlet::<f64>()).unwrap();
        let u = random_unitary2(RandomSeed(1));
        let w = random_unitary2(RandomSeed(2));
        let t = apply_local_unitary(&s, &u, &w).unwrap();
        for (a, b) in s.eigenvalues().iter().zip(t.eigenvalues()) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-10);
        }

        let mut not_u = Op2::<f64>::identity();
        not_u[(0, 0)] = cx(2.0, 0.0);
        assert!(matches!(
            apply_local_unitary(&s, &not_u, &Op2::identity()),
            Err(Error::NonUnitary { .. })
        ));
    }

    #[test]
    fn validate_examples() {
        assert!(DensityMatrix::<f64>::diagonal([0.5, 0.5, 0.0, 0.0]).is_ok());
        assert!(matches!(
            DensityMatrix::<f64>::diagonal([1.1, -0.1, 0.0, 0.0]),
            Err(Error::NegativeEigenvalue { .. })
        ));
        let mut m = *DensityMatrix::<f64>::maximally_mixed().matrix();
        m[(0, 1)] = cx(1e-3, 0.0);
        assert!(matches!(
            validate_density(&m, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
        let m = Op4::<f64>::identity() * cx(0.3, 0.0);
        assert!(matches!(
            validate_density(&m, 1e-10),
            Err(Error::BadTrace { .. })
        ));
    }

    #[test]
    fn random_generators_reproducible_and_valid() {
        assert_eq!(
            random_pure::<f64>(RandomSeed(9)),
            random_pure::<f64>(RandomSeed(9))
        );
        assert_ne!(
            random_pure::<f64>(RandomSeed(9)),
            random_pure::<f64>(RandomSeed(10))
        );
        assert_eq!(
            random_density::<f64>(RandomSeed(4)),
            random_density::<f64>(RandomSeed(4))
        );
        let mut rng = RandomSeed(77).rng();
        let mut purity_sum = 0.0;
        for _ in 0..1000 {
            let d = random_density_with::<f64, _>(&mut rng);
            validate_density(d.matrix(), 1e-10).unwrap();
            purity_sum += pure_to_density(&random_pure_with::<f64, _>(&mut rng))
                .unwrap()
                .purity();
            let u = random_unitary2_with::<f64, _>(&mut rng);
            assert!(is_unitary(&u, 1e-12));
        }
        assert_abs_diff_eq!(purity_sum / 1000.0, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn derived_seeds_differ() {
        let s = RandomSeed(5);
        assert_ne!(s.derive(0), s.derive(1));
        assert_eq!(s.derive(3), s.derive(3));
    }

    #[test]
    fn fidelity_and_trace_distance() {
        let s = pure_to_density(&singlet::<f64>()).unwrap();
        let hh = pure_to_density(&basis(0)).unwrap();
        assert_abs_diff_eq!(s.fidelity(&s), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(s.fidelity(&hh), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(s.trace_distance(&hh), 1.0, epsilon = 1e-12);
        let mm = DensityMatrix::<f64>::maximally_mixed();
        assert_abs_diff_eq!(s.fidelity(&mm), 0.25, epsilon = 1e-9);
    }

    #[test]
    fn single_precision_smoke() {
        let s = pure_to_density(&singlet::<f32>()).unwrap();
        let zz = tensor_product(
            &pauli_operator::<f32>(PauliIndex::Z),
            &pauli_operator::<f32>(PauliIndex::Z),
        );
        assert!((expectation_value(&s, &zz).unwrap() + 1.0).abs() < 1e-6);
        let d = random_density::<f32>(RandomSeed(1));
        assert!(validate_density(d.matrix(), 1e-5).is_ok());
    }
}
