//! Entanglement quantities evaluated exactly on a known state.

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::qcore::{
    expectation_value, hermiticity_deviation, pauli_operator, psd_sqrt, tensor_product,
    trace_of_product, DensityMatrix, Ket4, Op2, Op4, PauliIndex,
};
use crate::scalar::{re, Real};

/// `c[i][j] = C(σᵢ, σⱼ)` for `i, j ∈ {1, 2, 3}` (stored zero-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix<T: Real>(pub Matrix3<T>);

impl<T: Real> CovarianceMatrix<T> {
    pub fn get(&self, i: PauliIndex, j: PauliIndex) -> Result<T> {
        let (i, j) = (i.require_local()?, j.require_local()?);
        Ok(self.0[(i.get() as usize - 1, j.get() as usize - 1)])
    }

    /// Sum of squared entries.
    pub fn frobenius_sq(&self) -> T {
        self.0.iter().fold(T::zero(), |acc, &c| acc + c * c)
    }

    pub fn rows(&self) -> [[T; 3]; 3] {
        let m = &self.0;
        [0, 1, 2].map(|r| [m[(r, 0)], m[(r, 1)], m[(r, 2)]])
    }
}

/// The covariance-sum measure with its covariances and, for count data, a
/// propagated one-sigma uncertainty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GResult<T: Real> {
    pub g: T,
    pub covariance: CovarianceMatrix<T>,
    pub delta_g: Option<T>,
}

fn local_observable<T: Real>(side_a: PauliIndex, side_b: PauliIndex) -> Op4<T> {
    tensor_product(&pauli_operator(side_a), &pauli_operator(side_b))
}

/// `⟨σᵢ⊗σⱼ⟩ − ⟨σᵢ⊗I⟩⟨I⊗σⱼ⟩`.
pub fn covariance<T: Real>(rho: &DensityMatrix<T>, i: PauliIndex, j: PauliIndex) -> Result<T> {
    let (i, j) = (i.require_local()?, j.require_local()?);
    let joint = expectation_value(rho, &local_observable(i, j))?;
    let a = expectation_value(rho, &local_observable(i, PauliIndex::I))?;
    let b = expectation_value(rho, &local_observable(PauliIndex::I, j))?;
    Ok(joint - a * b)
}

pub fn covariance_matrix<T: Real>(rho: &DensityMatrix<T>) -> CovarianceMatrix<T> {
    let mut m = Matrix3::zeros();
    for (r, &i) in PauliIndex::LOCAL.iter().enumerate() {
        for (c, &j) in PauliIndex::LOCAL.iter().enumerate() {
            m[(r, c)] = covariance(rho, i, j).expect("Pauli products are Hermitian");
        }
    }
    CovarianceMatrix(m)
}

/// `G = Σᵢⱼ C²(σᵢ, σⱼ)`.
pub fn g_measure<T: Real>(rho: &DensityMatrix<T>) -> GResult<T> {
    let covariance = covariance_matrix(rho);
    GResult {
        g: covariance.frobenius_sq(),
        covariance,
        delta_g: None,
    }
}

/// `ρ̃ = (σ₂⊗σ₂) ρ* (σ₂⊗σ₂)`.
pub fn spin_flip<T: Real>(rho: &DensityMatrix<T>) -> Op4<T> {
    let yy = local_observable::<T>(PauliIndex::Y, PauliIndex::Y);
    yy * rho.matrix().map(|z| z.conj()) * yy
}

/// Wootters concurrence, clamped to `[0, 1]`.
///
/// The square roots `√λₖ` of the eigenvalues of `ρρ̃` are the singular values
/// of `√ρ (σ₂⊗σ₂) √ρ*`. Reading them off directly keeps near-zero entries at
/// rounding level instead of amplifying them through a square root.
pub fn concurrence<T: Real>(rho: &DensityMatrix<T>) -> T {
    let s = psd_sqrt(rho.matrix());
    let yy = local_observable::<T>(PauliIndex::Y, PauliIndex::Y);
    let r = s * yy * s.map(|z| z.conj());
    let sv = r.singular_values();
    concurrence_from_singular_values([sv[0], sv[1], sv[2], sv[3]])
}

fn concurrence_from_singular_values<T: Real>(mut r: [T; 4]) -> T {
    r.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    (r[0] - r[1] - r[2] - r[3]).max(T::zero()).min(T::one())
}

/// `max(0, √λ₁ − √λ₂ − √λ₃ − √λ₄)` for the (unsorted) eigenvalues of `ρρ̃`.
pub fn concurrence_from_spin_flip_eigenvalues<T: Real>(mut lambda: [T; 4]) -> T {
    lambda.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    concurrence_from_singular_values(lambda.map(|l| l.max(T::zero()).sqrt()))
}

fn check_range<T: Real>(what: &'static str, x: T, hi: T) -> Result<T> {
    let slack = T::lit(T::NORM_TOL);
    if x.is_finite() && x >= -slack && x <= hi + slack {
        Ok(x.max(T::zero()).min(hi))
    } else {
        Err(Error::OutOfRange {
            what,
            value: x.to_f64_lossy(),
        })
    }
}

/// `c²(c² + 2)`, the pure-state value of `G`.
pub fn g_from_concurrence<T: Real>(c: T) -> Result<T> {
    let c = check_range("concurrence", c, T::one())?;
    let c2 = c * c;
    Ok(c2 * (c2 + T::lit(2.0)))
}

/// Inverse of [`g_from_concurrence`]: `√(√(G + 1) − 1)`.
pub fn concurrence_from_g<T: Real>(g: T) -> Result<T> {
    let g = check_range("G", g, T::lit(3.0))?;
    Ok(((g + T::one()).sqrt() - T::one()).max(T::zero()).sqrt())
}

/// `(c²(c²+2), G, 2c²+1)`. The ordering is not enforced here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedBounds<T: Real> {
    pub lower: T,
    pub g: T,
    pub upper: T,
    pub concurrence: T,
}

impl<T: Real> MixedBounds<T> {
    pub fn holds(&self, slack: T) -> bool {
        self.lower - slack <= self.g && self.g <= self.upper + slack
    }
}

pub fn mixed_state_bounds<T: Real>(rho: &DensityMatrix<T>) -> MixedBounds<T> {
    let c = concurrence(rho);
    let c2 = c * c;
    MixedBounds {
        lower: c2 * (c2 + T::lit(2.0)),
        g: g_measure(rho).g,
        upper: T::lit(2.0) * c2 + T::one(),
        concurrence: c,
    }
}

/// Bound `U_A + U_B` for the three Pauli observables on each qubit.
pub const QUBIT_PAULI_LUR_BOUND: f64 = 4.0;

/// Paired local observables and the separable-state bound they are tested against.
#[derive(Debug, Clone, PartialEq)]
pub struct LurSpec<T: Real> {
    a: Vec<Op2<T>>,
    b: Vec<Op2<T>>,
    bound: T,
}

impl<T: Real> LurSpec<T> {
    pub fn new(a: Vec<Op2<T>>, b: Vec<Op2<T>>, bound: T) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidLurSpec("observable lists are empty"));
        }
        if a.len() != b.len() {
            return Err(Error::InvalidLurSpec("observable lists differ in length"));
        }
        let tol = T::lit(T::ALGEBRA_TOL);
        for m in a.iter().chain(&b) {
            let dev = hermiticity_deviation(m);
            if dev > tol {
                return Err(Error::NonHermitianObservable {
                    deviation: dev.to_f64_lossy(),
                });
            }
        }
        Ok(LurSpec { a, b, bound })
    }

    /// `Âᵢ = B̂ᵢ = σᵢ` for `i = 1, 2, 3` with bound 4.
    pub fn pauli_triple() -> Self {
        let ops: Vec<Op2<T>> = PauliIndex::LOCAL
            .iter()
            .map(|&i| pauli_operator(i))
            .collect();
        LurSpec {
            a: ops.clone(),
            b: ops,
            bound: T::lit(QUBIT_PAULI_LUR_BOUND),
        }
    }

    pub fn bound(&self) -> T {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LurOutcome<T: Real> {
    pub sum: T,
    pub violated: bool,
}

fn variance<T: Real>(rho: &DensityMatrix<T>, m: &Op4<T>) -> Result<T> {
    let mean = expectation_value(rho, m)?;
    let second = trace_of_product(rho.matrix(), &(m * m)).re;
    Ok(second - mean * mean)
}

/// `Σᵢ δ²(Âᵢ⊗I + I⊗B̂ᵢ)`, flagged as violated when below the bound.
pub fn lur_sum<T: Real>(rho: &DensityMatrix<T>, spec: &LurSpec<T>) -> Result<LurOutcome<T>> {
    let id = Op2::<T>::identity();
    let mut sum = T::zero();
    for (a, b) in spec.a.iter().zip(&spec.b) {
        let m = tensor_product(a, &id) + tensor_product(&id, b);
        sum += variance(rho, &m)?;
    }
    Ok(LurOutcome {
        sum,
        violated: sum < spec.bound - T::lit(T::ALGEBRA_TOL),
    })
}

/// Real amplitudes `(a, b)` of `a|00⟩ + b|11⟩`.
///
/// Both must be nonnegative with `a² + b² = 1`; `a < b` is accepted so that
/// a pump-angle sweep past 22.5° stays in one family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchmidtCoeffs<T: Real> {
    a: T,
    b: T,
}

impl<T: Real> SchmidtCoeffs<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        let tol = T::lit(T::NORM_TOL);
        if !(a >= T::zero() && b >= T::zero()) || (a * a + b * b - T::one()).abs() > tol {
            return Err(Error::InvalidSchmidt {
                a: a.to_f64_lossy(),
                b: b.to_f64_lossy(),
            });
        }
        Ok(SchmidtCoeffs { a, b })
    }

    /// `(cos 2θ, sin 2θ)` for a pump half-wave-plate angle θ in `[0, π/4]`.
    pub fn from_pump_angle(theta: T) -> Result<Self> {
        let two = theta * T::lit(2.0);
        // cos(π/2) is a tiny negative in floating point.
        let (a, b) = (two.cos(), two.sin());
        let snap = |x: T| {
            if x.abs() < T::lit(1e-15) {
                T::zero()
            } else {
                x
            }
        };
        Self::new(snap(a), snap(b))
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }
}

/// `M₁…M₄ = |ψᵢ⟩⟨ψᵢ|` with
/// `ψ₁ = a|00⟩+b|11⟩`, `ψ₂ = a|01⟩+b|10⟩`, `ψ₃ = −a|10⟩+b|01⟩`, `ψ₄ = b|00⟩−a|11⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct KObservables<T: Real> {
    pub kets: [Ket4<T>; 4],
    pub projectors: [Op4<T>; 4],
}

pub fn k_observables<T: Real>(s: &SchmidtCoeffs<T>) -> KObservables<T> {
    let (a, b) = (s.a, s.b);
    let z = T::zero();
    let ket = |v: [T; 4]| Ket4::from_fn(|r, _| re(v[r]));
    let kets = [
        ket([a, z, z, b]),
        ket([z, a, b, z]),
        ket([z, b, -a, z]),
        ket([b, z, z, -a]),
    ];
    let projectors = kets.map(|k| k * k.adjoint());
    KObservables { kets, projectors }
}

pub fn k_separable_bound<T: Real>(s: &SchmidtCoeffs<T>) -> T {
    let ab = s.a * s.b;
    T::lit(2.0) * ab * ab
}

/// Sum of variances of the four K projectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KResult<T: Real> {
    pub k: T,
    pub expectations: [T; 4],
    pub bound: T,
    pub delta_k: Option<T>,
}

impl<T: Real> KResult<T> {
    pub(crate) fn from_expectations(expectations: [T; 4], s: &SchmidtCoeffs<T>) -> Self {
        // Projector identity: δ²(M) = ⟨M⟩ − ⟨M⟩².
        let k = expectations
            .iter()
            .fold(T::zero(), |acc, &m| acc + m - m * m);
        KResult {
            k,
            expectations,
            bound: k_separable_bound(s),
            delta_k: None,
        }
    }

    /// True when `k` lies below the separable bound by more than `slack`.
    pub fn witnesses_entanglement(&self, slack: T) -> bool {
        self.k < self.bound - slack
    }
}

pub fn k_measure<T: Real>(rho: &DensityMatrix<T>, s: &SchmidtCoeffs<T>) -> KResult<T> {
    let obs = k_observables(s);
    let expectations = obs
        .projectors
        .map(|m| trace_of_product(rho.matrix(), &m).re);
    KResult::from_expectations(expectations, s)
}
