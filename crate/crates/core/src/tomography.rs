//! Density-matrix reconstruction from a full 36-setting count table.
//!
//! Linear inversion over the Pauli basis uses every setting (each joint
//! correlator from its own group, marginals from the diagonal groups). A
//! noisy inversion can have negative eigenvalues; physicality is restored
//! by projecting the spectrum onto the probability simplex.

use crate::counts::{joint_expectation, marginal_expectation, CountsTable, Side};
use crate::error::{Error, Result};
use crate::measures::concurrence;
use crate::qcore::{
    hermitian_eigen, hermitize, pauli_operator, tensor_product, trace_of_product, DensityMatrix,
    Op4, PauliIndex,
};
use crate::scalar::{re, Real};

/// `t[i][j] = ⟨σᵢ ⊗ σⱼ⟩` for `i, j ∈ {0..3}`, `t[0][0] = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliVector<T: Real> {
    t: [[T; 4]; 4],
}

impl<T: Real> PauliVector<T> {
    /// Fails unless `t[0][0] = 1` and every entry lies in `[−1, 1]` up to 1e-9.
    pub fn new(t: [[T; 4]; 4]) -> Result<Self> {
        if t[0][0] != T::one() {
            return Err(Error::OutOfRange {
                what: "t[0][0]",
                value: t[0][0].to_f64_lossy(),
            });
        }
        let slack = T::one() + T::lit(T::NORM_TOL);
        for row in &t {
            for &x in row {
                if !x.is_finite() || x.abs() > slack {
                    return Err(Error::OutOfRange {
                        what: "Pauli correlator",
                        value: x.to_f64_lossy(),
                    });
                }
            }
        }
        Ok(PauliVector { t })
    }

    /// The identity-only vector (maximally mixed state).
    pub fn identity() -> Self {
        let mut t = [[T::zero(); 4]; 4];
        t[0][0] = T::one();
        PauliVector { t }
    }

    /// Exact correlators of a known state.
    pub fn from_state(rho: &DensityMatrix<T>) -> Self {
        let mut t = [[T::zero(); 4]; 4];
        for i in PauliIndex::ALL {
            for j in PauliIndex::ALL {
                let op = tensor_product(&pauli_operator(i), &pauli_operator(j));
                t[i.get() as usize][j.get() as usize] = trace_of_product(rho.matrix(), &op).re;
            }
        }
        t[0][0] = T::one();
        PauliVector { t }
    }

    pub fn get(&self, i: PauliIndex, j: PauliIndex) -> T {
        self.t[i.get() as usize][j.get() as usize]
    }

    pub fn entries(&self) -> &[[T; 4]; 4] {
        &self.t
    }
}

pub fn pauli_vector_from_counts<T: Real>(table: &CountsTable<T>) -> Result<PauliVector<T>> {
    if let Some(s) = table.missing_full() {
        return Err(Error::MissingSetting(s));
    }
    let mut t = [[T::zero(); 4]; 4];
    t[0][0] = T::one();
    for i in PauliIndex::LOCAL {
        let k = i.get() as usize;
        t[k][0] = marginal_expectation(table, Side::A, i)?.value;
        t[0][k] = marginal_expectation(table, Side::B, i)?.value;
        for j in PauliIndex::LOCAL {
            t[k][j.get() as usize] = joint_expectation(table, i, j)?.value;
        }
    }
    PauliVector::new(t)
}

/// `ρ = ¼ Σᵢⱼ tᵢⱼ σᵢ ⊗ σⱼ`. Hermitian with unit trace, not necessarily PSD.
pub fn linear_inversion<T: Real>(t: &PauliVector<T>) -> Op4<T> {
    let mut rho = Op4::zeros();
    for i in PauliIndex::ALL {
        for j in PauliIndex::ALL {
            let op = tensor_product(&pauli_operator(i), &pauli_operator(j));
            rho += op * re(t.get(i, j));
        }
    }
    rho * re(T::lit(0.25))
}

/// Euclidean projection onto `{x ≥ 0, Σx = 1}`.
pub fn project_to_simplex<T: Real>(v: &[T]) -> Vec<T> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumulative = T::zero();
    let mut theta = T::zero();
    for (k, &x) in u.iter().enumerate() {
        cumulative += x;
        let candidate = (cumulative - T::one()) / T::lit((k + 1) as f64);
        if x - candidate > T::zero() {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(T::zero())).collect()
}

/// Hermitizes, then replaces the spectrum by its simplex projection.
pub fn project_to_physical<T: Real>(raw: &Op4<T>) -> DensityMatrix<T> {
    let (values, vectors) = hermitian_eigen(&hermitize(raw));
    let projected = project_to_simplex(values.as_slice());
    let mut m = Op4::zeros();
    for (k, &w) in projected.iter().enumerate() {
        let v = vectors.column(k);
        m += (v * v.adjoint()) * re(w);
    }
    DensityMatrix::from_matrix_unchecked(hermitize(&m))
}

/// Full pipeline: counts → Pauli vector → inversion → physical projection.
pub fn reconstruct<T: Real>(table: &CountsTable<T>) -> Result<DensityMatrix<T>> {
    Ok(project_to_physical(&linear_inversion(
        &pauli_vector_from_counts(table)?,
    )))
}

/// Concurrence of the reconstructed state.
pub fn tomo_concurrence<T: Real>(table: &CountsTable<T>) -> Result<T> {
    Ok(concurrence(&reconstruct(table)?))
}
