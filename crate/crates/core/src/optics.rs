//! Polarization optics: SPDC-type state preparation, waveplates,
//! phase-damping channels and analyzer projectors.
//!
//! Waveplate angles are measured between the optic axis and the vertical.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qcore::{
    hermitize, pauli_operator, tensor_product, DensityMatrix, Ket2, Ket4, Op2, Op4, PauliIndex,
};
use crate::scalar::{cx, re, Real};

/// Analyzer settings. `D`/`A` are `|±⟩ = (|H⟩ ± |V⟩)/√2`, `R`/`L` are
/// `(|H⟩ ± i|V⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    H,
    V,
    D,
    A,
    R,
    L,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 6] = [Self::H, Self::V, Self::D, Self::A, Self::R, Self::L];

    /// Position in [`BasisLabel::ALL`].
    pub fn ordinal(self) -> usize {
        self as usize
    }

    pub fn ket<T: Real>(self) -> Ket2<T> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Self::H => Ket2::new(cx(1.0, 0.0), cx(0.0, 0.0)),
            Self::V => Ket2::new(cx(0.0, 0.0), cx(1.0, 0.0)),
            Self::D => Ket2::new(cx(h, 0.0), cx(h, 0.0)),
            Self::A => Ket2::new(cx(h, 0.0), cx(-h, 0.0)),
            Self::R => Ket2::new(cx(h, 0.0), cx(0.0, h)),
            Self::L => Ket2::new(cx(h, 0.0), cx(0.0, -h)),
        }
    }

    /// The Pauli operator this label is an eigenvector of.
    pub fn pauli(self) -> PauliIndex {
        match self {
            Self::D | Self::A => PauliIndex::X,
            Self::R | Self::L => PauliIndex::Y,
            Self::H | Self::V => PauliIndex::Z,
        }
    }

    /// Eigenvalue (±1) of [`BasisLabel::pauli`] on this label.
    pub fn sign(self) -> i8 {
        match self {
            Self::H | Self::D | Self::R => 1,
            Self::V | Self::A | Self::L => -1,
        }
    }

    /// `(+1 eigenvector, −1 eigenvector)` of a non-identity Pauli.
    pub fn eigenbasis(i: PauliIndex) -> Result<(BasisLabel, BasisLabel)> {
        match i.require_local()?.get() {
            1 => Ok((Self::D, Self::A)),
            2 => Ok((Self::R, Self::L)),
            _ => Ok((Self::H, Self::V)),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::H => "H",
            Self::V => "V",
            Self::D => "D",
            Self::A => "A",
            Self::R => "R",
            Self::L => "L",
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for BasisLabel {
    type Err = ();

    /// Accepts the canonical letters plus `+` for D and `-` for A.
    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        match s {
            "H" => Ok(Self::H),
            "V" => Ok(Self::V),
            "D" | "+" => Ok(Self::D),
            "A" | "-" => Ok(Self::A),
            "R" => Ok(Self::R),
            "L" => Ok(Self::L),
            _ => Err(()),
        }
    }
}

/// `|x⟩⟨x|`.
pub fn basis_projector<T: Real>(x: BasisLabel) -> Op2<T> {
    let k = x.ket::<T>();
    k * k.adjoint()
}

/// `|x⟩⟨x| ⊗ |y⟩⟨y|`.
pub fn joint_projector<T: Real>(a: BasisLabel, b: BasisLabel) -> Op4<T> {
    tensor_product(&basis_projector(a), &basis_projector(b))
}

/// `cos 2θ |HH⟩ + sin 2θ |VV⟩`, θ being the pump half-wave-plate angle.
pub fn prepare_parallel<T: Real>(theta: T) -> Ket4<T> {
    let two = theta * T::lit(2.0);
    let o = T::zero();
    let v = [two.cos(), o, o, two.sin()];
    Ket4::from_fn(|r, _| re(v[r]))
}

/// `cos 2θ |HV⟩ − sin 2θ |VH⟩`.
pub fn prepare_antiparallel<T: Real>(theta: T) -> Ket4<T> {
    let two = theta * T::lit(2.0);
    let o = T::zero();
    let v = [o, two.cos(), -two.sin(), o];
    Ket4::from_fn(|r, _| re(v[r]))
}

/// A named product basis state such as `|HH⟩`.
pub fn product_ket<T: Real>(a: BasisLabel, b: BasisLabel) -> Ket4<T> {
    crate::qcore::kron_ket(&a.ket(), &b.ket())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveplateKind {
    Half,
    Quarter,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveplateSpec<T: Real> {
    pub kind: WaveplateKind,
    /// Radians.
    pub angle: T,
}

impl<T: Real> WaveplateSpec<T> {
    pub fn half(angle: T) -> Self {
        WaveplateSpec {
            kind: WaveplateKind::Half,
            angle,
        }
    }

    pub fn quarter(angle: T) -> Self {
        WaveplateSpec {
            kind: WaveplateKind::Quarter,
            angle,
        }
    }
}

/// Jones matrix of an ideal waveplate.
///
/// HWP(θ) = `[[cos2θ, sin2θ], [sin2θ, −cos2θ]]`;
/// QWP(θ) = `[[cos²θ + i sin²θ, (1−i) sinθ cosθ], [(1−i) sinθ cosθ, sin²θ + i cos²θ]]`.
pub fn waveplate_unitary<T: Real>(w: &WaveplateSpec<T>) -> Op2<T> {
    let i = cx::<T>(0.0, 1.0);
    match w.kind {
        WaveplateKind::Half => {
            let (s, c) = (w.angle * T::lit(2.0)).sin_cos();
            Op2::new(re(c), re(s), re(s), re(-c))
        }
        WaveplateKind::Quarter => {
            let (s, c) = w.angle.sin_cos();
            let off = cx::<T>(1.0, -1.0) * re(s * c);
            Op2::new(
                re(c * c) + i * re(s * s),
                off,
                off,
                re(s * s) + i * re(c * c),
            )
        }
    }
}

/// Basis in which a phase-damping channel destroys coherence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DampingBasis {
    /// Kraus set `{√(1−p) I, √p σ₁}`, dephasing in `{|H⟩ ± |V⟩}`.
    X,
    /// Kraus set `{√(1−p) I, √p σ₃}`, dephasing in `{H, V}`.
    Z,
}

impl DampingBasis {
    fn pauli(self) -> PauliIndex {
        match self {
            Self::X => PauliIndex::X,
            Self::Z => PauliIndex::Z,
        }
    }
}

/// Identical local phase-damping channels on both arms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec<T: Real> {
    basis: DampingBasis,
    p: T,
}

impl<T: Real> ChannelSpec<T> {
    pub fn new(basis: DampingBasis, p: T) -> Result<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::OutOfRange {
                what: "damping probability p",
                value: p.to_f64_lossy(),
            });
        }
        Ok(ChannelSpec { basis, p })
    }

    pub fn basis(&self) -> DampingBasis {
        self.basis
    }

    pub fn p(&self) -> T {
        self.p
    }

    /// The two single-arm Kraus operators.
    pub fn local_kraus(&self) -> [Op2<T>; 2] {
        [
            Op2::identity() * re((T::one() - self.p).sqrt()),
            pauli_operator(self.basis.pauli()) * re(self.p.sqrt()),
        ]
    }

    /// The four joint Kraus operators `Kᵢ ⊗ Kⱼ`.
    pub fn joint_kraus(&self) -> [Op4<T>; 4] {
        let [k0, k1] = self.local_kraus();
        [
            tensor_product(&k0, &k0),
            tensor_product(&k0, &k1),
            tensor_product(&k1, &k0),
            tensor_product(&k1, &k1),
        ]
    }
}

/// `Σ K ρ K†` over the joint Kraus set.
pub fn phase_damping<T: Real>(rho: &DensityMatrix<T>, chan: &ChannelSpec<T>) -> DensityMatrix<T> {
    let out = chan
        .joint_kraus()
        .iter()
        .fold(Op4::zeros(), |acc, k| acc + k * rho.matrix() * k.adjoint());
    DensityMatrix::from_matrix_unchecked(hermitize(&out))
}
