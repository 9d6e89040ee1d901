use std::path::Path;

use qlur::optics::{
    phase_damping, prepare_antiparallel, prepare_parallel, product_ket, waveplate_unitary,
    BasisLabel, WaveplateSpec,
};
use qlur::qcore::{apply_local_unitary, pure_to_density, real_ket, singlet, validate_density};
use qlur::{ChannelSpec, Complex, DensityMatrix, Op2, Op4};
use serde::Deserialize;

use crate::args::{Arm, Family, PlateArg, StateFlags, TransformFlags};
use crate::error::CliError;

const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Resolves a state name such as `singlet`, `phi+` or `VH`.
pub fn named_state(name: &str) -> Result<DensityMatrix, CliError> {
    let ket = match name.to_ascii_lowercase().as_str() {
        "singlet" | "psi-" => singlet(),
        "psi+" => real_ket([0.0, H, H, 0.0]),
        "phi+" => real_ket([H, 0.0, 0.0, H]),
        "phi-" => real_ket([H, 0.0, 0.0, -H]),
        "mixed" => return Ok(DensityMatrix::maximally_mixed()),
        _ => {
            let labels: Vec<BasisLabel> = name
                .chars()
                .map(|c| c.to_string().parse::<BasisLabel>())
                .collect::<Result<_, ()>>()
                .map_err(|_| unknown_state(name))?;
            match labels.as_slice() {
                [a, b] => product_ket(*a, *b),
                _ => return Err(unknown_state(name)),
            }
        }
    };
    pure_to_density(&ket).map_err(CliError::core(format!("state {name}")))
}

fn unknown_state(name: &str) -> CliError {
    CliError::Usage(format!(
        "unknown state {name:?} (expected singlet, psi+, psi-, phi+, phi-, mixed or two labels from HVDARL)"
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    re: [[f64; 4]; 4],
    #[serde(default)]
    im: [[f64; 4]; 4],
}

/// Reads a density matrix stored as separate real and imaginary 4×4 arrays.
pub fn state_from_json(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let m: MatrixFile = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    let op = Op4::from_fn(|r, c| Complex::new(m.re[r][c], m.im[r][c]));
    validate_density(&op, 1e-9).map_err(CliError::core(path.display().to_string()))
}

/// An existing file is read as JSON; anything else is looked up by name.
pub fn reference_state(spec: &str) -> Result<DensityMatrix, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        state_from_json(path)
    } else {
        named_state(spec)
    }
}

pub fn family_state(family: Family, theta_deg: f64) -> Result<DensityMatrix, CliError> {
    let theta = theta_deg.to_radians();
    let ket = match family {
        Family::Parallel => prepare_parallel(theta),
        Family::Antiparallel => prepare_antiparallel(theta),
    };
    pure_to_density(&ket).map_err(CliError::core("prepared state"))
}

pub fn prepared_state(flags: &StateFlags) -> Result<DensityMatrix, CliError> {
    match &flags.state {
        Some(name) => named_state(name),
        None => family_state(flags.family, flags.theta),
    }
}

fn apply_plate(rho: &DensityMatrix, plate: &PlateArg, spec: WaveplateSpec<f64>) -> DensityMatrix {
    let u = waveplate_unitary(&spec);
    let id = Op2::identity();
    let (ua, ub) = match plate.arm {
        Arm::A => (u, id),
        Arm::B => (id, u),
    };
    apply_local_unitary(rho, &ua, &ub).expect("wave plates are unitary")
}

pub fn apply_transforms(
    rho: &DensityMatrix,
    t: &TransformFlags,
) -> Result<DensityMatrix, CliError> {
    let mut out = rho.clone();
    for plate in &t.hwp {
        out = apply_plate(&out, plate, WaveplateSpec::half(plate.degrees.to_radians()));
    }
    for plate in &t.qwp {
        out = apply_plate(
            &out,
            plate,
            WaveplateSpec::quarter(plate.degrees.to_radians()),
        );
    }
    if let Some(d) = t.damp {
        let chan = ChannelSpec::new(d.basis, d.p).map_err(CliError::core("--damp"))?;
        out = phase_damping(&out, &chan);
    }
    Ok(out)
}
