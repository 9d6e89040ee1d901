//! JSON report shapes.

use qlur::measures::concurrence_from_g;
use qlur::{CountsTable, GResult, KResult};
use serde::Serialize;

/// Where the counts came from.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Inputs {
    File(FileInput),
    Simulation(SimInput),
}

#[derive(Debug, Clone, Serialize)]
pub struct FileInput {
    pub file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl FileInput {
    pub fn new(file: &std::path::Path, table: &CountsTable) -> Self {
        FileInput {
            file: file.display().to_string(),
            source: table.source.clone(),
            noise: table.noise.map(|n| n.as_str().to_string()),
            seed: table.seed.map(|s| s.0),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimInput {
    pub state: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hwp: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub qwp: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub damp: Option<String>,
    pub n: f64,
    pub noise: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KReport {
    pub theta_deg: f64,
    pub value: f64,
    pub bound: f64,
    pub expectations: [f64; 4],
    pub delta_k: f64,
    pub witnesses_entanglement: bool,
}

impl KReport {
    pub fn new(theta_deg: f64, k: &KResult) -> Self {
        let delta_k = k.delta_k.unwrap_or(0.0);
        KReport {
            theta_deg,
            value: k.k,
            bound: k.bound,
            expectations: k.expectations,
            delta_k,
            witnesses_entanglement: k.k + delta_k < k.bound,
        }
    }
}

/// Single-analysis report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub inputs: Inputs,
    pub g: f64,
    pub delta_g: f64,
    pub covariance: [[f64; 3]; 3],
    pub concurrence_from_g: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tomo_concurrence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<KReport>,
}

/// Concurrence implied by `g` under the pure-state relation. Sampling noise
/// can push `g` slightly past 3; such values are read as 3.
pub fn implied_concurrence(g: f64) -> f64 {
    concurrence_from_g(g.clamp(0.0, 3.0)).expect("clamped into range")
}

impl Report {
    pub fn new(inputs: Inputs, g: &GResult) -> Self {
        Report {
            inputs,
            g: g.g,
            delta_g: g.delta_g.unwrap_or(0.0),
            covariance: g.covariance.rows(),
            concurrence_from_g: implied_concurrence(g.g),
            tomo_concurrence: None,
            k: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IlutReport {
    pub before: Report,
    pub after: Report,
    pub difference: f64,
    pub combined_sigma: f64,
    pub k: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TomoReport {
    pub inputs: FileInput,
    pub eigenvalues: [f64; 4],
    pub purity: f64,
    pub tomo_concurrence: f64,
    pub density_re: [[f64; 4]; 4],
    pub density_im: [[f64; 4]; 4],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_distance: Option<f64>,
}
