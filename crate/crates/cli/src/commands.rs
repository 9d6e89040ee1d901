use std::fmt::Write as _;
use std::path::Path;

use qlur::counts::{
    g_from_counts, k_from_counts, parse_counts_csv, simulate_counts, write_counts_csv, Setting,
    SimConfig,
};
use qlur::measures::{concurrence, SchmidtCoeffs};
use qlur::optics::{product_ket, BasisLabel};
use qlur::qcore::{pure_to_density, RandomSeed};
use qlur::tomography::{reconstruct, tomo_concurrence};
use qlur::{CountsTable, DensityMatrix};

use crate::args::{
    AnalyzeArgs, IlutArgs, SettingsMode, SimFlags, SimulateArgs, StateFlags, SweepArgs, TomoArgs,
    TransformFlags,
};
use crate::error::CliError;
use crate::report::{
    implied_concurrence, FileInput, IlutReport, Inputs, KReport, Report, SimInput, TomoReport,
};
use crate::states::{apply_transforms, family_state, prepared_state, reference_state};

/// Absolute slack added to the ILUT threshold so that noiseless inputs,
/// whose combined sigma is zero, are judged up to rounding.
pub const ILUT_ABS_TOL: f64 = 1e-9;

/// Reads and parses a counts CSV.
pub fn load_counts(path: &Path) -> Result<CountsTable, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_counts_csv(&text).map_err(CliError::core(path.display().to_string()))
}

fn sim_config(sim: &SimFlags, seed: RandomSeed) -> Result<SimConfig<f64>, CliError> {
    SimConfig::new(sim.n, sim.noise, seed).map_err(CliError::core("--n"))
}

fn sim_input(state: String, t: &TransformFlags, sim: &SimFlags) -> SimInput {
    SimInput {
        state,
        hwp: t.hwp.iter().map(ToString::to_string).collect(),
        qwp: t.qwp.iter().map(ToString::to_string).collect(),
        damp: t.damp.map(|d| d.to_string()),
        n: sim.n,
        noise: sim.noise.as_str().to_string(),
        seed: sim.seed,
    }
}

fn state_label(flags: &StateFlags) -> String {
    match &flags.state {
        Some(name) => name.clone(),
        None => format!("{}:{}", flags.family, flags.theta),
    }
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Report, CliError> {
    let ctx = args.file.display().to_string();
    let table = load_counts(&args.file)?;
    let g = g_from_counts(&table).map_err(CliError::core(ctx.clone()))?;
    let mut report = Report::new(Inputs::File(FileInput::new(&args.file, &table)), &g);
    if args.tomo {
        report.tomo_concurrence =
            Some(tomo_concurrence(&table).map_err(CliError::core(ctx.clone()))?);
    }
    if let Some(theta) = args.theta {
        let s = schmidt(theta)?;
        let k = k_from_counts(&table, &s).map_err(CliError::core(ctx))?;
        report.k = Some(KReport::new(theta, &k));
    }
    Ok(report)
}

fn schmidt(theta_deg: f64) -> Result<SchmidtCoeffs<f64>, CliError> {
    if !theta_deg.is_finite() {
        return Err(CliError::Usage(format!(
            "--theta {theta_deg} is not finite"
        )));
    }
    SchmidtCoeffs::from_pump_angle(theta_deg.to_radians()).map_err(CliError::core("--theta"))
}

fn settings_for(mode: SettingsMode) -> Vec<Setting> {
    match mode {
        SettingsMode::Full => Setting::full(),
        SettingsMode::K => Setting::k_mode(),
    }
}

pub fn simulate(args: &SimulateArgs) -> Result<CountsTable, CliError> {
    let rho = apply_transforms(&prepared_state(&args.state)?, &args.transform)?;
    let cfg = sim_config(&args.sim, RandomSeed(args.sim.seed))?;
    Ok(simulate_counts(&rho, &settings_for(args.settings), &cfg))
}

/// Evenly spaced angles in degrees, validated to lie in `[0, 45]`.
pub fn theta_grid(start: f64, stop: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps {steps}: need at least 2")));
    }
    let ok = |x: f64| x.is_finite() && (0.0..=45.0).contains(&x);
    if !(ok(start) && ok(stop) && start < stop) {
        return Err(CliError::Usage(format!(
            "grid {start}..{stop} must satisfy 0 <= start < stop <= 45"
        )));
    }
    let span = stop - start;
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|i| start + span * i as f64 / last).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGRow {
    pub theta_deg: f64,
    pub g: f64,
    pub delta_g: f64,
    pub c_from_g: f64,
    pub c_true: f64,
    pub c_tomo: f64,
}

pub fn sweep_g(args: &SweepArgs) -> Result<Vec<SweepGRow>, CliError> {
    let grid = theta_grid(args.start, args.stop, args.steps)?;
    let seed = RandomSeed(args.sim.seed);
    grid.iter()
        .enumerate()
        .map(|(i, &theta)| {
            let rho = apply_transforms(&family_state(args.family, theta)?, &args.transform)?;
            let cfg = sim_config(&args.sim, seed.derive(i as u64))?;
            let table = simulate_counts(&rho, &Setting::full(), &cfg);
            let ctx = format!("theta = {theta}");
            let g = g_from_counts(&table).map_err(CliError::core(ctx.clone()))?;
            Ok(SweepGRow {
                theta_deg: theta,
                g: g.g,
                delta_g: g.delta_g.unwrap_or(0.0),
                c_from_g: implied_concurrence(g.g),
                c_true: concurrence(&rho),
                c_tomo: tomo_concurrence(&table).map_err(CliError::core(ctx))?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepKRow {
    pub theta_deg: f64,
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub bound: f64,
}

/// K for the prepared state and for `|HH⟩`, `|VH⟩`, each evaluated from
/// simulated counts against projectors matched to the grid angle.
pub fn sweep_k(args: &SweepArgs) -> Result<Vec<SweepKRow>, CliError> {
    let grid = theta_grid(args.start, args.stop, args.steps)?;
    let seed = RandomSeed(args.sim.seed);
    let hh = pure_to_density(&product_ket(BasisLabel::H, BasisLabel::H))
        .map_err(CliError::core("|HH>"))?;
    let vh = pure_to_density(&product_ket(BasisLabel::V, BasisLabel::H))
        .map_err(CliError::core("|VH>"))?;
    let settings = Setting::k_mode();
    grid.iter()
        .enumerate()
        .map(|(i, &theta)| {
            let s = schmidt(theta)?;
            let target = family_state(args.family, theta)?;
            let mut k = [0.0; 3];
            for (j, rho) in [&target, &hh, &vh].into_iter().enumerate() {
                let rho = apply_transforms(rho, &args.transform)?;
                let stream = seed.derive(i as u64).derive(j as u64);
                let table = simulate_counts(&rho, &settings, &sim_config(&args.sim, stream)?);
                k[j] = k_from_counts(&table, &s)
                    .map_err(CliError::core(format!("theta = {theta}")))?
                    .k;
            }
            Ok(SweepKRow {
                theta_deg: theta,
                k0: k[0],
                k1: k[1],
                k2: k[2],
                bound: qlur::measures::k_separable_bound(&s),
            })
        })
        .collect()
}

/// Plain decimal for ordinary magnitudes, exponent form otherwise.
fn num(x: f64) -> String {
    if x == 0.0 || (1e-4..1e7).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn sweep_g_csv(rows: &[SweepGRow]) -> String {
    let mut out = String::from("theta_deg,g,delta_g,c_from_g,c_true,c_tomo\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            num(r.theta_deg),
            num(r.g),
            num(r.delta_g),
            num(r.c_from_g),
            num(r.c_true),
            num(r.c_tomo)
        );
    }
    out
}

pub fn sweep_k_csv(rows: &[SweepKRow]) -> String {
    let mut out = String::from("theta_deg,k0,k1,k2,bound\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(r.theta_deg),
            num(r.k0),
            num(r.k1),
            num(r.k2),
            num(r.bound)
        );
    }
    out
}

fn table_report(inputs: Inputs, table: &CountsTable, ctx: &str) -> Result<Report, CliError> {
    let g = g_from_counts(table).map_err(CliError::core(ctx))?;
    Ok(Report::new(inputs, &g))
}

fn simulated_report(
    rho: &DensityMatrix,
    label: String,
    t: &TransformFlags,
    sim: &SimFlags,
    seed: RandomSeed,
) -> Result<Report, CliError> {
    let table = simulate_counts(rho, &Setting::full(), &sim_config(sim, seed)?);
    let mut input = sim_input(label.clone(), t, sim);
    input.seed = seed.0;
    table_report(Inputs::Simulation(input), &table, &label)
}

pub fn ilut_check(args: &IlutArgs) -> Result<IlutReport, CliError> {
    if !(args.k.is_finite() && args.k >= 0.0) {
        return Err(CliError::Usage(format!(
            "--k {} must be finite and >= 0",
            args.k
        )));
    }
    let (before, after) = match args.files.as_slice() {
        [a, b] => {
            if !args.transform.is_empty() || args.state.state.is_some() {
                return Err(CliError::Usage(
                    "state and transformation flags cannot be combined with two files".into(),
                ));
            }
            let load = |p: &Path| -> Result<Report, CliError> {
                let t = load_counts(p)?;
                table_report(
                    Inputs::File(FileInput::new(p, &t)),
                    &t,
                    &p.display().to_string(),
                )
            };
            (load(a)?, load(b)?)
        }
        [] => {
            let rho = prepared_state(&args.state)?;
            let moved = apply_transforms(&rho, &args.transform)?;
            let label = state_label(&args.state);
            let seed = RandomSeed(args.sim.seed);
            let none = TransformFlags {
                damp: None,
                hwp: vec![],
                qwp: vec![],
            };
            (
                simulated_report(&rho, label.clone(), &none, &args.sim, seed.derive(0))?,
                simulated_report(&moved, label, &args.transform, &args.sim, seed.derive(1))?,
            )
        }
        _ => {
            return Err(CliError::Usage(
                "ilut-check takes either two counts files or none".into(),
            ))
        }
    };
    let difference = (before.g - after.g).abs();
    let combined_sigma = before.delta_g.hypot(after.delta_g);
    Ok(IlutReport {
        pass: difference <= args.k * combined_sigma + ILUT_ABS_TOL,
        before,
        after,
        difference,
        combined_sigma,
        k: args.k,
    })
}

pub fn tomo(args: &TomoArgs) -> Result<TomoReport, CliError> {
    let ctx = args.file.display().to_string();
    let table = load_counts(&args.file)?;
    let rho = reconstruct(&table).map_err(CliError::core(ctx.clone()))?;
    let c = tomo_concurrence(&table).map_err(CliError::core(ctx))?;
    let m = rho.matrix();
    let reference = args.reference.as_deref().map(reference_state).transpose()?;
    Ok(TomoReport {
        inputs: FileInput::new(&args.file, &table),
        eigenvalues: rho.eigenvalues(),
        purity: rho.purity(),
        tomo_concurrence: c,
        density_re: std::array::from_fn(|r| std::array::from_fn(|col| m[(r, col)].re)),
        density_im: std::array::from_fn(|r| std::array::from_fn(|col| m[(r, col)].im)),
        fidelity: reference.as_ref().map(|s| rho.fidelity(s)),
        trace_distance: reference.as_ref().map(|s| rho.trace_distance(s)),
        reference: args.reference.clone(),
    })
}

pub(crate) fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub(crate) fn counts_csv(table: &CountsTable) -> String {
    write_counts_csv(table)
}
