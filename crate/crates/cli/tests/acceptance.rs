//! Acceptance suite: ten criteria, one PASS/FAIL line each, with a wall-clock
//! budget per criterion. Exits nonzero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use qlur::counts::{g_from_counts, k_from_counts, simulate_counts, Noise, Setting, SimConfig};
use qlur::measures::{
    concurrence, g_measure, k_measure, k_observables, mixed_state_bounds, SchmidtCoeffs,
};
use qlur::optics::DampingBasis;
use qlur::qcore::{
    apply_local_unitary, pure_to_density, random_density_with, random_pure_with,
    random_unitary2_with, singlet, RandomSeed,
};
use qlur::tomography::reconstruct;
use qlur::{Complex, DensityMatrix, Op4};
use qlur_cli::args::{DampArg, Family, SimFlags, SweepArgs, TransformFlags};
use qlur_cli::commands::{sweep_g, sweep_k};
use rand::Rng;

type Outcome = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn analyze_g(path: &Path) -> Result<f64, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qlur"))
        .arg("analyze")
        .arg(path)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    v["g"].as_f64().ok_or_else(|| "report has no g".into())
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn exact(n: f64) -> SimConfig<f64> {
    SimConfig::new(n, Noise::Exact, RandomSeed(0)).unwrap()
}

fn c1_block_one() -> Outcome {
    let g = analyze_g(&fixture("tableII_block1.csv"))?;
    check((2.74..=2.94).contains(&g), format!("g = {g:.4}"))
}

fn c2_blocks_agree() -> Outcome {
    let g1 = analyze_g(&fixture("tableII_block1.csv"))?;
    let g2 = analyze_g(&fixture("tableII_block2.csv"))?;
    let d = (g1 - g2).abs();
    check(
        d < 0.15,
        format!("g1 = {g1:.4}, g2 = {g2:.4}, |diff| = {d:.4}"),
    )
}

fn c3_pure_identity() -> Outcome {
    let mut rng = RandomSeed(3).rng();
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let rho: DensityMatrix = pure_to_density(&random_pure_with(&mut rng)).unwrap();
        let c = concurrence(&rho);
        worst = worst.max((g_measure(&rho).g - c * c * (c * c + 2.0)).abs());
    }
    check(worst < 1e-9, format!("max deviation {worst:.2e}"))
}

fn c4_local_unitary_invariance() -> Outcome {
    let mut rng = RandomSeed(4).rng();
    let mut worst = 0.0f64;
    for i in 0..10_000 {
        let rho: DensityMatrix = if i % 2 == 0 {
            random_density_with(&mut rng)
        } else {
            pure_to_density(&random_pure_with(&mut rng)).unwrap()
        };
        let ua = random_unitary2_with(&mut rng);
        let ub = random_unitary2_with(&mut rng);
        let moved = apply_local_unitary(&rho, &ua, &ub).map_err(|e| e.to_string())?;
        worst = worst.max((g_measure(&rho).g - g_measure(&moved).g).abs());
    }
    check(worst < 1e-9, format!("max |g - g'| {worst:.2e}"))
}

fn c5_mixed_bounds() -> Outcome {
    let mut rng = RandomSeed(5).rng();
    let mut offenders = Vec::new();
    for i in 0..10_000 {
        let rho: DensityMatrix = random_density_with(&mut rng);
        let b = mixed_state_bounds(&rho);
        if !b.holds(1e-9) {
            offenders.push(format!(
                "#{i}: lower {} g {} upper {} rho {:?}",
                b.lower,
                b.g,
                b.upper,
                rho.matrix()
            ));
        }
    }
    check(
        offenders.is_empty(),
        if offenders.is_empty() {
            "0 violations in 10000 states".into()
        } else {
            format!("{} violations:\n{}", offenders.len(), offenders.join("\n"))
        },
    )
}

/// Independent route: explicit Kraus sum with hand-written matrices, then
/// covariances from traces against hand-written Paulis.
fn kraus_oracle_g(theta: f64, p: f64) -> f64 {
    let z = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    let i = Complex::new(0.0, 1.0);
    let paulis: [[[Complex<f64>; 2]; 2]; 4] = [
        [[one, z], [z, one]],
        [[z, one], [one, z]],
        [[z, -i], [i, z]],
        [[one, z], [z, -one]],
    ];
    let kron = |a: &[[Complex<f64>; 2]; 2], b: &[[Complex<f64>; 2]; 2]| {
        Op4::from_fn(|r, c| a[r / 2][c / 2] * b[r % 2][c % 2])
    };
    let (a, b) = ((2.0 * theta).cos(), (2.0 * theta).sin());
    let mut rho = Op4::zeros();
    let amp = [a, 0.0, 0.0, b];
    for r in 0..4 {
        for c in 0..4 {
            rho[(r, c)] = Complex::new(amp[r] * amp[c], 0.0);
        }
    }
    let w = [(1.0 - p).sqrt(), p.sqrt()];
    let local = [0usize, 3];
    let mut out = Op4::zeros();
    for x in 0..2 {
        for y in 0..2 {
            let k = kron(&paulis[local[x]], &paulis[local[y]]) * Complex::new(w[x] * w[y], 0.0);
            out += k * rho * k.adjoint();
        }
    }
    let ev = |m: usize, n: usize| (out * kron(&paulis[m], &paulis[n])).trace().re;
    let mut g = 0.0;
    for m in 1..4 {
        for n in 1..4 {
            let c = ev(m, n) - ev(m, 0) * ev(0, n);
            g += c * c;
        }
    }
    g
}

fn sweep_args(start: f64, stop: f64, steps: usize, damp: Option<DampArg>) -> SweepArgs {
    SweepArgs {
        family: Family::Parallel,
        start,
        stop,
        steps,
        transform: TransformFlags {
            damp,
            hwp: vec![],
            qwp: vec![],
        },
        sim: SimFlags {
            n: 5000.0,
            noise: Noise::Exact,
            seed: 0,
        },
    }
}

fn c6_phase_damped_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for j in 0..10 {
        let p = j as f64 / 9.0;
        let damp = DampArg {
            basis: DampingBasis::Z,
            p,
        };
        let rows = sweep_g(&sweep_args(0.0, 45.0, 10, Some(damp))).map_err(|e| e.to_string())?;
        for row in rows {
            let theta = row.theta_deg.to_radians();
            let (a, b) = ((2.0 * theta).cos(), (2.0 * theta).sin());
            let d = a * a - b * b;
            let closed = (1.0 - d * d).powi(2) + 8.0 * a * a * b * b * (1.0 - 2.0 * p).powi(4);
            let oracle = kraus_oracle_g(theta, p);
            worst = worst
                .max((row.g - closed).abs())
                .max((oracle - closed).abs());
        }
    }
    check(
        worst < 1e-9,
        format!("max deviation {worst:.2e} over 100 points"),
    )
}

fn c7_k_sweep() -> Outcome {
    let rows = sweep_k(&sweep_args(2.5, 42.5, 17, None)).map_err(|e| e.to_string())?;
    let mut problems = Vec::new();
    let mut worst_eq = 0.0f64;
    for r in &rows {
        if !(r.k0 < r.bound && r.k0.abs() < 1e-9) {
            problems.push(format!(
                "theta {}: k0 = {} bound {}",
                r.theta_deg, r.k0, r.bound
            ));
        }
        worst_eq = worst_eq
            .max((r.k1 - r.bound).abs())
            .max((r.k2 - r.bound).abs());
        let s = SchmidtCoeffs::from_pump_angle(r.theta_deg.to_radians()).unwrap();
        let psi1: DensityMatrix = pure_to_density(&k_observables(&s).kets[0]).unwrap();
        let k = k_measure(&psi1, &s).k;
        if k.abs() >= 1e-9 {
            problems.push(format!("theta {}: K(psi1) = {k}", r.theta_deg));
        }
    }
    if rows.len() != 17 {
        problems.push(format!("{} grid points", rows.len()));
    }
    if worst_eq >= 1e-9 {
        problems.push(format!("max |k1,k2 - bound| = {worst_eq:.2e}"));
    }
    check(
        problems.is_empty(),
        if problems.is_empty() {
            format!("17 angles, max |k1,k2 - bound| = {worst_eq:.2e}")
        } else {
            problems.join("; ")
        },
    )
}

fn c8_estimators_match() -> Outcome {
    let mut rng = RandomSeed(8).rng();
    let cfg = exact(1000.0);
    let (mut wg, mut wk) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let rho: DensityMatrix = random_density_with(&mut rng);
        let s = SchmidtCoeffs::from_pump_angle(rng.random_range(0.0..std::f64::consts::FRAC_PI_4))
            .unwrap();
        let table = simulate_counts(&rho, &Setting::full(), &cfg);
        let g = g_from_counts(&table).map_err(|e| e.to_string())?.g;
        let k = k_from_counts(&table, &s).map_err(|e| e.to_string())?.k;
        wg = wg.max((g - g_measure(&rho).g).abs());
        wk = wk.max((k - k_measure(&rho, &s).k).abs());
    }
    check(
        wg < 1e-9 && wk < 1e-9,
        format!("max |dg| {wg:.2e}, max |dk| {wk:.2e}"),
    )
}

fn c9_error_bar_calibration() -> Outcome {
    let rho: DensityMatrix = pure_to_density(&singlet()).unwrap();
    let base = RandomSeed(9);
    let reps = 500;
    let mut gs = Vec::with_capacity(reps);
    let mut sigmas = Vec::with_capacity(reps);
    for i in 0..reps {
        let cfg = SimConfig::new(5000.0, Noise::Poisson, base.derive(i as u64)).unwrap();
        let table = simulate_counts(&rho, &Setting::full(), &cfg);
        let g = g_from_counts(&table).map_err(|e| e.to_string())?;
        gs.push(g.g);
        sigmas.push(g.delta_g.unwrap_or(0.0));
    }
    let n = reps as f64;
    let mean = gs.iter().sum::<f64>() / n;
    let std = (gs.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let mean_sigma = sigmas.iter().sum::<f64>() / n;
    let ratio = std / mean_sigma;
    check(
        (0.5..=2.0).contains(&ratio) && (mean - 3.0).abs() <= 3.0 * std,
        format!("mean g {mean:.5}, std {std:.5}, mean delta_g {mean_sigma:.5}, ratio {ratio:.3}"),
    )
}

fn c10_tomography() -> Outcome {
    let mut rng = RandomSeed(10).rng();
    let cfg = exact(1000.0);
    let mut worst_td = 0.0f64;
    for _ in 0..1000 {
        let rho: DensityMatrix = random_density_with(&mut rng);
        let back = reconstruct(&simulate_counts(&rho, &Setting::full(), &cfg))
            .map_err(|e| e.to_string())?;
        worst_td = worst_td.max(back.trace_distance(&rho));
    }
    let target: DensityMatrix = pure_to_density(&singlet()).unwrap();
    let mut worst_f = 1.0f64;
    for seed in 0..100 {
        let cfg = SimConfig::new(1e5, Noise::Poisson, RandomSeed(1000 + seed)).unwrap();
        let back = reconstruct(&simulate_counts(&target, &Setting::full(), &cfg))
            .map_err(|e| e.to_string())?;
        worst_f = worst_f.min(back.fidelity(&target));
    }
    check(
        worst_td < 1e-9 && worst_f > 0.99,
        format!("max trace distance {worst_td:.2e}, min fidelity {worst_f:.5}"),
    )
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        ("1 block 1 reproduction", secs(1), c1_block_one),
        ("2 block 1 vs block 2", secs(1), c2_blocks_agree),
        ("3 pure-state identity", secs(10), c3_pure_identity),
        (
            "4 local-unitary invariance",
            secs(30),
            c4_local_unitary_invariance,
        ),
        ("5 mixed-state bounds", secs(30), c5_mixed_bounds),
        (
            "6 phase-damped closed form",
            secs(5),
            c6_phase_damped_closed_form,
        ),
        ("7 K sweep", secs(5), c7_k_sweep),
        ("8 estimator consistency", secs(60), c8_estimators_match),
        (
            "9 error-bar calibration",
            secs(120),
            c9_error_bar_calibration,
        ),
        ("10 tomography", secs(120), c10_tomography),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let (ok, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {detail} [{:.3} s of {} s{}]",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_time { "" } else { ", over budget" }
        );
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
