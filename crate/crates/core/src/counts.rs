//! Coincidence-count tables: simulation, CSV I/O and estimators.
//!
//! A setting is a pair of analyzer labels, one per arm. Every expectation is
//! estimated from one *group* of four settings, the joint eigenbasis of
//! `σᵢ ⊗ σⱼ`, normalized by that group's own total so that no equal-flux
//! assumption between groups is needed. Local marginals `⟨σᵢ ⊗ I⟩` and
//! `⟨I ⊗ σⱼ⟩` come from the diagonal groups `(i, i)` and `(j, j)`.
//!
//! Uncertainties are first-order (delta-method) propagations treating each
//! count as an independent Poisson variable with `var(n) = n`. Tables
//! simulated in exact mode carry expected counts and report zero sigma.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix3;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::measures::{CovarianceMatrix, GResult, KResult, SchmidtCoeffs};
use crate::optics::{joint_projector, BasisLabel};
use crate::qcore::{trace_of_product, DensityMatrix, PauliIndex, RandomSeed};
use crate::scalar::Real;

/// One analyzer configuration: label on arm A, label on arm B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Setting {
    pub a: BasisLabel,
    pub b: BasisLabel,
}

impl Setting {
    pub const fn new(a: BasisLabel, b: BasisLabel) -> Self {
        Setting { a, b }
    }

    /// Canonical ordinal in `0..36`; also the RNG substream index.
    pub fn ordinal(self) -> usize {
        self.a.ordinal() * 6 + self.b.ordinal()
    }

    /// All 36 settings in canonical order.
    pub fn full() -> Vec<Setting> {
        BasisLabel::ALL
            .iter()
            .flat_map(|&a| BasisLabel::ALL.iter().map(move |&b| Setting::new(a, b)))
            .collect()
    }

    /// The 12 settings needed for K: the diagonal groups of `σ₃⊗σ₃`,
    /// `σ₁⊗σ₁` and `σ₂⊗σ₂`.
    pub fn k_mode() -> Vec<Setting> {
        [PauliIndex::Z, PauliIndex::X, PauliIndex::Y]
            .iter()
            .flat_map(|&i| group(i, i).expect("local index").map(|(s, _, _)| s))
            .collect()
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.a, self.b)
    }
}

/// The four settings of the `σᵢ ⊗ σⱼ` eigenbasis with the eigenvalue signs on
/// each arm.
pub fn group(i: PauliIndex, j: PauliIndex) -> Result<[(Setting, i8, i8); 4]> {
    let (ap, am) = BasisLabel::eigenbasis(i)?;
    let (bp, bm) = BasisLabel::eigenbasis(j)?;
    Ok([
        (Setting::new(ap, bp), 1, 1),
        (Setting::new(ap, bm), 1, -1),
        (Setting::new(am, bp), -1, 1),
        (Setting::new(am, bm), -1, -1),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Noise {
    /// Expected counts, real-valued.
    Exact,
    /// One independent Poisson draw per setting.
    Poisson,
}

impl Noise {
    pub fn as_str(self) -> &'static str {
        match self {
            Noise::Exact => "exact",
            Noise::Poisson => "poisson",
        }
    }
}

impl FromStr for Noise {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Noise::Exact),
            "poisson" => Ok(Noise::Poisson),
            other => Err(format!(
                "unknown noise model {other:?} (expected exact|poisson)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig<T: Real> {
    pub n_per_setting: T,
    pub noise: Noise,
    pub seed: RandomSeed,
}

impl<T: Real> SimConfig<T> {
    pub fn new(n_per_setting: T, noise: Noise, seed: RandomSeed) -> Result<Self> {
        if !(n_per_setting > T::zero() && n_per_setting.is_finite()) {
            return Err(Error::OutOfRange {
                what: "n_per_setting",
                value: n_per_setting.to_f64_lossy(),
            });
        }
        Ok(SimConfig {
            n_per_setting,
            noise,
            seed,
        })
    }
}

/// Coincidence counts keyed by setting, plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct CountsTable<T: Real> {
    counts: BTreeMap<Setting, T>,
    pub source: Option<String>,
    pub noise: Option<Noise>,
    pub seed: Option<RandomSeed>,
}

impl<T: Real> Default for CountsTable<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> CountsTable<T> {
    pub fn new() -> Self {
        CountsTable {
            counts: BTreeMap::new(),
            source: None,
            noise: None,
            seed: None,
        }
    }

    /// Adds a count. Negative or non-finite counts are rejected, as is a
    /// setting already present.
    pub fn insert(&mut self, setting: Setting, count: T) -> Result<()> {
        if !(count >= T::zero() && count.is_finite()) {
            return Err(Error::OutOfRange {
                what: "count",
                value: count.to_f64_lossy(),
            });
        }
        if self.counts.contains_key(&setting) {
            return Err(Error::DuplicateSetting { line: 0, setting });
        }
        self.counts.insert(setting, count);
        Ok(())
    }

    pub fn get(&self, setting: Setting) -> Option<T> {
        self.counts.get(&setting).copied()
    }

    pub fn require(&self, setting: Setting) -> Result<T> {
        self.get(setting).ok_or(Error::MissingSetting(setting))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Settings and counts in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (Setting, T)> + '_ {
        self.counts.iter().map(|(&s, &n)| (s, n))
    }

    pub fn is_exact(&self) -> bool {
        self.noise == Some(Noise::Exact)
    }

    /// First missing setting of the full 36-setting scheme, if any.
    pub fn missing_full(&self) -> Option<Setting> {
        Setting::full()
            .into_iter()
            .find(|s| !self.counts.contains_key(s))
    }

    /// First missing setting of the 12-setting K scheme, if any.
    pub fn missing_k_mode(&self) -> Option<Setting> {
        Setting::k_mode()
            .into_iter()
            .find(|s| !self.counts.contains_key(s))
    }

    pub fn total(&self) -> T {
        self.counts.values().fold(T::zero(), |a, &b| a + b)
    }

    fn with_count(&self, setting: Setting, count: T) -> Self {
        let mut t = self.clone();
        t.counts.insert(setting, count);
        t
    }
}

/// A point estimate with one standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatedValue<T: Real> {
    pub value: T,
    pub sigma: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

/// One group entry: setting, eigenvalue signs on each side, raw count and
/// normalized probability.
type GroupEntry<T> = (Setting, i8, i8, T, T);

/// Counts of the group `(i, j)` normalized to probabilities, with the raw
/// counts and the group total.
fn group_probabilities<T: Real>(
    table: &CountsTable<T>,
    i: PauliIndex,
    j: PauliIndex,
) -> Result<([GroupEntry<T>; 4], T)> {
    let g = group(i, j)?;
    let mut raw = [T::zero(); 4];
    for (k, (s, _, _)) in g.iter().enumerate() {
        raw[k] = table.require(*s)?;
    }
    let total = raw.iter().fold(T::zero(), |a, &b| a + b);
    if total <= T::zero() {
        return Err(Error::EmptyGroup(g[0].0));
    }
    let out = [0, 1, 2, 3].map(|k| (g[k].0, g[k].1, g[k].2, raw[k], raw[k] / total));
    Ok((out, total))
}

/// Signed mean over a group; `sign` picks the per-setting sign.
fn signed_mean<T: Real>(
    table: &CountsTable<T>,
    i: PauliIndex,
    j: PauliIndex,
    sign: impl Fn(i8, i8) -> i8,
) -> Result<EstimatedValue<T>> {
    let (entries, total) = group_probabilities(table, i, j)?;
    let value = entries.iter().fold(T::zero(), |acc, &(_, sa, sb, _, p)| {
        acc + T::lit(sign(sa, sb) as f64) * p
    });
    let sigma = if table.is_exact() {
        T::zero()
    } else {
        // ∂v/∂nₖ = (sₖ − v)/N.
        let var = entries.iter().fold(T::zero(), |acc, &(_, sa, sb, n, _)| {
            let d = T::lit(sign(sa, sb) as f64) - value;
            acc + n * d * d
        });
        var.sqrt() / total
    };
    Ok(EstimatedValue { value, sigma })
}

/// `⟨σᵢ ⊗ σⱼ⟩` from the four settings of its eigenbasis.
pub fn joint_expectation<T: Real>(
    table: &CountsTable<T>,
    i: PauliIndex,
    j: PauliIndex,
) -> Result<EstimatedValue<T>> {
    signed_mean(table, i.require_local()?, j.require_local()?, |a, b| a * b)
}

/// `⟨σᵢ ⊗ I⟩` or `⟨I ⊗ σᵢ⟩` from the diagonal group `(i, i)`.
pub fn marginal_expectation<T: Real>(
    table: &CountsTable<T>,
    side: Side,
    i: PauliIndex,
) -> Result<EstimatedValue<T>> {
    let i = i.require_local()?;
    signed_mean(table, i, i, |a, b| match side {
        Side::A => a,
        Side::B => b,
    })
}

/// Delta-method sigma of `f` over the given settings with `var(n) = n`.
///
/// Partial derivatives are central differences with step `max(1, √n)`,
/// falling back to a forward difference when the step would cross zero.
fn propagate<T: Real>(
    table: &CountsTable<T>,
    settings: &[Setting],
    f: impl Fn(&CountsTable<T>) -> Result<T>,
) -> Result<T> {
    let mut var = T::zero();
    for &s in settings {
        let n = table.require(s)?;
        if n <= T::zero() {
            continue;
        }
        let h = n.sqrt().max(T::one());
        let up = f(&table.with_count(s, n + h))?;
        let d = if n - h >= T::zero() {
            (up - f(&table.with_count(s, n - h))?) / (h + h)
        } else {
            (up - f(table)?) / h
        };
        var += d * d * n;
    }
    Ok(var.sqrt())
}

fn covariances_from_counts<T: Real>(table: &CountsTable<T>) -> Result<CovarianceMatrix<T>> {
    let mut ma = [T::zero(); 3];
    let mut mb = [T::zero(); 3];
    for (k, &i) in PauliIndex::LOCAL.iter().enumerate() {
        ma[k] = marginal_expectation(table, Side::A, i)?.value;
        mb[k] = marginal_expectation(table, Side::B, i)?.value;
    }
    let mut m = Matrix3::zeros();
    for (r, &i) in PauliIndex::LOCAL.iter().enumerate() {
        for (c, &j) in PauliIndex::LOCAL.iter().enumerate() {
            m[(r, c)] = joint_expectation(table, i, j)?.value - ma[r] * mb[c];
        }
    }
    Ok(CovarianceMatrix(m))
}

/// `G` and its covariances from a full 36-setting table.
pub fn g_from_counts<T: Real>(table: &CountsTable<T>) -> Result<GResult<T>> {
    if let Some(s) = table.missing_full() {
        return Err(Error::MissingSetting(s));
    }
    let covariance = covariances_from_counts(table)?;
    let delta_g = if table.is_exact() {
        T::zero()
    } else {
        propagate(table, &Setting::full(), |t| {
            Ok(covariances_from_counts(t)?.frobenius_sq())
        })?
    };
    Ok(GResult {
        g: covariance.frobenius_sq(),
        covariance,
        delta_g: Some(delta_g),
    })
}

fn k_expectations<T: Real>(table: &CountsTable<T>, s: &SchmidtCoeffs<T>) -> Result<[T; 4]> {
    use BasisLabel::*;
    let probs = |i: PauliIndex| -> Result<BTreeMap<Setting, T>> {
        let (entries, _) = group_probabilities(table, i, i)?;
        Ok(entries.iter().map(|&(s, _, _, _, p)| (s, p)).collect())
    };
    let z = probs(PauliIndex::Z)?;
    let x = probs(PauliIndex::X)?;
    let y = probs(PauliIndex::Y)?;
    let p = |m: &BTreeMap<Setting, T>, a, b| m[&Setting::new(a, b)];

    let (p00, p01, p10, p11) = (p(&z, H, H), p(&z, H, V), p(&z, V, H), p(&z, V, V));
    let xx_plus = p(&x, D, D) + p(&x, A, A);
    let yy_anti = p(&y, R, L) + p(&y, L, R);
    // ⟨|00⟩⟨11| + h.c.⟩ and ⟨|01⟩⟨10| + h.c.⟩ via product-projector decompositions.
    let coh_00_11 = yy_anti + xx_plus - T::one();
    let coh_01_10 = xx_plus - yy_anti;

    let (a2, b2, ab) = (s.a() * s.a(), s.b() * s.b(), s.a() * s.b());
    Ok([
        a2 * p00 + b2 * p11 + ab * coh_00_11,
        a2 * p01 + b2 * p10 + ab * coh_01_10,
        b2 * p01 + a2 * p10 - ab * coh_01_10,
        b2 * p00 + a2 * p11 - ab * coh_00_11,
    ])
}

/// K from the 12-setting subset `{HH,HV,VH,VV} ∪ {DD,DA,AD,AA} ∪ {RR,RL,LR,LL}`.
pub fn k_from_counts<T: Real>(table: &CountsTable<T>, s: &SchmidtCoeffs<T>) -> Result<KResult<T>> {
    if let Some(missing) = table.missing_k_mode() {
        return Err(Error::MissingSetting(missing));
    }
    let mut out = KResult::from_expectations(k_expectations(table, s)?, s);
    let delta = if table.is_exact() {
        T::zero()
    } else {
        propagate(table, &Setting::k_mode(), |t| {
            Ok(KResult::from_expectations(k_expectations(t, s)?, s).k)
        })?
    };
    out.delta_k = Some(delta);
    Ok(out)
}

/// Virtual coincidence counting. In Poisson mode each setting draws from its
/// own substream (index = [`Setting::ordinal`]) of the configured seed.
pub fn simulate_counts<T: Real>(
    rho: &DensityMatrix<T>,
    settings: &[Setting],
    cfg: &SimConfig<T>,
) -> CountsTable<T> {
    let mut table = CountsTable::new();
    table.source = Some("simulation".to_string());
    table.noise = Some(cfg.noise);
    if cfg.noise == Noise::Poisson {
        table.seed = Some(cfg.seed);
    }
    for &s in settings {
        let p = trace_of_product(rho.matrix(), &joint_projector(s.a, s.b)).re;
        let mean = (cfg.n_per_setting * p).max(T::zero());
        let count = match cfg.noise {
            Noise::Exact => mean,
            Noise::Poisson => {
                let mean = mean.to_f64_lossy();
                if mean > 0.0 {
                    let mut rng = cfg.seed.substream(s.ordinal() as u64);
                    let d = Poisson::new(mean).expect("positive finite mean");
                    T::lit(d.sample(&mut rng))
                } else {
                    T::zero()
                }
            }
        };
        // Settings repeated in the input keep their first count.
        let _ = table.insert(s, count);
    }
    table
}

pub const CSV_HEADER: &str = "basis_a,basis_b,count";

/// Parses the counts CSV. `#` starts a comment line; comments of the form
/// `# source: …`, `# noise: exact|poisson` and `# seed: <u64>` restore
/// provenance. The header line is optional.
pub fn parse_counts_csv<T: Real>(text: &str) -> Result<CountsTable<T>> {
    let mut table = CountsTable::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            parse_metadata(&mut table, comment.trim(), line_no)?;
            continue;
        }
        if line.replace(' ', "") == CSV_HEADER {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let label = |f: &str| {
            f.parse::<BasisLabel>().map_err(|_| Error::UnknownLabel {
                line: line_no,
                label: f.to_string(),
            })
        };
        let setting = Setting::new(label(fields[0])?, label(fields[1])?);
        let count: f64 = fields[2].parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("invalid count {:?}", fields[2]),
        })?;
        if !(count >= 0.0 && count.is_finite()) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("count must be a nonnegative number, got {count}"),
            });
        }
        table
            .insert(setting, T::lit(count))
            .map_err(|_| Error::DuplicateSetting {
                line: line_no,
                setting,
            })?;
    }
    Ok(table)
}

fn parse_metadata<T: Real>(table: &mut CountsTable<T>, comment: &str, line: usize) -> Result<()> {
    let Some((key, value)) = comment.split_once(':') else {
        return Ok(());
    };
    let value = value.trim();
    match key.trim() {
        "source" => table.source = Some(value.to_string()),
        "noise" => {
            table.noise = Some(
                value
                    .parse()
                    .map_err(|message| Error::Parse { line, message })?,
            )
        }
        "seed" => {
            let seed = value.parse().map_err(|_| Error::Parse {
                line,
                message: format!("invalid seed {value:?}"),
            })?;
            table.seed = Some(RandomSeed(seed));
        }
        _ => {}
    }
    Ok(())
}

/// Canonical CSV: metadata comments, header, rows in canonical setting order.
pub fn write_counts_csv<T: Real>(table: &CountsTable<T>) -> String {
    let mut out = String::new();
    if let Some(source) = &table.source {
        out.push_str(&format!("# source: {source}\n"));
    }
    if let Some(noise) = table.noise {
        out.push_str(&format!("# noise: {}\n", noise.as_str()));
    }
    if let Some(seed) = table.seed {
        out.push_str(&format!("# seed: {}\n", seed.0));
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (s, n) in table.iter() {
        out.push_str(&format!("{},{},{}\n", s.a, s.b, n));
    }
    out
}
