//! Seeded Monte Carlo sweeps over array size and spacing under Rayleigh
//! fading, with closed-form expectations attached where they exist.
//!
//! Trial `t` of point `p` draws from a ChaCha stream keyed by
//! `(seed, p, t)` and sums are taken in trial order, so results do not depend
//! on the number of worker threads.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::beamopt::{
    expected_power_digital_nomatching, expected_power_milac_mc, power_milac_nomc, received_power, DesignContext,
    MilacDesign, MisoChannel,
};
use crate::coupling::{build_coupling_matrix, build_geometry, CouplingMatrix, PhysicalConstants, MIN_QUAD_ORDER};
use crate::error::{Error, Result};
use crate::matrixkit::{c, factor_checked, identity, CMatrix, Lu};

pub const CSV_HEADER: &str = "experiment,n_t,spacing_over_lambda,strategy,mean_W,stderr_W,theory_W,n_trials,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Optimized, upper-bound and uncoupled power against array size.
    VsAntennas,
    /// Coupling-aware against coupling-unaware design.
    AwareVsUnaware,
    /// MiLAC against digital beamforming without matching network.
    VsDigital,
    /// Closed-form powers only, for comparison with their expectations.
    ExpectationCheck,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::VsAntennas => "vs-antennas",
            ExperimentKind::AwareVsUnaware => "aware-vs-unaware",
            ExperimentKind::VsDigital => "vs-digital",
            ExperimentKind::ExpectationCheck => "expectation-check",
        }
    }

    /// Strategy labels in reporting order.
    pub fn strategies(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::VsAntennas => &["optim", "upper_bound", "no_coupling"],
            ExperimentKind::AwareVsUnaware => &["aware", "unaware"],
            ExperimentKind::VsDigital => &["milac", "digital_nomatching"],
            ExperimentKind::ExpectationCheck => &["milac_mc", "digital_nomatching", "no_coupling"],
        }
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            ExperimentKind::VsAntennas,
            ExperimentKind::AwareVsUnaware,
            ExperimentKind::VsDigital,
            ExperimentKind::ExpectationCheck,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::Parse(format!("unknown experiment kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment_kind: ExperimentKind,
    pub n_t_list: Vec<usize>,
    /// Element spacings in wavelengths.
    pub spacing_list: Vec<f64>,
    pub n_trials: usize,
    pub seed: u64,
    /// Transmit power, W.
    pub p_t: f64,
    /// Path gain.
    pub rho: f64,
    pub frequency_hz: f64,
    pub quad_order: usize,
    /// Columns of the planar array.
    pub n_x: usize,
    /// Dipole length in wavelengths.
    pub dipole_length: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment_kind: ExperimentKind::VsAntennas,
            n_t_list: vec![16, 32, 64, 96, 128],
            spacing_list: vec![0.25, 1.0 / 3.0, 0.5],
            n_trials: 10_000,
            seed: 0,
            p_t: 1.0,
            rho: 1.0,
            frequency_hz: 28e9,
            quad_order: crate::coupling::DEFAULT_QUAD_ORDER,
            n_x: 8,
            dipole_length: 0.25,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::InvalidParameter("n_trials must be at least 1".into()));
        }
        if self.n_t_list.is_empty() || self.spacing_list.is_empty() {
            return Err(Error::InvalidParameter("n_t_list and spacing_list must be nonempty".into()));
        }
        if !(self.p_t > 0.0 && self.p_t.is_finite() && self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "p_t and rho must be positive, got {} and {}",
                self.p_t, self.rho
            )));
        }
        if self.quad_order < MIN_QUAD_ORDER {
            return Err(Error::InvalidParameter(format!(
                "quad_order must be at least {MIN_QUAD_ORDER}, got {}",
                self.quad_order
            )));
        }
        for &n_t in &self.n_t_list {
            for &d in &self.spacing_list {
                build_geometry(n_t, grid_columns(n_t, self.n_x), d, self.frequency_hz, self.dipole_length)?;
            }
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        config_hash(self)
    }
}

/// First 16 hex digits of the SHA-256 of the JSON encoding of `value`.
pub fn config_hash<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_string(value).expect("config serializes");
    let digest = Sha256::digest(json.as_bytes());
    digest.iter().take(8).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub n_t: usize,
    pub spacing: f64,
    pub strategy: &'static str,
    /// Mean received power, W.
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n_trials)`, W.
    pub stderr: f64,
    /// Closed-form expectation, W.
    pub theory: Option<f64>,
    pub n_trials: usize,
    /// Set when the point could not be evaluated; `mean` and `stderr` are NaN.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub experiment: ExperimentKind,
    pub seed: u64,
    pub config_hash: String,
    pub points: Vec<PointRecord>,
}

impl TrialStats {
    pub fn find(&self, n_t: usize, spacing: f64, strategy: &str) -> Option<&PointRecord> {
        self.points
            .iter()
            .find(|p| p.n_t == n_t && p.spacing == spacing && p.strategy == strategy)
    }

    /// Header and one row per record; failed points get a `# error` comment
    /// followed by rows tagged `error:<strategy>`.
    pub fn csv_body(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        let mut last_error: Option<(usize, u64)> = None;
        for p in &self.points {
            let strategy = match &p.error {
                Some(msg) => {
                    let key = (p.n_t, p.spacing.to_bits());
                    if last_error != Some(key) {
                        let _ = writeln!(out, "# error n_t={} spacing={}: {}", p.n_t, p.spacing, msg.replace('\n', " "));
                        last_error = Some(key);
                    }
                    format!("error:{}", p.strategy)
                }
                None => p.strategy.to_string(),
            };
            let theory = p.theory.map(|t| format!("{t:e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{:e},{:e},{},{},{}",
                self.experiment.name(),
                p.n_t,
                p.spacing,
                strategy,
                p.mean,
                p.stderr,
                theory,
                p.n_trials,
                self.seed
            );
        }
        out
    }

    /// [`Self::csv_body`] preceded by a `# config_hash=... seed=...` line.
    pub fn to_csv(&self) -> String {
        format!("# config_hash={} seed={}\n{}", self.config_hash, self.seed, self.csv_body())
    }
}

/// `z_RT ~ CN(0, rho I)`, one row of `n_t` entries.
pub fn sample_channel<R: Rng + ?Sized>(n_t: usize, rho: f64, rng: &mut R) -> Result<CMatrix> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!("path gain must be positive, got {rho}")));
    }
    let sigma = (rho / 2.0).sqrt();
    Ok(CMatrix::from_fn(1, n_t, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(sigma * re, sigma * im)
    }))
}

/// Generator for trial `trial` of sweep point `point`.
pub fn trial_rng(seed: u64, point: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 32) | trial as u64);
    rng
}

/// Power a MiLAC design delivers on `ch`, evaluated through the network model.
pub fn pipeline_power(design: &MilacDesign, ch: &MisoChannel) -> Result<f64> {
    received_power(&design.b, ch)
}

/// Columns of the array grid: `n_x`, or a single row when there are fewer
/// antennas than that.
pub fn grid_columns(n_t: usize, n_x: usize) -> usize {
    n_x.min(n_t)
}

/// Coupling matrices keyed by `(n_t, spacing bits, quad_order)`.
#[derive(Default)]
pub struct CouplingCache {
    entries: HashMap<(usize, u64, usize), Result<CouplingMatrix>>,
}

impl CouplingCache {
    pub fn get(&mut self, cfg: &ExperimentConfig, n_t: usize, spacing: f64) -> Result<CouplingMatrix> {
        self.entries
            .entry((n_t, spacing.to_bits(), cfg.quad_order))
            .or_insert_with(|| {
                let geom = build_geometry(n_t, grid_columns(n_t, cfg.n_x), spacing, cfg.frequency_hz, cfg.dipole_length)?;
                build_coupling_matrix(&geom, &PhysicalConstants::for_geometry(&geom), cfg.quad_order)
            })
            .clone()
    }
}

/// Everything a trial needs that depends only on the array.
struct PointSetup {
    coupling: CouplingMatrix,
    aware: DesignContext,
    unaware: DesignContext,
    /// LU of `Z_TT + Z0 I`.
    unmatched: Lu,
}

impl PointSetup {
    fn new(coupling: CouplingMatrix) -> Result<Self> {
        let n = coupling.dim();
        let z0 = coupling.z0();
        let aware = DesignContext::new(&coupling)?;
        let unaware = DesignContext::uncoupled(n, z0);
        let shifted = coupling.matrix() + identity(n) * c(z0, 0.0);
        let unmatched = factor_checked(&shifted, crate::netmodels::SINGULAR_RCOND)
            .map_err(|rcond| Error::SingularSystem { rcond })?;
        Ok(PointSetup { coupling, aware, unaware, unmatched })
    }

    fn theory(&self, kind: ExperimentKind, cfg: &ExperimentConfig) -> Result<Vec<Option<f64>>> {
        let mc = expected_power_milac_mc(&self.coupling, cfg.p_t, cfg.rho)?;
        let nomc = expected_power_milac_mc(&CouplingMatrix::uncoupled(self.coupling.dim(), self.coupling.z0()), cfg.p_t, cfg.rho)?;
        let digital = expected_power_digital_nomatching(&self.coupling, cfg.p_t, cfg.rho)?;
        Ok(match kind {
            ExperimentKind::VsAntennas => vec![Some(mc), Some(mc), Some(nomc)],
            ExperimentKind::AwareVsUnaware => vec![Some(mc), None],
            ExperimentKind::VsDigital => vec![Some(mc), Some(digital)],
            ExperimentKind::ExpectationCheck => vec![Some(mc), Some(digital), Some(nomc)],
        })
    }

    fn digital_nomatching(&self, ch: &MisoChannel) -> f64 {
        let x = self.unmatched.solve_right(&ch.z_rt);
        ch.p_t * x.iter().map(|z| z.norm_sqr()).sum::<f64>() / 4.0
    }

    /// Powers of every strategy of `kind` for one channel draw.
    fn trial(&self, kind: ExperimentKind, ch: &MisoChannel) -> Result<Vec<f64>> {
        Ok(match kind {
            ExperimentKind::VsAntennas => {
                let design = self.aware.optimize(ch, 0.0)?;
                vec![design.achieved_power, self.aware.bound(ch), power_milac_nomc(ch)]
            }
            ExperimentKind::AwareVsUnaware => {
                let aware = self.aware.optimize(ch, 0.0)?;
                let unaware = self.unaware.optimize(&ch.without_coupling(), 0.0)?;
                vec![aware.achieved_power, self.aware.received_power(&unaware.b, ch)?]
            }
            ExperimentKind::VsDigital => vec![self.aware.bound(ch), self.digital_nomatching(ch)],
            ExperimentKind::ExpectationCheck => {
                vec![self.aware.bound(ch), self.digital_nomatching(ch), power_milac_nomc(ch)]
            }
        })
    }
}

fn mean_and_stderr(samples: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = samples.clone().sum::<f64>() / nf;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = samples.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    (mean, (var / nf).sqrt())
}

fn run_point(
    cfg: &ExperimentConfig,
    cache: &mut CouplingCache,
    point: usize,
    n_t: usize,
    spacing: f64,
) -> Result<Vec<PointRecord>> {
    let kind = cfg.experiment_kind;
    let setup = PointSetup::new(cache.get(cfg, n_t, spacing)?)?;
    let theory = setup.theory(kind, cfg)?;
    let z0 = setup.coupling.z0();

    let trials: Vec<Result<Vec<f64>>> = (0..cfg.n_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, point, t);
            let z_rt = sample_channel(n_t, cfg.rho, &mut rng)?;
            let ch = MisoChannel::new(z_rt, Some(setup.coupling.clone()), cfg.p_t, cfg.rho, z0)?;
            setup.trial(kind, &ch)
        })
        .collect();
    let trials: Vec<Vec<f64>> = trials.into_iter().collect::<Result<_>>()?;

    Ok(kind
        .strategies()
        .iter()
        .enumerate()
        .map(|(k, &strategy)| {
            let (mean, stderr) = mean_and_stderr(trials.iter().map(|row| row[k]), cfg.n_trials);
            PointRecord {
                n_t,
                spacing,
                strategy,
                mean,
                stderr,
                theory: theory[k],
                n_trials: cfg.n_trials,
                error: None,
            }
        })
        .collect())
}

/// Runs every `(n_t, spacing)` point of the sweep, in list order. A point that
/// fails yields error rows rather than aborting the sweep.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<TrialStats> {
    cfg.validate()?;
    let mut cache = CouplingCache::default();
    let mut points = Vec::new();
    let grid = cfg.n_t_list.iter().flat_map(|&n| cfg.spacing_list.iter().map(move |&d| (n, d)));
    for (index, (n_t, spacing)) in grid.enumerate() {
        match run_point(cfg, &mut cache, index, n_t, spacing) {
            Ok(records) => points.extend(records),
            Err(e) => points.extend(cfg.experiment_kind.strategies().iter().map(|&strategy| PointRecord {
                n_t,
                spacing,
                strategy,
                mean: f64::NAN,
                stderr: f64::NAN,
                theory: None,
                n_trials: cfg.n_trials,
                error: Some(e.to_string()),
            })),
        }
    }
    Ok(TrialStats { experiment: cfg.experiment_kind, seed: cfg.seed, config_hash: cfg.hash(), points })
}
