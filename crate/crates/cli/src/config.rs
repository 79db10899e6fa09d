//! Run configuration: a TOML file (or the `config` field of a previous run's
//! manifest), then `--set` overrides, then the shorthand flags.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use milac::coupling::{DEFAULT_QUAD_ORDER, Z0};
use milac::montecarlo::{ExperimentConfig, ExperimentKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunFile {
    /// Seed of every random draw in the run.
    pub seed: u64,
    pub array: ArrayConfig,
    pub channel: ChannelConfig,
    pub optimize: OptimizeConfig,
    pub experiment: ExperimentSection,
    pub verify: VerifyConfig,
}

/// Transmit array. `n_t` and `spacing` are used by the single-array commands;
/// experiments sweep their own lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArrayConfig {
    pub n_t: usize,
    /// Columns of the planar grid (a single row if `n_t` is smaller).
    pub n_x: usize,
    /// Antenna pitch in wavelengths.
    pub spacing: f64,
    pub frequency_hz: f64,
    /// Dipole length in wavelengths.
    pub dipole_length: f64,
    pub quad_order: usize,
}

impl Default for ArrayConfig {
    fn default() -> Self {
        ArrayConfig {
            n_t: 64,
            n_x: 8,
            spacing: 0.5,
            frequency_hz: 28e9,
            dipole_length: 0.25,
            quad_order: DEFAULT_QUAD_ORDER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    /// Transmit power, W.
    pub p_t: f64,
    /// Path gain.
    pub rho: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig { p_t: 1.0, rho: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizeMode {
    /// Coupling-aware design on the coupled array.
    Aware,
    /// Design that assumes no coupling, deployed on the coupled array.
    Unaware,
    /// Uncoupled, matched array.
    NoCoupling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeConfig {
    pub mode: OptimizeMode,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig { mode: OptimizeMode::Aware }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    pub n_t_list: Vec<usize>,
    pub spacing_list: Vec<f64>,
    pub n_trials: usize,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        let d = ExperimentConfig::default();
        ExperimentSection {
            kind: d.experiment_kind,
            n_t_list: d.n_t_list,
            spacing_list: d.spacing_list,
            n_trials: d.n_trials,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// `default` (the configured dipole array), `identity` (`Z0 I`),
    /// `asymmetric` (the configured array with one mutual term perturbed),
    /// or a path to a coupling CSV.
    pub fixture: String,
    /// Random channels and networks drawn per check.
    pub instances: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { fixture: "default".into(), instances: 20 }
    }
}

impl RunFile {
    pub fn z0(&self) -> f64 {
        Z0
    }

    pub fn experiment_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            experiment_kind: self.experiment.kind,
            n_t_list: self.experiment.n_t_list.clone(),
            spacing_list: self.experiment.spacing_list.clone(),
            n_trials: self.experiment.n_trials,
            seed: self.seed,
            p_t: self.channel.p_t,
            rho: self.channel.rho,
            frequency_hz: self.array.frequency_hz,
            quad_order: self.array.quad_order,
            n_x: self.array.n_x,
            dipole_length: self.array.dipole_length,
        }
    }
}

/// Shorthand flags, applied after `--set`.
#[derive(Debug, Default, Clone)]
pub struct FlagOverrides {
    pub seed: Option<u64>,
    pub quad_order: Option<usize>,
    pub trials: Option<usize>,
}

/// Reads `path` (TOML, or a JSON manifest whose `config` field is reused),
/// applies `key=value` overrides with dotted keys, then the flags.
pub fn load(path: Option<&Path>, sets: &[String], flags: &FlagOverrides) -> Result<RunFile> {
    let mut table = match path {
        None => toml::Table::new(),
        Some(p) => read_table(p)?,
    };
    for assignment in sets {
        apply_set(&mut table, assignment)?;
    }
    let mut run: RunFile = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| anyhow!("invalid configuration: {}", e.message()))?;
    if let Some(seed) = flags.seed {
        run.seed = seed;
    }
    if let Some(q) = flags.quad_order {
        run.array.quad_order = q;
    }
    if let Some(t) = flags.trials {
        run.experiment.n_trials = t;
    }
    Ok(run)
}

fn read_table(path: &Path) -> Result<toml::Table> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    if path.extension().is_some_and(|e| e == "json") {
        let manifest: serde_json::Value =
            serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))?;
        let config = manifest
            .get("config")
            .ok_or_else(|| anyhow!("{} has no \"config\" field; is it a run manifest?", path.display()))?;
        let run: RunFile = serde_json::from_value(config.clone())
            .with_context(|| format!("manifest {} holds an invalid config", path.display()))?;
        return match toml::Value::try_from(run)? {
            toml::Value::Table(t) => Ok(t),
            _ => unreachable!("a struct serializes to a table"),
        };
    }
    text.parse::<toml::Table>()
        .map_err(|e| anyhow!("cannot parse {} as TOML: {}", path.display(), e.message()))
}

/// `a.b.c=value`; the value is read as a TOML value, or as a bare string if
/// it does not parse as one.
fn apply_set(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| anyhow!("--set expects key=value, got {assignment:?}"))?;
    let key = key.trim();
    let raw = raw.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        bail!("--set has an empty key segment in {assignment:?}");
    }
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));

    let segments: Vec<&str> = key.split('.').collect();
    let (last, parents) = segments.split_last().expect("nonempty key");
    let mut cursor = table;
    for seg in parents {
        let entry = cursor.entry(seg.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cursor = entry
            .as_table_mut()
            .ok_or_else(|| anyhow!("--set {key}: {seg} is not a table"))?;
    }
    cursor.insert(last.to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(text: &str) -> toml::Table {
        text.parse().unwrap()
    }

    #[test]
    fn set_creates_nested_keys_and_parses_values() {
        let mut t = toml::Table::new();
        apply_set(&mut t, "experiment.n_t_list=[64, 96]").unwrap();
        apply_set(&mut t, "array.spacing = 0.25").unwrap();
        apply_set(&mut t, "verify.fixture=identity").unwrap();
        assert_eq!(t, table("[experiment]\nn_t_list = [64, 96]\n[array]\nspacing = 0.25\n[verify]\nfixture = \"identity\""));
    }

    #[test]
    fn set_rejects_malformed() {
        let mut t = toml::Table::new();
        assert!(apply_set(&mut t, "novalue").is_err());
        assert!(apply_set(&mut t, "a..b=1").is_err());
        apply_set(&mut t, "seed=3").unwrap();
        assert!(apply_set(&mut t, "seed.x=1").is_err());
    }

    #[test]
    fn unknown_keys_are_reported() {
        let dir = std::env::temp_dir().join(format!("milac-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.toml");
        std::fs::write(&path, "[array]\nspacingg = 0.5\n").unwrap();
        let err = load(Some(&path), &[], &FlagOverrides::default()).unwrap_err().to_string();
        assert!(err.contains("spacingg"), "{err}");
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn flags_win_over_file_values() {
        let sets = vec!["seed=5".to_string(), "array.quad_order=32".to_string()];
        let flags = FlagOverrides { seed: Some(9), quad_order: None, trials: Some(7) };
        let run = load(None, &sets, &flags).unwrap();
        assert_eq!((run.seed, run.array.quad_order, run.experiment.n_trials), (9, 32, 7));
        let cfg = run.experiment_config();
        assert_eq!((cfg.seed, cfg.quad_order, cfg.n_trials), (9, 32, 7));
    }

    #[test]
    fn bundled_configs_load() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
        let mut kinds = Vec::new();
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            let run = load(Some(&path), &[], &FlagOverrides::default()).unwrap();
            run.experiment_config().validate().unwrap();
            kinds.push(run.experiment.kind);
        }
        for kind in [ExperimentKind::VsAntennas, ExperimentKind::AwareVsUnaware, ExperimentKind::VsDigital] {
            assert!(kinds.contains(&kind));
        }
    }
}
