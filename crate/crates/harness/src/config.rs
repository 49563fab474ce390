//! Run configuration: TOML files layered over the preset of their experiment.
//!
//! A config names its experiment in `[experiment] name`; every key it leaves
//! out is taken from that experiment's preset, so tolerances and calibration
//! constants always come from a config file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bmhd_core::calibration::Calibration;
use bmhd_core::experiments::TrilinearIndices;
use bmhd_core::littlewood_paley::{build_partition, default_partition, DyadicPartition};
use bmhd_core::norms::BesovSpec;
use bmhd_core::spectral::{make_grid, Grid};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    LpCheck,
    BonyCheck,
    Norms,
    Solve,
    Picard,
    Smalldata,
    Local,
    Calderon,
    Weakstrong,
    Trilinear,
    Growth,
    LorentzCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 12] = [
        Self::LpCheck,
        Self::BonyCheck,
        Self::Norms,
        Self::Solve,
        Self::Picard,
        Self::Smalldata,
        Self::Local,
        Self::Calderon,
        Self::Weakstrong,
        Self::Trilinear,
        Self::Growth,
        Self::LorentzCheck,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::LpCheck => "lp-check",
            Self::BonyCheck => "bony-check",
            Self::Norms => "norms",
            Self::Solve => "solve",
            Self::Picard => "picard",
            Self::Smalldata => "smalldata",
            Self::Local => "local",
            Self::Calderon => "calderon",
            Self::Weakstrong => "weakstrong",
            Self::Trilinear => "trilinear",
            Self::Growth => "growth",
            Self::LorentzCheck => "lorentz-check",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown experiment {s:?}")))
    }
}

const PRESETS: [(&str, &str); 13] = [
    ("lp-check", include_str!("../presets/lp-check.toml")),
    ("bony-check", include_str!("../presets/bony-check.toml")),
    ("norms", include_str!("../presets/norms.toml")),
    ("solve", include_str!("../presets/solve.toml")),
    ("picard", include_str!("../presets/picard.toml")),
    ("smalldata", include_str!("../presets/smalldata.toml")),
    ("local", include_str!("../presets/local.toml")),
    ("calderon", include_str!("../presets/calderon.toml")),
    ("weakstrong", include_str!("../presets/weakstrong.toml")),
    ("trilinear", include_str!("../presets/trilinear.toml")),
    ("growth", include_str!("../presets/growth.toml")),
    ("lorentz-check", include_str!("../presets/lorentz-check.toml")),
    ("tg2d", include_str!("../presets/tg2d.toml")),
];

/// Text of a shipped preset.
pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dim: usize,
    pub n: usize,
    /// Band range; the default partition of the grid when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_min: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_max: Option<i32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Time samples of Picard and heat-flow meshes.
    pub n_times: usize,
    /// Stepper output cadence.
    pub sample_every: usize,
    /// Time exponent of the Picard working norm.
    pub q: f64,
    /// Data space `Ḃ^{n/p-1}_{p,r}` of the Picard runs.
    pub p: f64,
    pub r: f64,
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    /// Random solenoidal pair on `k_lo ≤ |k| ≤ k_hi`.
    Random,
    /// Random solenoidal pair on the covered annulus of the partition.
    Annulus,
    /// Taylor–Green velocity, `b = ∇^⊥(cos x cos 2y)` (2D).
    TaylorGreen,
    /// Orszag–Tang vortex (2D).
    OrszagTang,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub kind: DataKind,
    /// `‖u‖₂² + ‖b‖₂²`, unless `norm` is set.
    pub energy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_hi: Option<f64>,
    /// Spectral slope of random data.
    pub slope: f64,
    /// Target norm in the experiment's data space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: Experiment,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub grid: GridConfig,
    pub solver: SolverConfig,
    pub data: DataConfig,
    pub experiment: ExperimentConfig,
    #[serde(default)]
    pub calibration: BTreeMap<String, f64>,
}

fn parse_table(text: &str, origin: &str) -> Result<toml::Table> {
    text.parse::<toml::Table>().map_err(|e| HarnessError::Parse {
        origin: origin.into(),
        message: e.to_string(),
    })
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn params_of(t: &toml::Table) -> Vec<String> {
    t.get("experiment")
        .and_then(|e| e.get("params"))
        .and_then(|p| p.as_table())
        .map(|p| p.keys().cloned().collect())
        .unwrap_or_default()
}

/// Parses config text, fills it from the experiment's preset and validates.
pub fn parse_config(text: &str, origin: &str) -> Result<RunConfig> {
    let user = parse_table(text, origin)?;
    let name = user
        .get("experiment")
        .and_then(|e| e.get("name"))
        .and_then(|n| n.as_str())
        .ok_or_else(|| HarnessError::Config(format!("{origin}: missing [experiment] name")))?;
    let exp: Experiment = name.parse()?;
    let mut merged = parse_table(preset(exp.as_str()).expect("every experiment has a preset"), exp.as_str())?;
    let known = params_of(&merged);
    if let Some(k) = params_of(&user).into_iter().find(|k| !known.contains(k)) {
        return Err(HarnessError::Config(format!("{origin}: unknown parameter {k:?} for {exp}")));
    }
    merge(&mut merged, user);
    let cfg: RunConfig = toml::Value::Table(merged).try_into().map_err(|e: toml::de::Error| HarnessError::Parse {
        origin: origin.into(),
        message: e.to_string(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_config(&text, &path.display().to_string())
}

/// A file path if one exists, otherwise a preset name.
pub fn resolve_config(arg: &str) -> Result<RunConfig> {
    let path = Path::new(arg);
    if path.exists() {
        return load_config(path);
    }
    match preset(arg) {
        Some(text) => parse_config(text, &format!("preset {arg}")),
        None => Err(HarnessError::Config(format!("{arg}: no such file or preset"))),
    }
}

pub fn default_config(exp: Experiment) -> RunConfig {
    resolve_config(exp.as_str()).expect("presets validate")
}

fn hypothesis(lemma: &'static str, detail: String) -> HarnessError {
    bmhd_core::Error::Hypothesis { lemma, detail }.into()
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(HarnessError::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// First 16 hex digits of the SHA-256 of the serialized config, output directory excluded.
    pub fn hash(&self) -> String {
        let keyed = RunConfig { out: PathBuf::new(), ..self.clone() };
        let digest = Sha256::digest(keyed.to_toml().as_bytes());
        hex::encode(&digest[..8])
    }

    pub fn grid(&self) -> Result<Grid> {
        Ok(make_grid(self.grid.dim, self.grid.n)?)
    }

    pub fn partition(&self, grid: &Grid) -> Result<DyadicPartition> {
        Ok(match (self.grid.j_min, self.grid.j_max) {
            (None, None) => default_partition(grid)?,
            (Some(lo), Some(hi)) => build_partition(grid, lo, hi)?,
            _ => return Err(HarnessError::Config("set both j_min and j_max or neither".into())),
        })
    }

    pub fn param(&self, key: &str) -> Result<f64> {
        self.experiment
            .params
            .get(key)
            .copied()
            .ok_or_else(|| HarnessError::Config(format!("missing parameter {key:?}")))
    }

    /// A parameter that must be a nonnegative integer.
    pub fn count(&self, key: &str) -> Result<usize> {
        let v = self.param(key)?;
        if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
            Ok(v as usize)
        } else {
            Err(HarnessError::Config(format!("parameter {key:?} must be a nonnegative integer, got {v}")))
        }
    }

    pub fn set_param(&mut self, key: &str, v: f64) {
        self.experiment.params.insert(key.into(), v);
    }

    pub fn constant(&self, key: &str) -> Result<f64> {
        self.calibration
            .get(key)
            .copied()
            .ok_or_else(|| HarnessError::Config(format!("calibration constant {key:?} missing")))
    }

    /// Two-bank protocol: `safety`, `max_drift` and an optional fixed `constant`.
    pub fn protocol(&self) -> Calibration {
        let d = Calibration::default();
        Calibration {
            safety: self.calibration.get("safety").copied().unwrap_or(d.safety),
            max_drift: self.calibration.get("max_drift").copied().unwrap_or(d.max_drift),
            fixed: self.calibration.get("constant").copied(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.grid()?;
        self.partition(&grid)?;
        let s = &self.solver;
        positive("solver.dt", s.dt)?;
        positive("solver.t_end", s.t_end)?;
        positive("solver.tol", s.tol)?;
        if s.n_times < 2 || s.sample_every == 0 || s.max_iter == 0 {
            return Err(HarnessError::Config("need n_times ≥ 2, sample_every ≥ 1, max_iter ≥ 1".into()));
        }
        self.validate_data()?;
        if let Some((k, v)) = self.calibration.iter().find(|(_, v)| v.is_nan()) {
            return Err(HarnessError::Config(format!("calibration constant {k:?} is {v}")));
        }
        self.validate_experiment(grid.dim())
    }

    fn validate_data(&self) -> Result<()> {
        let d = &self.data;
        positive("data.energy", d.energy)?;
        if let Some(n) = d.norm {
            positive("data.norm", n)?;
        }
        match d.kind {
            DataKind::Random => match (d.k_lo, d.k_hi) {
                (Some(lo), Some(hi)) if lo > 0.0 && hi > lo => Ok(()),
                _ => Err(HarnessError::Config("random data needs 0 < k_lo < k_hi".into())),
            },
            DataKind::TaylorGreen | DataKind::OrszagTang if self.grid.dim != 2 => {
                Err(HarnessError::Config("Taylor–Green and Orszag–Tang data are 2D".into()))
            }
            _ => Ok(()),
        }
    }

    fn need_norm(&self) -> Result<f64> {
        self.data
            .norm
            .ok_or_else(|| HarnessError::Config(format!("{} needs data.norm", self.experiment.name)))
    }

    fn validate_experiment(&self, dim: usize) -> Result<()> {
        let n = dim as f64;
        match self.experiment.name {
            Experiment::LpCheck | Experiment::BonyCheck => {
                if self.count("bank")? == 0 {
                    return Err(HarnessError::Config("bank must be nonempty".into()));
                }
                if self.experiment.name == Experiment::BonyCheck && self.param("slope_min")? > self.param("slope_max")? {
                    return Err(HarnessError::Config("slope_min > slope_max".into()));
                }
            }
            Experiment::Norms => {
                BesovSpec::new(self.param("s")?, self.param("p")?, self.param("r")?)?;
                if !(self.param("rho")? >= 1.0) {
                    return Err(HarnessError::Config("rho must be ≥ 1".into()));
                }
            }
            Experiment::Solve => {}
            Experiment::Picard | Experiment::Smalldata | Experiment::Local => {
                let s = &self.solver;
                if !(s.p >= 1.0 && s.p.is_finite() && s.r >= 1.0 && s.q > 2.0 && s.q.is_finite()) {
                    return Err(hypothesis(
                        "Theorem 1.1",
                        format!("needs 1 ≤ p < ∞, 1 ≤ r ≤ ∞, 2 < q < ∞; got p = {}, r = {}, q = {}", s.p, s.r, s.q),
                    ));
                }
                BesovSpec::new(n / s.p - 1.0, s.p, s.r)?;
                self.need_norm()?;
                if self.experiment.name == Experiment::Local {
                    self.count("max_halvings")?;
                }
            }
            Experiment::Calderon | Experiment::Growth => {
                if dim != 2 {
                    return Err(HarnessError::Config(format!("{} is a 2D experiment", self.experiment.name)));
                }
                let (p, r) = (self.param("p")?, self.param("r")?);
                if self.experiment.name == Experiment::Growth {
                    if !(p > 2.0 && p.is_finite() && r >= 1.0 && r.is_finite()) {
                        return Err(hypothesis("Theorem 1.3", format!("needs 2 < p < ∞, 1 ≤ r < ∞; got p = {p}, r = {r}")));
                    }
                    let (lo, hi) = (self.param("scale_min")?, self.param("scale_max")?);
                    positive("scale_min", lo)?;
                    if !(hi >= lo && hi.is_finite()) || self.count("n_scales")? == 0 {
                        return Err(HarnessError::Config("need scale_min ≤ scale_max and n_scales ≥ 1".into()));
                    }
                } else {
                    if !(p >= 1.0 && r >= 1.0 && p.is_finite() && r.is_finite()) || 2.0 / p + 2.0 / r <= 1.0 {
                        return Err(hypothesis("Lemma 4.1", format!("needs 2/p + 2/r > 1; got p = {p}, r = {r}")));
                    }
                    BesovSpec::new(self.param("res_s")?, self.param("res_p")?, self.param("res_r")?)?;
                }
                BesovSpec::new(self.param("bar_s")?, self.param("bar_p")?, self.param("bar_r")?)?;
                positive("threshold", self.param("threshold")?)?;
                self.need_norm()?;
            }
            Experiment::Weakstrong => {
                let (p, r) = (self.param("p")?, self.param("r")?);
                if !(p >= 1.0 && p.is_finite()) || !(r > 2.0 && r.is_finite()) || n / (2.0 * p) + 2.0 / r <= 1.0 {
                    return Err(hypothesis(
                        "Prop. 3.2",
                        format!("needs 1 ≤ p < ∞, 2 < r < ∞, n/(2p) + 2/r > 1; got p = {p}, r = {r}, n = {dim}"),
                    ));
                }
                positive("perturbation", self.param("perturbation")?)?;
                if self.grid.n < 32 || self.solver.sample_every % 2 != 0 {
                    return Err(HarnessError::Config(
                        "weakstrong runs the surrogate at n/2 with step 2dt: needs n ≥ 32 and even sample_every".into(),
                    ));
                }
            }
            Experiment::Trilinear => {
                TrilinearIndices { r: self.param("r")?, sigma: self.param("sigma")? }.validate(dim)?;
                positive("eps", self.param("eps")?)?;
                if self.count("bank")? == 0 || self.param("slope_min")? > self.param("slope_max")? {
                    return Err(HarnessError::Config("need bank ≥ 1 and slope_min ≤ slope_max".into()));
                }
            }
            Experiment::LorentzCheck => {
                if dim != 2 {
                    return Err(HarnessError::Config("lorentz-check samples a 2D grid".into()));
                }
                if self.count("trials")? == 0 {
                    return Err(HarnessError::Config("trials must be ≥ 1".into()));
                }
            }
        }
        Ok(())
    }
}
