//! Run configuration: a line-oriented `key = value` file with `#` comments.
//!
//! Every key is listed in [`KEYS`]. A config may start from a preset
//! (`preset = NAME`), later keys override it. Unknown keys are errors.

use std::fmt::Write as _;
use std::path::PathBuf;

use glmclean::scenarios::{InductionWave, RotatingMasses, ToyInit, ToyVariant, WaveMode};
use glmclean::state::Slicing;
use glmclean::{
    Boundary, Ccz4Params, Cleaning, Discretization, EvolveConfig, GridSpec, InductionParams,
    ToyParams,
};

use crate::presets;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    Value {
        key: String,
        value: String,
        reason: String,
    },
    #[error("unknown preset `{0}` (see `glmclean presets`)")]
    UnknownPreset(String),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    RobustStability,
    ToyCurlFree,
    ToyPureCurlError,
    InductionWave,
    RotatingMasses,
    ExternalFile,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::RobustStability,
        Scenario::ToyCurlFree,
        Scenario::ToyPureCurlError,
        Scenario::InductionWave,
        Scenario::RotatingMasses,
        Scenario::ExternalFile,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::RobustStability => "robust_stability",
            Scenario::ToyCurlFree => "toy_curl_free",
            Scenario::ToyPureCurlError => "toy_pure_curl_error",
            Scenario::InductionWave => "induction_wave",
            Scenario::RotatingMasses => "rotating_masses",
            Scenario::ExternalFile => "external_file",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s)
    }

    pub fn is_ccz4(self) -> bool {
        matches!(
            self,
            Scenario::RobustStability | Scenario::RotatingMasses | Scenario::ExternalFile
        )
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Preset the config started from, recorded in the metadata.
    pub preset: Option<String>,
    pub scenario: Scenario,
    pub n: [usize; 3],
    pub domain_min: [f64; 3],
    pub domain_max: [f64; 3],
    pub boundary: [Boundary; 3],
    pub t_end: f64,
    pub cfl: f64,
    pub dt: Option<f64>,
    pub ko_sigma: f64,
    pub divergence_threshold: f64,
    pub seed: u64,
    pub perturbation: f64,
    pub glm: bool,
    /// Worker threads; 0 uses the rayon default.
    pub threads: usize,
    pub ccz4: Ccz4Params<f64>,
    pub toy: ToyParams<f64>,
    pub toy_init: ToyInit<f64>,
    pub induction: InductionParams<f64>,
    pub wave: InductionWave<f64>,
    pub rotating: RotatingMasses<f64>,
    pub initial_data: Option<PathBuf>,
    /// Whether the external file carries a trailing `tau` component.
    pub external_tracer: bool,
    pub output_dir: Option<PathBuf>,
    pub monitor_interval: Option<f64>,
    pub snapshot_times: Vec<f64>,
    pub snapshot_fields: Vec<String>,
    pub cut_axes: Vec<usize>,
    pub cut_fields: Vec<String>,
    /// Departures from the reference setup, written to `run.json`.
    pub deviations: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            preset: None,
            scenario: Scenario::RobustStability,
            n: [20; 3],
            domain_min: [-0.5; 3],
            domain_max: [0.5; 3],
            boundary: [Boundary::Periodic; 3],
            t_end: 1.0,
            cfl: 0.25,
            dt: None,
            ko_sigma: 0.05,
            divergence_threshold: 1e6,
            seed: 0,
            perturbation: 0.0,
            glm: true,
            threads: 0,
            ccz4: Ccz4Params::robust_stability(),
            toy: ToyParams::default(),
            toy_init: ToyInit::new(ToyVariant::CurlFree),
            induction: InductionParams::default(),
            wave: InductionWave {
                modes: [1, 0, 0],
                amplitude: 0.1,
                polarization: [0.0, 1.0, 0.0],
                mode: WaveMode::Transverse,
            },
            rotating: RotatingMasses::default(),
            initial_data: None,
            external_tracer: false,
            output_dir: None,
            monitor_interval: None,
            snapshot_times: Vec::new(),
            snapshot_fields: Vec::new(),
            cut_axes: Vec::new(),
            cut_fields: Vec::new(),
            deviations: Vec::new(),
        }
    }
}

/// Every accepted key with a one-line description.
pub const KEYS: &[(&str, &str)] = &[
    ("preset", "start from a named preset; must come first"),
    ("scenario", "robust_stability | toy_curl_free | toy_pure_curl_error | induction_wave | rotating_masses | external_file"),
    ("grid.n", "cells per axis: one value for a cube or three values"),
    ("grid.min", "lower domain corner, one or three values"),
    ("grid.max", "upper domain corner, one or three values"),
    ("grid.boundary", "periodic | extrapolate, one or three values"),
    ("time.t_end", "final time"),
    ("time.cfl", "Courant number of the adaptive step"),
    ("time.dt", "fixed step; `auto` uses the CFL rule"),
    ("time.ko_sigma", "Kreiss-Oliger dissipation strength"),
    ("time.divergence_threshold", "largest |Q| before the run is declared diverged"),
    ("seed", "seed of the initial perturbation"),
    ("perturbation", "amplitude of the uniform random perturbation added to every component"),
    ("glm", "on | off: curl and divergence cleaning (off pins cleaning fields to zero)"),
    ("threads", "worker threads, 0 for the default"),
    ("ccz4.slicing", "harmonic | one_plus_log"),
    ("ccz4.shift", "on | off: gamma-driver shift evolution"),
    ("ccz4.f", "gamma-driver coefficient f"),
    ("ccz4.mu", "gamma-driver coefficient mu"),
    ("ccz4.eta", "gamma-driver damping eta"),
    ("ccz4.c", "coupling of Theta into the lapse and curvature sources"),
    ("ccz4.e", "Z4 cleaning speed e"),
    ("ccz4.kappa1", "Z4 damping kappa1"),
    ("ccz4.kappa2", "Z4 damping kappa2"),
    ("ccz4.kappa3", "Z4 damping kappa3"),
    ("ccz4.a_c", "curl-cleaning speed of every family"),
    ("ccz4.a_d", "divergence-cleaning speed of every family"),
    ("ccz4.eps_c", "curl-cleaning damping of every family"),
    ("ccz4.eps_d", "divergence-cleaning damping of every family"),
    ("ccz4.A", "a_c, a_d, eps_c, eps_d of the A_k family"),
    ("ccz4.B", "a_c, a_d, eps_c, eps_d of the B_k^i family"),
    ("ccz4.D", "a_c, a_d, eps_c, eps_d of the D_kij family"),
    ("ccz4.P", "a_c, a_d, eps_c, eps_d of the P_k family"),
    ("toy.c0", "coupling of J into the momentum flux"),
    ("toy.a_c", "curl-cleaning speed"),
    ("toy.a_d", "divergence-cleaning speed"),
    ("toy.eps_c", "curl-cleaning damping"),
    ("toy.eps_d", "divergence-cleaning damping"),
    ("toy.amplitude", "scale of the initial J"),
    ("toy.width", "Gaussian width of the pure-curl vortex"),
    ("toy.velocity", "scale of the solenoidal velocity of the curl-free data"),
    ("induction.c_light", "light speed"),
    ("induction.a_d", "divergence-cleaning speed"),
    ("induction.eps_d", "divergence-cleaning damping"),
    ("induction.modes", "integer wave numbers per axis"),
    ("induction.amplitude", "wave amplitude"),
    ("induction.polarization", "B polarization of the transverse mode"),
    ("induction.mode", "transverse | longitudinal"),
    ("rotating.amplitude", "A_L, A_R"),
    ("rotating.sigma", "sigma_L, sigma_R"),
    ("rotating.center_l", "x_L"),
    ("rotating.center_r", "x_R"),
    ("rotating.omega", "angular velocity vector"),
    ("rotating.r_cut", "radius of the rotating region"),
    ("rotating.smoothing_cells", "width of the velocity cut-off in cells, 0 for a sharp cut"),
    ("external.path", "initial-data file (binary format, see README)"),
    ("external.tracer", "on | off: file carries a trailing tau component"),
    ("output.dir", "output directory"),
    ("output.monitor_interval", "time between constraint reports; `none` reports only start and end"),
    ("output.snapshot_times", "comma-separated snapshot times, empty for none"),
    ("output.snapshot_fields", "comma-separated component names, empty for all"),
    ("output.cut_axes", "comma-separated axes (x, y, z) for 1D cuts through the centre"),
    ("output.cut_fields", "comma-separated component names of the cuts, empty for all"),
];

fn value_err(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Value {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

fn list(value: &str) -> Vec<&str> {
    if value.trim().is_empty() {
        return Vec::new();
    }
    value.split(',').map(str::trim).collect()
}

fn real(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| value_err(key, v, "not a number"))?;
    if !x.is_finite() {
        return Err(value_err(key, v, "not finite"));
    }
    Ok(x)
}

fn reals(key: &str, v: &str, n: usize) -> Result<Vec<f64>, ConfigError> {
    let xs = list(v)
        .into_iter()
        .map(|s| real(key, s))
        .collect::<Result<Vec<_>, _>>()?;
    if xs.len() != n {
        return Err(value_err(key, v, format!("expected {n} values")));
    }
    Ok(xs)
}

fn vec3(key: &str, v: &str) -> Result<[f64; 3], ConfigError> {
    let xs = reals(key, v, 3)?;
    Ok([xs[0], xs[1], xs[2]])
}

/// One value broadcast to three axes, or three values.
fn per_axis<T: Copy>(
    key: &str,
    v: &str,
    parse: impl Fn(&str) -> Result<T, ConfigError>,
) -> Result<[T; 3], ConfigError> {
    let items = list(v);
    match items.len() {
        1 => Ok([parse(items[0])?; 3]),
        3 => Ok([parse(items[0])?, parse(items[1])?, parse(items[2])?]),
        _ => Err(value_err(key, v, "expected one or three values")),
    }
}

fn switch(key: &str, v: &str) -> Result<bool, ConfigError> {
    match v.trim() {
        "on" | "true" | "1" => Ok(true),
        "off" | "false" | "0" => Ok(false),
        _ => Err(value_err(key, v, "expected on or off")),
    }
}

fn count(key: &str, v: &str) -> Result<usize, ConfigError> {
    v.trim()
        .parse()
        .map_err(|_| value_err(key, v, "not a nonnegative integer"))
}

fn axis(key: &str, v: &str) -> Result<usize, ConfigError> {
    match v {
        "x" => Ok(0),
        "y" => Ok(1),
        "z" => Ok(2),
        _ => Err(value_err(key, v, "expected x, y or z")),
    }
}

fn cleaning(key: &str, v: &str) -> Result<Cleaning<f64>, ConfigError> {
    let xs = reals(key, v, 4)?;
    Ok(Cleaning::new(xs[0], xs[1], xs[2], xs[3]))
}

fn fmt_list<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn fmt_switch(b: bool) -> &'static str {
    if b {
        "on"
    } else {
        "off"
    }
}

const AXES: [&str; 3] = ["x", "y", "z"];

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        let k = key;
        match key {
            "preset" => return Err(value_err(k, v, "a preset must be the first setting")),
            "scenario" => {
                self.scenario =
                    Scenario::parse(v).ok_or_else(|| value_err(k, v, "unknown scenario"))?;
            }
            "grid.n" => self.n = per_axis(k, v, |s| count(k, s))?,
            "grid.min" => self.domain_min = per_axis(k, v, |s| real(k, s))?,
            "grid.max" => self.domain_max = per_axis(k, v, |s| real(k, s))?,
            "grid.boundary" => {
                self.boundary = per_axis(k, v, |s| match s {
                    "periodic" => Ok(Boundary::Periodic),
                    "extrapolate" => Ok(Boundary::Extrapolate),
                    _ => Err(value_err(k, s, "expected periodic or extrapolate")),
                })?
            }
            "time.t_end" => self.t_end = real(k, v)?,
            "time.cfl" => self.cfl = real(k, v)?,
            "time.dt" => self.dt = if v == "auto" { None } else { Some(real(k, v)?) },
            "time.ko_sigma" => self.ko_sigma = real(k, v)?,
            "time.divergence_threshold" => self.divergence_threshold = real(k, v)?,
            "seed" => {
                self.seed = v
                    .parse()
                    .map_err(|_| value_err(k, v, "not an unsigned integer"))?
            }
            "perturbation" => self.perturbation = real(k, v)?,
            "glm" => self.glm = switch(k, v)?,
            "threads" => self.threads = count(k, v)?,
            "ccz4.slicing" => {
                self.ccz4.slicing = Slicing::parse(v)
                    .ok_or_else(|| value_err(k, v, "expected harmonic or one_plus_log"))?
            }
            "ccz4.shift" => self.ccz4.shift = switch(k, v)?,
            "ccz4.f" => self.ccz4.f = real(k, v)?,
            "ccz4.mu" => self.ccz4.mu = real(k, v)?,
            "ccz4.eta" => self.ccz4.eta = real(k, v)?,
            "ccz4.c" => self.ccz4.c = real(k, v)?,
            "ccz4.e" => self.ccz4.e = real(k, v)?,
            "ccz4.kappa1" => self.ccz4.kappa1 = real(k, v)?,
            "ccz4.kappa2" => self.ccz4.kappa2 = real(k, v)?,
            "ccz4.kappa3" => self.ccz4.kappa3 = real(k, v)?,
            "ccz4.a_c" | "ccz4.a_d" | "ccz4.eps_c" | "ccz4.eps_d" => {
                let x = real(k, v)?;
                let cl = &mut self.ccz4.cleaning;
                for c in [&mut cl.a, &mut cl.b, &mut cl.d, &mut cl.p] {
                    match key {
                        "ccz4.a_c" => c.a_c = x,
                        "ccz4.a_d" => c.a_d = x,
                        "ccz4.eps_c" => c.eps_c = x,
                        _ => c.eps_d = x,
                    }
                }
            }
            "ccz4.A" => self.ccz4.cleaning.a = cleaning(k, v)?,
            "ccz4.B" => self.ccz4.cleaning.b = cleaning(k, v)?,
            "ccz4.D" => self.ccz4.cleaning.d = cleaning(k, v)?,
            "ccz4.P" => self.ccz4.cleaning.p = cleaning(k, v)?,
            "toy.c0" => self.toy.c0 = real(k, v)?,
            "toy.a_c" => self.toy.a_c = real(k, v)?,
            "toy.a_d" => self.toy.a_d = real(k, v)?,
            "toy.eps_c" => self.toy.eps_c = real(k, v)?,
            "toy.eps_d" => self.toy.eps_d = real(k, v)?,
            "toy.amplitude" => self.toy_init.amplitude = real(k, v)?,
            "toy.width" => self.toy_init.width = real(k, v)?,
            "toy.velocity" => self.toy_init.velocity = real(k, v)?,
            "induction.c_light" => self.induction.c_light = real(k, v)?,
            "induction.a_d" => self.induction.a_d = real(k, v)?,
            "induction.eps_d" => self.induction.eps_d = real(k, v)?,
            "induction.modes" => {
                let m = list(v)
                    .into_iter()
                    .map(|s| {
                        s.parse::<i32>()
                            .map_err(|_| value_err(k, v, "expected integers"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if m.len() != 3 {
                    return Err(value_err(k, v, "expected 3 values"));
                }
                self.wave.modes = [m[0], m[1], m[2]];
            }
            "induction.amplitude" => self.wave.amplitude = real(k, v)?,
            "induction.polarization" => self.wave.polarization = vec3(k, v)?,
            "induction.mode" => {
                self.wave.mode = match v {
                    "transverse" => WaveMode::Transverse,
                    "longitudinal" => WaveMode::Longitudinal,
                    _ => return Err(value_err(k, v, "expected transverse or longitudinal")),
                }
            }
            "rotating.amplitude" => {
                let a = reals(k, v, 2)?;
                self.rotating.amplitude = [a[0], a[1]];
            }
            "rotating.sigma" => {
                let a = reals(k, v, 2)?;
                self.rotating.sigma = [a[0], a[1]];
            }
            "rotating.center_l" => self.rotating.centers[0] = vec3(k, v)?,
            "rotating.center_r" => self.rotating.centers[1] = vec3(k, v)?,
            "rotating.omega" => self.rotating.omega = vec3(k, v)?,
            "rotating.r_cut" => self.rotating.r_cut = real(k, v)?,
            "rotating.smoothing_cells" => self.rotating.smoothing_cells = real(k, v)?,
            "external.path" => {
                self.initial_data = if v.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(v))
                }
            }
            "external.tracer" => self.external_tracer = switch(k, v)?,
            "output.dir" => {
                self.output_dir = if v.is_empty() {
                    None
                } else {
                    Some(PathBuf::from(v))
                }
            }
            "output.monitor_interval" => {
                self.monitor_interval = if v == "none" { None } else { Some(real(k, v)?) }
            }
            "output.snapshot_times" => {
                self.snapshot_times = list(v)
                    .into_iter()
                    .map(|s| real(k, s))
                    .collect::<Result<_, _>>()?
            }
            "output.snapshot_fields" => {
                self.snapshot_fields = list(v).into_iter().map(String::from).collect()
            }
            "output.cut_axes" => {
                self.cut_axes = list(v)
                    .into_iter()
                    .map(|s| axis(k, s))
                    .collect::<Result<_, _>>()?
            }
            "output.cut_fields" => {
                self.cut_fields = list(v).into_iter().map(String::from).collect()
            }
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Parses config text. A leading `preset = NAME` selects the base.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            let k = k.trim();
            if k.is_empty() {
                return Err(ConfigError::Syntax {
                    line: i + 1,
                    text: raw.to_string(),
                });
            }
            entries.push((k.to_string(), v.trim().to_string()));
        }
        let mut rest = entries.as_slice();
        let mut cfg = match rest.first() {
            Some((k, v)) if k == "preset" => {
                rest = &rest[1..];
                presets::preset(v)?
            }
            _ => RunConfig::default(),
        };
        for (k, v) in rest {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Sets the cell count of the first axis to `n` and scales the others by
    /// the same factor, keeping single-cell axes.
    pub fn set_resolution(&mut self, n: usize) {
        let base = self.n[0].max(1);
        for d in 0..3 {
            if d == 0 {
                self.n[d] = n;
            } else if self.n[d] > 1 {
                self.n[d] = ((self.n[d] * n) as f64 / base as f64).round().max(1.0) as usize;
            }
        }
    }

    pub fn grid(&self) -> Result<GridSpec<f64>, ConfigError> {
        GridSpec::new(self.n, self.domain_min, self.domain_max, self.boundary)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn evolve_config(&self) -> EvolveConfig<f64> {
        EvolveConfig {
            t_end: self.t_end,
            cfl: self.cfl,
            fixed_dt: self.dt,
            ko_sigma: self.ko_sigma,
            monitor_interval: self.monitor_interval,
            snapshot_times: self.snapshot_times.clone(),
            divergence_threshold: self.divergence_threshold,
        }
    }

    /// FO-CCZ4 parameters with the GLM switch applied.
    pub fn ccz4_params(&self) -> Ccz4Params<f64> {
        Ccz4Params {
            glm_enabled: self.glm,
            ..self.ccz4
        }
    }

    pub fn toy_params(&self) -> ToyParams<f64> {
        ToyParams {
            glm_enabled: self.glm,
            ..self.toy.clone()
        }
    }

    pub fn induction_params(&self) -> InductionParams<f64> {
        InductionParams {
            glm_enabled: self.glm,
            ..self.induction
        }
    }

    /// Checks everything that can be checked without allocating the grid.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |e: &dyn std::fmt::Display| ConfigError::Invalid(e.to_string());
        let grid = self.grid()?;
        Discretization::new(&grid, self.ko_sigma).map_err(|e| invalid(&e))?;
        self.evolve_config().validate().map_err(|e| invalid(&e))?;
        if !(self.ko_sigma >= 0.0) {
            return Err(ConfigError::Invalid(
                "time.ko_sigma must be nonnegative".into(),
            ));
        }
        if !(self.divergence_threshold > 0.0) {
            return Err(ConfigError::Invalid(
                "time.divergence_threshold must be positive".into(),
            ));
        }
        if !(self.perturbation >= 0.0) {
            return Err(ConfigError::Invalid(
                "perturbation must be nonnegative".into(),
            ));
        }
        match self.scenario {
            Scenario::RobustStability | Scenario::ExternalFile => {
                self.ccz4_params().validate().map_err(|e| invalid(&e))?
            }
            Scenario::RotatingMasses => {
                self.ccz4_params().validate().map_err(|e| invalid(&e))?;
                self.rotating.validate().map_err(|e| invalid(&e))?;
            }
            Scenario::ToyCurlFree | Scenario::ToyPureCurlError => {
                self.toy_params().validate().map_err(|e| invalid(&e))?;
                if !(self.toy_init.width > 0.0) {
                    return Err(ConfigError::Invalid("toy.width must be positive".into()));
                }
            }
            Scenario::InductionWave => {
                self.induction_params()
                    .validate()
                    .map_err(|e| invalid(&e))?;
                if self.wave.modes == [0; 3] {
                    return Err(ConfigError::Invalid(
                        "induction.modes must not all be zero".into(),
                    ));
                }
            }
        }
        if self.scenario == Scenario::ExternalFile && self.initial_data.is_none() {
            return Err(ConfigError::Invalid(
                "external_file needs external.path".into(),
            ));
        }
        if self.snapshot_times.iter().any(|t| !(*t >= 0.0)) {
            return Err(ConfigError::Invalid(
                "snapshot times must be nonnegative".into(),
            ));
        }
        let descriptor = crate::run::descriptor(self);
        for name in self.snapshot_fields.iter().chain(&self.cut_fields) {
            if descriptor.io_index_of(name).is_none() {
                return Err(ConfigError::Invalid(format!(
                    "unknown field `{name}` for scenario {}",
                    self.scenario.name()
                )));
            }
        }
        Ok(())
    }

    /// Effective configuration with every key, parseable by [`RunConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        let c = &self.ccz4;
        let cl = |c: &Cleaning<f64>| fmt_list(&[c.a_c, c.a_d, c.eps_c, c.eps_d]);
        kv("scenario", self.scenario.name().into());
        kv("grid.n", fmt_list(&self.n));
        kv("grid.min", fmt_list(&self.domain_min));
        kv("grid.max", fmt_list(&self.domain_max));
        kv("grid.boundary", fmt_list(&self.boundary.map(|b| b.name())));
        kv("time.t_end", self.t_end.to_string());
        kv("time.cfl", self.cfl.to_string());
        kv("time.dt", self.dt.map_or("auto".into(), |d| d.to_string()));
        kv("time.ko_sigma", self.ko_sigma.to_string());
        kv(
            "time.divergence_threshold",
            self.divergence_threshold.to_string(),
        );
        kv("seed", self.seed.to_string());
        kv("perturbation", self.perturbation.to_string());
        kv("glm", fmt_switch(self.glm).into());
        kv("threads", self.threads.to_string());
        kv("ccz4.slicing", c.slicing.name().into());
        kv("ccz4.shift", fmt_switch(c.shift).into());
        kv("ccz4.f", c.f.to_string());
        kv("ccz4.mu", c.mu.to_string());
        kv("ccz4.eta", c.eta.to_string());
        kv("ccz4.c", c.c.to_string());
        kv("ccz4.e", c.e.to_string());
        kv("ccz4.kappa1", c.kappa1.to_string());
        kv("ccz4.kappa2", c.kappa2.to_string());
        kv("ccz4.kappa3", c.kappa3.to_string());
        kv("ccz4.A", cl(&c.cleaning.a));
        kv("ccz4.B", cl(&c.cleaning.b));
        kv("ccz4.D", cl(&c.cleaning.d));
        kv("ccz4.P", cl(&c.cleaning.p));
        kv("toy.c0", self.toy.c0.to_string());
        kv("toy.a_c", self.toy.a_c.to_string());
        kv("toy.a_d", self.toy.a_d.to_string());
        kv("toy.eps_c", self.toy.eps_c.to_string());
        kv("toy.eps_d", self.toy.eps_d.to_string());
        kv("toy.amplitude", self.toy_init.amplitude.to_string());
        kv("toy.width", self.toy_init.width.to_string());
        kv("toy.velocity", self.toy_init.velocity.to_string());
        kv("induction.c_light", self.induction.c_light.to_string());
        kv("induction.a_d", self.induction.a_d.to_string());
        kv("induction.eps_d", self.induction.eps_d.to_string());
        kv("induction.modes", fmt_list(&self.wave.modes));
        kv("induction.amplitude", self.wave.amplitude.to_string());
        kv("induction.polarization", fmt_list(&self.wave.polarization));
        let mode = match self.wave.mode {
            WaveMode::Transverse => "transverse",
            WaveMode::Longitudinal => "longitudinal",
        };
        kv("induction.mode", mode.into());
        let r = &self.rotating;
        kv("rotating.amplitude", fmt_list(&r.amplitude));
        kv("rotating.sigma", fmt_list(&r.sigma));
        kv("rotating.center_l", fmt_list(&r.centers[0]));
        kv("rotating.center_r", fmt_list(&r.centers[1]));
        kv("rotating.omega", fmt_list(&r.omega));
        kv("rotating.r_cut", r.r_cut.to_string());
        kv("rotating.smoothing_cells", r.smoothing_cells.to_string());
        kv(
            "external.path",
            self.initial_data
                .as_ref()
                .map_or(String::new(), |p| p.display().to_string()),
        );
        kv("external.tracer", fmt_switch(self.external_tracer).into());
        kv(
            "output.dir",
            self.output_dir
                .as_ref()
                .map_or(String::new(), |p| p.display().to_string()),
        );
        kv(
            "output.monitor_interval",
            self.monitor_interval
                .map_or("none".into(), |v| v.to_string()),
        );
        kv("output.snapshot_times", fmt_list(&self.snapshot_times));
        kv("output.snapshot_fields", self.snapshot_fields.join(", "));
        kv(
            "output.cut_axes",
            fmt_list(&self.cut_axes.iter().map(|a| AXES[*a]).collect::<Vec<_>>()),
        );
        kv("output.cut_fields", self.cut_fields.join(", "));
        let mut out = String::new();
        if let Some(p) = &self.preset {
            let _ = writeln!(out, "preset = {p}");
        }
        for d in &self.deviations {
            let _ = writeln!(out, "# deviation: {d}");
        }
        out + &s
    }
}
