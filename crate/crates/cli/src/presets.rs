//! Named benchmark setups. Desk-scale departures from the reference runs are
//! listed in `deviations` and end up in `run.json`.

use glmclean::scenarios::{ToyInit, ToyVariant, WaveMode};
use glmclean::{Boundary, Ccz4Params};

use crate::config::{ConfigError, RunConfig, Scenario};

pub const NAMES: [&str; 6] = [
    "robust-stability-coarse",
    "rotating-masses-desk",
    "toy-curl-free",
    "toy-pure-curl-error",
    "induction-wave",
    "tov-external",
];

fn base(name: &str, scenario: Scenario) -> RunConfig {
    RunConfig {
        preset: Some(name.to_string()),
        scenario,
        ..RunConfig::default()
    }
}

pub fn preset(name: &str) -> Result<RunConfig, ConfigError> {
    let mut c = match name {
        "robust-stability-coarse" => {
            let mut c = base(name, Scenario::RobustStability);
            c.n = [20; 3];
            c.domain_min = [-0.5; 3];
            c.domain_max = [0.5; 3];
            c.t_end = 100.0;
            c.cfl = 0.6;
            c.seed = 1;
            c.perturbation = 1e-6;
            c.ccz4 = Ccz4Params::robust_stability();
            c.monitor_interval = Some(1.0);
            c.deviations = vec![
                "20^3 finite-difference grid instead of 10^3 P3 DG elements".into(),
                "t_end = 100 instead of 1000".into(),
                "CFL 0.6 (solver default 0.25) to fit the runtime budget".into(),
            ];
            c
        }
        "rotating-masses-desk" => {
            let mut c = base(name, Scenario::RotatingMasses);
            c.n = [80, 80, 8];
            c.domain_min = [-40.0, -40.0, -4.0];
            c.domain_max = [40.0, 40.0, 4.0];
            c.t_end = 50.0;
            c.ccz4 = Ccz4Params::rotating_masses_glm();
            c.monitor_interval = Some(1.0);
            c.deviations = vec![
                "domain [-40,40]^2 x [-4,4] on 80^2 x 8 cells instead of [-160,160]^2 x [-3.2,3.2] on 320^2 x 4 P3 DG elements".into(),
                "t_end = 50 instead of 175".into(),
                "velocity cut-off smoothed over 2 cells".into(),
                "periodic boundaries on all axes".into(),
            ];
            c
        }
        "toy-curl-free" => {
            let mut c = base(name, Scenario::ToyCurlFree);
            c.n = [24; 3];
            c.domain_min = [0.0; 3];
            c.domain_max = [1.0; 3];
            c.t_end = 2.0;
            c.toy_init = ToyInit::new(ToyVariant::CurlFree);
            c.monitor_interval = Some(0.1);
            c
        }
        "toy-pure-curl-error" => {
            let mut c = base(name, Scenario::ToyPureCurlError);
            c.n = [24; 3];
            c.domain_min = [-1.0; 3];
            c.domain_max = [1.0; 3];
            c.t_end = 10.0;
            c.toy.a_c = 1.5;
            c.toy.eps_c = 1.0;
            c.toy_init = ToyInit::new(ToyVariant::PureCurlError);
            c.monitor_interval = Some(0.5);
            c
        }
        "induction-wave" => {
            let mut c = base(name, Scenario::InductionWave);
            c.n = [32; 3];
            c.domain_min = [0.0; 3];
            c.domain_max = [1.0; 3];
            c.t_end = 1.0;
            c.wave.modes = [1, 1, 0];
            c.wave.mode = WaveMode::Transverse;
            c.wave.polarization = [0.0, 0.0, 1.0];
            c.monitor_interval = Some(0.1);
            c
        }
        "tov-external" => {
            let mut c = base(name, Scenario::ExternalFile);
            c.n = [64; 3];
            c.domain_min = [-64.0; 3];
            c.domain_max = [64.0; 3];
            c.boundary = [Boundary::Extrapolate; 3];
            c.t_end = 1000.0;
            c.ccz4 = Ccz4Params::static_star();
            c.external_tracer = true;
            c.monitor_interval = Some(10.0);
            c.deviations = vec![
                "initial data and matter are read from external.path; no TOV solver is included"
                    .into(),
                "matter is tau only (S_i = S_ij = 0), held static".into(),
            ];
            c
        }
        _ => return Err(ConfigError::UnknownPreset(name.to_string())),
    };
    c.preset = Some(name.to_string());
    Ok(c)
}

/// Switches cleaning on or off. Turning it off for the rotating-masses preset
/// also selects the standard FO-CCZ4 constants `e = 1`, `c = 1`.
pub fn apply_glm(c: &mut RunConfig, on: bool) {
    c.glm = on;
    if c.preset.as_deref() == Some("rotating-masses-desk") {
        let (e, coupling) = if on { (2.0, 0.0) } else { (1.0, 1.0) };
        c.ccz4.e = e;
        c.ccz4.c = coupling;
    }
}
