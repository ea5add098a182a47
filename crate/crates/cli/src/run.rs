//! Builds the system and initial data of a [`RunConfig`], evolves it and
//! writes the run directory.

use std::path::{Path, PathBuf};
use std::time::Instant;

use glmclean::scenarios::{self, InductionWave, ToyVariant};
use glmclean::systems::VelocityField;
use glmclean::{
    evolve, layout_for, EvolveError, FieldSnapshot, Foccz4System, InductionSystem, LoadError,
    MatterModel, RunStatus, System, SystemDescriptor, SystemKind, ToySystem,
};

use crate::config::{ConfigError, RunConfig, Scenario};
use crate::output::RunWriter;

/// Environment variable naming the directory under which runs without an
/// explicit output directory are placed.
pub const OUTPUT_ROOT_ENV: &str = "GLMCLEAN_OUTPUT_ROOT";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write to {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("initial data: {0}")]
    Load(#[from] LoadError),
    #[error("evolution failed: {0}")]
    Evolve(#[from] EvolveError),
    #[error("thread pool: {0}")]
    Threads(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Completed,
    Diverged {
        time: f64,
        step: usize,
        max_abs: f64,
    },
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub status: Status,
    pub steps: usize,
    pub final_time: f64,
    pub wall_time: f64,
    pub snapshots: usize,
}

/// Layout of the evolved state of a scenario.
pub fn descriptor(c: &RunConfig) -> SystemDescriptor {
    match c.scenario {
        Scenario::RobustStability => layout_for(SystemKind::Foccz4),
        Scenario::RotatingMasses => layout_for(SystemKind::Foccz4).with_tracer("tau"),
        Scenario::ExternalFile if c.external_tracer => {
            layout_for(SystemKind::Foccz4).with_tracer("tau")
        }
        Scenario::ExternalFile => layout_for(SystemKind::Foccz4),
        Scenario::ToyCurlFree | Scenario::ToyPureCurlError => {
            layout_for(SystemKind::ToyHomogeneous)
        }
        Scenario::InductionWave => layout_for(SystemKind::InductionGlm),
    }
}

pub fn build_system(c: &RunConfig) -> Result<Box<dyn System<f64>>, ConfigError> {
    let grid = c.grid()?;
    Ok(match c.scenario {
        Scenario::RobustStability => Box::new(Foccz4System::vacuum(c.ccz4_params())),
        Scenario::RotatingMasses => {
            Box::new(Foccz4System::new(c.ccz4_params(), c.rotating.matter(&grid)))
        }
        Scenario::ExternalFile => {
            let matter = if c.external_tracer {
                MatterModel::AdvectedTau {
                    velocity: VelocityField::Static,
                    s_i: [0.0; 3],
                    s_ij: [[0.0; 3]; 3],
                }
            } else {
                MatterModel::Vacuum
            };
            Box::new(Foccz4System::new(c.ccz4_params(), matter))
        }
        Scenario::ToyCurlFree | Scenario::ToyPureCurlError => {
            Box::new(ToySystem::homogeneous(c.toy_params()))
        }
        Scenario::InductionWave => Box::new(InductionSystem::new(c.induction_params())),
    })
}

pub fn initial_data(c: &RunConfig) -> Result<FieldSnapshot<f64>, RunError> {
    let grid = c.grid()?;
    let mut s = match c.scenario {
        Scenario::RobustStability => scenarios::minkowski_init(&grid, false),
        Scenario::RotatingMasses => c.rotating.init(&grid),
        Scenario::ExternalFile => {
            let path = c
                .initial_data
                .as_ref()
                .ok_or_else(|| ConfigError::Invalid("external.path is not set".into()))?;
            scenarios::load_initial_data(path, &grid, &descriptor(c))?
        }
        Scenario::ToyCurlFree | Scenario::ToyPureCurlError => {
            let mut init = c.toy_init;
            init.variant = if c.scenario == Scenario::ToyCurlFree {
                ToyVariant::CurlFree
            } else {
                ToyVariant::PureCurlError
            };
            scenarios::toy_init(&grid, &init)
        }
        Scenario::InductionWave => {
            let p = c.induction_params();
            InductionWave::init(&[c.wave], &grid, p.c_light, p.a_d, 0.0)
        }
    };
    if c.perturbation > 0.0 {
        scenarios::perturb(&mut s, c.seed, c.perturbation);
    }
    if !c.glm {
        scenarios::clear_cleaning(&mut s);
    }
    Ok(s)
}

/// Explicit directory, `output.dir`, or a directory named after the preset
/// (or scenario) and GLM setting under the output root.
pub fn output_dir(c: &RunConfig) -> PathBuf {
    if let Some(d) = &c.output_dir {
        return d.clone();
    }
    let root = std::env::var_os(OUTPUT_ROOT_ENV)
        .map_or_else(|| PathBuf::from("glmclean-runs"), PathBuf::from);
    let name = c
        .preset
        .clone()
        .unwrap_or_else(|| c.scenario.name().to_string());
    root.join(format!("{name}-glm-{}", if c.glm { "on" } else { "off" }))
}

fn field_indices(d: &SystemDescriptor, names: &[String]) -> Vec<usize> {
    if names.is_empty() {
        (0..d.count()).collect()
    } else {
        names.iter().filter_map(|n| d.io_index_of(n)).collect()
    }
}

fn metadata(
    c: &RunConfig,
    threads: usize,
    outcome: Result<&RunSummary, &RunError>,
    wall: f64,
) -> serde_json::Value {
    let mut v = serde_json::json!({
        "program": "glmclean",
        "version": env!("CARGO_PKG_VERSION"),
        "preset": c.preset,
        "scenario": c.scenario.name(),
        "glm": c.glm,
        "seed": c.seed,
        "perturbation": c.perturbation,
        "grid": c.n,
        "t_end": c.t_end,
        "threads": threads,
        "wall_time_seconds": wall,
        "deviations": c.deviations,
        "config": c.to_text(),
    });
    let m = v.as_object_mut().expect("object literal");
    match outcome {
        Ok(s) => {
            m.insert("steps".into(), s.steps.into());
            m.insert("final_time".into(), s.final_time.into());
            m.insert("snapshots".into(), s.snapshots.into());
            match s.status {
                Status::Completed => {
                    m.insert("status".into(), "completed".into());
                }
                Status::Diverged {
                    time,
                    step,
                    max_abs,
                } => {
                    m.insert("status".into(), "diverged".into());
                    m.insert(
                        "divergence".into(),
                        serde_json::json!({ "time": time, "step": step, "max_abs": max_abs }),
                    );
                }
            }
        }
        Err(e) => {
            m.insert("status".into(), "failed".into());
            m.insert("error".into(), e.to_string().into());
        }
    }
    v
}

fn write_metadata(dir: &Path, v: &serde_json::Value) -> Result<(), RunError> {
    let path = dir.join("run.json");
    let text = serde_json::to_string_pretty(v).expect("json value");
    std::fs::write(&path, text + "\n").map_err(|source| RunError::Output { path, source })
}

/// Validates, evolves and writes all artifacts. Diverged runs return `Ok`
/// with [`Status::Diverged`]; run.json records the status in every case once
/// the output directory exists.
pub fn run(c: &RunConfig) -> Result<RunSummary, RunError> {
    c.validate()?;
    let dir = output_dir(c);
    std::fs::create_dir_all(&dir).map_err(|source| RunError::Output {
        path: dir.clone(),
        source,
    })?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(c.threads)
        .build()
        .map_err(|e| RunError::Threads(e.to_string()))?;
    let threads = pool.current_num_threads();
    let start = Instant::now();
    let result = evolve_into(c, &dir, &pool);
    let wall = start.elapsed().as_secs_f64();
    let result = result.map(|mut s| {
        s.wall_time = wall;
        s
    });
    write_metadata(&dir, &metadata(c, threads, result.as_ref(), wall))?;
    result
}

fn evolve_into(
    c: &RunConfig,
    dir: &Path,
    pool: &rayon::ThreadPool,
) -> Result<RunSummary, RunError> {
    let system = build_system(c)?;
    let d = system.descriptor().clone();
    let names: Vec<String> = (0..d.count()).map(|i| d.io_name(i).to_string()).collect();
    let mut writer = RunWriter::create(
        dir,
        field_indices(&d, &c.snapshot_fields),
        &c.cut_axes,
        field_indices(&d, &c.cut_fields),
        &names,
    )
    .map_err(|source| RunError::Output {
        path: dir.to_path_buf(),
        source,
    })?;
    let initial = pool.install(|| initial_data(c))?;
    let out = evolve(
        system.as_ref(),
        initial,
        &c.evolve_config(),
        &mut writer,
        Some(pool),
    )?;
    let final_time = out.state.time();
    let snapshots = writer
        .finish(&out.state)
        .map_err(|source| RunError::Output {
            path: dir.to_path_buf(),
            source,
        })?;
    let status = match out.status {
        RunStatus::Completed => Status::Completed,
        RunStatus::Diverged {
            time,
            step,
            max_abs,
        } => Status::Diverged {
            time,
            step,
            max_abs,
        },
    };
    Ok(RunSummary {
        dir: dir.to_path_buf(),
        status,
        steps: out.steps,
        final_time,
        wall_time: 0.0,
        snapshots,
    })
}
