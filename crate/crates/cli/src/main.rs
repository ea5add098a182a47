use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use glmclean_cli::config::{ConfigError, RunConfig, KEYS};
use glmclean_cli::{compare_dirs, presets, run, Status, EXIT_DIVERGED, EXIT_FAILURE};

#[derive(Parser)]
#[command(
    name = "glmclean",
    version,
    about = "Curl- and divergence-cleaned hyperbolic evolutions on Cartesian grids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a configuration and write its run directory.
    Run(RunArgs),
    /// Print norm ratios of run A over run B at matching times.
    Compare { a: PathBuf, b: PathBuf },
    /// List the built-in presets.
    Presets,
    /// List every configuration key.
    Keys,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Configuration file (`key = value` lines, `#` comments).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in preset used as the base configuration.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum)]
    glm: Option<Switch>,
    /// Cells along x; the other axes keep their aspect ratio.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Extra `key=value` setting, applied last. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    print_config: bool,
}

fn effective_config(a: &RunArgs) -> Result<RunConfig, ConfigError> {
    let mut c = match (&a.preset, &a.config) {
        (Some(p), None) => presets::preset(p)?,
        (None, Some(path)) => RunConfig::load(path)?,
        (Some(p), Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
                path: path.clone(),
                source,
            })?;
            RunConfig::parse(&format!("preset = {p}\n{text}"))?
        }
        (None, None) => RunConfig::default(),
    };
    if let Some(g) = a.glm {
        presets::apply_glm(&mut c, matches!(g, Switch::On));
    }
    if let Some(n) = a.resolution {
        c.set_resolution(n);
    }
    if let Some(t) = a.t_end {
        c.t_end = t;
    }
    if let Some(s) = a.seed {
        c.seed = s;
    }
    if let Some(o) = &a.output {
        c.output_dir = Some(o.clone());
    }
    if let Some(t) = a.threads {
        c.threads = t;
    }
    for kv in &a.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: 0,
            text: kv.clone(),
        })?;
        c.set(k.trim(), v)?;
    }
    Ok(c)
}

fn run_command(a: &RunArgs) -> ExitCode {
    let c = match effective_config(a) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE as u8);
        }
    };
    if a.print_config {
        if let Err(e) = c.validate() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILURE as u8);
        }
        print!("{}", c.to_text());
        return ExitCode::SUCCESS;
    }
    match run(&c) {
        Ok(s) => match s.status {
            Status::Completed => {
                println!(
                    "completed: t = {} after {} steps in {:.1} s, output in {}",
                    s.final_time,
                    s.steps,
                    s.wall_time,
                    s.dir.display()
                );
                ExitCode::SUCCESS
            }
            Status::Diverged {
                time,
                step,
                max_abs,
            } => {
                eprintln!(
                    "diverged: |Q| = {max_abs:e} at t = {time} (step {step}), output in {}",
                    s.dir.display()
                );
                ExitCode::from(EXIT_DIVERGED as u8)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(a) => run_command(&a),
        Command::Compare { a, b } => match compare_dirs(&a, &b) {
            Ok(t) => {
                print!("{}", t.to_csv());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_FAILURE as u8)
            }
        },
        Command::Presets => {
            for p in presets::NAMES {
                println!("{p}");
            }
            ExitCode::SUCCESS
        }
        Command::Keys => {
            for (k, d) in KEYS {
                println!("{k:<28} {d}");
            }
            ExitCode::SUCCESS
        }
    }
}
