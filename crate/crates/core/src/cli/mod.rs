//! Command-line front end. The `blursr` binary is a thin wrapper over
//! [`run`]; every subcommand is also callable as a library function.

mod commands;
mod config;
mod experiment;
mod manifest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{
    build_target, build_trajectory, cmd_interlace, cmd_localize, cmd_reconstruct, cmd_simulate,
    cmd_spectrum, parse_profile, read_image, LocalizeReport, Method, ReconstructOutput,
    SpectrumReport,
};
pub use config::{
    apply_override, CaptureConfig, CaptureMode, ExperimentConfig, PriorSweepConfig, SpectrumConfig,
    TargetConfig, TargetKind, TrajectoryConfig, TrajectoryKind,
};
pub use experiment::{cmd_experiment, Check, ExperimentSummary, EXPERIMENTS};
pub use manifest::{CaptureEntry, Manifest, TrajectoryEntry, MANIFEST_FILE};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_CRITERION: i32 = 3;

/// Exit status for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Format(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "blursr",
    version,
    about = "Motion-blur super-resolution toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct ConfigArgs {
    /// JSON config merged over the defaults.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// Dotted-path override, e.g. `--set capture.f=4`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub sets: Vec<String>,
    /// Output directory (same as `--set output_dir=...`).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

impl ConfigArgs {
    fn load(&self, base: ExperimentConfig) -> crate::Result<ExperimentConfig> {
        let mut sets = self.sets.clone();
        if let Some(out) = &self.out {
            sets.push(format!(
                "output_dir={}",
                serde_json::to_string(&out.to_string_lossy()).expect("string serializes")
            ));
        }
        ExperimentConfig::load(base, self.config.as_deref(), &sets)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a target and its capture(s), writing a manifest.
    Simulate(ConfigArgs),
    /// Interlace the grid captures of a manifest.
    Interlace {
        manifest: PathBuf,
        /// Output raw file (default: interlaced.raw next to the manifest).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Reconstruct the target from a manifest.
    Reconstruct {
        manifest: PathBuf,
        #[arg(long, value_enum, default_value = "tv")]
        method: Method,
        /// Solver overrides, e.g. `--set solver.lambda=1e-3`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
        /// Output directory (default: the manifest's directory).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run a canned experiment and check it against its thresholds.
    Experiment {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(EXPERIMENTS))]
        name: String,
        #[command(flatten)]
        config: ConfigArgs,
        /// Worker threads for sweeps (0 = all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Count near-zero DFT bins of a periodic box or an image file.
    Spectrum {
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        f: usize,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
        /// Image (.raw or .pgm) to analyse instead of the box.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Also report 1D zero sets of two widths on an axis: `LEN,W1,W2`.
        #[arg(long, value_name = "LEN,W1,W2")]
        axis: Option<String>,
    },
    /// Localize a point source (or an edge with `--edge F`) from a profile.
    Localize {
        /// Samples, comma or whitespace separated.
        #[arg(long, conflicts_with = "input")]
        profile: Option<String>,
        /// File holding the samples.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        pitch: f64,
        /// Tolerate noise: use the strongest adjacent pair.
        #[arg(long)]
        noisy: bool,
        /// Estimate a step edge position instead, reporting the grid line at factor F.
        #[arg(long, value_name = "F")]
        edge: Option<usize>,
    },
}

/// Parses `args` (including the program name), runs the command, and
/// returns the process exit code. Output goes to `out`, diagnostics to
/// `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> crate::Result<i32> {
    match cmd {
        Command::Simulate(args) => {
            let cfg = args.load(ExperimentConfig::default())?;
            let path = cmd_simulate(&cfg)?;
            writeln!(out, "{}", path.display())?;
        }
        Command::Interlace {
            manifest,
            out: dest,
        } => {
            let path = cmd_interlace(&manifest, dest.as_deref())?;
            writeln!(out, "{}", path.display())?;
        }
        Command::Reconstruct {
            manifest,
            method,
            sets,
            out: dest,
        } => {
            let m = Manifest::read(&manifest)?;
            let cfg = ExperimentConfig::load(m.config, None, &sets)?;
            let r = cmd_reconstruct(&manifest, method, &cfg, dest.as_deref())?;
            writeln!(
                out,
                "method {} rms {} psnr {}",
                method.name(),
                r.rms,
                r.psnr
            )?;
        }
        Command::Experiment { name, config, jobs } => {
            let mut cfg = config.load(ExperimentConfig::preset(&name))?;
            if let Some(j) = jobs {
                cfg.sweep.jobs = j;
            }
            let summary = cmd_experiment(&name, &cfg)?;
            for c in &summary.checks {
                writeln!(out, "{name} {c}")?;
            }
            if !summary.passed() {
                return Ok(EXIT_CRITERION);
            }
        }
        Command::Spectrum {
            n,
            f,
            eps,
            input,
            axis,
        } => {
            let axis = axis.map(|s| parse_axis(&s)).transpose()?;
            let r = cmd_spectrum(n, f, eps, input.as_deref(), axis)?;
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&r).expect("report serializes")
            )?;
        }
        Command::Localize {
            profile,
            input,
            pitch,
            noisy,
            edge,
        } => {
            let text = match (profile, input) {
                (Some(p), _) => p,
                (None, Some(path)) => std::fs::read_to_string(path)?,
                (None, None) => return Err(Error::Config("need --profile or --input".into())),
            };
            let r = cmd_localize(&parse_profile(&text)?, pitch, noisy, edge)?;
            writeln!(
                out,
                "{}",
                serde_json::to_string(&r).expect("report serializes")
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn parse_axis(s: &str) -> crate::Result<(usize, (usize, usize))> {
    let v: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Config(format!("bad --axis `{s}`")))?;
    match v[..] {
        [n, a, b] => Ok((n, (a, b))),
        _ => Err(Error::Config(format!("--axis takes LEN,W1,W2, got `{s}`"))),
    }
}
