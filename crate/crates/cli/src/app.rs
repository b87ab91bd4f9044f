//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::catalog::{self, CATALOG};
use crate::report;
use crate::runner::{self, Overrides};
use crate::scenario::Scenario;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "apsflow", version, about = "Spectral flow and APS index scenarios for Hermitian matrix families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario file (or a bundled scenario by name) and write its report.
    Run {
        config: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// List bundled scenarios.
    List,
    /// Write eigenvalue paths of a scenario's family as CSV.
    Eigenpaths {
        config: String,
        /// Number of sample times.
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Args, Default)]
pub struct Flags {
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub checkpoints: Option<usize>,
    /// Report directory; defaults to $REPORT_DIR, then ./reports.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// A path to a scenario file, or else the name of a bundled scenario.
pub fn resolve(config: &str) -> Result<Scenario> {
    let path = Path::new(config);
    if path.exists() {
        return Scenario::load(path);
    }
    match catalog::find(config) {
        Some(entry) => entry.scenario(),
        None => anyhow::bail!("no scenario file `{config}` and no bundled scenario of that name"),
    }
}

fn run(config: &str, flags: &Flags, stdout: &mut dyn Write) -> Result<i32> {
    let scenario = resolve(config)?;
    let overrides = Overrides { steps: flags.steps, tol: flags.tol, checkpoints: flags.checkpoints, seed: flags.seed };
    let dir = runner::report_dir(flags.out.as_deref());
    let (exec, files) = runner::run_scenario(&scenario, &overrides, &dir)?;
    for f in &files {
        writeln!(stdout, "wrote {}", f.display())?;
    }
    let failed: Vec<&str> = exec.report["checks"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|c| c["passed"] == false)
        .filter_map(|c| c["name"].as_str())
        .collect();
    if exec.passed {
        writeln!(stdout, "{}: pass", exec.name)?;
        Ok(EXIT_OK)
    } else {
        writeln!(stdout, "{}: FAIL ({})", exec.name, failed.join(", "))?;
        Ok(EXIT_MISMATCH)
    }
}

fn list(stdout: &mut dyn Write) -> Result<i32> {
    for entry in CATALOG {
        let s = entry.scenario()?;
        writeln!(stdout, "{:<28} {:<22} {}", entry.name, s.task.as_str(), entry.theorem)?;
    }
    Ok(EXIT_OK)
}

fn eigenpaths(config: &str, samples: usize, out: Option<&Path>, seed: Option<u64>, stdout: &mut dyn Write) -> Result<i32> {
    let scenario = resolve(config)?;
    let family = apsflow::family::make_family_seeded(&scenario.family, seed.unwrap_or(scenario.seed))?;
    let csv = report::eigenpath_csv(&family, samples)?;
    let dir = runner::report_dir(out);
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(format!("{}.eigenpaths.csv", scenario.name));
    std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
    writeln!(stdout, "wrote {}", path.display())?;
    Ok(EXIT_OK)
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run { config, flags } => run(config, flags, stdout),
        Command::List => list(stdout),
        Command::Eigenpaths { config, samples, out, seed } => eigenpaths(config, *samples, out.as_deref(), *seed, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            EXIT_ERROR
        }
    }
}
