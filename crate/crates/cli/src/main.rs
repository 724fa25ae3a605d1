//! `gdi`: law suites, single measurements, the bandit sweeps, and the
//! corridor table, each written as CSV behind a `#` line with the full run
//! configuration.

mod commands;
mod config;
mod error;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Command, Settings};
use error::CliError;

#[derive(Parser)]
#[command(name = "gdi", version, about = "Generalized directed information, plasticity and empowerment")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Randomized law suite: one CSV row per check.
    Laws(Options),
    /// Plasticity and empowerment of one named agent/environment pair.
    Measure(Options),
    /// Q-learning plasticity over an epsilon grid on [0,1].
    SweepEpsilon(Options),
    /// Greedy Q-learning plasticity, empowerment and bound over q_init in [-1,1].
    SweepQinit(Options),
    /// Plasticity and empowerment of the stay-in-room policy for every room.
    Corridor(Options),
}

/// Every setting is also a config-file key of the same name. Settings that
/// do not apply to the chosen command are rejected.
#[derive(Args)]
struct Options {
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; stdout when absent or `-`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Agent zoo spec, e.g. `qlearn(eps=0.1,q0=0)`.
    #[arg(long)]
    agent: Option<String>,
    /// Environment zoo spec, e.g. `bandit(p0=0.4,p1=0.7)`.
    #[arg(long)]
    env: Option<String>,
    /// Action alphabet size.
    #[arg(long)]
    na: Option<String>,
    /// Observation alphabet size.
    #[arg(long)]
    no: Option<String>,
    /// Observation interval start.
    #[arg(long)]
    a: Option<String>,
    /// Observation interval end.
    #[arg(long)]
    b: Option<String>,
    /// Action interval start.
    #[arg(long)]
    c: Option<String>,
    /// Action interval end.
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    horizon: Option<String>,
    /// Plasticity arrow: forward or delayed.
    #[arg(long)]
    arrow: Option<String>,
    /// exact or mc.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    replicates: Option<String>,
    /// Bootstrap confidence level.
    #[arg(long)]
    level: Option<String>,
    /// Bootstrap interval: basic or percentile.
    #[arg(long)]
    ci: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Enumeration cell cap.
    #[arg(long)]
    cap: Option<String>,
    #[arg(long)]
    grid_points: Option<String>,
    /// Q-learning rate.
    #[arg(long)]
    alpha: Option<String>,
    /// Comma-separated bandit arm probabilities.
    #[arg(long)]
    arms: Option<String>,
    /// Comma-separated law names, or `all`.
    #[arg(long)]
    laws: Option<String>,
    /// Seeds per (horizon, interface), counting up from `seed`.
    #[arg(long)]
    instances: Option<String>,
    #[arg(long)]
    horizons: Option<String>,
    /// Comma-separated `<|A|>x<|O|>` pairs.
    #[arg(long)]
    interfaces: Option<String>,
    #[arg(long)]
    rooms: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    p_on: Option<String>,
    #[arg(long)]
    p_off: Option<String>,
}

impl Options {
    fn flags(&self) -> Vec<(&'static str, String)> {
        [
            ("agent", &self.agent),
            ("env", &self.env),
            ("na", &self.na),
            ("no", &self.no),
            ("a", &self.a),
            ("b", &self.b),
            ("c", &self.c),
            ("d", &self.d),
            ("horizon", &self.horizon),
            ("arrow", &self.arrow),
            ("method", &self.method),
            ("samples", &self.samples),
            ("replicates", &self.replicates),
            ("level", &self.level),
            ("ci", &self.ci),
            ("seed", &self.seed),
            ("cap", &self.cap),
            ("grid-points", &self.grid_points),
            ("alpha", &self.alpha),
            ("arms", &self.arms),
            ("laws", &self.laws),
            ("instances", &self.instances),
            ("horizons", &self.horizons),
            ("interfaces", &self.interfaces),
            ("rooms", &self.rooms),
            ("theta", &self.theta),
            ("p-on", &self.p_on),
            ("p-off", &self.p_off),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
        .collect()
    }
}

fn execute(command: Command, opts: &Options) -> Result<(), CliError> {
    let mut settings = Settings::resolve(command, opts.config.as_deref(), &opts.flags())?;
    let body = commands::run(&mut settings)?;
    let text = format!("{}\n{body}", settings.comment_line());
    match &opts.out {
        Some(path) if path.as_os_str() != "-" => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        _ => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match &cli.command {
        Sub::Laws(o) => (Command::Laws, o),
        Sub::Measure(o) => (Command::Measure, o),
        Sub::SweepEpsilon(o) => (Command::SweepEpsilon, o),
        Sub::SweepQinit(o) => (Command::SweepQinit, o),
        Sub::Corridor(o) => (Command::Corridor, o),
    };
    match execute(command, opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gdi {command}: error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
