mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use output::{CliError, Emit};

#[derive(Parser, Debug, Clone)]
#[command(name = "cubic-circle", version, about = "Circle-method experiments for cubic forms over imaginary quadratic fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Print the result as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print the result table as CSV.
    #[arg(long, global = true, conflicts_with = "json")]
    pub csv: bool,
    /// Write result.json, result.csv and manifest.json into this directory.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Seed for randomized estimators, or `random`.
    #[arg(long, global = true, default_value = "24301")]
    pub seed: String,
    /// Cap on enumerated points per kernel.
    #[arg(long, global = true, env = "CUBIC_CIRCLE_MAX_POINTS", default_value_t = 1u128 << 34)]
    pub max_points: u128,
    /// Wall-clock limit in seconds; 0 disables it.
    #[arg(long, global = true, env = "CUBIC_CIRCLE_MAX_SECONDS", default_value_t = 0)]
    pub max_seconds: u64,
    /// Run every kernel on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug, Clone, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cmd {
    /// Imaginary quadratic fields, approximation and residue classes.
    #[command(subcommand)]
    Field(commands::FieldCmd),
    /// Cubic form files.
    #[command(subcommand)]
    Forms(commands::FormsCmd),
    /// Weyl sums and complete sums.
    #[command(subcommand)]
    Sums(commands::SumsCmd),
    /// Shrinking, divisibility sweeps and successive minima.
    #[command(subcommand)]
    Lattices(commands::LatticesCmd),
    /// Singular series, point counts, asymptotic report, exponent ledger.
    #[command(subcommand)]
    Circle(commands::CircleCmd),
    /// Rational lines, descent and prime solutions.
    #[command(subcommand)]
    Lines(commands::LinesCmd),
    /// Runs the acceptance criteria.
    VerifyAll(commands::VerifyArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limit = cli.global.max_seconds;
    let run = {
        let cli = cli.clone();
        move || commands::dispatch(&cli)
    };
    let result = if limit == 0 {
        run()
    } else {
        let (tx, rx) = mpsc::channel();
        std::thread::spawn(move || {
            let _ = tx.send(run());
        });
        rx.recv_timeout(Duration::from_secs(limit))
            .unwrap_or_else(|_| Err(CliError::Budget(format!("wall-clock limit of {limit} s exceeded"))))
    };
    match result.and_then(|emit| finish(&cli, emit)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn finish(cli: &Cli, emit: Emit) -> Result<ExitCode, CliError> {
    let g = &cli.global;
    if let Some(dir) = &g.out {
        output::write_outputs(dir, &emit)?;
    }
    let body = if g.json {
        output::json_text(&emit.json) + "\n"
    } else if g.csv {
        match &emit.csv {
            Some(t) => output::csv_text(t)?,
            None => return Err(CliError::Input("this command has no CSV table; use --json".into())),
        }
    } else {
        emit.text.clone() + "\n"
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
    Ok(if emit.ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
