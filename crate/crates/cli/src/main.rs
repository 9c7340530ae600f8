use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qdrive::run;
use qdrive::{CliError, Overrides, ScenarioId};

#[derive(Parser)]
#[command(
    name = "qdrive",
    version,
    about = "Driven-dissipative few-level systems: dynamics, energetics and steady states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write its trajectory as CSV
    Simulate {
        /// Scenario id (fig1 … fig5b, custom); several need --batch
        #[arg(required = true, value_parser = parse_scenario)]
        scenarios: Vec<ScenarioId>,
        /// JSON system file for scenario custom
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Output CSV (a directory with --batch); defaults to <scenario>.csv
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Run several named scenarios concurrently
        #[arg(long)]
        batch: bool,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Report the steady state(s), power, heat currents and Γ
    Steady {
        #[arg(value_parser = parse_scenario)]
        scenario: ScenarioId,
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Print a scenario's system as JSON
    EmitSpec {
        #[arg(value_parser = parse_scenario)]
        scenario: ScenarioId,
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Write to a file instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
}

#[derive(Args)]
struct OverrideArgs {
    /// Rabi coupling of every drive
    #[arg(long)]
    rabi: Option<f64>,
    /// Temperature of every bath
    #[arg(long)]
    temp: Option<f64>,
    /// Temperature of bath group L
    #[arg(long)]
    temp_left: Option<f64>,
    /// Temperature of bath group R
    #[arg(long)]
    temp_right: Option<f64>,
    /// Final time
    #[arg(long)]
    tmax: Option<f64>,
    /// Relative integration tolerance
    #[arg(long)]
    rtol: Option<f64>,
}

impl From<OverrideArgs> for Overrides {
    fn from(a: OverrideArgs) -> Self {
        Overrides {
            rabi: a.rabi,
            temp: a.temp,
            temp_left: a.temp_left,
            temp_right: a.temp_right,
            tmax: a.tmax,
            rtol: a.rtol,
        }
    }
}

fn parse_scenario(s: &str) -> Result<ScenarioId, String> {
    s.parse()
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate { scenarios, spec, output, batch, overrides } => {
            let overrides = Overrides::from(overrides);
            if scenarios.len() == 1 && !batch {
                let id = scenarios[0];
                let path = output.unwrap_or_else(|| run::default_output(id));
                println!("{}", run::simulate(id, spec.as_deref(), &overrides, &path)?);
                return Ok(());
            }
            if !batch {
                return Err(CliError::Input("several scenarios need --batch".into()));
            }
            if spec.is_some() || scenarios.contains(&ScenarioId::Custom) {
                return Err(CliError::Input("--batch runs named scenarios only".into()));
            }
            let dir = output.unwrap_or_else(|| PathBuf::from("."));
            let mut failed = Vec::new();
            for (id, result) in scenarios.iter().zip(run::simulate_batch(&scenarios, &overrides, &dir)) {
                match result {
                    Ok(line) => println!("{line}"),
                    Err(e) => {
                        eprintln!("error: {id}: {e}");
                        failed.push((*id, e));
                    }
                }
            }
            match failed.into_iter().next() {
                None => Ok(()),
                Some((id, e)) => Err(match e {
                    CliError::Input(_) => CliError::Input(format!("scenario {id} failed")),
                    CliError::Numerical(_) => CliError::Numerical(format!("scenario {id} failed")),
                    CliError::Io(_) => CliError::Io(format!("scenario {id} failed")),
                }),
            }
        }
        Command::Steady { scenario, spec, json, overrides } => {
            print!("{}", run::steady_report(scenario, spec.as_deref(), &overrides.into(), json)?);
            Ok(())
        }
        Command::EmitSpec { scenario, spec, output, overrides } => {
            let text = run::emit_spec(scenario, spec.as_deref(), &overrides.into())?;
            match output {
                Some(path) => write_file(&path, &text),
                None => {
                    let _ = std::io::stdout().write_all(text.as_bytes());
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.into()
        }
    }
}
