use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use quncert_cli::figure::{write_figure, FigureId};
use quncert_cli::scenario_file;
use quncert_cli::table::trajectory_table;
use quncert_cli::verify::{self, Suite, SEED_ENV};
use quncert_cli::{CliError, EXIT_INPUT};

#[derive(Parser)]
#[command(
    name = "quncert",
    version,
    about = "Closed-system qubit and qudit dynamics with time-energy uncertainty checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a scenario file (or preset name) and write the trajectory as CSV.
    Evolve {
        scenario: String,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Write the data behind one of the qubit figures.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        #[arg(short = 'd', long = "dir", default_value = ".")]
        dir: PathBuf,
    },
    /// Run a verification suite and emit a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn write_out(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::io(p, e)),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Evolve { scenario, out } => {
            let loaded = scenario_file::load(&scenario)?;
            let tr = quncert::evolve(&loaded.scenario)?;
            write_out(out.as_ref(), &trajectory_table(&tr).to_bytes()?)?;
            Ok(0)
        }
        Command::Figure { id, dir } => {
            for path in write_figure(id, &dir)? {
                println!("{}", path.display());
            }
            Ok(0)
        }
        Command::Verify { suite, scenario, seed, report } => {
            let env = std::env::var(SEED_ENV).ok();
            let seed = verify::resolve_seed(seed, env.as_deref())?;
            let loaded = scenario.as_deref().map(scenario_file::load).transpose()?;
            let doc = verify::run(suite, loaded.as_ref(), seed)?;
            match report {
                Some(path) => {
                    write_out(Some(&path), doc.to_json().as_bytes())?;
                    println!("{}", doc.summary());
                }
                None => write_out(None, doc.to_json().as_bytes())?,
            }
            Ok(doc.overall.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
