use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use scatter_cli::{run, CliError, Experiment, RunConfig};

#[derive(Parser)]
#[command(name = "scatter", version, about = "Scattering experiments for 1D interface Schrodinger operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the experiment named in the config.
        #[arg(long)]
        experiment: Option<String>,
        /// Overrides the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let Command::Run { config, experiment, out, jobs } = cli.command;
    let mut cfg = RunConfig::load(&config)?;
    if let Some(name) = experiment {
        cfg.experiment = Experiment::parse(&name)?;
    }
    if let Some(dir) = out {
        cfg.output = dir;
    }
    if let Some(n) = jobs {
        if n == 0 {
            return Err(CliError::Validation("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    }
    let summary = run(&cfg)?;
    println!("wrote {} files, manifest {}", summary.files.len(), summary.manifest.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
