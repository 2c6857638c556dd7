use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use accelrad::{run, CliError, CliResult, Format, RunConfig};
use clap::Parser;

/// Run one acceleration-radiation scenario or sweep from a JSON config.
#[derive(Debug, Parser)]
#[command(name = "accelrad", version)]
struct Args {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when absent. Overrides `output.path`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format. Overrides `output.format`; CSV by default.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweeps; all cores when absent.
    #[arg(long)]
    threads: Option<usize>,
    /// Accepted for interface stability. Every scenario is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(args: &Args) -> CliResult<()> {
    let config = RunConfig::load(&args.config)?;
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("--threads: {e}")))?;
    }
    let table = run(&config)?;
    let format = args.format.or(config.output.format).unwrap_or(Format::Csv);
    let path = args
        .out
        .clone()
        .or_else(|| config.output.path.as_ref().map(PathBuf::from));
    let sink: Box<dyn Write> = match &path {
        Some(p) => Box::new(File::create(p).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    table.write(&mut out, format)?;
    out.flush().map_err(|e| CliError::Output(e.to_string()))
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("accelrad: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
