use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use starloc_experiments::{
    load_config, run_design_compare, run_heatmap, run_snr_sweep, write_results, ExperimentError,
    Format, ScenarioConfig,
};

/// Cramér-Rao bounds for STAR-RIS aided indoor/outdoor localization.
#[derive(Parser)]
#[command(name = "starloc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds over the SNR grid for each (eps1, eta1) pair.
    SnrSweep(RunArgs),
    /// Bounds over the eps1 x eta1 grid at a fixed SNR.
    Heatmap(RunArgs),
    /// DFT, Hadamard and random profiles over the SNR grid.
    DesignCompare(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (TOML); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; falls back to the scenario's `output`, then `<command>.<format>`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn execute(
    name: &str,
    args: RunArgs,
    driver: fn(
        &ScenarioConfig,
    ) -> starloc_experiments::Result<Vec<starloc_experiments::SweepRecord>>,
) -> Result<(), ExperimentError> {
    let cfg = match &args.config {
        Some(path) => load_config(path)?,
        None => ScenarioConfig::default(),
    };
    let ext = match args.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let out = args
        .out
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from(format!("{name}.{ext}")));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| ExperimentError::Validation(format!("thread pool: {e}")))?;
    let records = pool.install(|| driver(&cfg))?;
    write_results(&records, &out, args.format)?;
    let singular = records.iter().filter(|r| r.is_singular()).count();
    eprintln!(
        "{name}: wrote {} rows ({singular} singular) to {}",
        records.len(),
        out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => e.exit(),
    };
    let result = match cli.command {
        Command::SnrSweep(a) => execute("snr-sweep", a, run_snr_sweep),
        Command::Heatmap(a) => execute("heatmap", a, run_heatmap),
        Command::DesignCompare(a) => execute("design-compare", a, run_design_compare),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
