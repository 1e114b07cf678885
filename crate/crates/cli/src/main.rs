use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use secrecy_cli::commands::{self, OutputFormat, VerifyOptions};
use secrecy_cli::{CliError, ScenarioFile, Units};

/// Secrecy capacity regions of two-receiver MIMO Gaussian broadcast channels.
///
/// Set SECRECY_TOL to override the PSD tolerance.
#[derive(Parser)]
#[command(name = "secrecy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Both secrecy capacities, the pencil spectrum and optimal covariances.
    Capacity {
        file: PathBuf,
        /// Report rates in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Sampled capacity, ZF and (matrix constraint) DPC frontiers.
    Region {
        file: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output path ending in .csv or .svg; CSV to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numerical certificates for the closed-form capacity.
    Verify {
        file: PathBuf,
        /// Extra feasible covariances to probe against the corner.
        #[arg(long, default_value_t = 8)]
        seeds: usize,
        /// Print capacity continuity under shrinking channel perturbations.
        #[arg(long)]
        alpha_ladder: bool,
        /// Fault injection: verify B* + EPS*I (clipped into [0, S]) instead of B*.
        #[arg(long, value_name = "EPS")]
        perturb_bstar: Option<f64>,
    },
    /// Regenerate a bundled figure as CSV and SVG.
    Reproduce {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(commands::FIGURES))]
        figure: String,
        #[arg(long)]
        outdir: PathBuf,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Capacity { file, bits } => {
            let sf = ScenarioFile::load(&file)?;
            let units = if bits { Units::Bits } else { sf.units };
            Ok(commands::capacity(&sf)?.render(units))
        }
        Command::Region { file, samples, seed, out } => {
            let sf = ScenarioFile::load(&file)?;
            let mut sampling = sf.sampling;
            if let Some(n) = samples {
                if n == 0 {
                    return Err(CliError::Validation {
                        field: "samples".into(),
                        message: "must be at least 1".into(),
                    });
                }
                sampling.samples = n;
            }
            if let Some(k) = seed {
                sampling.seed = k;
            }
            let format = match &out {
                Some(p) => OutputFormat::from_path(p)?,
                None => OutputFormat::Csv,
            };
            let rows = commands::region_rows(&sf, &sampling)?;
            let text = commands::render_rows(&rows, format, &sf.name, sf.units);
            match out {
                Some(p) => {
                    commands::write_file(&p, &text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Verify { file, seeds, alpha_ladder, perturb_bstar } => {
            let sf = ScenarioFile::load(&file)?;
            let opts = VerifyOptions { seeds, alpha_ladder, perturb_bstar };
            let report = commands::verify(&sf, &opts)?;
            print!("{}", report.render());
            match report.failed() {
                0 => Ok(String::new()),
                failed => Err(CliError::VerificationFailed { failed }),
            }
        }
        Command::Reproduce { figure, outdir } => {
            let written = commands::reproduce(&figure, &outdir)?;
            Ok(written.iter().map(|p| format!("wrote {}\n", p.display())).collect())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
