use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bredon::bredon::Mode;
use bredon::commands::{cmd_compute, cmd_matrix, cmd_snf, cmd_verify, Direction, MatrixTarget};
use clap::{Parser, Subcommand, ValueEnum};

/// Bredon (co)homology of proper G-CW complexes with representation-ring coefficients.
#[derive(Parser)]
#[command(name = "bredon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Run every validation gate on a dataset.
    Verify { file: PathBuf },
    /// Compute Bredon cohomology and/or homology with the derived reports.
    Compute {
        file: PathBuf,
        /// untwisted, cover_ring or isotypic; defaults to the dataset's setting.
        #[arg(long)]
        mode: Option<Mode>,
        /// cohomology, homology or both.
        #[arg(long, default_value = "cohomology")]
        direction: Direction,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print a restriction, induction or coboundary matrix.
    Matrix {
        file: PathBuf,
        /// Incidence id such as `e1->v1`, or a named embedding.
        #[arg(long, conflicts_with = "differential", required_unless_present = "differential")]
        embedding: Option<String>,
        /// Print the coboundary Phi_d instead.
        #[arg(long)]
        differential: Option<usize>,
        /// Induce instead of restrict along the embedding.
        #[arg(long, requires = "embedding")]
        induction: bool,
        #[arg(long)]
        transpose: bool,
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// Smith normal form of a matrix file: rank and elementary divisors.
    Snf { file: PathBuf },
}

fn run(cli: Cli) -> Result<(), bredon::Error> {
    match cli.command {
        Command::Verify { file } => {
            let report = cmd_verify(&file)?;
            println!("{}: ok (fingerprint {})", file.display(), report.fingerprint);
            for c in &report.checks {
                println!("  {c}");
            }
        }
        Command::Compute {
            file,
            mode,
            direction,
            out,
            format,
        } => {
            let start = Instant::now();
            let report = cmd_compute(&file, mode, direction)?;
            let text = match format {
                Format::Text => report.to_text(Some(start.elapsed())),
                Format::Machine => report.to_machine(),
            };
            print!("{text}");
            if let Some(out) = out {
                std::fs::write(&out, &text).map_err(|source| bredon::Error::Io {
                    path: out.display().to_string(),
                    source,
                })?;
            }
        }
        Command::Matrix {
            file,
            embedding,
            differential,
            induction,
            transpose,
            mode,
        } => {
            let target = match (embedding, differential) {
                (Some(id), _) if induction => MatrixTarget::Induction(id),
                (Some(id), _) => MatrixTarget::Embedding(id),
                (None, Some(d)) => MatrixTarget::Differential(d),
                (None, None) => unreachable!("clap requires one of the two"),
            };
            print!("{}", cmd_matrix(&file, &target, mode, transpose)?);
        }
        Command::Snf { file } => print!("{}", cmd_snf(&file)?),
    }
    Ok(())
}

fn main() -> anyhow::Result<ExitCode> {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BREDON_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return Ok(ExitCode::from(1));
        }
        Err(e) => {
            e.print()?;
            return Ok(ExitCode::SUCCESS);
        }
    };
    match run(cli) {
        Ok(()) => Ok(ExitCode::SUCCESS),
        Err(e) => {
            let code = e.exit_code();
            log::debug!("exiting with code {code}");
            let e = anyhow::Error::new(e).context("bredon failed");
            eprintln!("error: {e:#}");
            Ok(ExitCode::from(code as u8))
        }
    }
}
