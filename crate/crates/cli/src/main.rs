use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qembed_cli::{
    cmd_boundary, cmd_capacity, cmd_eval, cmd_gen_data, cmd_train, ClassifierArg, CliError,
    CliResult, DatasetKind, Grid,
};

#[derive(Parser)]
#[command(
    name = "qembed",
    version,
    about = "Train and evaluate quantum feature embeddings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a toy dataset as CSV.
    GenData {
        #[arg(value_enum)]
        kind: DatasetKind,
        /// Points per class.
        #[arg(long, default_value_t = 75)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train an embedding from a JSON config.
    Train {
        #[arg(long)]
        config: PathBuf,
    },
    /// Score a labelled dataset with a trained embedding.
    Eval {
        #[arg(long)]
        theta: PathBuf,
        /// Data the class ensembles are built from.
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        eval: PathBuf,
        #[arg(long, value_enum, default_value_t = ClassifierArg::Fidelity)]
        classifier: ClassifierArg,
        /// Shots per overlap; 0 is exact.
        #[arg(long, default_value_t = 0)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "scores.csv")]
        out: PathBuf,
    },
    /// Export classifier scores on a 2-D grid.
    Boundary {
        #[arg(long)]
        theta: PathBuf,
        #[arg(long)]
        train: PathBuf,
        #[arg(long, value_enum, default_value_t = ClassifierArg::Fidelity)]
        classifier: ClassifierArg,
        /// xmin,xmax,ymin,ymax,steps
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long, default_value = "boundary.csv")]
        out: PathBuf,
    },
    /// Classical bits per second a quantum channel can carry.
    Capacity {
        #[arg(long)]
        bandwidth_hz: f64,
        #[arg(long)]
        coherence_s: f64,
        #[arg(long)]
        qubits: u64,
        #[arg(long)]
        bits: u64,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::GenData {
            kind,
            n,
            noise,
            seed,
            out,
        } => {
            cmd_gen_data(kind, n, noise, seed, &out)?;
            println!("wrote {}", out.display());
        }
        Command::Train { config } => {
            cmd_train(&config, &mut stdout)?;
        }
        Command::Eval {
            theta,
            train,
            eval,
            classifier,
            shots,
            seed,
            out,
        } => {
            cmd_eval(
                &theta,
                &train,
                &eval,
                classifier.into(),
                shots,
                seed,
                &out,
                &mut stdout,
            )?;
        }
        Command::Boundary {
            theta,
            train,
            classifier,
            grid,
            out,
        } => {
            let grid: Grid = grid.parse()?;
            let rows = cmd_boundary(&theta, &train, classifier.into(), &grid, &out)?;
            println!("wrote {} points to {}", rows.len(), out.display());
        }
        Command::Capacity {
            bandwidth_hz,
            coherence_s,
            qubits,
            bits,
        } => {
            let c = cmd_capacity(bandwidth_hz, coherence_s, qubits, bits)?;
            println!("capacity_bits_per_s: {c:e}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::exit_code(&e) as u8)
        }
    }
}
