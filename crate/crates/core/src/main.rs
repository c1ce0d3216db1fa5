use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use coherence_flow::cli::{
    csv_string, figure_fixture, reproduce_figure, run_sweep, run_verify, SweepConfig, VerifyConfig,
    DEFAULT_N_STATES, DEFAULT_SEED, DEFAULT_STEPS, DEFAULT_TOLERANCE,
};
use coherence_flow::{BlochVector, ChannelKind, Error};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;

/// Coherence and entanglement flow of a qubit through noise channels.
#[derive(Debug, Parser)]
#[command(name = "coherence-flow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep p over [0, 1] for one channel and initial state, writing CSV.
    Sweep {
        /// adc|pdc|bfc|pfc|bpfc|dc
        #[arg(long)]
        channel: ChannelKind,
        /// Bloch vector as `r1,r2,r3`, e.g. `--bloch=-0.41,0.80,-0.38`.
        #[arg(long, allow_hyphen_values = true)]
        bloch: Option<BlochVector>,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        /// Draw a random mixed initial state from this seed when --bloch is absent.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the numeric pipeline against closed-form predictions.
    Verify {
        /// Channel to check; repeat for several (all channels when omitted).
        #[arg(long)]
        channel: Vec<ChannelKind>,
        #[arg(long, default_value_t = DEFAULT_N_STATES)]
        n_states: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the data behind one of the figure fixtures.
    Figure {
        /// fig1|fig2|fig2_inset|fig3|fig4|fig4_inset
        #[arg(long)]
        fixture: String,
        /// Series index for figures with several initial states (fig1 has two).
        #[arg(long, default_value_t = 0)]
        series: usize,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Invalid(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> io::Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(text.as_bytes())?;
            w.flush()
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Sweep {
            channel,
            bloch,
            steps,
            seed,
            out,
        } => {
            let rows = run_sweep(&SweepConfig {
                channel,
                bloch,
                p_steps: steps,
                seed,
            })?;
            emit(&csv_string(&rows), out.as_ref())?;
            Ok(true)
        }
        Command::Verify {
            channel,
            n_states,
            seed,
            tolerance,
            steps,
            out,
        } => {
            let channels = if channel.is_empty() {
                ChannelKind::ALL.to_vec()
            } else {
                channel
            };
            let report = run_verify(&VerifyConfig {
                channels,
                n_states,
                seed,
                tolerance,
                p_steps: steps,
            })?;
            emit(&format!("{report}\n"), out.as_ref())?;
            Ok(report.passed())
        }
        Command::Figure {
            fixture,
            series,
            steps,
            out,
        } => {
            let fx = figure_fixture(&fixture, series)?;
            let rows = reproduce_figure(&fx, steps)?;
            emit(&csv_string(&rows), out.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
