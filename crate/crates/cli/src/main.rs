use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cwc_gas::commands::{circuit, circuit_qubo, formulate, run_bench, strategies_for, verify};
use cwc_gas::experiment::{BenchSettings, Strategy};
use cwc_gas::{max_q1_from_env, CliError, Result};
use cwc_gas_core::code::CodeParams;
use cwc_gas_core::qubo::Variant;

#[derive(Parser)]
#[command(name = "cwc-gas", version, about = "Constant-weight code search with Grover adaptive search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the reduced matrix, both QUBOs and their bounds.
    Formulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Simulate search strategies and write curves, CDFs and a summary.
    Bench {
        #[command(flatten)]
        code: CodeArgs,
        /// Run only this strategy (default: all three).
        #[arg(long)]
        variant: Option<Strategy>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the growth factor of the GAS strategies.
        #[arg(long)]
        lambda: Option<f64>,
        /// Dump this many full traces per GAS strategy as JSON.
        #[arg(long, default_value_t = 0)]
        dump_traces: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Check the (7, 3, 4, 7) instance against the golden files.
    Verify {
        /// Also write the report as JSON into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile the state preparation circuit and report gate counts.
    Circuit {
        #[command(flatten)]
        code: OptionalCodeArgs,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::EDoublePrime)]
        variant: ObjectiveArg,
        /// Read the QUBO from a text file instead of formulating one.
        #[arg(long)]
        qubo: Option<PathBuf>,
        /// Threshold `y` (default: the initial threshold, or 0 for a file).
        #[arg(long, allow_hyphen_values = true)]
        threshold: Option<i64>,
        /// Simulate this many Grover iterations and write the distribution.
        #[arg(long)]
        rotations: Option<u32>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    w: u32,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    m: u32,
}

impl CodeArgs {
    fn params(&self) -> Result<CodeParams> {
        Ok(CodeParams::new(self.n, self.w, self.d, self.m)?)
    }
}

#[derive(Args)]
struct OptionalCodeArgs {
    #[arg(long, requires_all = ["w", "d", "m"])]
    n: Option<u32>,
    #[arg(long)]
    w: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    EPrime,
    EDoublePrime,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Formulate { code, out } => {
            let report = formulate(code.params()?, &out)?;
            if let Some(m) = report.max_codewords {
                println!("{}: d = 2w, A(n, d, w) = {m}; no search needed", report.params);
            } else {
                println!("wrote {}", out.display());
            }
        }
        Command::Bench { code, variant, trials, seed, lambda, dump_traces, out } => {
            let settings = BenchSettings {
                strategies: strategies_for(variant),
                trials,
                seed,
                lambda,
                max_q1: max_q1_from_env()?,
            };
            let summary = run_bench(code.params()?, &settings, &out, dump_traces)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Verify { out } => {
            let report = verify(max_q1_from_env()?)?;
            for c in &report.checks {
                println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                cwc_gas::formats::write_json(std::fs::File::create(dir.join("verify.json"))?, &report)?;
            }
            if let Some(c) = report.first_failure() {
                return Err(CliError::Golden(format!("{}: {}", c.name, c.detail)));
            }
        }
        Command::Circuit { code, variant, qubo, threshold, rotations, out } => {
            let params = match (code.n, code.w, code.d, code.m) {
                (Some(n), Some(w), Some(d), Some(m)) => Some(CodeParams::new(n, w, d, m)?),
                _ => None,
            };
            let variant = match variant {
                ObjectiveArg::EPrime => Variant::EPrime,
                ObjectiveArg::EDoublePrime => Variant::EDoublePrime,
            };
            let (problem, default_y) = circuit_qubo(params, variant, qubo.as_deref())?;
            let report = circuit(&problem, threshold.unwrap_or(default_y), rotations, &out)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
