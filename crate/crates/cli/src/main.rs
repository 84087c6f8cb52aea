use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use probid::harness::{self, ChainFile, ExperimentConfig, HarnessError, Plan};
use probid::predict::black_swan_demo;

#[derive(Parser)]
#[command(name = "probid", version, about = "Identification in the limit of computable probability models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its CSV results.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Maximum number of seeds run at once.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
        /// Output directory; overrides the config's `output`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a gnuplot script for the checkpoint CSV.
        #[arg(long)]
        emit_plot_script: bool,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Print the exact stationary distribution of a chain.
    Stationary {
        #[arg(long)]
        chain: PathBuf,
    },
    /// Check a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// Two measures that agree on a^n but predict differently after it.
    BlackSwan {
        #[arg(long = "switch", default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=4096))]
        n_switch: u64,
    },
}

fn run(cmd: Command) -> Result<(), HarnessError> {
    match cmd {
        Command::Run { config, jobs, out, emit_plot_script } => {
            let exp = ExperimentConfig::load(&config)?.validate()?;
            let dir = out.or_else(|| exp.output.clone()).unwrap_or_else(|| PathBuf::from("results"));
            let result = harness::run_experiment(&exp, jobs.into())?;
            let written = harness::write_results(&result, &dir, emit_plot_script)?;
            if let Some(report) = &result.demo {
                print!("{}", report.render_text());
            }
            if let Some(s) = &result.summary {
                print!("{}", harness::stats_text(s));
            }
            for p in written {
                println!("wrote {}", p.display());
            }
        }
        Command::Demo { which: Demo::BlackSwan { n_switch } } => {
            let report = black_swan_demo(n_switch)
                .map_err(|e| HarnessError::ConfigInvalid { path: "switch".into(), message: e.to_string() })?;
            print!("{}\n{}", report.render_text(), report.render_csv());
        }
        Command::Stationary { chain } => {
            let m = ChainFile::load(&chain)?.build()?;
            for (s, p) in m.states().iter().zip(m.stationary()) {
                println!("{s}\t{p}");
            }
        }
        Command::Validate { config } => {
            let exp = ExperimentConfig::load(&config)?.validate()?;
            let kind = match &exp.plan {
                Plan::Iid { .. } => "iid",
                Plan::Markov { .. } => "markov",
                Plan::Measure { .. } => "measure",
                Plan::Demo { .. } => "demo",
            };
            println!("ok: {kind} experiment, {} seed(s), n_max {}, stride {}", exp.seeds.len(), exp.n_max, exp.stride);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
