//! Command-line front end: `simulate` runs a scenario sweep, `compare`
//! rebuilds the comparison table from a finished output directory.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use leachsim::config::{parse_config, parse_override, parse_seeds};
use leachsim::experiment::{
    format_summary, load_experiment, run_experiment, worker_count, write_comparison, WORKERS_ENV,
};
use leachsim::metrics::compare_series;
use leachsim::{ProtocolKind, Result};

#[derive(Parser)]
#[command(name = "leachsim", version, about = "Cluster-based WSN data collection simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (protocol, seed) pair of a scenario and write CSV/JSON results.
    Simulate {
        /// JSON scenario file; omitted keys take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Protocol to run; repeat for several. Replaces the config's list.
        #[arg(long = "protocol", value_name = "KIND")]
        protocols: Vec<String>,
        /// Seeds as `a..b` (inclusive), `a..=b` or `1,2,5`.
        #[arg(long)]
        seeds: Option<String>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override a config key, e.g. `--set leach.p=0.1`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Rebuild the comparison table from a `simulate` output directory.
    Compare {
        #[arg(long = "in", value_name = "DIR")]
        input: PathBuf,
    },
}

fn simulate(
    config: Option<PathBuf>,
    protocols: Vec<String>,
    seeds: Option<String>,
    out: Option<PathBuf>,
    overrides: Vec<String>,
) -> Result<()> {
    let mut sets = overrides
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>>>()?;
    if !protocols.is_empty() {
        let kinds = protocols
            .iter()
            .map(|p| p.parse::<ProtocolKind>())
            .collect::<Result<Vec<_>>>()?;
        sets.push((
            "protocols".into(),
            serde_json::to_string(&kinds).expect("kinds serialize"),
        ));
    }
    if let Some(s) = seeds {
        sets.push((
            "seeds".into(),
            serde_json::to_string(&parse_seeds(&s)?).expect("seeds serialize"),
        ));
    }
    if let Some(dir) = out {
        sets.push(("out_dir".into(), serde_json::to_string(&dir).expect("path serializes")));
    }
    let cfg = parse_config(config.as_deref(), &sets)?;

    eprintln!(
        "running {} protocol(s) x {} seed(s) on {} worker(s) ({WORKERS_ENV})",
        cfg.protocols.len(),
        cfg.seeds.len(),
        worker_count()
    );
    let out = run_experiment(&cfg)?;
    match &out.comparison {
        Some(c) => print!("{}", format_summary(c)),
        None => println!("single protocol run; no comparison table"),
    }
    println!("\nwrote {} files to {}", out.files.len(), cfg.out_dir.display());
    Ok(())
}

fn compare(input: PathBuf) -> Result<()> {
    let (_, series) = load_experiment(&input)?;
    let c = compare_series(&series)?;
    write_comparison(&c, &input)?;
    print!("{}", format_summary(&c));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Simulate {
            config,
            protocols,
            seeds,
            out,
            overrides,
        } => simulate(config, protocols, seeds, out, overrides),
        Command::Compare { input } => compare(input),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
