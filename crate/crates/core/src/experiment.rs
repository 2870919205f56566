//! Seed sweeps over several protocols and the files they leave behind.
//!
//! Output layout under `out_dir`:
//!
//! ```text
//! config.json                   resolved scenario
//! runs/<protocol>_seed<N>.csv   one row per round
//! summary_<protocol>.json       per-seed lifetime summaries
//! comparison.csv                one row per protocol (two or more protocols)
//! comparison.json               rows plus leach_modified improvements
//! ```
//!
//! Runs execute on a bounded rayon pool; files are written afterwards by the
//! calling thread, so output bytes do not depend on the worker count.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;
use crate::engine::{run_simulation, SimulationResult};
use crate::error::{Error, Result};
use crate::metrics::{compare_series, summarize, Comparison, LifetimeSummary, RunSeries, SeriesRow, Spread};
use crate::protocols::ProtocolKind;

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "LEACHSIM_WORKERS";

pub const ROUND_CSV_HEADER: &str = "round,alive,heads,direct,delivered,energy_charged_j,total_residual_j";

/// Energy saving the modified join rule is reported against.
pub const REFERENCE_SAVING_PCT: f64 = 16.0;

pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Nine significant digits.
pub fn fmt_sig(x: f64) -> String {
    format!("{x:.8e}")
}

/// Runs every (protocol, seed) pair. Results come back in config order.
pub fn run_all(cfg: &ScenarioConfig, workers: usize) -> Result<BTreeMap<ProtocolKind, Vec<SimulationResult>>> {
    cfg.validate()?;
    let run = cfg.run_config();
    let jobs: Vec<(ProtocolKind, u64)> = cfg
        .protocols
        .iter()
        .flat_map(|&k| cfg.seeds.iter().map(move |&s| (k, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    let done: Vec<Result<SimulationResult>> =
        pool.install(|| jobs.par_iter().map(|&(k, s)| run_simulation(&run, k, s)).collect());
    let mut out: BTreeMap<ProtocolKind, Vec<SimulationResult>> = BTreeMap::new();
    for r in done {
        let r = r?;
        out.entry(r.protocol).or_default().push(r);
    }
    Ok(out)
}

pub fn round_csv(result: &SimulationResult) -> String {
    let mut s = String::with_capacity(64 * (result.reports.len() + 1));
    s.push_str(ROUND_CSV_HEADER);
    s.push('\n');
    for r in &result.reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            r.round,
            r.alive,
            r.heads,
            r.direct,
            r.delivered_sources,
            fmt_sig(r.energy_charged),
            fmt_sig(r.total_residual)
        );
    }
    s
}

pub fn run_file_name(kind: ProtocolKind, seed: u64) -> String {
    format!("{kind}_seed{seed}.csv")
}

fn parse_run_file_name(name: &str) -> Option<(ProtocolKind, u64)> {
    let stem = name.strip_suffix(".csv")?;
    let (kind, seed) = stem.rsplit_once("_seed")?;
    Some((kind.parse().ok()?, seed.parse().ok()?))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    #[serde(flatten)]
    pub summary: LifetimeSummary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProtocolSummary {
    pub protocol: ProtocolKind,
    pub fnd: Spread,
    pub hnd: Spread,
    pub lnd: Spread,
    pub seeds: Vec<SeedSummary>,
}

pub fn protocol_summary(kind: ProtocolKind, runs: &[RunSeries]) -> ProtocolSummary {
    let seeds: Vec<SeedSummary> = runs
        .iter()
        .map(|r| SeedSummary {
            seed: r.seed,
            summary: summarize(r),
        })
        .collect();
    let spread = |f: fn(&LifetimeSummary) -> u64| {
        let v: Vec<f64> = seeds.iter().map(|s| f(&s.summary) as f64).collect();
        Spread::of(&v).expect("at least one seed")
    };
    ProtocolSummary {
        protocol: kind,
        fnd: spread(|s| s.fnd),
        hnd: spread(|s| s.hnd),
        lnd: spread(|s| s.lnd),
        seeds,
    }
}

pub fn comparison_csv(c: &Comparison) -> String {
    let mut s = String::from(
        "protocol,runs,fnd_median,fnd_q1,fnd_q3,hnd_median,hnd_q1,hnd_q3,lnd_median,lnd_q1,lnd_q3,\
         mean_total_energy_j,mean_energy_per_bit_j,median_energy_per_bit_j\n",
    );
    let opt = |v: Option<f64>| v.map(fmt_sig).unwrap_or_default();
    for r in &c.rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.protocol,
            r.runs,
            fmt_sig(r.fnd.median),
            fmt_sig(r.fnd.q1),
            fmt_sig(r.fnd.q3),
            fmt_sig(r.hnd.median),
            fmt_sig(r.hnd.q1),
            fmt_sig(r.hnd.q3),
            fmt_sig(r.lnd.median),
            fmt_sig(r.lnd.q1),
            fmt_sig(r.lnd.q3),
            fmt_sig(r.mean_total_energy),
            opt(r.mean_energy_per_bit),
            opt(r.median_energy_per_bit),
        );
    }
    s
}

/// Plain-text table for the terminal.
pub fn format_summary(c: &Comparison) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<15} {:>5} {:>16} {:>16} {:>16} {:>11} {:>12}",
        "protocol", "runs", "FND med [IQR]", "HND med [IQR]", "LND med [IQR]", "energy J", "J/bit med"
    );
    for r in &c.rows {
        let cell = |sp: &Spread| format!("{:.0} [{:.0}]", sp.median, sp.iqr());
        let _ = writeln!(
            s,
            "{:<15} {:>5} {:>16} {:>16} {:>16} {:>11.4} {:>12}",
            r.protocol.as_str(),
            r.runs,
            cell(&r.fnd),
            cell(&r.hnd),
            cell(&r.lnd),
            r.mean_total_energy,
            r.median_energy_per_bit.map_or("-".into(), |v| format!("{v:.4e}"))
        );
    }
    if !c.improvements.is_empty() {
        let _ = writeln!(s, "\nleach_modified vs baseline (%; positive = better)");
        let pct = |v: Option<f64>| v.map_or("-".into(), |v| format!("{v:+.1}"));
        let _ = writeln!(
            s,
            "{:<15} {:>8} {:>8} {:>8} {:>10}",
            "baseline", "FND", "HND", "LND", "J/bit"
        );
        for i in &c.improvements {
            let _ = writeln!(
                s,
                "{:<15} {:>8} {:>8} {:>8} {:>10}",
                i.baseline.as_str(),
                pct(i.fnd_pct),
                pct(i.hnd_pct),
                pct(i.lnd_pct),
                pct(i.energy_per_bit_pct)
            );
        }
        if let Some(i) = c.improvement_over(ProtocolKind::Leach) {
            let _ = writeln!(
                s,
                "\nenergy per delivered bit saved over leach: {} % (reference figure: {REFERENCE_SAVING_PCT} %)",
                i.energy_per_bit_pct.map_or("n/a".into(), |v| format!("{v:.1}"))
            );
        }
    }
    s
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn to_json<T: Serialize>(v: &T, context: &str) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|source| Error::Json {
        context: context.into(),
        source,
    })
}

#[derive(Debug)]
pub struct ExperimentOutput {
    pub results: BTreeMap<ProtocolKind, Vec<SimulationResult>>,
    pub comparison: Option<Comparison>,
    pub files: Vec<PathBuf>,
}

/// Writes all run, summary and comparison files for `results` into `dir`.
pub fn write_outputs(
    cfg: &ScenarioConfig,
    results: &BTreeMap<ProtocolKind, Vec<SimulationResult>>,
    dir: &Path,
) -> Result<(Option<Comparison>, Vec<PathBuf>)> {
    let runs_dir = dir.join("runs");
    fs::create_dir_all(&runs_dir).map_err(|e| Error::io(&runs_dir, e))?;
    let mut files = Vec::new();

    let path = dir.join("config.json");
    write(&path, &cfg.to_json())?;
    files.push(path);

    let mut series = BTreeMap::new();
    for (&kind, runs) in results {
        for r in runs {
            let path = runs_dir.join(run_file_name(kind, r.seed));
            write(&path, &round_csv(r))?;
            files.push(path);
        }
        let s: Vec<RunSeries> = runs.iter().map(RunSeries::from).collect();
        let path = dir.join(format!("summary_{kind}.json"));
        write(&path, &to_json(&protocol_summary(kind, &s), "protocol summary")?)?;
        files.push(path);
        series.insert(kind, s);
    }

    let comparison = if series.len() >= 2 {
        let c = compare_series(&series)?;
        files.extend(write_comparison(&c, dir)?);
        Some(c)
    } else {
        None
    };
    Ok((comparison, files))
}

pub fn write_comparison(c: &Comparison, dir: &Path) -> Result<Vec<PathBuf>> {
    let csv_path = dir.join("comparison.csv");
    write(&csv_path, &comparison_csv(c))?;
    let json_path = dir.join("comparison.json");
    write(&json_path, &to_json(c, "comparison")?)?;
    Ok(vec![csv_path, json_path])
}

/// Runs the whole scenario and writes its files into `cfg.out_dir`.
pub fn run_experiment(cfg: &ScenarioConfig) -> Result<ExperimentOutput> {
    run_experiment_with(cfg, worker_count())
}

pub fn run_experiment_with(cfg: &ScenarioConfig, workers: usize) -> Result<ExperimentOutput> {
    let results = run_all(cfg, workers)?;
    let (comparison, files) = write_outputs(cfg, &results, &cfg.out_dir)?;
    Ok(ExperimentOutput {
        results,
        comparison,
        files,
    })
}

#[derive(Debug, Deserialize)]
struct CsvRow {
    round: u64,
    alive: usize,
    #[allow(dead_code)]
    heads: usize,
    #[allow(dead_code)]
    direct: usize,
    delivered: usize,
    energy_charged_j: f64,
    #[allow(dead_code)]
    total_residual_j: f64,
}

/// Reads one round CSV back. Per-frame report counts are not in the file,
/// so delivered reports are taken as `delivered * frames_per_round`, exact
/// for single-frame rounds.
pub fn read_round_csv(path: &Path, kind: ProtocolKind, seed: u64, cfg: &ScenarioConfig) -> Result<RunSeries> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = rdr.headers().map_err(csv_err)?.iter().collect::<Vec<_>>().join(",");
    if header != ROUND_CSV_HEADER {
        return Err(Error::InvalidComparison(format!(
            "{} has header `{header}`",
            path.display()
        )));
    }
    let frames = cfg.frames_per_round as usize;
    let rounds = rdr
        .deserialize::<CsvRow>()
        .map(|row| {
            row.map(|r| SeriesRow {
                round: r.round,
                alive: r.alive,
                delivered_sources: r.delivered,
                delivered_reports: r.delivered * frames,
                energy_charged: r.energy_charged_j,
            })
            .map_err(csv_err)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RunSeries {
        protocol: kind,
        seed,
        n_initial: cfg.run_config().deployment.node_count(),
        data_bits: cfg.radio.data_bits,
        max_rounds: cfg.max_rounds,
        rounds,
    })
}

/// Loads a finished experiment directory.
pub fn load_experiment(dir: &Path) -> Result<(ScenarioConfig, BTreeMap<ProtocolKind, Vec<RunSeries>>)> {
    let cfg_path = dir.join("config.json");
    let text = fs::read_to_string(&cfg_path).map_err(|e| Error::io(&cfg_path, e))?;
    let cfg = ScenarioConfig::from_json_str(&text, &[])?;
    let runs_dir = dir.join("runs");
    let mut entries: Vec<(ProtocolKind, u64, PathBuf)> = fs::read_dir(&runs_dir)
        .map_err(|e| Error::io(&runs_dir, e))?
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let name = e.file_name().into_string().ok()?;
            let (k, s) = parse_run_file_name(&name)?;
            Some((k, s, e.path()))
        })
        .collect();
    entries.sort();
    let mut out: BTreeMap<ProtocolKind, Vec<RunSeries>> = BTreeMap::new();
    for (k, s, path) in entries {
        out.entry(k).or_default().push(read_round_csv(&path, k, s, &cfg)?);
    }
    Ok((cfg, out))
}
