//! Lifetime, energy and reliability figures for finished runs.
//!
//! Lifetime milestones are rounds: FND (first node death), HND (alive count
//! at or below half the initial population, rounded up) and LND (no node
//! left). A milestone that never happens reads `max_rounds + 1`.
//!
//! Reliability of a round is the fraction of the *initial* population whose
//! report reached the base station in that round.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::SimulationResult;
use crate::error::{Error, Result};
use crate::protocols::ProtocolKind;

/// Per-round counters of one run; everything the metrics need. Can be built
/// from a [`SimulationResult`] or read back from a round CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSeries {
    pub protocol: ProtocolKind,
    pub seed: u64,
    pub n_initial: usize,
    pub data_bits: u64,
    pub max_rounds: u64,
    pub rounds: Vec<SeriesRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub round: u64,
    pub alive: usize,
    pub delivered_sources: usize,
    pub delivered_reports: usize,
    pub energy_charged: f64,
}

impl From<&SimulationResult> for RunSeries {
    fn from(r: &SimulationResult) -> Self {
        RunSeries {
            protocol: r.protocol,
            seed: r.seed,
            n_initial: r.n_initial,
            data_bits: r.config.radio.data_bits,
            max_rounds: r.config.max_rounds,
            rounds: r
                .reports
                .iter()
                .map(|rep| SeriesRow {
                    round: rep.round,
                    alive: rep.alive,
                    delivered_sources: rep.delivered_sources,
                    delivered_reports: rep.delivered_reports,
                    energy_charged: rep.energy_charged,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifetimeSummary {
    pub fnd: u64,
    pub hnd: u64,
    pub lnd: u64,
    pub total_energy: f64,
    pub total_delivered: u64,
    /// `None` when nothing was delivered.
    pub energy_per_delivered_bit: Option<f64>,
}

pub fn lifetime_summary(result: &SimulationResult) -> LifetimeSummary {
    summarize(&RunSeries::from(result))
}

pub fn summarize(series: &RunSeries) -> LifetimeSummary {
    let never = series.max_rounds + 1;
    let half = series.n_initial.div_ceil(2);
    let mut prev_alive = series.n_initial;
    let (mut fnd, mut hnd, mut lnd) = (None, None, None);
    for row in &series.rounds {
        if fnd.is_none() && row.alive < prev_alive {
            fnd = Some(row.round);
        }
        if hnd.is_none() && row.alive <= half {
            hnd = Some(row.round);
        }
        if lnd.is_none() && row.alive == 0 {
            lnd = Some(row.round);
        }
        prev_alive = row.alive;
    }
    let total_energy: f64 = series.rounds.iter().map(|r| r.energy_charged).sum();
    let total_delivered: u64 = series.rounds.iter().map(|r| r.delivered_reports as u64).sum();
    let energy_per_delivered_bit =
        (total_delivered > 0).then(|| total_energy / (total_delivered as f64 * series.data_bits as f64));
    LifetimeSummary {
        fnd: fnd.unwrap_or(never),
        hnd: hnd.unwrap_or(never),
        lnd: lnd.unwrap_or(never),
        total_energy,
        total_delivered,
        energy_per_delivered_bit,
    }
}

/// Delivered fraction per round, over the initial population.
pub fn reliability_curve(result: &SimulationResult, n_initial: usize) -> Vec<f64> {
    series_reliability(&RunSeries::from(result), n_initial)
}

pub fn series_reliability(series: &RunSeries, n_initial: usize) -> Vec<f64> {
    if n_initial == 0 {
        return vec![0.0; series.rounds.len()];
    }
    series
        .rounds
        .iter()
        .map(|r| r.delivered_sources as f64 / n_initial as f64)
        .collect()
}

/// Mean reliability over rounds `0..=upto`. Rounds after the run ended count
/// as zero delivery.
pub fn cumulative_reliability(series: &RunSeries, upto: u64) -> f64 {
    if series.n_initial == 0 {
        return 0.0;
    }
    let delivered: u64 = series
        .rounds
        .iter()
        .take_while(|r| r.round <= upto)
        .map(|r| r.delivered_sources as u64)
        .sum();
    delivered as f64 / (series.n_initial as f64 * (upto + 1) as f64)
}

/// Median and quartiles, linear interpolation between order statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

impl Spread {
    pub fn of(values: &[f64]) -> Option<Spread> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Spread {
            median: quantile(&v, 0.5),
            q1: quantile(&v, 0.25),
            q3: quantile(&v, 0.75),
        })
    }

    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn median(values: &[f64]) -> Option<f64> {
    Spread::of(values).map(|s| s.median)
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub protocol: ProtocolKind,
    pub runs: usize,
    pub fnd: Spread,
    pub hnd: Spread,
    pub lnd: Spread,
    pub mean_total_energy: f64,
    /// Over runs that delivered anything; `None` if none did.
    pub mean_energy_per_bit: Option<f64>,
    pub median_energy_per_bit: Option<f64>,
}

/// Percent improvement of `leach_modified` over one baseline, computed on
/// the row statistics. Positive means the modified join rule is better:
/// longer lifetime, less energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Improvement {
    pub baseline: ProtocolKind,
    pub fnd_pct: Option<f64>,
    pub hnd_pct: Option<f64>,
    pub lnd_pct: Option<f64>,
    pub total_energy_pct: Option<f64>,
    pub energy_per_bit_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub improvements: Vec<Improvement>,
}

impl Comparison {
    pub fn row(&self, kind: ProtocolKind) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.protocol == kind)
    }

    pub fn improvement_over(&self, baseline: ProtocolKind) -> Option<&Improvement> {
        self.improvements.iter().find(|i| i.baseline == baseline)
    }
}

/// Higher-is-better percent change.
pub fn gain_pct(candidate: f64, baseline: f64) -> Option<f64> {
    (baseline != 0.0).then(|| (candidate - baseline) / baseline * 100.0)
}

/// Lower-is-better percent change.
pub fn saving_pct(candidate: f64, baseline: f64) -> Option<f64> {
    (baseline != 0.0).then(|| (baseline - candidate) / baseline * 100.0)
}

/// Cross-protocol table. All runs must share one scenario configuration.
pub fn compare(results: &BTreeMap<ProtocolKind, Vec<SimulationResult>>) -> Result<Comparison> {
    let mut reference = None;
    for (kind, runs) in results {
        for r in runs {
            if r.protocol != *kind {
                return Err(Error::InvalidComparison(format!(
                    "{} run filed under {kind}",
                    r.protocol
                )));
            }
            match reference {
                None => reference = Some(&r.config),
                Some(c) if c != &r.config => {
                    return Err(Error::InvalidComparison(format!(
                        "{kind} seed {} ran under a different configuration",
                        r.seed
                    )))
                }
                Some(_) => {}
            }
        }
    }
    let series = results
        .iter()
        .map(|(k, runs)| (*k, runs.iter().map(RunSeries::from).collect()))
        .collect();
    compare_series(&series)
}

pub fn compare_series(series: &BTreeMap<ProtocolKind, Vec<RunSeries>>) -> Result<Comparison> {
    if series.len() < 2 {
        return Err(Error::InvalidComparison("need at least two protocols".into()));
    }
    let mut shape = None;
    for (kind, runs) in series {
        if runs.is_empty() {
            return Err(Error::InvalidComparison(format!("{kind} has no runs")));
        }
        for r in runs {
            let s = (r.n_initial, r.data_bits, r.max_rounds);
            match shape {
                None => shape = Some(s),
                Some(prev) if prev != s => {
                    return Err(Error::InvalidComparison(format!(
                        "{kind} seed {} differs in population, packet size or round cap",
                        r.seed
                    )))
                }
                Some(_) => {}
            }
        }
    }

    let rows: Vec<ComparisonRow> = series
        .iter()
        .map(|(kind, runs)| {
            // seed order fixes the float summation order
            let mut ordered: Vec<&RunSeries> = runs.iter().collect();
            ordered.sort_by_key(|r| r.seed);
            let sums: Vec<LifetimeSummary> = ordered.into_iter().map(summarize).collect();
            let pick = |f: fn(&LifetimeSummary) -> f64| sums.iter().map(f).collect::<Vec<f64>>();
            let per_bit: Vec<f64> = sums.iter().filter_map(|s| s.energy_per_delivered_bit).collect();
            ComparisonRow {
                protocol: *kind,
                runs: runs.len(),
                fnd: Spread::of(&pick(|s| s.fnd as f64)).expect("non-empty"),
                hnd: Spread::of(&pick(|s| s.hnd as f64)).expect("non-empty"),
                lnd: Spread::of(&pick(|s| s.lnd as f64)).expect("non-empty"),
                mean_total_energy: mean(&pick(|s| s.total_energy)).expect("non-empty"),
                mean_energy_per_bit: mean(&per_bit),
                median_energy_per_bit: median(&per_bit),
            }
        })
        .collect();

    let improvements = match rows.iter().find(|r| r.protocol == ProtocolKind::LeachModified) {
        None => Vec::new(),
        Some(m) => rows
            .iter()
            .filter(|b| b.protocol != ProtocolKind::LeachModified)
            .map(|b| Improvement {
                baseline: b.protocol,
                fnd_pct: gain_pct(m.fnd.median, b.fnd.median),
                hnd_pct: gain_pct(m.hnd.median, b.hnd.median),
                lnd_pct: gain_pct(m.lnd.median, b.lnd.median),
                total_energy_pct: saving_pct(m.mean_total_energy, b.mean_total_energy),
                energy_per_bit_pct: match (m.median_energy_per_bit, b.median_energy_per_bit) {
                    (Some(c), Some(base)) => saving_pct(c, base),
                    _ => None,
                },
            })
            .collect(),
    };
    Ok(Comparison { rows, improvements })
}
