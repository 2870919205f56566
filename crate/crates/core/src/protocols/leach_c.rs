//! Centralized head selection.
//!
//! The base station sees every node's position and residual energy. Nodes
//! holding less than the alive-population average may not lead. Among the
//! rest it picks `k` heads minimizing the sum, over alive nodes, of squared
//! distance to the nearest head (a k-medoids objective).
//!
//! When there are at most [`EXACT_SUBSET_LIMIT`] candidate head sets they are
//! all scored and the best wins. Larger instances use a greedy build followed
//! by best-improvement swaps until no swap helps.

use std::collections::BTreeSet;

use crate::engine::NodeState;
use crate::error::{Error, Result};
use crate::field::{Field, NodeId};

/// Above this many `C(eligible, k)` subsets the search switches from
/// enumeration to local search.
pub const EXACT_SUBSET_LIMIT: u64 = 1_000;

/// Alive nodes allowed to lead: residual at or above the alive average.
/// The node(s) holding the maximum always qualify, which guards against the
/// float average rounding above an all-equal population.
pub fn eligible_heads(states: &[NodeState]) -> Vec<NodeId> {
    let alive: Vec<&NodeState> = states.iter().filter(|s| s.alive).collect();
    if alive.is_empty() {
        return Vec::new();
    }
    let avg = alive.iter().map(|s| s.residual).sum::<f64>() / alive.len() as f64;
    let max = alive.iter().map(|s| s.residual).fold(f64::NEG_INFINITY, f64::max);
    alive
        .iter()
        .filter(|s| s.residual >= avg || s.residual == max)
        .map(|s| s.id)
        .collect()
}

/// Sum over alive nodes of squared distance to the nearest of `heads`.
pub fn clustering_cost(states: &[NodeState], field: &Field, heads: &[NodeId]) -> f64 {
    states
        .iter()
        .filter(|s| s.alive)
        .map(|s| {
            heads
                .iter()
                .map(|&h| {
                    let d = field.dist(s.id, h);
                    d * d
                })
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

pub fn elect_heads_leach_c(states: &[NodeState], field: &Field, k: usize) -> Result<BTreeSet<NodeId>> {
    if k == 0 {
        return Err(Error::InvalidArgument("LEACH-C needs k >= 1".into()));
    }
    let alive: Vec<NodeId> = states.iter().filter(|s| s.alive).map(|s| s.id).collect();
    if alive.is_empty() {
        return Err(Error::InvalidArgument("no alive node to elect".into()));
    }
    let eligible = eligible_heads(states);
    if eligible.is_empty() {
        return Err(Error::Consistency("alive nodes but none eligible to lead".into()));
    }
    let k = k.min(eligible.len());
    if k == eligible.len() {
        return Ok(eligible.into_iter().collect());
    }

    let search = MedoidSearch::new(&alive, &eligible, field);
    let picked = if binomial(eligible.len() as u64, k as u64) <= EXACT_SUBSET_LIMIT {
        search.exhaustive(k)
    } else {
        search.local(k)
    };
    Ok(picked.into_iter().map(|c| eligible[c]).collect())
}

/// `C(n, k)`, saturating.
fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Squared distances from every alive node (rows) to every eligible node
/// (columns).
struct MedoidSearch {
    rows: usize,
    cols: usize,
    d2: Vec<f64>,
}

struct Nearest {
    best: f64,
    best_col: usize,
    second: f64,
}

impl MedoidSearch {
    fn new(alive: &[NodeId], eligible: &[NodeId], field: &Field) -> Self {
        let mut d2 = Vec::with_capacity(alive.len() * eligible.len());
        for &a in alive {
            for &e in eligible {
                let d = field.dist(a, e);
                d2.push(d * d);
            }
        }
        Self {
            rows: alive.len(),
            cols: eligible.len(),
            d2,
        }
    }

    #[inline]
    fn at(&self, row: usize, col: usize) -> f64 {
        self.d2[row * self.cols + col]
    }

    fn cost_of(&self, chosen: &[usize]) -> f64 {
        (0..self.rows)
            .map(|r| chosen.iter().map(|&c| self.at(r, c)).fold(f64::INFINITY, f64::min))
            .sum()
    }

    /// Lexicographic walk over all k-subsets of columns; first minimum wins.
    fn exhaustive(&self, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..k).collect();
        let mut best = (self.cost_of(&idx), idx.clone());
        loop {
            // advance to the next combination
            let mut i = k;
            while i > 0 && idx[i - 1] == self.cols - k + (i - 1) {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
            let c = self.cost_of(&idx);
            if c < best.0 {
                best = (c, idx.clone());
            }
        }
        best.1
    }

    fn local(&self, k: usize) -> Vec<usize> {
        let mut chosen = self.greedy(k);
        let mut nearest = self.nearest(&chosen);
        let mut cost: f64 = nearest.iter().map(|n| n.best).sum();
        loop {
            let mut best: Option<(f64, usize, usize)> = None;
            for (slot, &out) in chosen.iter().enumerate() {
                for cand in 0..self.cols {
                    if chosen.contains(&cand) {
                        continue;
                    }
                    let c = self.swap_cost(&nearest, out, cand);
                    if best.is_none_or(|(bc, _, _)| c < bc) {
                        best = Some((c, slot, cand));
                    }
                }
            }
            match best {
                Some((c, slot, cand)) if c < cost - 1e-12 * cost.abs().max(1.0) => {
                    chosen[slot] = cand;
                    nearest = self.nearest(&chosen);
                    cost = nearest.iter().map(|n| n.best).sum();
                }
                _ => break,
            }
        }
        chosen.sort_unstable();
        chosen
    }

    fn greedy(&self, k: usize) -> Vec<usize> {
        let mut near = vec![f64::INFINITY; self.rows];
        let mut chosen = Vec::with_capacity(k);
        for _ in 0..k {
            let mut best: Option<(f64, usize)> = None;
            for cand in (0..self.cols).filter(|c| !chosen.contains(c)) {
                let c: f64 = (0..self.rows).map(|r| near[r].min(self.at(r, cand))).sum();
                if best.is_none_or(|(bc, _)| c < bc) {
                    best = Some((c, cand));
                }
            }
            let (_, pick) = best.expect("k <= eligible count");
            for (r, n) in near.iter_mut().enumerate() {
                *n = n.min(self.at(r, pick));
            }
            chosen.push(pick);
        }
        chosen
    }

    fn nearest(&self, chosen: &[usize]) -> Vec<Nearest> {
        (0..self.rows)
            .map(|r| {
                let mut n = Nearest {
                    best: f64::INFINITY,
                    best_col: usize::MAX,
                    second: f64::INFINITY,
                };
                for &c in chosen {
                    let d = self.at(r, c);
                    if d < n.best {
                        n.second = n.best;
                        n.best = d;
                        n.best_col = c;
                    } else if d < n.second {
                        n.second = d;
                    }
                }
                n
            })
            .collect()
    }

    fn swap_cost(&self, nearest: &[Nearest], out: usize, cand: usize) -> f64 {
        nearest
            .iter()
            .enumerate()
            .map(|(r, n)| {
                let keep = if n.best_col == out { n.second } else { n.best };
                keep.min(self.at(r, cand))
            })
            .sum()
    }
}
