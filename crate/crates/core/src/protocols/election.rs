//! Distributed LEACH head election and its threshold variants.
//!
//! A node that has not yet led during the current epoch of `round(1/p)`
//! rounds becomes head when a uniform draw falls below
//! `T = p / (1 - p * (r mod round(1/p)))`. By the last round of an epoch the
//! threshold reaches 1, so every node leads exactly once per epoch when no
//! node dies.

use std::collections::BTreeSet;

use rand::Rng;

use super::{LeachConfig, ProtocolKind};
use crate::engine::NodeState;
use crate::error::{Error, Result};
use crate::field::NodeId;

/// Head-election probability of `node` in `round`.
pub fn leach_threshold(node: &NodeState, round: u64, cfg: &LeachConfig, variant: ProtocolKind) -> Result<f64> {
    if !node.alive {
        return Err(Error::InvalidArgument(format!("{} is dead", node.id)));
    }
    if node.served_head_in_epoch {
        return Ok(0.0);
    }
    let epoch = cfg.epoch_len();
    let p = cfg.p;
    let base = p / (1.0 - p * (round % epoch) as f64);
    let t = match variant {
        ProtocolKind::LeachEnergy => {
            if node.initial > 0.0 {
                base * (node.residual / node.initial)
            } else {
                0.0
            }
        }
        ProtocolKind::LeachBoost => {
            if node.rounds_since_head >= cfg.boost_rounds() {
                base * cfg.boost_factor
            } else {
                base
            }
        }
        _ => base,
    };
    Ok(t.clamp(0.0, 1.0))
}

/// Runs one election round. Each alive node draws once from `rng` in id
/// order. Resets epoch eligibility at epoch boundaries and updates the
/// per-node headship counters.
pub fn elect_heads_leach<R: Rng + ?Sized>(
    states: &mut [NodeState],
    round: u64,
    cfg: &LeachConfig,
    variant: ProtocolKind,
    rng: &mut R,
) -> Result<BTreeSet<NodeId>> {
    if round.is_multiple_of(cfg.epoch_len()) {
        for s in states.iter_mut() {
            s.served_head_in_epoch = false;
        }
    }
    let mut heads = BTreeSet::new();
    for s in states.iter_mut().filter(|s| s.alive) {
        s.rounds_since_head += 1;
        let t = leach_threshold(s, round, cfg, variant)?;
        let u: f64 = rng.gen();
        if u < t {
            heads.insert(s.id);
            s.served_head_in_epoch = true;
            s.rounds_since_head = 0;
        }
    }
    Ok(heads)
}
