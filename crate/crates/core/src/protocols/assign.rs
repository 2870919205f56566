//! Member-to-head assignment rules.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::field::{Field, NodeId};

/// Maps every member to its nearest head; ties go to the lowest head id.
pub fn assign_nearest(members: &[NodeId], heads: &[NodeId], field: &Field) -> Result<BTreeMap<NodeId, NodeId>> {
    if heads.is_empty() {
        return Err(Error::InvalidArgument(
            "no heads to assign members to; route them directly".into(),
        ));
    }
    let heads = sorted(heads);
    Ok(members
        .iter()
        .map(|&m| {
            let h = nearest(m, heads.iter().copied(), field).expect("non-empty head set");
            (m, h)
        })
        .collect())
}

/// Join rule that never moves data away from the base station.
///
/// A member only considers heads strictly closer to the base station than
/// itself and joins the nearest of those. A member with no such head sends
/// straight to the base station and lands in the returned direct set.
pub fn assign_modified(
    members: &[NodeId],
    heads: &[NodeId],
    field: &Field,
) -> (BTreeMap<NodeId, NodeId>, BTreeSet<NodeId>) {
    let heads = sorted(heads);
    let mut membership = BTreeMap::new();
    let mut direct = BTreeSet::new();
    for &m in members {
        let own = field.dist_to_bs(m);
        let candidates = heads.iter().copied().filter(|&h| field.dist_to_bs(h) < own);
        match nearest(m, candidates, field) {
            Some(h) => {
                membership.insert(m, h);
            }
            None => {
                direct.insert(m);
            }
        }
    }
    (membership, direct)
}

fn sorted(ids: &[NodeId]) -> Vec<NodeId> {
    let mut v = ids.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

// `candidates` must be in ascending id order for the tie-break to hold.
fn nearest(m: NodeId, candidates: impl Iterator<Item = NodeId>, field: &Field) -> Option<NodeId> {
    let mut best: Option<(f64, NodeId)> = None;
    for h in candidates {
        let d = field.dist(m, h);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, h));
        }
    }
    best.map(|(_, h)| h)
}
