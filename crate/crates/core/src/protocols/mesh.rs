//! Flat multi-hop baselines over the unit-disk neighbor graph.
//!
//! Two nodes are neighbors when they lie within `radio_range` of each other.
//! A node may uplink to the base station when the station is within range,
//! and the alive node nearest the station always acts as gateway with a
//! long-range uplink.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Hop, MeshRoute};
use crate::engine::NodeState;
use crate::error::{Error, Result};
use crate::field::{Field, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshMode {
    /// Forward to the neighbor closest to the base station, as long as it is
    /// strictly closer than the current holder.
    Greedy,
    /// Every node reached rebroadcasts each report exactly once.
    Flood,
}

/// Routes plus the neighbor lists they were computed on.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshRoutes {
    pub routes: BTreeMap<NodeId, MeshRoute>,
    /// Alive neighbors per node id, ascending. Empty for dead nodes.
    pub neighbors: Vec<Vec<NodeId>>,
}

pub fn neighbor_lists(states: &[NodeState], field: &Field, radio_range: f64) -> Vec<Vec<NodeId>> {
    let alive: Vec<NodeId> = states.iter().filter(|s| s.alive).map(|s| s.id).collect();
    let mut out = vec![Vec::new(); states.len()];
    for (i, &a) in alive.iter().enumerate() {
        for &b in &alive[i + 1..] {
            if field.dist(a, b) <= radio_range {
                out[a.index()].push(b);
                out[b.index()].push(a);
            }
        }
    }
    for l in &mut out {
        l.sort_unstable();
    }
    out
}

/// The alive node closest to the base station, lowest id on ties.
pub fn gateway(states: &[NodeState], field: &Field) -> Option<NodeId> {
    let mut best: Option<(f64, NodeId)> = None;
    for s in states.iter().filter(|s| s.alive) {
        let d = field.dist_to_bs(s.id);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, s.id));
        }
    }
    best.map(|(_, id)| id)
}

pub fn build_mesh_routes(states: &[NodeState], field: &Field, mode: MeshMode, radio_range: f64) -> Result<MeshRoutes> {
    if !(radio_range > 0.0 && radio_range.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "radio range must be positive, got {radio_range}"
        )));
    }
    let neighbors = neighbor_lists(states, field, radio_range);
    let gw = gateway(states, field);
    let can_uplink = |n: NodeId| Some(n) == gw || field.dist_to_bs(n) <= radio_range;

    let mut routes = BTreeMap::new();
    for src in states.iter().filter(|s| s.alive).map(|s| s.id) {
        let route = match mode {
            MeshMode::Greedy => greedy_route(src, field, &neighbors, &can_uplink),
            MeshMode::Flood => flood_route(src, field, &neighbors, &can_uplink),
        };
        routes.insert(src, route);
    }
    Ok(MeshRoutes { routes, neighbors })
}

fn greedy_route(
    src: NodeId,
    field: &Field,
    neighbors: &[Vec<NodeId>],
    can_uplink: &impl Fn(NodeId) -> bool,
) -> MeshRoute {
    let mut path = vec![Hop::Node(src)];
    let mut cur = src;
    loop {
        if can_uplink(cur) {
            path.push(Hop::BaseStation);
            break;
        }
        let here = field.dist_to_bs(cur);
        let mut next: Option<(f64, NodeId)> = None;
        for &n in &neighbors[cur.index()] {
            let d = field.dist_to_bs(n);
            if d < here && next.is_none_or(|(bd, _)| d < bd) {
                next = Some((d, n));
            }
        }
        match next {
            Some((_, n)) => {
                path.push(Hop::Node(n));
                cur = n;
            }
            // local minimum out of uplink range: undeliverable
            None => break,
        }
    }
    MeshRoute {
        path,
        flood: Vec::new(),
    }
}

fn flood_route(
    src: NodeId,
    field: &Field,
    neighbors: &[Vec<NodeId>],
    can_uplink: &impl Fn(NodeId) -> bool,
) -> MeshRoute {
    let n = neighbors.len();
    let mut parent: Vec<Option<NodeId>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([src]);
    seen[src.index()] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in &neighbors[u.index()] {
            if !seen[v.index()] {
                seen[v.index()] = true;
                parent[v.index()] = Some(u);
                queue.push_back(v);
            }
        }
    }

    let mut uplink: Option<(f64, NodeId)> = None;
    for &u in order.iter().filter(|&&u| can_uplink(u)) {
        let d = field.dist_to_bs(u);
        if uplink.is_none_or(|(bd, bu)| d < bd || (d == bd && u < bu)) {
            uplink = Some((d, u));
        }
    }

    let path = match uplink {
        Some((_, up)) => {
            let mut rev = vec![up];
            let mut cur = up;
            while let Some(p) = parent[cur.index()] {
                rev.push(p);
                cur = p;
            }
            let mut path: Vec<Hop> = rev.into_iter().rev().map(Hop::Node).collect();
            path.push(Hop::BaseStation);
            path
        }
        None => vec![Hop::Node(src)],
    };
    MeshRoute { path, flood: order }
}
