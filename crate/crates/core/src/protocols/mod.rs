//! Head election, cluster assignment and the flat baselines.
//!
//! Every protocol reduces a round to a [`RoundPlan`]: who leads, who joins
//! whom, who talks to the base station directly and, for the mesh
//! baselines, which relays carry each report.

mod assign;
mod election;
mod leach_c;
mod mesh;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use assign::{assign_modified, assign_nearest};
pub use election::{elect_heads_leach, leach_threshold};
pub use leach_c::{clustering_cost, elect_heads_leach_c, eligible_heads};
pub use mesh::{build_mesh_routes, gateway, neighbor_lists, MeshMode, MeshRoutes};

use crate::engine::NodeState;
use crate::error::{Error, Result};
use crate::field::{Field, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolKind {
    /// Every node sends straight to the base station.
    Direct,
    Leach,
    /// LEACH with the threshold scaled by the residual energy fraction.
    LeachEnergy,
    /// LEACH with a threshold boost for nodes that have not led recently.
    LeachBoost,
    /// Centralized clustering by the base station.
    LeachC,
    /// LEACH election with the closer-to-station join rule.
    LeachModified,
    MeshGreedy,
    MeshFlood,
}

impl ProtocolKind {
    pub const ALL: [ProtocolKind; 8] = [
        ProtocolKind::Direct,
        ProtocolKind::Leach,
        ProtocolKind::LeachEnergy,
        ProtocolKind::LeachBoost,
        ProtocolKind::LeachC,
        ProtocolKind::LeachModified,
        ProtocolKind::MeshGreedy,
        ProtocolKind::MeshFlood,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolKind::Direct => "direct",
            ProtocolKind::Leach => "leach",
            ProtocolKind::LeachEnergy => "leach_energy",
            ProtocolKind::LeachBoost => "leach_boost",
            ProtocolKind::LeachC => "leach_c",
            ProtocolKind::LeachModified => "leach_modified",
            ProtocolKind::MeshGreedy => "mesh_greedy",
            ProtocolKind::MeshFlood => "mesh_flood",
        }
    }

    pub fn is_clustered(self) -> bool {
        matches!(
            self,
            ProtocolKind::Leach
                | ProtocolKind::LeachEnergy
                | ProtocolKind::LeachBoost
                | ProtocolKind::LeachC
                | ProtocolKind::LeachModified
        )
    }

    pub fn mesh_mode(self) -> Option<MeshMode> {
        match self {
            ProtocolKind::MeshGreedy => Some(MeshMode::Greedy),
            ProtocolKind::MeshFlood => Some(MeshMode::Flood),
            _ => None,
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtocolKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProtocolKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = ProtocolKind::ALL.iter().map(|k| k.as_str()).collect();
            Error::config(
                "protocols",
                format!("unknown protocol `{s}`, expected one of {}", names.join(", ")),
            )
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LeachConfig {
    /// Desired fraction of heads per round.
    pub p: f64,
    /// Rounds without leading before the boost variant raises the threshold.
    /// Defaults to two epochs.
    pub boost_rounds: Option<u64>,
    pub boost_factor: f64,
}

impl Default for LeachConfig {
    fn default() -> Self {
        Self {
            p: 0.05,
            boost_rounds: None,
            boost_factor: 2.0,
        }
    }
}

impl LeachConfig {
    pub fn epoch_len(&self) -> u64 {
        ((1.0 / self.p).round() as u64).max(1)
    }

    pub fn boost_rounds(&self) -> u64 {
        self.boost_rounds.unwrap_or(2 * self.epoch_len())
    }

    /// Head count for centralized clustering with `alive` nodes left.
    pub fn leach_c_k(&self, alive: usize) -> usize {
        ((self.p * alive as f64).round() as usize).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::config(
                "leach.p",
                format!("p must lie in (0, 1), got {}", self.p),
            ));
        }
        if !(self.boost_factor >= 1.0 && self.boost_factor.is_finite()) {
            return Err(Error::config(
                "leach.boost_factor",
                format!("must be finite and >= 1, got {}", self.boost_factor),
            ));
        }
        if self.boost_rounds == Some(0) {
            return Err(Error::config("leach.boost_rounds", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hop {
    Node(NodeId),
    BaseStation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeshRoute {
    /// Transmission chain starting at the source. Ends in
    /// [`Hop::BaseStation`] exactly when the report can be delivered.
    pub path: Vec<Hop>,
    /// Flood mode only: every node that rebroadcasts the report, in
    /// breadth-first order from the source.
    pub flood: Vec<NodeId>,
}

impl MeshRoute {
    pub fn delivers(&self) -> bool {
        self.path.last() == Some(&Hop::BaseStation)
    }

    pub fn relays(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.path.iter().filter_map(|h| match h {
            Hop::Node(n) => Some(*n),
            Hop::BaseStation => None,
        })
    }
}

/// One round's topology.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundPlan {
    pub kind: ProtocolKind,
    pub heads: BTreeSet<NodeId>,
    /// member -> head
    pub membership: BTreeMap<NodeId, NodeId>,
    pub direct: BTreeSet<NodeId>,
    /// Mesh kinds only: one route per alive source.
    pub routes: BTreeMap<NodeId, MeshRoute>,
    /// Mesh kinds only: alive neighbor lists indexed by node id.
    pub neighbors: Vec<Vec<NodeId>>,
    /// Mesh kinds only: broadcast distance of a relay transmission.
    pub radio_range: f64,
}

impl RoundPlan {
    fn empty(kind: ProtocolKind) -> Self {
        Self {
            kind,
            heads: BTreeSet::new(),
            membership: BTreeMap::new(),
            direct: BTreeSet::new(),
            routes: BTreeMap::new(),
            neighbors: Vec::new(),
            radio_range: 0.0,
        }
    }

    /// Checks that the plan partitions the alive nodes into roles and that
    /// no dead node takes part.
    pub fn validate(&self, states: &[NodeState]) -> Result<()> {
        let n = states.len();
        let mut role = vec![0u8; n];
        let mut claim = |id: NodeId, what: &str| -> Result<()> {
            let s = states
                .get(id.index())
                .ok_or_else(|| Error::Consistency(format!("{what} {id} is not a node")))?;
            if !s.alive {
                return Err(Error::Consistency(format!("dead {id} appears as {what}")));
            }
            role[id.index()] += 1;
            Ok(())
        };
        for &h in &self.heads {
            claim(h, "head")?;
        }
        for &m in self.membership.keys() {
            claim(m, "member")?;
        }
        for &d in &self.direct {
            claim(d, "direct sender")?;
        }
        for &s in self.routes.keys() {
            claim(s, "mesh source")?;
        }
        for (i, s) in states.iter().enumerate() {
            let expected = u8::from(s.alive);
            if role[i] != expected {
                return Err(Error::Consistency(format!(
                    "node {i} holds {} roles, expected {expected}",
                    role[i]
                )));
            }
        }
        for (m, h) in &self.membership {
            if !self.heads.contains(h) {
                return Err(Error::Consistency(format!("{m} joins non-head {h}")));
            }
        }
        if self.kind.mesh_mode().is_none() && !self.routes.is_empty() {
            return Err(Error::Consistency(format!("{} plan carries mesh routes", self.kind)));
        }
        for (src, route) in &self.routes {
            if route.path.first() != Some(&Hop::Node(*src)) {
                return Err(Error::Consistency(format!("route of {src} does not start at it")));
            }
            for relay in route.relays().chain(route.flood.iter().copied()) {
                if !states[relay.index()].alive {
                    return Err(Error::Consistency(format!("dead {relay} relays for {src}")));
                }
            }
        }
        Ok(())
    }
}

/// Round-invariant knobs needed to build a plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanContext {
    pub leach: LeachConfig,
    /// Neighbor range for the mesh baselines.
    pub radio_range: f64,
}

/// Builds the plan for `round`. Mutates the election bookkeeping in
/// `states` (epoch eligibility, rounds since last headship).
pub fn build_round_plan<R: Rng + ?Sized>(
    kind: ProtocolKind,
    states: &mut [NodeState],
    field: &Field,
    round: u64,
    ctx: &PlanContext,
    rng: &mut R,
) -> Result<RoundPlan> {
    let alive: Vec<NodeId> = states.iter().filter(|s| s.alive).map(|s| s.id).collect();
    if alive.is_empty() {
        return Err(Error::AllDead);
    }
    let mut plan = RoundPlan::empty(kind);
    match kind {
        ProtocolKind::Direct => {
            plan.direct = alive.into_iter().collect();
        }
        ProtocolKind::Leach | ProtocolKind::LeachEnergy | ProtocolKind::LeachBoost | ProtocolKind::LeachModified => {
            let variant = if kind == ProtocolKind::LeachModified {
                ProtocolKind::Leach
            } else {
                kind
            };
            plan.heads = elect_heads_leach(states, round, &ctx.leach, variant, rng)?;
            cluster(&mut plan, &alive, field);
        }
        ProtocolKind::LeachC => {
            let k = ctx.leach.leach_c_k(alive.len());
            plan.heads = elect_heads_leach_c(states, field, k)?;
            for s in states.iter_mut().filter(|s| s.alive) {
                if plan.heads.contains(&s.id) {
                    s.rounds_since_head = 0;
                } else {
                    s.rounds_since_head += 1;
                }
            }
            cluster(&mut plan, &alive, field);
        }
        ProtocolKind::MeshGreedy | ProtocolKind::MeshFlood => {
            let mode = kind.mesh_mode().expect("mesh kind");
            let mesh = build_mesh_routes(states, field, mode, ctx.radio_range)?;
            plan.routes = mesh.routes;
            plan.neighbors = mesh.neighbors;
            plan.radio_range = ctx.radio_range;
        }
    }
    Ok(plan)
}

fn cluster(plan: &mut RoundPlan, alive: &[NodeId], field: &Field) {
    let members: Vec<NodeId> = alive.iter().copied().filter(|n| !plan.heads.contains(n)).collect();
    if plan.heads.is_empty() {
        plan.direct = members.into_iter().collect();
        return;
    }
    let heads: Vec<NodeId> = plan.heads.iter().copied().collect();
    if plan.kind == ProtocolKind::LeachModified {
        let (membership, direct) = assign_modified(&members, &heads, field);
        plan.membership = membership;
        plan.direct = direct;
    } else {
        plan.membership = assign_nearest(&members, &heads, field).expect("non-empty heads");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::deploy_uniform;
    use crate::rng::election_rng;

    fn ctx() -> PlanContext {
        PlanContext {
            leach: LeachConfig::default(),
            radio_range: 15.0,
        }
    }

    fn states(n: usize) -> Vec<NodeState> {
        (0..n).map(|i| NodeState::new(NodeId(i), 0.5)).collect()
    }

    #[test]
    fn names_round_trip() {
        for k in ProtocolKind::ALL {
            assert_eq!(k.as_str().parse::<ProtocolKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.as_str()));
        }
        assert!("leachy".parse::<ProtocolKind>().is_err());
    }

    #[test]
    fn leach_config_bounds() {
        assert!(LeachConfig {
            p: 1.5,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(LeachConfig {
            p: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert_eq!(LeachConfig::default().epoch_len(), 20);
        assert_eq!(LeachConfig::default().boost_rounds(), 40);
        assert_eq!(LeachConfig::default().leach_c_k(100), 5);
        assert_eq!(LeachConfig::default().leach_c_k(3), 1);
    }

    #[test]
    fn direct_plan_lists_everyone() {
        let f = deploy_uniform(5, 100.0, 100.0, 1).unwrap();
        let mut st = states(5);
        let plan = build_round_plan(ProtocolKind::Direct, &mut st, &f, 0, &ctx(), &mut election_rng(0)).unwrap();
        assert!(plan.heads.is_empty());
        assert_eq!(plan.direct.len(), 5);
        plan.validate(&st).unwrap();
    }

    #[test]
    fn modified_without_heads_sends_everything_direct() {
        let f = deploy_uniform(5, 100.0, 100.0, 1).unwrap();
        let mut st = states(5);
        // every node already led this epoch, so nobody can be elected
        for s in &mut st {
            s.served_head_in_epoch = true;
        }
        let plan = build_round_plan(
            ProtocolKind::LeachModified,
            &mut st,
            &f,
            3,
            &ctx(),
            &mut election_rng(0),
        )
        .unwrap();
        assert!(plan.heads.is_empty());
        assert_eq!(plan.direct.len(), 5);
    }

    #[test]
    fn all_dead_ends_the_simulation() {
        let f = deploy_uniform(2, 10.0, 10.0, 1).unwrap();
        let mut st = states(2);
        st.iter_mut().for_each(|s| s.alive = false);
        let r = build_round_plan(ProtocolKind::Leach, &mut st, &f, 0, &ctx(), &mut election_rng(0));
        assert!(matches!(r, Err(Error::AllDead)));
    }

    #[test]
    fn plans_partition_alive_nodes() {
        let f = deploy_uniform(40, 100.0, 100.0, 4).unwrap();
        for kind in ProtocolKind::ALL {
            let mut st = states(40);
            let mut rng = election_rng(4);
            for round in 0..1000u64 {
                // kill a node now and then to exercise the dead-node rule
                if round % 100 == 99 {
                    let victim = (round / 100) as usize;
                    st[victim].alive = false;
                    st[victim].residual = 0.0;
                }
                let plan = build_round_plan(kind, &mut st, &f, round, &ctx(), &mut rng).unwrap();
                plan.validate(&st)
                    .unwrap_or_else(|e| panic!("{kind} round {round}: {e}"));
                if kind.mesh_mode().is_some() && round >= 50 {
                    break;
                }
            }
        }
    }

    #[test]
    fn plans_are_deterministic() {
        let f = deploy_uniform(30, 100.0, 100.0, 2).unwrap();
        for kind in ProtocolKind::ALL {
            let run = || {
                let mut st = states(30);
                let mut rng = election_rng(2);
                (0..25u64)
                    .map(|r| build_round_plan(kind, &mut st, &f, r, &ctx(), &mut rng).unwrap())
                    .collect::<Vec<_>>()
            };
            assert_eq!(run(), run(), "{kind}");
        }
    }

    #[test]
    fn validate_catches_bad_plans() {
        let st = states(3);
        let mut plan = RoundPlan::empty(ProtocolKind::Leach);
        plan.heads.insert(NodeId(0));
        plan.membership.insert(NodeId(1), NodeId(2));
        plan.direct.insert(NodeId(2));
        assert!(plan.validate(&st).is_err());
        plan.membership.insert(NodeId(1), NodeId(0));
        plan.validate(&st).unwrap();
        plan.direct.insert(NodeId(0));
        assert!(plan.validate(&st).is_err());
    }
}
