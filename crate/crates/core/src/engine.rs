//! Round loop and energy accounting.
//!
//! Each round builds a [`RoundPlan`] and then charges every radio action in
//! a fixed order: members (by id), heads (by id), direct senders (by id),
//! then mesh routes (by source id, hop by hop). A node performs an action
//! only if it can pay for all of it. Otherwise it dies on the spot, its
//! remaining charge is written off as spent, and any report that depended on
//! it is lost for the round. Nodes whose battery is already empty when a
//! round starts die before the plan is built.

use serde::{Deserialize, Serialize};

use crate::energy::{aggregate_cost, rx_cost, tx_cost, RadioParams};
use crate::error::{Error, Result};
use crate::field::{deploy_grid, deploy_uniform, Field, NodeId, Position};
use crate::protocols::{build_round_plan, Hop, LeachConfig, PlanContext, ProtocolKind, RoundPlan};
use crate::rng::{election_rng, SimRng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeState {
    pub id: NodeId,
    pub residual: f64,
    /// Battery at deployment; reference for the energy-scaled threshold.
    pub initial: f64,
    pub alive: bool,
    pub rounds_since_head: u64,
    pub served_head_in_epoch: bool,
}

impl NodeState {
    pub fn new(id: NodeId, energy: f64) -> Self {
        Self {
            id,
            residual: energy,
            initial: energy,
            alive: true,
            rounds_since_head: 0,
            served_head_in_epoch: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundReport {
    pub round: u64,
    /// Alive nodes after the round.
    pub alive: usize,
    pub heads: usize,
    pub direct: usize,
    /// Distinct sources with at least one report at the base station.
    pub delivered_sources: usize,
    /// Reports at the base station, counting every frame.
    pub delivered_reports: usize,
    /// Energy drawn from batteries this round, including charge written off
    /// by nodes that died.
    pub energy_charged: f64,
    pub deaths: Vec<NodeId>,
    pub total_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Deployment {
    Uniform { nodes: usize, width: f64, height: f64 },
    Grid { nx: usize, ny: usize, spacing: f64 },
}

impl Default for Deployment {
    fn default() -> Self {
        Deployment::Uniform {
            nodes: 100,
            width: 100.0,
            height: 100.0,
        }
    }
}

impl Deployment {
    pub fn node_count(&self) -> usize {
        match *self {
            Deployment::Uniform { nodes, .. } => nodes,
            Deployment::Grid { nx, ny, .. } => nx * ny,
        }
    }

    /// 1.5 lattice spacings; for uniform fields the spacing of a square
    /// lattice with the same density.
    pub fn default_radio_range(&self) -> f64 {
        match *self {
            Deployment::Grid { spacing, .. } => 1.5 * spacing,
            Deployment::Uniform { nodes, width, height } => 1.5 * (width * height / nodes as f64).sqrt(),
        }
    }
}

/// Everything that determines one run apart from the protocol and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub deployment: Deployment,
    /// Base station position; `None` places it above the top edge.
    pub bs: Option<Position>,
    pub radio: RadioParams,
    pub leach: LeachConfig,
    pub frames_per_round: u32,
    pub max_rounds: u64,
    pub control_energy: bool,
    /// Mesh neighbor range; `None` uses [`Deployment::default_radio_range`].
    pub radio_range: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            deployment: Deployment::default(),
            bs: None,
            radio: RadioParams::default(),
            leach: LeachConfig::default(),
            frames_per_round: 1,
            max_rounds: 5000,
            control_energy: false,
            radio_range: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        match self.deployment {
            Deployment::Uniform { nodes, width, height } => {
                if nodes == 0 {
                    return Err(Error::config("nodes", "must be at least 1"));
                }
                if !(width > 0.0 && width.is_finite()) {
                    return Err(Error::config("width", format!("must be positive, got {width}")));
                }
                if !(height > 0.0 && height.is_finite()) {
                    return Err(Error::config("height", format!("must be positive, got {height}")));
                }
            }
            Deployment::Grid { nx, ny, spacing } => {
                if nx == 0 || ny == 0 {
                    return Err(Error::config("grid", "nx and ny must be at least 1"));
                }
                if !(spacing > 0.0 && spacing.is_finite()) {
                    return Err(Error::config(
                        "grid.spacing",
                        format!("must be positive, got {spacing}"),
                    ));
                }
            }
        }
        if let Some(bs) = self.bs {
            if !bs.is_finite() {
                return Err(Error::config("bs", "coordinates must be finite"));
            }
        }
        self.radio.validate()?;
        self.leach.validate()?;
        if self.frames_per_round == 0 {
            return Err(Error::config("frames_per_round", "must be at least 1"));
        }
        if self.max_rounds == 0 {
            return Err(Error::config("max_rounds", "must be at least 1"));
        }
        if let Some(r) = self.radio_range {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::config("radio_range", format!("must be positive, got {r}")));
            }
        }
        Ok(())
    }

    pub fn radio_range(&self) -> f64 {
        self.radio_range
            .unwrap_or_else(|| self.deployment.default_radio_range())
    }

    pub fn build_field(&self, seed: u64) -> Result<Field> {
        let field = match self.deployment {
            Deployment::Uniform { nodes, width, height } => deploy_uniform(nodes, width, height, seed)?,
            Deployment::Grid { nx, ny, spacing } => deploy_grid(nx, ny, spacing)?,
        };
        match self.bs {
            Some(bs) => field.with_bs(bs),
            None => Ok(field),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundOptions {
    pub frames: u32,
    /// Charge head advertisements and join requests as control packets.
    pub control_energy: bool,
}

impl Default for RoundOptions {
    fn default() -> Self {
        Self {
            frames: 1,
            control_energy: false,
        }
    }
}

struct Ledger<'a> {
    states: &'a mut [NodeState],
    charged: f64,
    deaths: Vec<NodeId>,
}

impl Ledger<'_> {
    fn alive(&self, id: NodeId) -> bool {
        self.states[id.index()].alive
    }

    /// Pays `cost` from `id`'s battery. Returns false, killing the node,
    /// when the battery cannot cover it.
    fn spend(&mut self, id: NodeId, cost: f64) -> bool {
        let s = &mut self.states[id.index()];
        if !s.alive {
            return false;
        }
        if s.residual >= cost {
            s.residual -= cost;
            self.charged += cost;
            true
        } else {
            self.charged += s.residual;
            s.residual = 0.0;
            s.alive = false;
            self.deaths.push(id);
            false
        }
    }
}

/// Executes `plan` against `states`, charging energy and recording deaths.
pub fn run_round(
    round: u64,
    states: &mut [NodeState],
    plan: &RoundPlan,
    params: &RadioParams,
    field: &Field,
    opts: &RoundOptions,
) -> Result<RoundReport> {
    if states.len() != field.len() {
        return Err(Error::Consistency(format!(
            "{} node states for a field of {} nodes",
            states.len(),
            field.len()
        )));
    }
    plan.validate(states)?;

    let data = params.data_bits;
    let mut ledger = Ledger {
        states,
        charged: 0.0,
        deaths: Vec::new(),
    };

    // an empty battery cannot even sense
    for s in ledger.states.iter_mut().filter(|s| s.alive && s.residual <= 0.0) {
        s.residual = 0.0;
        s.alive = false;
        ledger.deaths.push(s.id);
    }

    if opts.control_energy && plan.kind.is_clustered() {
        control_phase(&mut ledger, plan, params, field)?;
    }

    let n = field.len();
    let mut delivered = vec![false; n];
    let mut delivered_reports = 0usize;
    let mut inbox = vec![Vec::<NodeId>::new(); n];

    for _ in 0..opts.frames {
        for list in inbox.iter_mut() {
            list.clear();
        }
        for (&m, &h) in &plan.membership {
            if !ledger.alive(m) || !ledger.alive(h) {
                continue;
            }
            if ledger.spend(m, tx_cost(data, field.dist(m, h), params)?) {
                inbox[h.index()].push(m);
            }
        }
        for &h in &plan.heads {
            let mut ok = ledger.alive(h);
            for _ in 0..inbox[h.index()].len() {
                ok = ok && ledger.spend(h, rx_cost(data, params));
            }
            let received = inbox[h.index()].len();
            ok = ok && ledger.spend(h, aggregate_cost(data, received + 1, params));
            ok = ok && ledger.spend(h, tx_cost(data, field.dist_to_bs(h), params)?);
            if ok {
                for src in std::iter::once(h).chain(inbox[h.index()].iter().copied()) {
                    delivered[src.index()] = true;
                    delivered_reports += 1;
                }
            }
        }
        for &d in &plan.direct {
            if ledger.spend(d, tx_cost(data, field.dist_to_bs(d), params)?) {
                delivered[d.index()] = true;
                delivered_reports += 1;
            }
        }
        for (&src, route) in &plan.routes {
            if !ledger.alive(src) {
                continue;
            }
            let ok = if route.flood.is_empty() {
                relay_chain(&mut ledger, &route.path, params, field)?
            } else {
                flood(&mut ledger, src, route, plan, params, field)?
            };
            if ok {
                delivered[src.index()] = true;
                delivered_reports += 1;
            }
        }
    }

    let Ledger {
        states,
        charged,
        deaths,
    } = ledger;
    Ok(RoundReport {
        round,
        alive: states.iter().filter(|s| s.alive).count(),
        heads: plan.heads.len(),
        direct: plan.direct.len(),
        delivered_sources: delivered.iter().filter(|&&d| d).count(),
        delivered_reports,
        energy_charged: charged,
        deaths,
        total_residual: states.iter().map(|s| s.residual).sum(),
    })
}

/// Advertisement broadcast by every head over the field diagonal, heard by
/// every other alive node, followed by a join request from each member.
/// Centralized clustering adds a status report from every node to the base
/// station.
fn control_phase(ledger: &mut Ledger<'_>, plan: &RoundPlan, params: &RadioParams, field: &Field) -> Result<()> {
    let ctrl = params.ctrl_bits;
    if plan.kind == ProtocolKind::LeachC {
        let alive: Vec<NodeId> = ledger.states.iter().filter(|s| s.alive).map(|s| s.id).collect();
        for id in alive {
            ledger.spend(id, tx_cost(ctrl, field.dist_to_bs(id), params)?);
        }
    }
    let diagonal = field.width().hypot(field.height());
    for &h in &plan.heads {
        if !ledger.spend(h, tx_cost(ctrl, diagonal, params)?) {
            continue;
        }
        let listeners: Vec<NodeId> = ledger
            .states
            .iter()
            .filter(|s| s.alive && !plan.heads.contains(&s.id))
            .map(|s| s.id)
            .collect();
        for l in listeners {
            ledger.spend(l, rx_cost(ctrl, params));
        }
    }
    for (&m, &h) in &plan.membership {
        if ledger.alive(h) && ledger.spend(m, tx_cost(ctrl, field.dist(m, h), params)?) {
            ledger.spend(h, rx_cost(ctrl, params));
        }
    }
    Ok(())
}

fn relay_chain(ledger: &mut Ledger<'_>, path: &[Hop], params: &RadioParams, field: &Field) -> Result<bool> {
    let data = params.data_bits;
    for pair in path.windows(2) {
        let Hop::Node(from) = pair[0] else {
            return Err(Error::Consistency("route continues past the base station".into()));
        };
        match pair[1] {
            Hop::BaseStation => return Ok(ledger.spend(from, tx_cost(data, field.dist_to_bs(from), params)?)),
            Hop::Node(to) => {
                if !ledger.spend(from, tx_cost(data, field.dist(from, to), params)?) {
                    return Ok(false);
                }
                if !ledger.spend(to, rx_cost(data, params)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(false)
}

fn flood(
    ledger: &mut Ledger<'_>,
    src: NodeId,
    route: &crate::protocols::MeshRoute,
    plan: &RoundPlan,
    params: &RadioParams,
    field: &Field,
) -> Result<bool> {
    let data = params.data_bits;
    let broadcast = tx_cost(data, plan.radio_range, params)?;
    let rx = rx_cost(data, params);
    let mut has_copy = vec![false; field.len()];
    has_copy[src.index()] = true;
    for &f in &route.flood {
        if !has_copy[f.index()] || !ledger.spend(f, broadcast) {
            continue;
        }
        for &nb in &plan.neighbors[f.index()] {
            if ledger.spend(nb, rx) {
                has_copy[nb.index()] = true;
            }
        }
    }
    if !route.delivers() {
        return Ok(false);
    }
    let uplink = match route.path.iter().rev().nth(1) {
        Some(Hop::Node(u)) => *u,
        _ => return Err(Error::Consistency(format!("flood route of {src} has no uplink node"))),
    };
    Ok(has_copy[uplink.index()] && ledger.spend(uplink, tx_cost(data, field.dist_to_bs(uplink), params)?))
}

/// One run of one protocol, from deployment to the last round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub config: RunConfig,
    pub protocol: ProtocolKind,
    pub seed: u64,
    pub n_initial: usize,
    pub reports: Vec<RoundReport>,
    pub final_states: Vec<NodeState>,
}

/// Stepwise simulation. [`Simulation::step_with`] exposes each plan before
/// it is executed, which is how the invariant checks observe a run.
pub struct Simulation {
    config: RunConfig,
    kind: ProtocolKind,
    seed: u64,
    field: Field,
    states: Vec<NodeState>,
    rng: SimRng,
    ctx: PlanContext,
    opts: RoundOptions,
    reports: Vec<RoundReport>,
}

impl Simulation {
    pub fn new(config: &RunConfig, kind: ProtocolKind, seed: u64) -> Result<Self> {
        config.validate()?;
        let field = config.build_field(seed)?;
        let states = field.ids().map(|id| NodeState::new(id, config.radio.e_init)).collect();
        Ok(Self {
            ctx: PlanContext {
                leach: config.leach,
                radio_range: config.radio_range(),
            },
            opts: RoundOptions {
                frames: config.frames_per_round,
                control_energy: config.control_energy,
            },
            config: config.clone(),
            kind,
            seed,
            field,
            states,
            rng: election_rng(seed),
            reports: Vec::new(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn states(&self) -> &[NodeState] {
        &self.states
    }

    pub fn reports(&self) -> &[RoundReport] {
        &self.reports
    }

    pub fn is_finished(&self) -> bool {
        self.reports.len() as u64 >= self.config.max_rounds || self.states.iter().all(|s| !s.alive)
    }

    /// Plays one round. `inspect` sees the node states and the plan after
    /// election but before any energy is charged. Returns `None` once the
    /// run is over.
    pub fn step_with<F>(&mut self, mut inspect: F) -> Result<Option<&RoundReport>>
    where
        F: FnMut(&[NodeState], &Field, &RoundPlan),
    {
        if self.is_finished() {
            return Ok(None);
        }
        let round = self.reports.len() as u64;
        let plan = build_round_plan(
            self.kind,
            &mut self.states,
            &self.field,
            round,
            &self.ctx,
            &mut self.rng,
        )?;
        inspect(&self.states, &self.field, &plan);
        let report = run_round(
            round,
            &mut self.states,
            &plan,
            &self.config.radio,
            &self.field,
            &self.opts,
        )?;
        self.reports.push(report);
        Ok(self.reports.last())
    }

    pub fn step(&mut self) -> Result<Option<&RoundReport>> {
        self.step_with(|_, _, _| {})
    }

    pub fn run_to_end(mut self) -> Result<SimulationResult> {
        while self.step()?.is_some() {}
        Ok(self.finish())
    }

    pub fn finish(self) -> SimulationResult {
        SimulationResult {
            n_initial: self.field.len(),
            config: self.config,
            protocol: self.kind,
            seed: self.seed,
            reports: self.reports,
            final_states: self.states,
        }
    }
}

pub fn run_simulation(config: &RunConfig, kind: ProtocolKind, seed: u64) -> Result<SimulationResult> {
    Simulation::new(config, kind, seed)?.run_to_end()
}
