//! Round-based simulator for cluster-based data collection in wireless
//! sensor networks.
//!
//! Nodes are scattered over a field and report to a base station once per
//! round. Protocols decide how reports travel: straight to the station,
//! through elected cluster heads (LEACH and its variants, including the
//! closer-to-station join rule), or hop by hop across a mesh. The engine
//! charges a first-order radio energy model for every transmission and
//! records deaths and deliveries; [`metrics`] turns runs into lifetime,
//! energy and reliability figures.
//!
//! ```
//! use leachsim::{run_simulation, ProtocolKind, RunConfig};
//!
//! let cfg = RunConfig { max_rounds: 50, ..Default::default() };
//! let res = run_simulation(&cfg, ProtocolKind::LeachModified, 7).unwrap();
//! assert_eq!(res.reports.len(), 50);
//! ```

pub mod config;
pub mod energy;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod field;
pub mod metrics;
pub mod protocols;
pub mod rng;

pub use energy::RadioParams;
pub use engine::{
    run_round, run_simulation, Deployment, NodeState, RoundReport, RunConfig, Simulation, SimulationResult,
};
pub use error::{Error, Result};
pub use field::{Field, NodeId, Position};
pub use protocols::{LeachConfig, ProtocolKind, RoundPlan};
