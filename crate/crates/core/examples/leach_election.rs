//! Distributed head election: the per-round threshold and a few epochs of
//! rotation on a 100-node field.

use leachsim::field::deploy_uniform;
use leachsim::protocols::{elect_heads_leach, leach_threshold};
use leachsim::rng::election_rng;
use leachsim::{LeachConfig, NodeId, NodeState, ProtocolKind};

fn main() -> leachsim::Result<()> {
    let cfg = LeachConfig::default();
    let fresh = NodeState::new(NodeId(0), 0.5);
    println!("threshold for a node that has not led this epoch (p = {}):", cfg.p);
    for r in [0, 5, 10, 15, 18, 19] {
        println!(
            "  round {r:>2}: {:.4}",
            leach_threshold(&fresh, r, &cfg, ProtocolKind::Leach)?
        );
    }

    let field = deploy_uniform(100, 100.0, 100.0, 3)?;
    let mut states: Vec<NodeState> = field.ids().map(|id| NodeState::new(id, 0.5)).collect();
    let mut rng = election_rng(3);
    let epoch = cfg.epoch_len();
    for e in 0..3 {
        let mut sizes = Vec::new();
        let mut led = 0;
        for r in e * epoch..(e + 1) * epoch {
            let heads = elect_heads_leach(&mut states, r, &cfg, ProtocolKind::Leach, &mut rng)?;
            led += heads.len();
            sizes.push(heads.len());
        }
        println!("epoch {e}: heads per round {sizes:?}, {led} nodes led once each");
    }
    Ok(())
}
