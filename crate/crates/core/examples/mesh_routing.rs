//! Greedy geographic forwarding and flooding on a grid with the station
//! off one corner.

use leachsim::field::{deploy_grid, Position};
use leachsim::protocols::{build_mesh_routes, Hop, MeshMode};
use leachsim::{NodeId, NodeState};

fn main() -> leachsim::Result<()> {
    let field = deploy_grid(5, 5, 10.0)?.with_bs(Position::new(-10.0, -10.0))?;
    let states: Vec<NodeState> = field.ids().map(|id| NodeState::new(id, 0.5)).collect();
    let range = 15.0;

    let greedy = build_mesh_routes(&states, &field, MeshMode::Greedy, range)?;
    println!("greedy, range {range} m:");
    for src in [24, 20, 4, 12] {
        let r = &greedy.routes[&NodeId(src)];
        let hops: Vec<String> = r
            .path
            .iter()
            .map(|h| match h {
                Hop::Node(n) => n.to_string(),
                Hop::BaseStation => "BS".into(),
            })
            .collect();
        println!(
            "  n{src}: {} ({})",
            hops.join(" -> "),
            if r.delivers() { "delivered" } else { "stuck" }
        );
    }

    let flood = build_mesh_routes(&states, &field, MeshMode::Flood, range)?;
    let r = &flood.routes[&NodeId(24)];
    println!(
        "flood from n24: {} relays, delivers = {}",
        r.relays().count(),
        r.delivers()
    );
    let nb: Vec<String> = flood.neighbors[12].iter().map(NodeId::to_string).collect();
    println!("neighbors of n12: {}", nb.join(" "));
    Ok(())
}
