//! Centralized election: only nodes at or above the average residual may
//! lead, and the heads minimize the summed squared member distance.

use leachsim::field::deploy_uniform;
use leachsim::protocols::{clustering_cost, elect_heads_leach_c, eligible_heads};
use leachsim::{LeachConfig, NodeState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> leachsim::Result<()> {
    let field = deploy_uniform(100, 100.0, 100.0, 8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let states: Vec<NodeState> = field
        .ids()
        .map(|id| {
            let mut s = NodeState::new(id, 0.5);
            s.residual = rng.gen_range(0.1..0.5);
            s
        })
        .collect();
    let avg = states.iter().map(|s| s.residual).sum::<f64>() / states.len() as f64;
    let eligible = eligible_heads(&states);
    let k = LeachConfig::default().leach_c_k(states.len());
    println!(
        "average residual {avg:.4} J, {} of {} nodes eligible, k = {k}",
        eligible.len(),
        states.len()
    );

    let heads = elect_heads_leach_c(&states, &field, k)?;
    let hv: Vec<_> = heads.iter().copied().collect();
    for h in &hv {
        let p = field.position(*h);
        println!(
            "  head {h}: ({:5.1}, {:5.1}) residual {:.4} J",
            p.x, p.y, states[h.0].residual
        );
    }
    println!("clustering cost {:.1} m^2", clustering_cost(&states, &field, &hv));
    let naive: Vec<_> = eligible.iter().copied().take(k).collect();
    println!(
        "first {k} eligible ids instead: {:.1} m^2",
        clustering_cost(&states, &field, &naive)
    );
    Ok(())
}
