//! One full simulation, stepping round by round and printing milestones.

use leachsim::metrics::lifetime_summary;
use leachsim::{ProtocolKind, RunConfig, Simulation};

fn main() -> leachsim::Result<()> {
    let kind: ProtocolKind = std::env::args().nth(1).as_deref().unwrap_or("leach_modified").parse()?;
    let cfg = RunConfig::default();
    let mut sim = Simulation::new(&cfg, kind, 0)?;
    let n = sim.states().len();
    let mut last_alive = n;
    while let Some(rep) = sim.step()? {
        if rep.alive != last_alive && (rep.alive == n - 1 || rep.alive == n / 2 || rep.alive == 0) {
            println!(
                "round {:>5}: {:>3} alive, {} heads, {:.3} J left",
                rep.round, rep.alive, rep.heads, rep.total_residual
            );
        }
        last_alive = rep.alive;
    }
    let res = sim.finish();
    let l = lifetime_summary(&res);
    println!("{kind}: FND {} HND {} LND {}", l.fnd, l.hnd, l.lnd);
    match l.energy_per_delivered_bit {
        Some(e) => println!("{} reports delivered, {e:.4e} J per delivered bit", l.total_delivered),
        None => println!("nothing delivered"),
    }
    Ok(())
}
