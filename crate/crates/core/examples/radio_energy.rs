//! Transmit, receive and aggregation costs of the first-order radio model.

use leachsim::energy::{aggregate_cost, rx_cost, tx_cost};
use leachsim::RadioParams;

fn main() -> leachsim::Result<()> {
    let p = RadioParams::default();
    let bits = p.data_bits;
    println!("crossover distance d0 = {:.2} m", p.crossover());
    println!("{:>8} {:>14} {:>10}", "d [m]", "tx [J]", "amp share");
    for d in [0.0, 10.0, 25.0, 50.0, 75.0, p.crossover(), 100.0, 150.0] {
        let tx = tx_cost(bits, d, &p)?;
        let elec = p.e_elec * bits as f64;
        println!("{d:>8.2} {tx:>14.6e} {:>9.1}%", 100.0 * (tx - elec) / tx);
    }
    println!("rx of one packet:           {:.6e} J", rx_cost(bits, &p));
    println!("aggregating 20 signals:     {:.6e} J", aggregate_cost(bits, 20, &p));
    println!("control packet to 87.7 m:   {:.6e} J", tx_cost(p.ctrl_bits, 87.7, &p)?);
    Ok(())
}
