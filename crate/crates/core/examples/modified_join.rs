//! Plain nearest-head joining versus the station-ward rule on a small
//! hand-placed field.

use leachsim::field::{Field, NodeId, Position};
use leachsim::protocols::{assign_modified, assign_nearest};

fn main() -> leachsim::Result<()> {
    let pts = [
        (50.0, 80.0),
        (50.0, 20.0),
        (50.0, 35.0),
        (62.0, 28.0),
        (50.0, 70.0),
        (10.0, 95.0),
    ];
    let field = Field::new(
        pts.iter().map(|&(x, y)| Position::new(x, y)).collect(),
        Position::new(50.0, 100.0),
        100.0,
        100.0,
    )?;
    let heads = [NodeId(0), NodeId(1)];
    let members: Vec<NodeId> = (2..pts.len()).map(NodeId).collect();

    println!(
        "heads: n0 ({:.0} m from the station), n1 ({:.0} m)",
        field.dist_to_bs(NodeId(0)),
        field.dist_to_bs(NodeId(1))
    );
    let plain = assign_nearest(&members, &heads, &field)?;
    let (modified, direct) = assign_modified(&members, &heads, &field);
    println!("{:>6} {:>10} {:>8} {:>10}", "member", "to station", "leach", "modified");
    for m in &members {
        let after = match modified.get(m) {
            Some(h) => h.to_string(),
            None if direct.contains(m) => "direct".into(),
            None => "?".into(),
        };
        let mark = if field.dist_to_bs(plain[m]) > field.dist_to_bs(*m) {
            " (moves away)"
        } else {
            ""
        };
        println!(
            "{m:>6} {:>9.1}m {:>8} {after:>10}{mark}",
            field.dist_to_bs(*m),
            plain[m]
        );
    }
    Ok(())
}
