//! Seeded uniform deployment and a regular grid, with the default station.

use leachsim::field::{deploy_grid, deploy_uniform};

fn main() -> leachsim::Result<()> {
    let field = deploy_uniform(100, 100.0, 100.0, 42)?;
    let bs = field.bs();
    println!(
        "uniform: {} nodes on {}x{}, station at ({}, {})",
        field.len(),
        field.width(),
        field.height(),
        bs.x,
        bs.y
    );
    for id in field.ids().take(5) {
        let p = field.position(id);
        println!(
            "  {id}: ({:6.2}, {:6.2})  {:6.2} m from the station",
            p.x,
            p.y,
            field.dist_to_bs(id)
        );
    }
    let (near, far) = field.ids().fold((f64::INFINITY, 0.0f64), |(lo, hi), id| {
        let d = field.dist_to_bs(id);
        (lo.min(d), hi.max(d))
    });
    println!("  station distance range {near:.1}..{far:.1} m");

    let again = deploy_uniform(100, 100.0, 100.0, 42)?;
    assert_eq!(field.positions(), again.positions());
    println!("same seed, same layout");

    let grid = deploy_grid(4, 3, 10.0)?;
    println!("\ngrid 4x3, spacing 10:");
    for row in (0..3).rev() {
        let line: Vec<String> = (0..4)
            .map(|col| format!("{:>4}", grid.ids().nth(row * 4 + col).unwrap().to_string()))
            .collect();
        println!("  {}", line.join(""));
    }
    Ok(())
}
