//! Seed sweep over several protocols, written to disk and summarized.
//! Pass an output directory as the first argument (default `out/example`).

use leachsim::config::parse_config;
use leachsim::experiment::{format_summary, run_experiment};

fn main() -> leachsim::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "out/example".into());
    let cfg = parse_config(
        None,
        &[
            (
                "protocols".into(),
                r#"["direct","leach","leach_c","leach_modified","mesh_flood"]"#.into(),
            ),
            ("seeds".into(), "[0,1,2,3,4]".into()),
            ("out_dir".into(), serde_json::to_string(&out).unwrap()),
        ],
    )?;
    let res = run_experiment(&cfg)?;
    if let Some(c) = &res.comparison {
        print!("{}", format_summary(c));
    }
    println!("\n{} files under {out}", res.files.len());
    Ok(())
}
