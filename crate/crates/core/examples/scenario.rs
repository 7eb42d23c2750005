//! Loads a scenario file and prints its report.

use involab::scenario::{RunOptions, Scenario};

fn main() -> involab::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/diagonal_one_t.toml").to_string());
    let report = Scenario::from_path(&path)?.run(RunOptions::default())?;
    println!("{}", report.to_json());
    Ok(())
}
