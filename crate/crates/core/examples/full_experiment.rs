//! A complete configuration-driven run: Shepard solve, multiquadric
//! baseline, finite-difference reference and the error tables.
//!
//! ```text
//! cargo run --release --example full_experiment -- [config.toml] [out-dir]
//! ```
//!
//! Without a config the Halton setup runs with a lighter reference grid.

use std::path::PathBuf;

use shepard_collocation::{run_experiment, ExperimentConfig};

fn main() -> shepard_collocation::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut cfg = match args.next() {
        Some(path) => ExperimentConfig::from_file(path.as_ref())?,
        None => ExperimentConfig::from_toml("[reference]\nn = 256\nsteps = 160\n")?,
    };
    if let Some(dir) = args.next() {
        cfg.output.dir = PathBuf::from(dir);
    }
    let report = run_experiment(&cfg)?;
    print!("{}", report.error_table());
    print!("{}", report.summary());
    println!("tables written to {}", cfg.output.dir.display());
    Ok(())
}
