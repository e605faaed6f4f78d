//! Prices the basket call on the Halton nodes with a backward Euler start and
//! BDF2, then compares a few values with a coarse finite-difference solve.
//!
//! ```text
//! cargo run --release --example bdf2_pricing -- [bdf1|bdf2|bdf3]
//! ```

use shepard_collocation::experiment::nodal_values;
use shepard_collocation::geometry::halton_nodeset;
use shepard_collocation::timestep::{run, RunOptions};
use shepard_collocation::{assemble, fd_solve, MarketParams, Point2, Scheme, ShepardBasis, ShepardParams};

fn main() -> shepard_collocation::Result<()> {
    let scheme: Scheme = std::env::args().nth(1).as_deref().unwrap_or("bdf2").parse()?;
    let market = MarketParams::default();
    let basis = ShepardBasis::build(halton_nodeset(5000, 141)?, 2, 10, ShepardParams::default())?;
    let sys = assemble(&basis, &market);
    let opts = RunOptions {
        scheme,
        ..RunOptions::default()
    };
    let traj = run(&sys, basis.nodes(), &market, opts)?;
    println!(
        "{} steps of {} (dt = {}), {} factorizations, condition estimates {:?}",
        traj.steps(),
        scheme.as_str(),
        traj.dt,
        traj.factorizations,
        traj.conditions
    );

    let t = market.maturity;
    let full = nodal_values(basis.nodes(), &market, traj.final_state(), t);
    let fd = fd_solve(&market, 256, 160)?;
    println!("{:>12} {:>12} {:>12}", "(x, y)", "shepard", "fd");
    for (x, y) in [(0.5, 0.5), (1.0, 1.0), (1.5, 0.8), (2.0, 2.0), (3.0, 1.0)] {
        let p = Point2::new(x, y);
        println!(
            "{:>12} {:12.6} {:12.6}",
            format!("({x}, {y})"),
            basis.interpolate(&full, p),
            fd.interpolate(p, t)?
        );
    }
    Ok(())
}
