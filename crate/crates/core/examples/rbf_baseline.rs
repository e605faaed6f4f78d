//! Global multiquadric collocation on the graded 370 + 20 node set, priced
//! with the same time stepper as the Shepard method.

use shepard_collocation::experiment::nodal_values;
use shepard_collocation::rbf::{rbf_assemble, rbf_nodeset_fig1};
use shepard_collocation::timestep::{run, RunOptions};
use shepard_collocation::{fd_solve, MarketParams, Point2};

fn main() -> shepard_collocation::Result<()> {
    let market = MarketParams::default();
    let nodes = rbf_nodeset_fig1();
    println!("{} interior, {} far-field", nodes.n_interior(), nodes.n_far_field());
    let model = rbf_assemble(nodes, None, &market)?;
    println!("shape {:.4}, interpolation matrix condition {:.3e}", model.shape(), model.condition);

    let traj = run(&model.system, model.nodes(), &market, RunOptions::default())?;
    let full = nodal_values(model.nodes(), &market, traj.final_state(), market.maturity);
    let fd = fd_solve(&market, 256, 160)?;
    for (x, y) in [(1.0, 1.0), (2.0, 0.5), (3.0, 2.0)] {
        let p = Point2::new(x, y);
        println!(
            "P({x}, {y}) rbf {:.6} fd {:.6}",
            model.interpolate(&full, p),
            fd.interpolate(p, market.maturity)?
        );
    }
    Ok(())
}
