//! Multinode Shepard interpolation of scattered data: partition of unity,
//! cardinality at the nodes, and error on a smooth function.

use shepard_collocation::geometry::halton_nodeset;
use shepard_collocation::{Point2, ShepardBasis, ShepardParams};

fn main() -> shepard_collocation::Result<()> {
    let nodes = halton_nodeset(2000, 61)?;
    let basis = ShepardBasis::build(nodes, 2, 10, ShepardParams::default())?;
    let nodes = basis.nodes();

    let f = |p: Point2| (0.5 * p.x).sin() * (0.3 * p.y).cos() + 0.1 * p.x * p.y;
    let data: Vec<f64> = nodes.points().iter().map(|&p| f(p)).collect();

    let mut worst: f64 = 0.0;
    let mut pou: f64 = 0.0;
    for i in 0..40 {
        for j in 0..40 - i {
            let x = Point2::new(0.2 * i as f64 + 0.05, 0.2 * j as f64 + 0.05);
            if !x.in_domain() {
                continue;
            }
            worst = worst.max((basis.interpolate(&data, x) - f(x)).abs());
            pou = pou.max((basis.eval_row(x).sum().v - 1.0).abs());
        }
    }
    println!("max interpolation error {worst:.3e}");
    println!("max |sum W_i - 1| {pou:.3e}");

    let k = 100;
    let row = basis.eval_row(nodes.point(k));
    let off: f64 = row.entries.iter().filter(|e| e.0 != k).map(|e| e.1.v.abs()).fold(0.0, f64::max);
    println!("W_{k}(x_{k}) = {:.15}, largest other W_i(x_{k}) = {off:.1e}", row.get(k).v);
    Ok(())
}
