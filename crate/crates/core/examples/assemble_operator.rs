//! Collocates the two-asset Black-Scholes operator on the cardinal basis and
//! checks it on quadratics, where the collocation is exact.

use shepard_collocation::geometry::halton_nodeset;
use shepard_collocation::{assemble, MarketParams, Point2, ShepardBasis, ShepardParams};

fn main() -> shepard_collocation::Result<()> {
    let market = MarketParams::default();
    let nodes = halton_nodeset(2000, 61)?;
    let basis = ShepardBasis::build(nodes, 2, 10, ShepardParams::default())?;
    let sys = assemble(&basis, &market);
    let nodes = basis.nodes();

    let s = sys.sparsity();
    println!(
        "A is {0}x{0} with {1} nonzeros ({2:.2}%), B is {0}x{3} with {4}",
        s.n_interior,
        s.nnz_a,
        100.0 * s.density_a(),
        s.n_far_field,
        s.nnz_b
    );
    println!("widest row {} entries, bandwidth {}", s.max_row_support, s.bandwidth_a);

    let g = |p: Point2| 0.3 + p.x - 0.5 * p.y + p.x * p.x - 0.7 * p.x * p.y + 2.0 * p.y * p.y;
    let lg = |p: Point2| {
        let (x, y) = (p.x, p.y);
        let (gx, gy) = (1.0 + 2.0 * x - 0.7 * y, -0.5 - 0.7 * x + 4.0 * y);
        market.r * (x * gx + y * gy)
            + 0.5 * (market.sigma1.powi(2) * x * x * 2.0 + market.sigma2.powi(2) * y * y * 4.0)
            + market.rho * market.sigma1 * market.sigma2 * x * y * -0.7
            - market.r * g(p)
    };
    let interior: Vec<f64> = nodes.interior().iter().map(|&p| g(p)).collect();
    let far: Vec<f64> = nodes.far_field().iter().map(|&p| g(p)).collect();
    let applied = sys.apply(&interior, &far);
    let origin = g(Point2::ORIGIN);
    let worst = nodes
        .interior()
        .iter()
        .enumerate()
        .map(|(k, &p)| (applied[k] + sys.origin_column[k] * origin - lg(p)).abs())
        .fold(0.0, f64::max);
    println!("max |A g + B g - L g| over interior rows: {worst:.2e}");
    Ok(())
}
