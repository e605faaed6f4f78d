//! Quadratic Lagrange interpolation on a six-point subset, with analytic
//! gradients and Hessians of the fundamental polynomials.

use shepard_collocation::poly::{LocalInterpolant, MonomialBasis};
use shepard_collocation::Point2;

fn main() -> shepard_collocation::Result<()> {
    let points = vec![
        Point2::new(1.0, 1.0),
        Point2::new(1.4, 1.1),
        Point2::new(0.9, 1.5),
        Point2::new(1.3, 1.6),
        Point2::new(0.6, 0.8),
        Point2::new(1.7, 0.7),
    ];
    let basis = MonomialBasis::new(points[0], 1.1, 2);
    let li = LocalInterpolant::new(0, (0..6).collect(), &points, basis)?;
    println!("Kronecker residual {:.2e}", li.kronecker_residual(&points));

    let f = |p: Point2| 1.0 - 2.0 * p.x + 0.5 * p.y + p.x * p.x - 3.0 * p.x * p.y + 0.25 * p.y * p.y;
    let data: Vec<f64> = points.iter().map(|&p| f(p)).collect();
    let x = Point2::new(1.12, 1.21);
    println!("p(x) = {:.15}  f(x) = {:.15}", li.interpolate(&data, x), f(x));

    // derivatives of the interpolant are sums of the Lagrange jets
    let jets = li.jets(x);
    let grad: [f64; 2] = [0, 1].map(|d| jets.iter().zip(&data).map(|(j, v)| j.g[d] * v).sum());
    let hess: [f64; 3] = [0, 1, 2].map(|d| jets.iter().zip(&data).map(|(j, v)| j.h[d] * v).sum());
    println!("grad {grad:?} (exact [{:.4}, {:.4}])", -2.0 + 2.0 * x.x - 3.0 * x.y, 0.5 - 3.0 * x.x + 0.5 * x.y);
    println!("hess {hess:?} (exact [2, -3, 0.5])");
    Ok(())
}
