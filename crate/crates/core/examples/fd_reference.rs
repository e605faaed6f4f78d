//! The finite-difference reference on a uniform grid over the square, and
//! its spatial self-convergence.

use std::time::Instant;

use shepard_collocation::{fd_solve, MarketParams, Point2};

fn main() -> shepard_collocation::Result<()> {
    let market = MarketParams::default();
    let probes = [Point2::new(1.0, 1.0), Point2::new(1.5, 0.5), Point2::new(2.5, 1.5)];
    let mut prev: Option<Vec<f64>> = None;
    for n in [64, 128, 256] {
        let start = Instant::now();
        let r = fd_solve(&market, n, 2 * n)?;
        let v: Vec<f64> = probes
            .iter()
            .map(|&p| r.interpolate(p, market.maturity))
            .collect::<Result<_, _>>()?;
        print!("N = {n:4} h = {:.4} ({:.2}s, {} solver iterations):", r.h(), start.elapsed().as_secs_f64(), r.iterations);
        for x in &v {
            print!(" {x:.8}");
        }
        if let Some(p) = &prev {
            let d = v.iter().zip(p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            print!("  change {d:.2e}");
        }
        println!();
        prev = Some(v);
    }
    Ok(())
}
