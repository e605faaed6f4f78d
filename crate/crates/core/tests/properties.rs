use std::sync::OnceLock;

use proptest::prelude::*;
use shepard_collocation::geometry::halton_nodeset;
use shepard_collocation::{evaluation_grid, ExperimentConfig, Point2, ShepardBasis, ShepardParams};

fn basis() -> &'static ShepardBasis {
    static CELL: OnceLock<ShepardBasis> = OnceLock::new();
    CELL.get_or_init(|| {
        ShepardBasis::build(halton_nodeset(500, 31).unwrap(), 2, 10, ShepardParams::default()).unwrap()
    })
}

fn domain_point() -> impl Strategy<Value = Point2> {
    (0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b)| {
        // fold the square onto the triangle
        let (a, b) = if a + b >= 1.0 { (1.0 - a, 1.0 - b) } else { (a, b) };
        Point2::new(7.999 * a, 7.999 * b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn cardinal_functions_sum_to_one(x in domain_point()) {
        let s = basis().eval_row(x).sum();
        prop_assert!((s.v - 1.0).abs() < 1e-10);
        prop_assert!(s.g.iter().all(|g| g.abs() < 1e-7));
    }

    #[test]
    fn affine_data_is_reproduced(x in domain_point(), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let data: Vec<f64> = basis().nodes().points().iter().map(|p| 1.0 + a * p.x + b * p.y).collect();
        let got = basis().eval_row(x).apply(&data);
        prop_assert!((got.v - (1.0 + a * x.x + b * x.y)).abs() < 1e-9);
        prop_assert!((got.g[0] - a).abs() < 1e-7 && (got.g[1] - b).abs() < 1e-7);
    }

    #[test]
    fn evaluation_grid_stays_inside(res in 2usize..80) {
        let grid = evaluation_grid(res);
        prop_assert_eq!(grid.len(), res * (res + 1) / 2);
        prop_assert!(grid.iter().all(|p| p.x >= 0.0 && p.y >= 0.0 && p.x + p.y < 8.0));
    }

    #[test]
    fn config_round_trips(steps in 2usize..50, mult in 1usize..8, res in 2usize..100, mu in 2u32..5) {
        let text = format!(
            "[time]\nsteps = {steps}\n[reference]\nn = 64\nsteps = {}\n[evaluation]\nresolution = {res}\n[shepard]\nmu = {}\n",
            steps * mult,
            2 * mu
        );
        let cfg = ExperimentConfig::from_toml(&text).unwrap();
        let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        prop_assert_eq!(back.to_toml(), cfg.to_toml());
        prop_assert_eq!(back.time.steps, steps);
    }
}
