//! Temporal order of the time stepper on the composite node configuration,
//! whose semi-discrete system stays bounded under refinement.

use shepard_collocation::timestep::{run, RunOptions};
use shepard_collocation::{assemble, MarketParams, NodeConfig, Scheme, ShepardBasis, ShepardParams};

#[test]
fn bdf_orders_on_composite_nodes() {
    let market = MarketParams::default();
    let kind = NodeConfig::standard_kinds().remove(2);
    let (nodes, _) = kind.build().unwrap();
    let basis = ShepardBasis::build(nodes, 2, kind.default_q(), ShepardParams::default()).unwrap();
    let sys = assemble(&basis, &market);
    for (scheme, order) in [(Scheme::Bdf2, 2.0), (Scheme::Bdf1, 1.0)] {
        let solve = |steps| {
            let opts = RunOptions {
                steps,
                scheme,
                ..RunOptions::default()
            };
            run(&sys, basis.nodes(), &market, opts).unwrap().final_state().to_vec()
        };
        let fine = solve(320);
        let errs: Vec<f64> = [20, 40, 80]
            .iter()
            .map(|&m| solve(m).iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .collect();
        for w in errs.windows(2) {
            let slope = (w[0] / w[1]).log2();
            assert!((slope - order).abs() < 0.3, "{} slope {slope} from {errs:?}", scheme.as_str());
        }
    }
}
