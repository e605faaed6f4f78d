//! The four node configurations used in the experiments, with their sizes,
//! separation and covering surplus.

use shepard_collocation::covering::build_covering;
use shepard_collocation::NodeConfig;

fn main() -> shepard_collocation::Result<()> {
    for kind in NodeConfig::standard_kinds() {
        let (nodes, cells) = kind.build()?;
        let cov = build_covering(&nodes, 2, kind.default_q())?;
        println!(
            "{:14} interior {:5} far-field {:4} min sep {:.3e} q {:2} escalations {}{}",
            kind.name(),
            nodes.n_interior(),
            nodes.n_far_field(),
            nodes.min_separation(),
            kind.default_q(),
            cov.escalations(),
            cells.map(|c| format!(" cells {}", c.as_str())).unwrap_or_default()
        );
    }
    Ok(())
}

