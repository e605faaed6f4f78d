//! Builds the Halton node set on the pricing triangle and prints its layout.
//!
//! ```text
//! cargo run --release --example halton_nodes -- [total] [boundary]
//! ```

use shepard_collocation::geometry::{halton_nodeset, radical_inverse};
use shepard_collocation::NodeRole;

fn main() -> shepard_collocation::Result<()> {
    let mut args = std::env::args().skip(1);
    let total: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(5000);
    let boundary: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(141);

    println!("first Halton abscissae (base 2):");
    for i in 1..=8 {
        print!(" {:.4}", radical_inverse(i, 2));
    }
    println!();

    let nodes = halton_nodeset(total, boundary)?;
    println!(
        "{total} points in the square -> {} interior, origin at index {}, {} far-field",
        nodes.n_interior(),
        nodes.origin_index(),
        nodes.n_far_field()
    );
    println!("minimum separation {:.4e}", nodes.min_separation());

    for i in [0, nodes.origin_index(), nodes.len() - 1] {
        let p = nodes.point(i);
        let role = nodes.role(i);
        println!("node {i:5} ({:.4}, {:.4}) {}", p.x, p.y, role.as_str());
        debug_assert!(role != NodeRole::FarField || (p.x + p.y - 8.0).abs() < 1e-12);
    }
    Ok(())
}
