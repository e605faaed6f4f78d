//! Leja selection of unisolvent quadratic subsets, and what happens when a
//! neighbourhood is nearly collinear.

use shepard_collocation::covering::{build_covering, leja_select, nearest_neighbors};
use shepard_collocation::geometry::{far_field_line, halton_nodeset};
use shepard_collocation::{Error, NodeSet, Point2};

fn main() -> shepard_collocation::Result<()> {
    let nodes = halton_nodeset(800, 41)?;
    let cov = build_covering(&nodes, 2, 10)?;
    println!("{} nodes, {} subsets of {} points", nodes.len(), cov.len(), cov.tau);

    let anchor = 42;
    let cands = nearest_neighbors(&nodes, anchor, cov.tau + cov.q)?;
    println!("anchor {anchor} candidates {cands:?}");
    println!("selected {:?}", cov.subsets[anchor]);
    println!("J_{anchor} = {:?}", cov.reverse[anchor]);

    // a long, tightly packed row: its 16 nearest points all sit on one line
    let mut pts: Vec<Point2> = (0..31)
        .map(|k| Point2::new(2.0 + 0.01 * k as f64, 3.0 + 1e-13 * (k % 2) as f64))
        .collect();
    for i in 0..5 {
        for j in 0..5 {
            pts.push(Point2::new(1.0 + 0.5 * i as f64, 1.0 + 0.45 * j as f64));
        }
    }
    pts.extend(far_field_line(9));
    let line = NodeSet::from_points(pts)?;
    let centre = 15;
    let cands = nearest_neighbors(&line, centre, 16)?;
    match leja_select(&line, &cands, centre, 2) {
        Err(e @ Error::DegenerateNeighborhood { .. }) => println!("q = 10: {e}"),
        other => println!("unexpected: {other:?}"),
    }
    let cov = build_covering(&line, 2, 10)?;
    println!(
        "with escalation: node {centre} used q = {}, subset {:?}, {} escalated anchors",
        cov.q_used[centre],
        cov.subsets[centre],
        cov.escalations()
    );
    Ok(())
}
