//! Covering of the node set by unisolvent `τ`-point subsets.
//!
//! Each node anchors one subset: its `τ + q` nearest neighbours are the
//! candidates, and greedy Leja selection (Gaussian elimination with row
//! pivoting on the candidate Vandermonde matrix) picks `τ` of them, with the
//! anchor forced first.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{NodeSet, Point2};
use crate::poly::{poly_dim, LocalInterpolant, MonomialBasis};

/// Pivots smaller than this, relative to the first one, mark the candidate
/// set as degenerate.
pub const PIVOT_TOL: f64 = 1e-10;
/// Increment applied to `q` when a neighbourhood is degenerate.
pub const Q_STEP: usize = 10;
/// Largest `q` tried before giving up.
pub const Q_MAX: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct Covering {
    /// `subsets[j]` is `t_j`; its first entry is the anchor node `j`.
    pub subsets: Vec<Vec<usize>>,
    /// Scale `ρ` of the shifted/scaled basis of each subset.
    pub scales: Vec<f64>,
    /// `reverse[i]` is `J_i`, the subsets containing node `i`, ascending.
    pub reverse: Vec<Vec<usize>>,
    /// Surplus actually used for each subset after escalation.
    pub q_used: Vec<usize>,
    pub tau: usize,
    pub p: usize,
    pub q: usize,
}

impl Covering {
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn anchor(&self, j: usize) -> usize {
        self.subsets[j][0]
    }

    /// Shifted/scaled monomial basis of subset `j`, centred at its anchor.
    pub fn basis(&self, nodes: &NodeSet, j: usize) -> MonomialBasis {
        MonomialBasis::new(nodes.point(self.anchor(j)), self.scales[j], self.p)
    }

    /// Number of subsets that needed a larger `q` than requested.
    pub fn escalations(&self) -> usize {
        self.q_used.iter().filter(|&&q| q > self.q).count()
    }

    /// Plain-text table, one `j : i_1 … i_τ` line per subset.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for (j, t) in self.subsets.iter().enumerate() {
            let _ = write!(out, "{j} :");
            for i in t {
                let _ = write!(out, " {i}");
            }
            out.push('\n');
        }
        out
    }
}

/// The `k` nodes closest to `anchor` (itself included), sorted by distance,
/// ties broken by the smaller index.
pub fn nearest_neighbors(nodes: &NodeSet, anchor: usize, k: usize) -> Result<Vec<usize>> {
    if k > nodes.len() {
        return Err(Error::InsufficientNodes {
            requested: k,
            available: nodes.len(),
        });
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let a = nodes.point(anchor);
    let mut keyed: Vec<(f64, usize)> = nodes
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| (if i == anchor { -1.0 } else { p.dist_sq(&a) }, i))
        .collect();
    let cmp = |x: &(f64, usize), y: &(f64, usize)| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1));
    if k < keyed.len() {
        keyed.select_nth_unstable_by(k - 1, cmp);
        keyed.truncate(k);
    }
    keyed.sort_unstable_by(cmp);
    Ok(keyed.into_iter().map(|(_, i)| i).collect())
}

/// Largest distance from `anchor` to any candidate.
pub fn candidate_radius(points: &[Point2], candidates: &[usize], anchor: usize) -> f64 {
    let a = points[anchor];
    candidates
        .iter()
        .map(|&i| points[i].dist(&a))
        .fold(0.0, f64::max)
}

/// Greedy Leja selection of `τ = (p+1)(p+2)/2` points among `candidates`.
///
/// The anchor is taken first; every further point maximises the magnitude of
/// the next pivot of a row-pivoted elimination of the Vandermonde matrix in
/// the anchor-centred basis scaled by the candidate radius.
pub fn leja_select(
    nodes: &NodeSet,
    candidates: &[usize],
    anchor: usize,
    p: usize,
) -> Result<Vec<usize>> {
    let tau = poly_dim(p);
    let degenerate = Error::DegenerateNeighborhood { anchor };
    let Some(anchor_pos) = candidates.iter().position(|&c| c == anchor) else {
        return Err(Error::invalid("covering", "anchor is not among the candidates"));
    };
    if candidates.len() < tau {
        return Err(degenerate);
    }
    let points = nodes.points();
    let radius = candidate_radius(points, candidates, anchor);
    if radius <= 0.0 {
        return Err(degenerate);
    }
    let basis = MonomialBasis::new(points[anchor], radius, p);

    let mut order: Vec<usize> = candidates.to_vec();
    order.swap(0, anchor_pos);
    let rows = order.len();
    let mut v = vec![0.0; rows * tau];
    for (r, &i) in order.iter().enumerate() {
        basis.values_into(points[i], &mut v[r * tau..(r + 1) * tau]);
    }

    let mut first_pivot = 0.0;
    for col in 0..tau {
        let pivot_row = if col == 0 {
            0
        } else {
            (col..rows)
                .max_by(|&a, &b| {
                    v[a * tau + col]
                        .abs()
                        .total_cmp(&v[b * tau + col].abs())
                        .then(b.cmp(&a))
                })
                .unwrap()
        };
        let pivot = v[pivot_row * tau + col];
        if col == 0 {
            first_pivot = pivot.abs();
        }
        if !(pivot.abs() >= PIVOT_TOL * first_pivot) || pivot == 0.0 {
            return Err(degenerate);
        }
        if pivot_row != col {
            for c in 0..tau {
                v.swap(col * tau + c, pivot_row * tau + c);
            }
            order.swap(col, pivot_row);
        }
        for r in col + 1..rows {
            let f = v[r * tau + col] / pivot;
            if f != 0.0 {
                for c in col..tau {
                    v[r * tau + c] -= f * v[col * tau + c];
                }
            }
        }
    }
    order.truncate(tau);
    Ok(order)
}

fn select_for_anchor(nodes: &NodeSet, anchor: usize, p: usize, q: usize) -> Result<(Vec<usize>, f64, usize)> {
    let tau = poly_dim(p);
    let mut q_cur = q;
    loop {
        let k = (tau + q_cur).min(nodes.len());
        let candidates = nearest_neighbors(nodes, anchor, k)?;
        let attempt = leja_select(nodes, &candidates, anchor, p).and_then(|subset| {
            let scale = candidate_radius(nodes.points(), &candidates, anchor);
            let basis = MonomialBasis::new(nodes.point(anchor), scale, p);
            LocalInterpolant::new(anchor, subset.clone(), nodes.points(), basis)
                .map(|_| (subset, scale))
                .map_err(|_| Error::DegenerateNeighborhood { anchor })
        });
        match attempt {
            Ok((subset, scale)) => return Ok((subset, scale, q_cur)),
            Err(Error::DegenerateNeighborhood { .. })
                if q_cur + Q_STEP <= Q_MAX && k < nodes.len() =>
            {
                q_cur += Q_STEP;
            }
            Err(e) => return Err(e),
        }
    }
}

/// One subset per node, each selected among the `τ + q` nearest neighbours
/// of its anchor; degenerate neighbourhoods are retried with `q + 10`, up to
/// `q = 50`.
pub fn build_covering(nodes: &NodeSet, p: usize, q: usize) -> Result<Covering> {
    let tau = poly_dim(p);
    if nodes.len() < tau + q {
        return Err(Error::InsufficientNodes {
            requested: tau + q,
            available: nodes.len(),
        });
    }
    let picked: Vec<(Vec<usize>, f64, usize)> = (0..nodes.len())
        .into_par_iter()
        .map(|i| select_for_anchor(nodes, i, p, q))
        .collect::<Result<_>>()?;

    let mut subsets = Vec::with_capacity(picked.len());
    let mut scales = Vec::with_capacity(picked.len());
    let mut q_used = Vec::with_capacity(picked.len());
    let mut reverse = vec![Vec::new(); nodes.len()];
    for (j, (subset, scale, qj)) in picked.into_iter().enumerate() {
        for &i in &subset {
            reverse[i].push(j);
        }
        subsets.push(subset);
        scales.push(scale);
        q_used.push(qj);
    }
    Ok(Covering {
        subsets,
        scales,
        reverse,
        q_used,
        tau,
        p,
        q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{halton_nodeset, uniform_simplex_nodes};

    fn nodeset(points: &[(f64, f64)]) -> NodeSet {
        NodeSet::from_points(points.iter().map(|&(x, y)| Point2::new(x, y))).unwrap()
    }

    #[test]
    fn neighbors_basic() {
        let ns = NodeSet::from_points(uniform_simplex_nodes(1)).unwrap();
        let o = ns.origin_index();
        assert_eq!(nearest_neighbors(&ns, o, 1).unwrap(), vec![o]);
        let all = nearest_neighbors(&ns, o, 3).unwrap();
        assert_eq!(all[0], o);
        assert_eq!(all.len(), 3);
        assert!(matches!(
            nearest_neighbors(&ns, o, 4),
            Err(Error::InsufficientNodes { .. })
        ));
    }

    #[test]
    fn neighbor_ties_prefer_lower_index() {
        // interior nodes 0 and 1 are both at distance 1 from node 2
        let ns = nodeset(&[(1.0, 2.0), (1.0, 4.0), (1.0, 3.0), (8.0, 0.0)]);
        let nn = nearest_neighbors(&ns, 2, 3).unwrap();
        assert_eq!(nn, vec![2, 0, 1]);
    }

    #[test]
    fn neighbors_match_brute_force() {
        let ns = halton_nodeset(300, 20).unwrap();
        for anchor in [0, 17, ns.origin_index(), ns.len() - 1] {
            let nn = nearest_neighbors(&ns, anchor, 16).unwrap();
            let a = ns.point(anchor);
            let mut all: Vec<usize> = (0..ns.len()).collect();
            all.sort_by(|&x, &y| {
                ns.point(x)
                    .dist_sq(&a)
                    .total_cmp(&ns.point(y).dist_sq(&a))
                    .then(x.cmp(&y))
            });
            assert_eq!(nn, all[..16]);
        }
    }

    #[test]
    fn leja_p1_three_points() {
        let ns = nodeset(&[(1.0, 1.0), (2.0, 1.0), (1.0, 2.0), (8.0, 0.0)]);
        let sel = leja_select(&ns, &[0, 1, 2], 0, 1).unwrap();
        let mut s = sel.clone();
        s.sort();
        assert_eq!(s, vec![0, 1, 2]);
        assert_eq!(sel[0], 0);
    }

    fn det3(ns: &NodeSet, t: &[usize]) -> f64 {
        let (a, b, c) = (ns.point(t[0]), ns.point(t[1]), ns.point(t[2]));
        (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)
    }

    #[test]
    fn leja_p1_avoids_collinear_triple() {
        // anchor 0 with 1, 2 collinear on y = 1 and 3 off the line
        let ns = nodeset(&[(1.0, 1.0), (1.5, 1.0), (2.0, 1.0), (1.2, 1.6), (8.0, 0.0)]);
        let cands = [0, 1, 2, 3];
        let sel = leja_select(&ns, &cands, 0, 1).unwrap();
        assert!(det3(&ns, &sel).abs() > 1e-12);
        assert_eq!(sel[0], 0);
        // brute force over the triples containing the anchor
        let triples = [[0, 1, 2], [0, 1, 3], [0, 2, 3]];
        let best = triples
            .iter()
            .map(|t| det3(&ns, t).abs())
            .fold(0.0, f64::max);
        assert!(best > 0.0);
        assert!(triples.iter().filter(|t| det3(&ns, *t).abs() > 1e-12).count() >= 1);
    }

    #[test]
    fn leja_rejects_collinear_candidates() {
        let ns = nodeset(&[(1.0, 1.0), (1.5, 1.5), (2.0, 2.0), (2.5, 2.5), (3.0, 3.0), (8.0, 0.0)]);
        let err = leja_select(&ns, &[0, 1, 2, 3, 4], 2, 1).unwrap_err();
        assert!(matches!(err, Error::DegenerateNeighborhood { anchor: 2 }));
        assert!(err.to_string().contains("degenerate neighborhood"));
    }

    #[test]
    fn covering_of_the_quadratic_simplex() {
        let ns = NodeSet::from_points(uniform_simplex_nodes(2)).unwrap();
        let cov = build_covering(&ns, 2, 0).unwrap();
        assert_eq!(cov.tau, 6);
        for (j, t) in cov.subsets.iter().enumerate() {
            assert_eq!(t[0], j);
            let mut s = t.clone();
            s.sort();
            assert_eq!(s, (0..6).collect::<Vec<_>>());
        }
    }

    #[test]
    fn covering_invariants_on_halton() {
        let ns = halton_nodeset(600, 30).unwrap();
        let cov = build_covering(&ns, 2, 10).unwrap();
        assert_eq!(cov.len(), ns.len());
        let total: usize = cov.subsets.iter().map(Vec::len).sum();
        assert_eq!(total, cov.len() * cov.tau);
        for (i, js) in cov.reverse.iter().enumerate() {
            assert!(js.contains(&i));
        }
        for t in &cov.subsets {
            let mut s = t.clone();
            s.sort();
            s.dedup();
            assert_eq!(s.len(), 6);
        }
        assert_eq!(build_covering(&ns, 2, 10).unwrap(), cov);
        assert_eq!(cov.to_table().lines().count(), ns.len());
    }

    #[test]
    fn too_few_nodes() {
        let ns = NodeSet::from_points(uniform_simplex_nodes(1)).unwrap();
        assert!(matches!(
            build_covering(&ns, 2, 0),
            Err(Error::InsufficientNodes { .. })
        ));
    }
}
