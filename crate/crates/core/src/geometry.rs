//! Node generation on the triangle `Ω = conv{(0,0), (8,0), (0,8)}`.
//!
//! Every generator returns plain point lists; [`NodeSet::from_points`]
//! partitions them into interior nodes, the origin, and far-field nodes on
//! the hypotenuse `x + y = 8`, in that index order.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Length of the legs of the triangular domain.
pub const DOMAIN_SIDE: f64 = 8.0;

/// Distance below which two nodes are merged.
pub const MIN_SEPARATION: f64 = 1e-9;

/// Tolerance for classifying a point as lying on `x + y = 8`.
pub const FAR_FIELD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dist_sq(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn dist(&self, other: &Point2) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Closed-domain membership test.
    pub fn in_domain(&self) -> bool {
        self.x >= 0.0 && self.y >= 0.0 && self.x + self.y <= DOMAIN_SIDE + FAR_FIELD_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    Interior,
    Origin,
    FarField,
}

impl NodeRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            NodeRole::Interior => "interior",
            NodeRole::Origin => "origin",
            NodeRole::FarField => "farfield",
        }
    }
}

/// Collocation nodes ordered as interior nodes `0..n_interior`, the origin at
/// index `n_interior`, then the far-field nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    points: Vec<Point2>,
    n_interior: usize,
}

impl NodeSet {
    /// Partitions arbitrary points of the closed triangle into a node set.
    ///
    /// Points within [`MIN_SEPARATION`] of an earlier point are dropped, the
    /// origin is always present, and far-field points are sorted by
    /// decreasing `x` (from `(8,0)` towards `(0,8)`).
    pub fn from_points<I>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = Point2>,
    {
        let mut interior = Vec::new();
        let mut far = Vec::new();
        for p in dedup_points(points, MIN_SEPARATION) {
            if !p.is_finite() || !p.in_domain() {
                return Err(Error::invalid(
                    "geometry-nodes",
                    format!("point ({}, {}) lies outside the domain", p.x, p.y),
                ));
            }
            if p.dist(&Point2::ORIGIN) < MIN_SEPARATION {
                continue;
            }
            if (p.x + p.y - DOMAIN_SIDE).abs() <= FAR_FIELD_TOL {
                far.push(p);
            } else {
                interior.push(p);
            }
        }
        far.sort_by(|a, b| b.x.total_cmp(&a.x));
        let n_interior = interior.len();
        let mut all = interior;
        all.push(Point2::ORIGIN);
        all.extend(far);
        Ok(Self {
            points: all,
            n_interior,
        })
    }

    /// Total number of nodes `n`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_interior(&self) -> usize {
        self.n_interior
    }

    pub fn n_far_field(&self) -> usize {
        self.points.len() - self.n_interior - 1
    }

    pub fn origin_index(&self) -> usize {
        self.n_interior
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point2 {
        self.points[i]
    }

    pub fn interior(&self) -> &[Point2] {
        &self.points[..self.n_interior]
    }

    pub fn far_field(&self) -> &[Point2] {
        &self.points[self.n_interior + 1..]
    }

    pub fn role(&self, i: usize) -> NodeRole {
        use std::cmp::Ordering::*;
        match i.cmp(&self.n_interior) {
            Less => NodeRole::Interior,
            Equal => NodeRole::Origin,
            Greater => NodeRole::FarField,
        }
    }

    /// Smallest pairwise distance, computed by brute force.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                best = best.min(p.dist_sq(q));
            }
        }
        best.sqrt()
    }

    /// Checks the layout and membership invariants.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::invalid("geometry-nodes", msg));
        if self.points[self.n_interior] != Point2::ORIGIN {
            return bad("origin is not at index n_interior".into());
        }
        for (i, p) in self.interior().iter().enumerate() {
            if !(p.x >= 0.0 && p.y >= 0.0 && p.x + p.y < DOMAIN_SIDE) || *p == Point2::ORIGIN {
                return bad(format!("interior node {i} at ({}, {}) is invalid", p.x, p.y));
            }
        }
        for p in self.far_field() {
            if (p.x + p.y - DOMAIN_SIDE).abs() > FAR_FIELD_TOL {
                return bad(format!("far-field node ({}, {}) is off the line", p.x, p.y));
            }
        }
        if self.len() > 1 && self.min_separation() < MIN_SEPARATION {
            return bad("nodes closer than the minimum separation".into());
        }
        Ok(())
    }

    /// Plain-text table, one `x y role` line per node, 17 significant digits.
    pub fn to_table(&self) -> String {
        let mut out = String::with_capacity(self.len() * 56);
        for (i, p) in self.points.iter().enumerate() {
            let _ = writeln!(out, "{:.16e} {:.16e} {}", p.x, p.y, self.role(i).as_str());
        }
        out
    }
}

/// Removes points closer than `tol` to an earlier point, preserving order.
pub fn dedup_points<I>(points: I, tol: f64) -> Vec<Point2>
where
    I: IntoIterator<Item = Point2>,
{
    let cell = |v: f64| (v / tol).floor() as i64;
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut kept: Vec<Point2> = Vec::new();
    let tol_sq = tol * tol;
    'outer: for p in points {
        let (cx, cy) = (cell(p.x), cell(p.y));
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = grid.get(&(cx + dx, cy + dy)) {
                    if ids.iter().any(|&k| kept[k].dist_sq(&p) < tol_sq) {
                        continue 'outer;
                    }
                }
            }
        }
        grid.entry((cx, cy)).or_default().push(kept.len());
        kept.push(p);
    }
    kept
}

/// Radical inverse of `index` in the given base.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while index > 0 {
        r += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    r
}

/// First `count` points of the two-dimensional Halton sequence (bases 2 and
/// 3), starting at index 1 so the point `(0,0)` is skipped.
pub fn halton_unit_square(count: usize) -> Vec<Point2> {
    (1..=count as u64)
        .map(|i| Point2::new(radical_inverse(i, 2), radical_inverse(i, 3)))
        .collect()
}

/// `count` equispaced points on the segment `a..=b`, endpoints included.
pub fn segment(a: Point2, b: Point2, count: usize) -> Vec<Point2> {
    match count {
        0 => Vec::new(),
        1 => vec![Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))],
        _ => {
            let last = (count - 1) as f64;
            (0..count)
                .map(|k| {
                    let s = k as f64 / last;
                    Point2::new(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y))
                })
                .collect()
        }
    }
}

/// Equispaced far-field nodes on `x + y = 8`, from `(8,0)` to `(0,8)`.
pub fn far_field_line(count: usize) -> Vec<Point2> {
    let mut pts = segment(
        Point2::new(DOMAIN_SIDE, 0.0),
        Point2::new(0.0, DOMAIN_SIDE),
        count,
    );
    // keep x + y == 8 exact so the far-field classification is unambiguous
    for p in &mut pts {
        p.y = DOMAIN_SIDE - p.x;
    }
    pts
}

/// Halton points mapped onto `(0,8)²`, restricted to `x + y < 8`, coupled
/// with the origin and `boundary_count` equispaced far-field nodes.
pub fn halton_nodeset(total: usize, boundary_count: usize) -> Result<NodeSet> {
    let interior = halton_unit_square(total)
        .into_iter()
        .map(|p| Point2::new(DOMAIN_SIDE * p.x, DOMAIN_SIDE * p.y))
        .filter(|p| p.x + p.y < DOMAIN_SIDE - FAR_FIELD_TOL);
    NodeSet::from_points(interior.chain(far_field_line(boundary_count)))
}

/// The degree-`degree` uniform distribution `{(8i/d, 8j/d) : i + j ≤ d}`.
pub fn uniform_simplex_nodes(degree: usize) -> Vec<Point2> {
    let d = degree as f64;
    let mut pts = Vec::with_capacity((degree + 1) * (degree + 2) / 2);
    for j in 0..=degree {
        for i in 0..=degree - j {
            let x = DOMAIN_SIDE * i as f64 / d;
            let y = if i + j == degree {
                DOMAIN_SIDE - x
            } else {
                DOMAIN_SIDE * j as f64 / d
            };
            pts.push(Point2::new(x, y));
        }
    }
    pts
}

/// How the nodes inside each cell of the composite distribution are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellDistribution {
    /// Uniform lattice of the cell degree mapped affinely into each cell.
    /// Stands in for the Waldron construction, whose coordinates are not
    /// reproduced here.
    UniformFallback,
}

impl CellDistribution {
    pub fn as_str(&self) -> &'static str {
        match self {
            CellDistribution::UniformFallback => "uniform-fallback",
        }
    }
}

/// Composite distribution: `net_degree²` congruent subtriangles of the
/// uniform net, each filled with a `cell_degree` distribution. Shared points
/// are deduplicated.
pub fn waldron_composite_nodes(net_degree: usize, cell_degree: usize) -> (Vec<Point2>, CellDistribution) {
    let cells = net_cells(net_degree);
    let local = uniform_barycentric(cell_degree);
    let mut pts = Vec::with_capacity(cells.len() * local.len());
    for [a, b, c] in &cells {
        for &(l1, l2) in &local {
            let l0 = 1.0 - l1 - l2;
            pts.push(Point2::new(
                l0 * a.x + l1 * b.x + l2 * c.x,
                l0 * a.y + l1 * b.y + l2 * c.y,
            ));
        }
    }
    // snap near-hypotenuse points so they classify as far-field
    for p in &mut pts {
        if (p.x + p.y - DOMAIN_SIDE).abs() < 1e-9 {
            p.y = DOMAIN_SIDE - p.x;
        }
    }
    (dedup_points(pts, MIN_SEPARATION), CellDistribution::UniformFallback)
}

/// Vertices of the `degree²` subtriangles of the uniform net on Ω.
pub fn net_cells(degree: usize) -> Vec<[Point2; 3]> {
    let h = DOMAIN_SIDE / degree as f64;
    let v = |i: usize, j: usize| Point2::new(h * i as f64, h * j as f64);
    let mut cells = Vec::with_capacity(degree * degree);
    for j in 0..degree {
        for i in 0..degree - j {
            cells.push([v(i, j), v(i + 1, j), v(i, j + 1)]);
            if i + j + 2 <= degree {
                cells.push([v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)]);
            }
        }
    }
    cells
}

fn uniform_barycentric(degree: usize) -> Vec<(f64, f64)> {
    let d = degree as f64;
    let mut out = Vec::new();
    for j in 0..=degree {
        for i in 0..=degree - j {
            out.push((i as f64 / d, j as f64 / d));
        }
    }
    out
}

/// Number of equispaced nodes placed on each enrichment line.
pub const LINE_NODES: usize = 52;
/// Levels `a` of the lines `x + y = a` refined around the payoff kink.
pub const KINK_LINES: [f64; 7] = [1.5, 1.8, 2.0, 2.1, 2.3, 2.5, 2.7];
/// Levels of the lines `x + y = a` placed before the far-field gap.
pub const OUTER_LINES: [f64; 2] = [7.1, 7.5];
/// Interior nodes with `x + y` above this value are removed.
pub const GAP_LEVEL: f64 = 7.6;
/// Length of the refined segments on the axes.
pub const AXIS_LENGTH: f64 = 2.5;

/// Adds refinement lines to `base`: the axes up to 2.5, the diagonals around
/// the kink, and the two outer diagonals, then opens a gap below `x + y = 8`.
pub fn enrich_with_lines(base: &NodeSet) -> Result<NodeSet> {
    let mut pts: Vec<Point2> = base
        .interior()
        .iter()
        .copied()
        .filter(|p| p.x + p.y <= GAP_LEVEL)
        .collect();
    pts.extend(segment(Point2::ORIGIN, Point2::new(0.0, AXIS_LENGTH), LINE_NODES));
    pts.extend(segment(Point2::ORIGIN, Point2::new(AXIS_LENGTH, 0.0), LINE_NODES));
    for a in KINK_LINES.iter().chain(OUTER_LINES.iter()) {
        pts.extend(segment(Point2::new(*a, 0.0), Point2::new(0.0, *a), LINE_NODES));
    }
    let pts = dedup_points(pts, 1e-10);
    NodeSet::from_points(pts.into_iter().chain(base.far_field().iter().copied()))
}

#[cfg(test)]
mod tests {
    use super::*;

    // digit-by-digit radical inverse, written independently of `radical_inverse`
    fn radical_inverse_oracle(index: u64, base: u64) -> f64 {
        let mut digits = Vec::new();
        let mut i = index;
        while i > 0 {
            digits.push(i % base);
            i /= base;
        }
        digits
            .iter()
            .enumerate()
            .map(|(k, &d)| d as f64 / (base as f64).powi(k as i32 + 1))
            .sum()
    }

    #[test]
    fn halton_first_points() {
        let pts = halton_unit_square(2);
        assert_eq!(pts[0], Point2::new(0.5, 1.0 / 3.0));
        assert_eq!(pts[1], Point2::new(0.25, 2.0 / 3.0));
        for (i, p) in halton_unit_square(500).iter().enumerate() {
            let k = i as u64 + 1;
            assert!((p.x - radical_inverse_oracle(k, 2)).abs() < 1e-15);
            assert!((p.y - radical_inverse_oracle(k, 3)).abs() < 1e-15);
            assert!(p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0);
        }
    }

    #[test]
    fn halton_nodeset_single_point() {
        let ns = halton_nodeset(1, 2).unwrap();
        assert_eq!(ns.interior(), &[Point2::new(4.0, 8.0 / 3.0)]);
        assert_eq!(ns.n_far_field(), 2);
    }

    #[test]
    fn halton_nodeset_counts() {
        let ns = halton_nodeset(5000, 141).unwrap();
        // counted by the oracle above over indices 1..=5000
        let expected = (1..=5000u64)
            .filter(|&i| radical_inverse_oracle(i, 2) + radical_inverse_oracle(i, 3) < 1.0)
            .count();
        assert_eq!(ns.n_interior(), expected);
        assert_eq!(expected, 2495);
        assert_eq!(ns.len(), ns.n_interior() + 1 + 141);
        ns.validate().unwrap();
        assert_eq!(ns.far_field()[0], Point2::new(8.0, 0.0));
        assert_eq!(*ns.far_field().last().unwrap(), Point2::new(0.0, 8.0));
    }

    #[test]
    fn uniform_counts() {
        for d in 1..=100 {
            assert_eq!(uniform_simplex_nodes(d).len(), (d + 1) * (d + 2) / 2);
        }
        assert_eq!(uniform_simplex_nodes(70).len(), 2556);
        let p1 = uniform_simplex_nodes(1);
        assert_eq!(
            p1,
            vec![Point2::new(0.0, 0.0), Point2::new(8.0, 0.0), Point2::new(0.0, 8.0)]
        );
        assert!(uniform_simplex_nodes(2).contains(&Point2::new(4.0, 4.0)));
    }

    #[test]
    fn uniform_nodeset_partition() {
        let ns = NodeSet::from_points(uniform_simplex_nodes(70)).unwrap();
        ns.validate().unwrap();
        assert_eq!(ns.n_far_field(), 71);
        assert_eq!(ns.n_interior(), 2556 - 72);
    }

    #[test]
    fn composite_cells() {
        assert_eq!(net_cells(7).len(), 49);
        let (pts, kind) = waldron_composite_nodes(1, 1);
        assert_eq!(kind, CellDistribution::UniformFallback);
        assert_eq!(pts.len(), 3);
        // the uniform fallback reproduces the degree net*cell lattice
        let (pts, _) = waldron_composite_nodes(7, 10);
        assert_eq!(pts.len(), 2556);
        let ns = NodeSet::from_points(pts).unwrap();
        ns.validate().unwrap();
        assert_eq!(ns.n_far_field(), 71);
    }

    #[test]
    fn enrichment_lines_and_gap() {
        let (pts, _) = waldron_composite_nodes(7, 10);
        let base = NodeSet::from_points(pts).unwrap();
        let ns = enrich_with_lines(&base).unwrap();
        ns.validate().unwrap();
        assert!(ns.interior().iter().all(|p| p.x + p.y <= GAP_LEVEL));
        let on_line = |a: f64| {
            ns.points()
                .iter()
                .filter(|p| (p.x + p.y - a).abs() < 1e-12)
                .count()
        };
        // every named line carries at least its 52 nodes
        for a in KINK_LINES.iter().chain(OUTER_LINES.iter()) {
            assert!(on_line(*a) >= LINE_NODES, "line {a}");
        }
        let line2 = segment(Point2::new(2.0, 0.0), Point2::new(0.0, 2.0), LINE_NODES);
        assert_eq!(line2.len(), 52);
        for p in &line2 {
            assert!(ns.points().iter().any(|q| q.dist(p) < 1e-10));
        }
        assert_eq!(ns.n_far_field(), base.n_far_field());
    }

    #[test]
    fn dedup_is_idempotent() {
        let (pts, _) = waldron_composite_nodes(3, 4);
        let mut noisy = pts.clone();
        noisy.extend(pts.iter().map(|p| Point2::new(p.x + 1e-11, p.y)));
        let once = dedup_points(noisy, 1e-10);
        let twice = dedup_points(once.clone(), 1e-10);
        assert_eq!(once, twice);
        assert_eq!(once.len(), pts.len());
    }

    #[test]
    fn table_format() {
        let ns = NodeSet::from_points(uniform_simplex_nodes(1)).unwrap();
        let table = ns.to_table();
        let lines: Vec<_> = table.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "0.0000000000000000e0 0.0000000000000000e0 origin");
        assert!(lines[1].ends_with("farfield"));
    }

    #[test]
    fn rejects_points_outside() {
        assert!(NodeSet::from_points([Point2::new(5.0, 5.0)]).is_err());
    }
}
