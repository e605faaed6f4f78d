//! Global multiquadric collocation baseline.
//!
//! `u(x) = Σ_k a_k φ(‖x − c_k‖) + a_0` with `φ(r) = √(r² + c²)` and the side
//! condition `Σ a_k = 0`. Cardinal functions come from the inverse of the
//! bordered interpolation matrix, so the semi-discrete system has the same
//! shape as the Shepard one and runs through the same time stepper.

use faer::Mat;
use rayon::prelude::*;

use crate::assembly::SpatialSystem;
use crate::error::{Error, Result};
use crate::geometry::{far_field_line, halton_unit_square, NodeSet, Point2, DOMAIN_SIDE};
use crate::linalg::DenseLu;
use crate::model::{MarketParams, OperatorCoeffs};
use crate::poly::Jet;

/// Condition estimates of the bordered matrix above this are rejected.
pub const MAX_RBF_CONDITION: f64 = 1e14;

/// Interior and far-field counts of the graded baseline node set.
pub const FIG1_INTERIOR: usize = 370;
pub const FIG1_FAR_FIELD: usize = 20;
/// Slope of the grading map at the kink line `x + y = 2`.
pub const GRADING_THETA: f64 = 0.3;

pub fn multiquadric(r2: f64, shape: f64) -> f64 {
    (r2 + shape * shape).sqrt()
}

/// Value, gradient and Hessian of `φ(‖x − c‖)` in `x`.
pub fn multiquadric_jet(x: Point2, c: Point2, shape: f64) -> Jet {
    let (dx, dy) = (x.x - c.x, x.y - c.y);
    let phi = multiquadric(dx * dx + dy * dy, shape);
    let phi3 = phi * phi * phi;
    let s2 = shape * shape;
    Jet {
        v: phi,
        g: [dx / phi, dy / phi],
        h: [(dy * dy + s2) / phi3, -dx * dy / phi3, (dx * dx + s2) / phi3],
    }
}

/// Twice the mean nearest-neighbour distance.
pub fn default_shape(nodes: &NodeSet) -> f64 {
    let pts = nodes.points();
    let total: f64 = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            pts.iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, q)| p.dist_sq(q))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    2.0 * total / pts.len() as f64
}

#[derive(Debug, Clone)]
pub struct RbfModel {
    nodes: NodeSet,
    shape: f64,
    /// Inverse of the bordered matrix `[[Φ, 1], [1ᵀ, 0]]`.
    inverse: Mat<f64>,
    /// 1-norm condition estimate of the bordered matrix.
    pub condition: f64,
    pub system: SpatialSystem,
}

impl RbfModel {
    /// Builds the interpolation and collocation matrices on `nodes`.
    pub fn new(nodes: NodeSet, shape: f64, market: &MarketParams) -> Result<Self> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(Error::invalid("rbf-baseline", format!("shape must be positive, got {shape}")));
        }
        market.validate()?;
        let n = nodes.len();
        let pts = nodes.points();
        let bordered = Mat::<f64>::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
            (true, true) => multiquadric(pts[i].dist_sq(&pts[j]), shape),
            (false, false) => 0.0,
            _ => 1.0,
        });
        let lu = DenseLu::new(bordered.as_ref());
        let condition = lu.condition_estimate();
        if !condition.is_finite() || condition > MAX_RBF_CONDITION {
            return Err(Error::RbfIllConditioned { condition });
        }
        let inverse = lu.solve_mat(Mat::<f64>::identity(n + 1, n + 1).as_ref());
        let ni = nodes.n_interior();
        // [Lφ(x_k, c_·), L1] for every interior row
        let lphi = Mat::<f64>::from_fn(ni, n + 1, |k, j| {
            let coeffs = OperatorCoeffs::at(pts[k], market);
            if j < n {
                coeffs.apply(&multiquadric_jet(pts[k], pts[j], shape))
            } else {
                coeffs.c
            }
        });
        let d = &lphi * inverse.get(.., 0..n);
        let origin = nodes.origin_index();
        let system = SpatialSystem {
            a: d.get(.., 0..ni).to_owned(),
            b: d.get(.., origin + 1..n).to_owned(),
            origin_column: (0..ni).map(|k| d[(k, origin)]).collect(),
        };
        Ok(Self {
            nodes,
            shape,
            inverse,
            condition,
            system,
        })
    }

    /// Same as [`RbfModel::new`] with the default shape parameter.
    pub fn with_default_shape(nodes: NodeSet, market: &MarketParams) -> Result<Self> {
        let shape = default_shape(&nodes);
        Self::new(nodes, shape, market)
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    /// Values of every cardinal function at `x`.
    pub fn cardinal_values(&self, x: Point2) -> Vec<f64> {
        let n = self.nodes.len();
        let pts = self.nodes.points();
        let row: Vec<f64> = pts
            .iter()
            .map(|c| multiquadric(x.dist_sq(c), self.shape))
            .chain(std::iter::once(1.0))
            .collect();
        (0..n)
            .map(|j| (0..=n).map(|k| row[k] * self.inverse[(k, j)]).sum())
            .collect()
    }

    /// Interpolant of nodal `data` evaluated at `x`.
    pub fn interpolate(&self, data: &[f64], x: Point2) -> f64 {
        self.cardinal_values(x).iter().zip(data).map(|(w, d)| w * d).sum()
    }
}

/// The collocation matrices of the baseline, with the default shape when
/// `shape` is `None`.
pub fn rbf_assemble(nodes: NodeSet, shape: Option<f64>, market: &MarketParams) -> Result<RbfModel> {
    match shape {
        Some(c) => RbfModel::new(nodes, c, market),
        None => RbfModel::with_default_shape(nodes, market),
    }
}

/// Graded map of the level `a = x + y`: fixes 0, 2 and 8, with slope `θ`
/// at 2 and growing linearly away from it.
pub fn grade_level(a: f64) -> f64 {
    let kink = 2.0;
    let span = if a < kink { kink } else { DOMAIN_SIDE - kink };
    let s = a - kink;
    kink + s * (GRADING_THETA + (1.0 - GRADING_THETA) * s.abs() / span)
}

/// Halton points on the triangle, moved along rays from the origin by
/// [`grade_level`] so they accumulate near `x + y = 2`, until 370 interior
/// nodes are collected; plus the origin and 20 equispaced far-field nodes.
pub fn rbf_nodeset_fig1() -> NodeSet {
    let mut interior = Vec::with_capacity(FIG1_INTERIOR);
    let mut count = 2 * FIG1_INTERIOR;
    while interior.len() < FIG1_INTERIOR {
        interior.clear();
        for u in halton_unit_square(count) {
            if interior.len() == FIG1_INTERIOR {
                break;
            }
            let p = Point2::new(DOMAIN_SIDE * u.x, DOMAIN_SIDE * u.y);
            let a = p.x + p.y;
            if a >= DOMAIN_SIDE {
                continue;
            }
            let scale = grade_level(a) / a;
            interior.push(Point2::new(p.x * scale, p.y * scale));
        }
        count *= 2;
    }
    NodeSet::from_points(interior.into_iter().chain(far_field_line(FIG1_FAR_FIELD)))
        .expect("graded baseline nodes lie in the domain")
}

/// Cardinal values of an [`RbfModel`] at many points, in parallel.
pub fn cardinal_table(model: &RbfModel, points: &[Point2]) -> Vec<Vec<f64>> {
    points.par_iter().map(|&x| model.cardinal_values(x)).collect()
}

/// Inverse of a small dense matrix, used by tests as an independent check.
#[cfg(test)]
fn dense_inverse(m: &Mat<f64>) -> Mat<f64> {
    use faer::linalg::solvers::DenseSolveCore;
    m.partial_piv_lu().inverse()
}
