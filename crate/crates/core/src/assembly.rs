//! Spatial collocation matrices.
//!
//! Row `k` holds `L W_i` evaluated at the interior node `x_k`. Columns of
//! interior nodes go to `A`, far-field columns to `B`. The origin column is
//! kept apart: the near-field value is zero, so it never enters the solve.

use std::fmt::Write as _;

use faer::Mat;
use rayon::prelude::*;

use crate::geometry::NodeSet;
use crate::model::{MarketParams, OperatorCoeffs};
use crate::shepard::ShepardBasis;

/// Entries with magnitude at or below this count as structural zeros.
pub const SPARSITY_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct SpatialSystem {
    /// `n_I × n_I`, interior columns.
    pub a: Mat<f64>,
    /// `n_I × n_F`, far-field columns.
    pub b: Mat<f64>,
    /// `L W_origin` at every interior node; excluded from `b`.
    pub origin_column: Vec<f64>,
}

impl SpatialSystem {
    pub fn n_interior(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_far_field(&self) -> usize {
        self.b.ncols()
    }

    /// `A u + B v`.
    pub fn apply(&self, interior: &[f64], far: &[f64]) -> Vec<f64> {
        let n = self.n_interior();
        let mut out = vec![0.0; n];
        for (k, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (i, u) in interior.iter().enumerate() {
                acc += self.a[(k, i)] * u;
            }
            for (i, v) in far.iter().enumerate() {
                acc += self.b[(k, i)] * v;
            }
            *o = acc;
        }
        out
    }

    /// `B b` for far-field values `b`.
    pub fn apply_boundary(&self, values: &[f64]) -> Vec<f64> {
        let n = self.n_interior();
        (0..n)
            .map(|k| {
                values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| self.b[(k, i)] * v)
                    .sum()
            })
            .collect()
    }

    pub fn sparsity(&self) -> SparsitySummary {
        let n = self.n_interior();
        let mut nnz_a = 0;
        let mut nnz_b = 0;
        let mut max_row = 0;
        let mut bandwidth = 0;
        for k in 0..n {
            let mut row = 0;
            for i in 0..n {
                if self.a[(k, i)].abs() > SPARSITY_TOL {
                    nnz_a += 1;
                    row += 1;
                    bandwidth = bandwidth.max(k.abs_diff(i));
                }
            }
            for i in 0..self.n_far_field() {
                if self.b[(k, i)].abs() > SPARSITY_TOL {
                    nnz_b += 1;
                    row += 1;
                }
            }
            max_row = max_row.max(row);
        }
        SparsitySummary {
            n_interior: n,
            n_far_field: self.n_far_field(),
            nnz_a,
            nnz_b,
            max_row_support: max_row,
            bandwidth_a: bandwidth,
        }
    }

    /// `row col value` lines (0-based) for the nonzeros of `A`.
    pub fn a_coordinates(&self) -> String {
        coordinate_table(&self.a)
    }

    /// `row col value` lines (0-based) for the nonzeros of `B`.
    pub fn b_coordinates(&self) -> String {
        coordinate_table(&self.b)
    }
}

fn coordinate_table(m: &Mat<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if v.abs() > SPARSITY_TOL {
                let _ = writeln!(out, "{i} {j} {v:.16e}");
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SparsitySummary {
    pub n_interior: usize,
    pub n_far_field: usize,
    pub nnz_a: usize,
    pub nnz_b: usize,
    pub max_row_support: usize,
    pub bandwidth_a: usize,
}

impl SparsitySummary {
    pub fn density_a(&self) -> f64 {
        self.nnz_a as f64 / (self.n_interior * self.n_interior).max(1) as f64
    }
}

/// Far-field data `(x_i + y_i)/2 − K e^{−rt}` at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryVector {
    pub t: f64,
    pub values: Vec<f64>,
}

pub fn boundary_vector(nodes: &NodeSet, market: &MarketParams, t: f64) -> BoundaryVector {
    BoundaryVector {
        t,
        values: nodes
            .far_field()
            .iter()
            .map(|&p| market.far_field(p, t))
            .collect(),
    }
}

/// Collocates `L` on the cardinal basis at every interior node.
pub fn assemble(basis: &ShepardBasis, market: &MarketParams) -> SpatialSystem {
    let nodes = basis.nodes();
    let ni = nodes.n_interior();
    let origin = nodes.origin_index();
    let rows: Vec<Vec<(usize, f64)>> = (0..ni)
        .into_par_iter()
        .map(|k| {
            let xk = nodes.point(k);
            let coeffs = OperatorCoeffs::at(xk, market);
            basis
                .eval_row(xk)
                .entries
                .iter()
                .map(|(i, w)| (*i, coeffs.apply(w)))
                .collect()
        })
        .collect();
    let mut a = Mat::<f64>::zeros(ni, ni);
    let mut b = Mat::<f64>::zeros(ni, nodes.n_far_field());
    let mut origin_column = vec![0.0; ni];
    for (k, row) in rows.into_iter().enumerate() {
        for (i, v) in row {
            if i < ni {
                a[(k, i)] = v;
            } else if i == origin {
                origin_column[k] = v;
            } else {
                b[(k, i - origin - 1)] = v;
            }
        }
    }
    SpatialSystem {
        a,
        b,
        origin_column,
    }
}
