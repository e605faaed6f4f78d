//! Dense LU helpers on top of faer.

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::{Col, Mat, MatRef};

/// Operator 1-norm (largest absolute column sum); infinite if any entry
/// is not finite.
pub(crate) fn norm_1(m: MatRef<'_, f64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        let s: f64 = (0..m.nrows()).map(|i| m[(i, j)].abs()).sum();
        if !s.is_finite() {
            return f64::INFINITY;
        }
        best = best.max(s);
    }
    best
}

/// A factored square matrix with its 1-norm.
pub(crate) struct DenseLu {
    lu: PartialPivLu<f64>,
    norm1: f64,
    n: usize,
}

impl DenseLu {
    pub fn new(m: MatRef<'_, f64>) -> Self {
        Self {
            lu: m.partial_piv_lu(),
            norm1: norm_1(m),
            n: m.nrows(),
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let b = Col::<f64>::from_fn(self.n, |i| rhs[i]);
        let x = self.lu.solve(&b);
        (0..self.n).map(|i| x[i]).collect()
    }

    pub fn solve_mat(&self, rhs: MatRef<'_, f64>) -> Mat<f64> {
        self.lu.solve(rhs)
    }

    fn solve_transpose(&self, rhs: &[f64]) -> Vec<f64> {
        let b = Col::<f64>::from_fn(self.n, |i| rhs[i]);
        let x = self.lu.solve_transpose(&b);
        (0..self.n).map(|i| x[i]).collect()
    }

    /// Estimate of `‖A⁻¹‖₁` by Hager's method with Higham's extra test vector.
    pub fn inverse_norm1_estimate(&self) -> f64 {
        let n = self.n;
        if n == 0 {
            return 0.0;
        }
        let l1 = |v: &[f64]| v.iter().map(|c| c.abs()).sum::<f64>();
        let mut x = vec![1.0 / n as f64; n];
        let mut est = 0.0;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = self.solve(&x);
            est = l1(&y);
            if !est.is_finite() {
                return f64::INFINITY;
            }
            let xi: Vec<f64> = y.iter().map(|&c| if c >= 0.0 { 1.0 } else { -1.0 }).collect();
            let z = self.solve_transpose(&xi);
            let (j, zmax) = z
                .iter()
                .enumerate()
                .fold((0, 0.0f64), |(bj, bm), (i, c)| if c.abs() > bm { (i, c.abs()) } else { (bj, bm) });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if zmax <= ztx || j == last_j {
                break;
            }
            last_j = j;
            x.iter_mut().for_each(|c| *c = 0.0);
            x[j] = 1.0;
        }
        let alt: Vec<f64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
            })
            .collect();
        let alt_est = 2.0 * l1(&self.solve(&alt)) / (3.0 * n as f64);
        est.max(alt_est)
    }

    /// 1-norm condition estimate `‖A‖₁ · est(‖A⁻¹‖₁)`.
    pub fn condition_estimate(&self) -> f64 {
        self.norm1 * self.inverse_norm1_estimate()
    }
}
