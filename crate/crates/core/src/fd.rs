//! Second-order finite-difference reference on the square `[0, 8]²`.
//!
//! Central differences in space (four-point stencil for the cross term),
//! Dirichlet far-field data on `x = 8` and `y = 8`, and the degenerate
//! operator itself on the axes, where every derivative coefficient vanishes.
//! Time stepping is backward Euler for the first step and BDF2 afterwards.
//! Each implicit system is solved with ILU(0)-preconditioned BiCGSTAB.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{Point2, DOMAIN_SIDE};
use crate::model::{MarketParams, OperatorCoeffs};
use crate::sparse::{bicgstab, Csr, Ilu0};

/// Relative residual target of the linear solves.
pub const SOLVER_TOL: f64 = 1e-12;
const MAX_ITER: usize = 5000;
/// Growth of `‖values‖∞` over the initial data that counts as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

/// One time level of the reference on the `(N+1)²` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FdGrid {
    pub h: f64,
    pub n: usize,
    pub t: f64,
    /// Row-major in `y`: the value at `(i h, j h)` is `values[j (N+1) + i]`.
    pub values: Vec<f64>,
}

impl FdGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * (self.n + 1) + i]
    }

    /// Bilinear interpolation; `p` is clamped to the square.
    pub fn interpolate(&self, p: Point2) -> f64 {
        let n = self.n;
        let fx = (p.x / self.h).clamp(0.0, n as f64);
        let fy = (p.y / self.h).clamp(0.0, n as f64);
        let i = (fx.floor() as usize).min(n - 1);
        let j = (fy.floor() as usize).min(n - 1);
        let (sx, sy) = (fx - i as f64, fy - j as f64);
        (1.0 - sx) * (1.0 - sy) * self.value(i, j)
            + sx * (1.0 - sy) * self.value(i + 1, j)
            + (1.0 - sx) * sy * self.value(i, j + 1)
            + sx * sy * self.value(i + 1, j + 1)
    }

    /// `x y value` lines, one per grid point.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        for j in 0..=self.n {
            for i in 0..=self.n {
                let _ = writeln!(
                    out,
                    "{:.16e} {:.16e} {:.16e}",
                    i as f64 * self.h,
                    j as f64 * self.h,
                    self.value(i, j)
                );
            }
        }
        out
    }
}

/// Stored time levels of one reference run.
#[derive(Debug, Clone)]
pub struct FdReference {
    pub n: usize,
    /// Number of time steps `M_fd`.
    pub steps: usize,
    pub market: MarketParams,
    /// Ascending in time, always including `t = 0` and `t = T`.
    pub slices: Vec<FdGrid>,
    /// Total BiCGSTAB iterations over the run.
    pub iterations: usize,
}

impl FdReference {
    pub fn h(&self) -> f64 {
        DOMAIN_SIDE / self.n as f64
    }

    pub fn times(&self) -> Vec<f64> {
        self.slices.iter().map(|s| s.t).collect()
    }

    pub fn slice_at(&self, t: f64) -> Result<&FdGrid> {
        let tol = 1e-9 * self.market.maturity.max(1.0);
        self.slices
            .iter()
            .find(|s| (s.t - t).abs() <= tol)
            .ok_or(Error::TimeNotStored { t })
    }

    pub fn interpolate(&self, p: Point2, t: f64) -> Result<f64> {
        Ok(self.slice_at(t)?.interpolate(p))
    }
}

fn index(n: usize, i: usize, j: usize) -> usize {
    j * (n + 1) + i
}

fn is_dirichlet(n: usize, i: usize, j: usize) -> bool {
    i == n || j == n
}

/// Stencil of the discrete operator `L_h` at grid point `(i, j)`, `i, j < N`.
fn stencil(market: &MarketParams, n: usize, i: usize, j: usize) -> Vec<(usize, f64)> {
    let h = DOMAIN_SIDE / n as f64;
    let p = Point2::new(i as f64 * h, j as f64 * h);
    let c = OperatorCoeffs::at(p, market);
    let ax = c.cx / (2.0 * h);
    let ay = c.cy / (2.0 * h);
    let axx = c.cxx / (h * h);
    let ayy = c.cyy / (h * h);
    let axy = c.cxy / (4.0 * h * h);
    let mut row = vec![(index(n, i, j), c.c - 2.0 * axx - 2.0 * ayy)];
    let mut push = |di: isize, dj: isize, w: f64| {
        if w != 0.0 {
            let ii = (i as isize + di) as usize;
            let jj = (j as isize + dj) as usize;
            row.push((index(n, ii, jj), w));
        }
    };
    // on the axes the coefficients that reach outside the square are zero
    push(1, 0, axx + ax);
    push(-1, 0, axx - ax);
    push(0, 1, ayy + ay);
    push(0, -1, ayy - ay);
    push(1, 1, axy);
    push(-1, -1, axy);
    push(1, -1, -axy);
    push(-1, 1, -axy);
    row
}

/// `L_h u` at every grid point; zero on the Dirichlet edges.
pub fn apply_stencil(market: &MarketParams, n: usize, u: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; (n + 1) * (n + 1)];
    for j in 0..n {
        for i in 0..n {
            out[index(n, i, j)] = stencil(market, n, i, j)
                .iter()
                .map(|&(k, w)| w * u[k])
                .sum();
        }
    }
    out
}

/// `I − γΔt L_h` with identity rows on the Dirichlet edges.
fn step_matrix(market: &MarketParams, n: usize, gamma_dt: f64) -> Csr {
    let mut rows = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            let k = index(n, i, j);
            if is_dirichlet(n, i, j) {
                rows.push(vec![(k, 1.0)]);
            } else {
                let mut row: Vec<(usize, f64)> = stencil(market, n, i, j)
                    .into_iter()
                    .map(|(c, w)| (c, -gamma_dt * w))
                    .collect();
                row.push((k, 1.0));
                rows.push(row);
            }
        }
    }
    Csr::from_rows(rows)
}

fn grid_points(n: usize) -> impl Iterator<Item = (usize, usize, Point2)> {
    let h = DOMAIN_SIDE / n as f64;
    (0..=n).flat_map(move |j| (0..=n).map(move |i| (i, j, Point2::new(i as f64 * h, j as f64 * h))))
}

/// Runs the reference with every time level stored.
pub fn fd_solve(market: &MarketParams, n: usize, steps: usize) -> Result<FdReference> {
    fd_solve_strided(market, n, steps, 1)
}

/// Runs the reference storing every `stride`-th level (plus `t = T`).
pub fn fd_solve_strided(
    market: &MarketParams,
    n: usize,
    steps: usize,
    stride: usize,
) -> Result<FdReference> {
    market.validate()?;
    if n < 8 {
        return Err(Error::invalid("fd-reference", format!("grid size N must be at least 8, got {n}")));
    }
    if steps < 2 {
        return Err(Error::invalid("fd-reference", format!("M_fd must be at least 2, got {steps}")));
    }
    if stride == 0 {
        return Err(Error::invalid("fd-reference", "stride must be positive"));
    }
    let h = DOMAIN_SIDE / n as f64;
    let t_end = market.maturity;
    let dt = t_end / steps as f64;
    let time = |l: usize| if l == steps { t_end } else { t_end * l as f64 / steps as f64 };

    let u0: Vec<f64> = grid_points(n).map(|(_, _, p)| market.payoff(p)).collect();
    let limit = DIVERGENCE_FACTOR * u0.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let mut slices = vec![FdGrid { h, n, t: 0.0, values: u0.clone() }];

    let m1 = step_matrix(market, n, dt);
    let ilu1 = Ilu0::new(&m1);
    let m2 = step_matrix(market, n, 2.0 / 3.0 * dt);
    let ilu2 = Ilu0::new(&m2);

    let mut prev2: Vec<f64> = Vec::new();
    let mut prev = u0;
    let mut iterations = 0;
    for l in 1..=steps {
        let t = time(l);
        let mut rhs: Vec<f64> = if l == 1 {
            prev.clone()
        } else {
            prev.iter().zip(&prev2).map(|(a, b)| 4.0 / 3.0 * a - b / 3.0).collect()
        };
        for (i, j, p) in grid_points(n) {
            if is_dirichlet(n, i, j) {
                rhs[index(n, i, j)] = market.far_field(p, t);
            }
        }
        let mut x: Vec<f64> = if l == 1 {
            prev.clone()
        } else {
            prev.iter().zip(&prev2).map(|(a, b)| 2.0 * a - b).collect()
        };
        let (a, pre) = if l == 1 { (&m1, &ilu1) } else { (&m2, &ilu2) };
        let its = bicgstab(a, pre, &rhs, &mut x, SOLVER_TOL, MAX_ITER)
            .ok_or(Error::ReferenceDiverged { step: l })?;
        iterations += its;
        // the identity rows are only solved to tolerance; pin them exactly
        for (i, j, p) in grid_points(n) {
            if is_dirichlet(n, i, j) {
                x[index(n, i, j)] = market.far_field(p, t);
            }
        }
        if x.iter().any(|v| !v.is_finite() || v.abs() > limit) {
            return Err(Error::ReferenceDiverged { step: l });
        }
        if l % stride == 0 || l == steps {
            slices.push(FdGrid { h, n, t, values: x.clone() });
        }
        prev2 = std::mem::replace(&mut prev, x);
    }
    Ok(FdReference {
        n,
        steps,
        market: *market,
        slices,
        iterations,
    })
}
