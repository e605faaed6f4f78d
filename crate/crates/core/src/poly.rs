//! Local Lagrange interpolants on the covering subsets.
//!
//! Polynomials are expanded in the shifted and scaled monomials
//! `u^a v^b`, `u = (x − cx)/ρ`, `v = (y − cy)/ρ`, ordered by total degree
//! (`1, u, v, u², uv, v², …`).

use std::ops::{Add, AddAssign, Mul};

use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::linalg;

/// Value, gradient `[∂x, ∂y]` and Hessian `[∂xx, ∂xy, ∂yy]` of a scalar field
/// at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub v: f64,
    pub g: [f64; 2],
    pub h: [f64; 3],
}

impl Jet {
    pub const ZERO: Jet = Jet {
        v: 0.0,
        g: [0.0; 2],
        h: [0.0; 3],
    };

    pub const fn constant(v: f64) -> Self {
        Jet {
            v,
            g: [0.0; 2],
            h: [0.0; 3],
        }
    }

    /// Product rule.
    #[inline]
    pub fn product(&self, o: &Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            g: [
                self.g[0] * o.v + self.v * o.g[0],
                self.g[1] * o.v + self.v * o.g[1],
            ],
            h: [
                self.h[0] * o.v + 2.0 * self.g[0] * o.g[0] + self.v * o.h[0],
                self.h[1] * o.v + self.g[0] * o.g[1] + self.g[1] * o.g[0] + self.v * o.h[1],
                self.h[2] * o.v + 2.0 * self.g[1] * o.g[1] + self.v * o.h[2],
            ],
        }
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        [self.v, self.g[0], self.g[1], self.h[0], self.h[1], self.h[2]]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

impl Add for Jet {
    type Output = Jet;
    #[inline]
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            g: [self.g[0] + o.g[0], self.g[1] + o.g[1]],
            h: [self.h[0] + o.h[0], self.h[1] + o.h[1], self.h[2] + o.h[2]],
        }
    }
}

impl AddAssign for Jet {
    #[inline]
    fn add_assign(&mut self, o: Jet) {
        *self = *self + o;
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    #[inline]
    fn mul(self, s: f64) -> Jet {
        Jet {
            v: self.v * s,
            g: [self.g[0] * s, self.g[1] * s],
            h: [self.h[0] * s, self.h[1] * s, self.h[2] * s],
        }
    }
}

/// Dimension `(p+1)(p+2)/2` of bivariate polynomials of total degree `p`.
pub const fn poly_dim(p: usize) -> usize {
    (p + 1) * (p + 2) / 2
}

/// Exponents `(a, b)` of the graded monomial basis of degree `p`.
pub fn monomial_exponents(p: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(poly_dim(p));
    for d in 0..=p as u32 {
        for b in 0..=d {
            out.push((d - b, b));
        }
    }
    out
}

/// Shifted/scaled monomial basis of degree `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialBasis {
    pub center: Point2,
    pub scale: f64,
    exps: Vec<(u32, u32)>,
}

impl MonomialBasis {
    pub fn new(center: Point2, scale: f64, p: usize) -> Self {
        Self {
            center,
            scale,
            exps: monomial_exponents(p),
        }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> usize {
        self.exps.last().map_or(0, |e| (e.0 + e.1) as usize)
    }

    fn local(&self, x: Point2) -> (f64, f64) {
        (
            (x.x - self.center.x) / self.scale,
            (x.y - self.center.y) / self.scale,
        )
    }

    /// Monomial values only.
    pub fn values_into(&self, x: Point2, out: &mut [f64]) {
        let (u, v) = self.local(x);
        let p = self.degree();
        let (up, vp) = powers(u, v, p);
        for (o, &(a, b)) in out.iter_mut().zip(&self.exps) {
            *o = up[a as usize] * vp[b as usize];
        }
    }

    /// Monomial jets with respect to `x` and `y`.
    pub fn jets_into(&self, x: Point2, out: &mut [Jet]) {
        let (u, v) = self.local(x);
        let p = self.degree();
        let (up, vp) = powers(u, v, p);
        let s = 1.0 / self.scale;
        let s2 = s * s;
        let pw = |t: &[f64], k: i64| if k < 0 { 0.0 } else { t[k as usize] };
        for (o, &(a, b)) in out.iter_mut().zip(&self.exps) {
            let (a, b) = (a as i64, b as i64);
            let (af, bf) = (a as f64, b as f64);
            *o = Jet {
                v: pw(&up, a) * pw(&vp, b),
                g: [
                    af * pw(&up, a - 1) * pw(&vp, b) * s,
                    bf * pw(&up, a) * pw(&vp, b - 1) * s,
                ],
                h: [
                    af * (af - 1.0) * pw(&up, a - 2) * pw(&vp, b) * s2,
                    af * bf * pw(&up, a - 1) * pw(&vp, b - 1) * s2,
                    bf * (bf - 1.0) * pw(&up, a) * pw(&vp, b - 2) * s2,
                ],
            };
        }
    }
}

fn powers(u: f64, v: f64, p: usize) -> (Vec<f64>, Vec<f64>) {
    let mut up = vec![1.0; p + 1];
    let mut vp = vec![1.0; p + 1];
    for k in 1..=p {
        up[k] = up[k - 1] * u;
        vp[k] = vp[k - 1] * v;
    }
    (up, vp)
}

/// Fundamental Lagrange polynomials `λ_1, …, λ_τ` of one covering subset.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalInterpolant {
    pub subset_index: usize,
    /// Global node indices of the subset, in the order of the `λ_k`.
    pub nodes: Vec<usize>,
    basis: MonomialBasis,
    /// Row `m`, column `k`: coefficient of monomial `m` in `λ_k`.
    coeffs: Vec<f64>,
}

/// Largest accepted 1-norm condition number of a local Vandermonde matrix.
pub const MAX_VANDERMONDE_COND: f64 = 1e8;

impl LocalInterpolant {
    /// Inverts the subset's Vandermonde matrix in the given basis.
    pub fn new(
        subset_index: usize,
        nodes: Vec<usize>,
        points: &[Point2],
        basis: MonomialBasis,
    ) -> Result<Self> {
        let tau = basis.dim();
        if nodes.len() != tau {
            return Err(Error::DegenerateSubset {
                subset: subset_index,
            });
        }
        let mut row = vec![0.0; tau];
        let mut vander = Mat::<f64>::zeros(tau, tau);
        for (r, &i) in nodes.iter().enumerate() {
            basis.values_into(points[i], &mut row);
            for (c, &val) in row.iter().enumerate() {
                vander[(r, c)] = val;
            }
        }
        let lu = vander.partial_piv_lu();
        let inv = lu.inverse();
        let cond = linalg::norm_1(vander.as_ref()) * linalg::norm_1(inv.as_ref());
        if !cond.is_finite() || cond > MAX_VANDERMONDE_COND {
            return Err(Error::DegenerateSubset {
                subset: subset_index,
            });
        }
        let mut coeffs = vec![0.0; tau * tau];
        for m in 0..tau {
            for k in 0..tau {
                coeffs[m * tau + k] = inv[(m, k)];
            }
        }
        let interp = Self {
            subset_index,
            nodes,
            basis,
            coeffs,
        };
        if interp.kronecker_residual(points) > 1e-10 {
            return Err(Error::DegenerateSubset {
                subset: subset_index,
            });
        }
        Ok(interp)
    }

    pub fn tau(&self) -> usize {
        self.nodes.len()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// Max deviation of `λ_i(x_{j_k})` from `δ_ik`.
    pub fn kronecker_residual(&self, points: &[Point2]) -> f64 {
        let tau = self.tau();
        let mut vals = vec![0.0; tau];
        let mut worst = 0.0f64;
        for (k, &node) in self.nodes.iter().enumerate() {
            self.values_into(points[node], &mut vals);
            for (i, v) in vals.iter().enumerate() {
                let target = if i == k { 1.0 } else { 0.0 };
                let dev = (v - target).abs();
                if !dev.is_finite() {
                    return f64::INFINITY;
                }
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// `λ_k(x)` for every `k`.
    pub fn values_into(&self, x: Point2, out: &mut [f64]) {
        let tau = self.tau();
        let mut phi = vec![0.0; tau];
        self.basis.values_into(x, &mut phi);
        for (k, o) in out.iter_mut().enumerate() {
            *o = (0..tau).map(|m| self.coeffs[m * tau + k] * phi[m]).sum();
        }
    }

    /// Values, gradients and Hessians of every `λ_k` at `x`.
    pub fn jets_into(&self, x: Point2, out: &mut [Jet]) {
        let tau = self.tau();
        let mut phi = vec![Jet::ZERO; tau];
        self.basis.jets_into(x, &mut phi);
        for (k, o) in out.iter_mut().enumerate() {
            let mut acc = Jet::ZERO;
            for (m, ph) in phi.iter().enumerate() {
                acc += *ph * self.coeffs[m * tau + k];
            }
            *o = acc;
        }
    }

    pub fn jets(&self, x: Point2) -> Vec<Jet> {
        let mut out = vec![Jet::ZERO; self.tau()];
        self.jets_into(x, &mut out);
        out
    }

    /// `p_j[f](x) = Σ_k λ_k(x) f(x_{j_k})` for nodal data indexed like the node set.
    pub fn interpolate(&self, data: &[f64], x: Point2) -> f64 {
        let mut vals = vec![0.0; self.tau()];
        self.values_into(x, &mut vals);
        vals.iter()
            .zip(&self.nodes)
            .map(|(l, &i)| l * data[i])
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::uniform_simplex_nodes;

    fn simplex_interpolant(p: usize) -> (Vec<Point2>, LocalInterpolant) {
        let pts = uniform_simplex_nodes(p);
        let nodes: Vec<usize> = (0..pts.len()).collect();
        let basis = MonomialBasis::new(Point2::ORIGIN, 8.0, p);
        let li = LocalInterpolant::new(0, nodes, &pts, basis).unwrap();
        (pts, li)
    }

    fn lcg(state: &mut u64) -> f64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (*state >> 11) as f64 / (1u64 << 53) as f64
    }

    #[test]
    fn exponents_are_graded() {
        assert_eq!(
            monomial_exponents(2),
            vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        );
        assert_eq!(poly_dim(2), 6);
        assert_eq!(poly_dim(3), 10);
    }

    #[test]
    fn kronecker_and_quadratic_reproduction() {
        let (pts, li) = simplex_interpolant(2);
        assert!(li.kronecker_residual(&pts) < 1e-12);
        let data: Vec<f64> = pts.iter().map(|p| p.x * p.x).collect();
        assert!((li.interpolate(&data, Point2::new(4.0, 0.0)) - 16.0).abs() < 1e-12);
        assert!((li.interpolate(&data, Point2::new(1.7, 3.1)) - 1.7 * 1.7).abs() < 1e-12);
        let ones = vec![1.0; pts.len()];
        assert!((li.interpolate(&ones, Point2::new(6.0, 5.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jet_sums_vanish() {
        let (_, li) = simplex_interpolant(2);
        let mut s = 7u64;
        for _ in 0..100 {
            let x = Point2::new(8.0 * lcg(&mut s), 8.0 * lcg(&mut s));
            let total = li.jets(x).into_iter().fold(Jet::ZERO, |a, b| a + b);
            assert!((total.v - 1.0).abs() < 1e-12);
            assert!(total.g.iter().chain(&total.h).all(|c| c.abs() < 1e-12));
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let (_, li) = simplex_interpolant(3);
        let mut s = 11u64;
        let h = 1e-6 * 8.0;
        let mut vp = vec![0.0; li.tau()];
        let mut vm = vec![0.0; li.tau()];
        for _ in 0..100 {
            let x = Point2::new(8.0 * lcg(&mut s), 8.0 * lcg(&mut s));
            let jets = li.jets(x);
            for (axis, e) in [(0, (h, 0.0)), (1, (0.0, h))] {
                li.values_into(Point2::new(x.x + e.0, x.y + e.1), &mut vp);
                li.values_into(Point2::new(x.x - e.0, x.y - e.1), &mut vm);
                for k in 0..li.tau() {
                    let fd = (vp[k] - vm[k]) / (2.0 * h);
                    let an = jets[k].g[axis];
                    assert!((fd - an).abs() <= 1e-6 * an.abs().max(1.0), "{fd} vs {an}");
                }
            }
        }
    }

    #[test]
    fn quadratic_hessians_are_constant() {
        let (_, li) = simplex_interpolant(2);
        let a = li.jets(Point2::new(0.3, 0.9));
        let b = li.jets(Point2::new(5.1, 2.2));
        for (ja, jb) in a.iter().zip(&b) {
            for c in 0..3 {
                assert!((ja.h[c] - jb.h[c]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn degree_p_reproduction_random_subsets() {
        let mut s = 3u64;
        for p in 1..=3 {
            let tau = poly_dim(p);
            let pts: Vec<Point2> = (0..tau)
                .map(|_| Point2::new(1.0 + lcg(&mut s), 1.0 + lcg(&mut s)))
                .collect();
            let basis = MonomialBasis::new(pts[0], 1.0, p);
            let Ok(li) = LocalInterpolant::new(0, (0..tau).collect(), &pts, basis) else {
                continue;
            };
            let g = |q: Point2| {
                let mut acc = 0.3;
                for (a, b) in monomial_exponents(p) {
                    acc += 0.7 * q.x.powi(a as i32) * q.y.powi(b as i32) * (1.0 + a as f64 - b as f64);
                }
                acc
            };
            let data: Vec<f64> = pts.iter().map(|&q| g(q)).collect();
            for _ in 0..20 {
                let x = Point2::new(1.0 + lcg(&mut s), 1.0 + lcg(&mut s));
                let want = g(x);
                assert!((li.interpolate(&data, x) - want).abs() <= 1e-9 * want.abs().max(1.0));
            }
        }
    }

    #[test]
    fn collinear_subset_is_rejected() {
        let pts: Vec<Point2> = (0..6).map(|k| Point2::new(k as f64, 0.0)).collect();
        let basis = MonomialBasis::new(pts[0], 5.0, 2);
        assert!(matches!(
            LocalInterpolant::new(4, (0..6).collect(), &pts, basis),
            Err(Error::DegenerateSubset { subset: 4 })
        ));
    }

    #[test]
    fn product_rule() {
        let a = Jet { v: 2.0, g: [1.0, -1.0], h: [0.5, 0.25, 2.0] };
        let b = Jet { v: -1.0, g: [3.0, 0.5], h: [1.0, -2.0, 0.0] };
        let p = a.product(&b);
        assert_eq!(p.v, -2.0);
        assert_eq!(p.g, [1.0 * -1.0 + 2.0 * 3.0, -1.0 * -1.0 + 2.0 * 0.5]);
        assert_eq!(p.h[1], 0.25 * -1.0 + 1.0 * 0.5 + -1.0 * 3.0 + 2.0 * -2.0);
    }
}
