//! Multinode Shepard weights `B_{μ,j}` and the cardinal basis `W_{μ,i}`.
//!
//! With `α_j(x) = Π_ℓ ‖x − x_{j_ℓ}‖^{−μ}` the weights are
//! `B_j = α_j / Σ_k α_k` and the cardinal functions are
//! `W_i = Σ_{j ∈ J_i} B_j λ_{j,i}`.
//!
//! All `α_j` are multiplied by `‖x − x_c‖^μ`, `x_c` the node nearest to `x`.
//! For subsets containing `x_c` this cancels the singular factor, for the
//! others it adds a factor that vanishes to order `μ` at `x_c`. The ratio is
//! unchanged, the member weights stay smooth up to the node, and the values
//! at `x_c` itself are the limits. The exponents are handled in log space and
//! shifted by their maximum before exponentiation.

use std::collections::BTreeMap;

use crate::covering::{build_covering, Covering};
use crate::error::{Error, Result};
use crate::geometry::{NodeSet, Point2, DOMAIN_SIDE};
use crate::poly::{Jet, LocalInterpolant};

/// Weights below `exp(WEIGHT_LOG_CUTOFF)` relative to the largest are skipped.
const WEIGHT_LOG_CUTOFF: f64 = -69.0;
/// Row entries whose value and derivatives are all below this are dropped.
pub const ROW_DROP_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShepardParams {
    /// Even exponent `μ ≥ 4`.
    pub mu: u32,
    /// Evaluation points closer than this to a node are snapped onto it.
    pub near_node_tol: f64,
}

impl Default for ShepardParams {
    fn default() -> Self {
        Self::with_mu(4)
    }
}

impl ShepardParams {
    /// `near_node_tol` is `1e-8` times the domain diameter.
    pub fn with_mu(mu: u32) -> Self {
        Self {
            mu,
            near_node_tol: 1e-8 * DOMAIN_SIDE * std::f64::consts::SQRT_2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu <= 2 || !self.mu.is_multiple_of(2) {
            return Err(Error::invalid(
                "shepard-basis",
                format!("mu must be an even integer > 2, got {}", self.mu),
            ));
        }
        if !(self.near_node_tol > 0.0) {
            return Err(Error::invalid("shepard-basis", "near_node_tol must be positive"));
        }
        Ok(())
    }
}

impl Jet {
    /// Quotient rule for `self / den`.
    #[inline]
    pub fn quotient(&self, den: &Jet) -> Jet {
        let b = self.v / den.v;
        let gx = (self.g[0] - b * den.g[0]) / den.v;
        let gy = (self.g[1] - b * den.g[1]) / den.v;
        Jet {
            v: b,
            g: [gx, gy],
            h: [
                (self.h[0] - b * den.h[0] - 2.0 * gx * den.g[0]) / den.v,
                (self.h[1] - b * den.h[1] - gx * den.g[1] - gy * den.g[0]) / den.v,
                (self.h[2] - b * den.h[2] - 2.0 * gy * den.g[1]) / den.v,
            ],
        }
    }
}

/// Shepard weights at one point: the subsets with non-negligible `B_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightEval {
    /// Point actually evaluated (snapped onto a node when very close).
    pub point: Point2,
    /// Node the point was snapped onto, if any.
    pub snapped: Option<usize>,
    /// `(j, B_j)` for every retained subset, ascending in `j`.
    pub weights: Vec<(usize, Jet)>,
}

impl WeightEval {
    /// `B_j` jet, zero if the subset was not retained.
    pub fn get(&self, j: usize) -> Jet {
        self.weights
            .binary_search_by_key(&j, |w| w.0)
            .map_or(Jet::ZERO, |k| self.weights[k].1)
    }
}

/// Cardinal functions with nonzero contribution at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct ShepardRow {
    pub eval_point: Point2,
    pub snapped: Option<usize>,
    /// `(i, W_i)` jets, ascending in `i`.
    pub entries: Vec<(usize, Jet)>,
}

impl ShepardRow {
    pub fn get(&self, i: usize) -> Jet {
        self.entries
            .binary_search_by_key(&i, |e| e.0)
            .map_or(Jet::ZERO, |k| self.entries[k].1)
    }

    pub fn sum(&self) -> Jet {
        self.entries.iter().fold(Jet::ZERO, |acc, e| acc + e.1)
    }

    /// `Σ_i W_i f_i` as a jet.
    pub fn apply(&self, data: &[f64]) -> Jet {
        self.entries
            .iter()
            .fold(Jet::ZERO, |acc, &(i, w)| acc + w * data[i])
    }
}

/// Node set, covering, local interpolants and weight parameters: everything
/// needed to evaluate the multinode cardinal basis.
#[derive(Debug, Clone)]
pub struct ShepardBasis {
    nodes: NodeSet,
    covering: Covering,
    interpolants: Vec<LocalInterpolant>,
    params: ShepardParams,
}

impl ShepardBasis {
    pub fn new(nodes: NodeSet, covering: Covering, params: ShepardParams) -> Result<Self> {
        params.validate()?;
        let interpolants = covering
            .subsets
            .iter()
            .enumerate()
            .map(|(j, t)| {
                LocalInterpolant::new(j, t.clone(), nodes.points(), covering.basis(&nodes, j))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            nodes,
            covering,
            interpolants,
            params,
        })
    }

    /// Builds the covering with degree `p` and surplus `q`, then the basis.
    pub fn build(nodes: NodeSet, p: usize, q: usize, params: ShepardParams) -> Result<Self> {
        let covering = build_covering(&nodes, p, q)?;
        Self::new(nodes, covering, params)
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn covering(&self) -> &Covering {
        &self.covering
    }

    pub fn interpolants(&self) -> &[LocalInterpolant] {
        &self.interpolants
    }

    pub fn params(&self) -> &ShepardParams {
        &self.params
    }

    /// `B_{μ,j}` with first and second derivatives at `x`.
    pub fn eval_weights(&self, x: Point2) -> WeightEval {
        let pts = self.nodes.points();
        let n = pts.len();
        let mu = self.params.mu as f64;
        let half_mu = 0.5 * mu;

        let mut d2: Vec<f64> = pts.iter().map(|p| p.dist_sq(&x)).collect();
        let c = (0..n)
            .min_by(|&a, &b| d2[a].total_cmp(&d2[b]).then(a.cmp(&b)))
            .expect("empty node set");
        let snapped = d2[c].sqrt() < self.params.near_node_tol;
        let x = if snapped {
            let xc = pts[c];
            for (d, p) in d2.iter_mut().zip(pts) {
                *d = p.dist_sq(&xc);
            }
            xc
        } else {
            x
        };
        let logd2: Vec<f64> = d2.iter().map(|d| d.ln()).collect();

        let mut member = vec![false; self.covering.len()];
        for &j in &self.covering.reverse[c] {
            member[j] = true;
        }

        // log of the regularized α_j
        let mut expo = vec![f64::NEG_INFINITY; self.covering.len()];
        for (j, t) in self.covering.subsets.iter().enumerate() {
            if member[j] {
                expo[j] = -half_mu * t.iter().filter(|&&l| l != c).map(|&l| logd2[l]).sum::<f64>();
            } else if !snapped {
                expo[j] = -half_mu * t.iter().map(|&l| logd2[l]).sum::<f64>() + half_mu * logd2[c];
            }
        }
        let emax = expo.iter().copied().fold(f64::NEG_INFINITY, f64::max);

        // derivatives of −(μ/2) log ‖x − x_l‖²
        let log_jet = |l: usize| -> ([f64; 2], [f64; 3]) {
            let rx = x.x - pts[l].x;
            let ry = x.y - pts[l].y;
            let inv = 1.0 / d2[l];
            let inv2 = inv * inv;
            (
                [-mu * rx * inv, -mu * ry * inv],
                [
                    -mu * (inv - 2.0 * rx * rx * inv2),
                    -mu * (-2.0 * rx * ry * inv2),
                    -mu * (inv - 2.0 * ry * ry * inv2),
                ],
            )
        };

        let mut alphas: Vec<(usize, Jet)> = Vec::new();
        let mut total = Jet::ZERO;
        for (j, t) in self.covering.subsets.iter().enumerate() {
            let shifted = expo[j] - emax;
            if !(shifted > WEIGHT_LOG_CUTOFF) {
                continue;
            }
            let mut g = [0.0; 2];
            let mut h = [0.0; 3];
            for &l in t.iter().filter(|&&l| l != c) {
                let (gl, hl) = log_jet(l);
                g[0] += gl[0];
                g[1] += gl[1];
                h[0] += hl[0];
                h[1] += hl[1];
                h[2] += hl[2];
            }
            if !member[j] {
                let (gc, hc) = log_jet(c);
                g[0] -= gc[0];
                g[1] -= gc[1];
                h[0] -= hc[0];
                h[1] -= hc[1];
                h[2] -= hc[2];
            }
            let a = shifted.exp();
            let jet = Jet {
                v: a,
                g: [a * g[0], a * g[1]],
                h: [
                    a * (h[0] + g[0] * g[0]),
                    a * (h[1] + g[0] * g[1]),
                    a * (h[2] + g[1] * g[1]),
                ],
            };
            total += jet;
            alphas.push((j, jet));
        }

        let weights = alphas
            .into_iter()
            .map(|(j, a)| (j, a.quotient(&total)))
            .collect();
        WeightEval {
            point: x,
            snapped: snapped.then_some(c),
            weights,
        }
    }

    /// Cardinal functions `W_{μ,i}` with derivatives at `x`.
    pub fn eval_row(&self, x: Point2) -> ShepardRow {
        let we = self.eval_weights(x);
        let mut acc: BTreeMap<usize, Jet> = BTreeMap::new();
        let mut lam = vec![Jet::ZERO; self.covering.tau];
        for &(j, b) in &we.weights {
            let li = &self.interpolants[j];
            li.jets_into(we.point, &mut lam);
            for (k, &node) in li.nodes.iter().enumerate() {
                *acc.entry(node).or_insert(Jet::ZERO) += b.product(&lam[k]);
            }
        }
        ShepardRow {
            eval_point: we.point,
            snapped: we.snapped,
            entries: acc
                .into_iter()
                .filter(|(_, w)| w.max_abs() >= ROW_DROP_TOL)
                .collect(),
        }
    }

    /// Values `W_{μ,i}(x)` only.
    pub fn eval_values(&self, x: Point2) -> Vec<(usize, f64)> {
        let we = self.eval_weights(x);
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        let mut lam = vec![0.0; self.covering.tau];
        for &(j, b) in &we.weights {
            let li = &self.interpolants[j];
            li.values_into(we.point, &mut lam);
            for (k, &node) in li.nodes.iter().enumerate() {
                *acc.entry(node).or_insert(0.0) += b.v * lam[k];
            }
        }
        acc.into_iter()
            .filter(|(_, w)| w.abs() >= ROW_DROP_TOL)
            .collect()
    }

    /// Multinode Shepard interpolant `M_μ[f](x) = Σ_i W_{μ,i}(x) f_i`.
    pub fn interpolate(&self, data: &[f64], x: Point2) -> f64 {
        self.eval_values(x).iter().map(|&(i, w)| w * data[i]).sum()
    }
}
