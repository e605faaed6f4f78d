//! Two-asset Black-Scholes operator, basket call payoff and boundary data.
//!
//! Time runs forward from the payoff: `t` is time to maturity, `P(0, x) = Φ(x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::poly::Jet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MarketParams {
    /// Short interest rate.
    pub r: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    /// Correlation between the two assets.
    pub rho: f64,
    pub strike: f64,
    pub maturity: f64,
}

impl Default for MarketParams {
    fn default() -> Self {
        Self {
            r: 0.03,
            sigma1: 0.15,
            sigma2: 0.15,
            rho: 0.5,
            strike: 1.0,
            maturity: 1.0,
        }
    }
}

impl MarketParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.r.is_finite()
            && self.sigma1 >= 0.0
            && self.sigma2 >= 0.0
            && (-1.0..=1.0).contains(&self.rho)
            && self.strike > 0.0
            && self.maturity > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("bs-model", format!("{self:?}")))
        }
    }

    /// Basket call payoff `max((x + y)/2 − K, 0)`.
    pub fn payoff(&self, p: Point2) -> f64 {
        (0.5 * (p.x + p.y) - self.strike).max(0.0)
    }

    /// Far-field asymptotic value `(x + y)/2 − K e^{−rt}`.
    pub fn far_field(&self, p: Point2, t: f64) -> f64 {
        0.5 * (p.x + p.y) - self.strike * (-self.r * t).exp()
    }

    /// Near-field value at the origin.
    pub fn near_field(&self, _t: f64) -> f64 {
        0.0
    }

    /// `L P` at `p` from the value/gradient/Hessian bundle of `P`.
    pub fn apply_l(&self, p: Point2, jet: &Jet) -> f64 {
        OperatorCoeffs::at(p, self).apply(jet)
    }
}

/// Coefficients of `L` frozen at one point:
/// `L P = c·P + cx·Px + cy·Py + cxx·Pxx + cxy·Pxy + cyy·Pyy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorCoeffs {
    pub c: f64,
    pub cx: f64,
    pub cy: f64,
    pub cxx: f64,
    pub cxy: f64,
    pub cyy: f64,
}

impl OperatorCoeffs {
    pub fn at(p: Point2, m: &MarketParams) -> Self {
        Self {
            c: -m.r,
            cx: m.r * p.x,
            cy: m.r * p.y,
            cxx: 0.5 * m.sigma1 * m.sigma1 * p.x * p.x,
            cxy: m.rho * m.sigma1 * m.sigma2 * p.x * p.y,
            cyy: 0.5 * m.sigma2 * m.sigma2 * p.y * p.y,
        }
    }

    #[inline]
    pub fn apply(&self, j: &Jet) -> f64 {
        self.c * j.v
            + self.cx * j.g[0]
            + self.cy * j.g[1]
            + self.cxx * j.h[0]
            + self.cxy * j.h[1]
            + self.cyy * j.h[2]
    }
}
