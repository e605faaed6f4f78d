//! Time integration of `dP/dt = A P + B b(t)` on the interior nodes.
//!
//! The first step is backward Euler; later steps use BDF2 (or BDF2 then BDF3).
//! The step size is uniform, so every distinct iteration matrix
//! `I − γ Δt A` is factored once per run.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::assembly::{boundary_vector, SpatialSystem};
use crate::error::{Error, Result};
use crate::geometry::NodeSet;
use crate::linalg::DenseLu;
use crate::model::MarketParams;

/// Condition estimates above this are reported as a singular step matrix.
pub const MAX_STEP_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Backward Euler throughout.
    Bdf1,
    #[default]
    Bdf2,
    Bdf3,
}

impl Scheme {
    pub fn order(&self) -> usize {
        match self {
            Scheme::Bdf1 => 1,
            Scheme::Bdf2 => 2,
            Scheme::Bdf3 => 3,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Bdf1 => "bdf1",
            Scheme::Bdf2 => "bdf2",
            Scheme::Bdf3 => "bdf3",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bdf1" => Ok(Scheme::Bdf1),
            "bdf2" => Ok(Scheme::Bdf2),
            "bdf3" => Ok(Scheme::Bdf3),
            other => Err(Error::invalid("timestepper", format!("unknown scheme {other}"))),
        }
    }
}

/// When the far-field vector `b` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryUpdate {
    /// `b(t^ℓ)` at every level.
    #[default]
    PerStep,
    /// `b(t^1)` for all levels.
    FrozenFirstStep,
}

/// Constant-step BDF coefficients `(γ, [β_1, …, β_k])` for
/// `P^n = Σ β_i P^{n−i} + γ Δt (A P^n + B b)`.
fn bdf_coefficients(order: usize) -> (f64, &'static [f64]) {
    match order {
        1 => (1.0, &[1.0]),
        2 => (2.0 / 3.0, &[4.0 / 3.0, -1.0 / 3.0]),
        // 11/6 P^n − 3 P^{n−1} + 3/2 P^{n−2} − 1/3 P^{n−3} = Δt f
        3 => (6.0 / 11.0, &[18.0 / 11.0, -9.0 / 11.0, 2.0 / 11.0]),
        _ => unreachable!("BDF order {order}"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `t^0 = 0, …, t^M = T`.
    pub times: Vec<f64>,
    /// Interior solution `P^ℓ` at every level.
    pub states: Vec<Vec<f64>>,
    /// Uniform step `T / M`.
    pub dt: f64,
    pub scheme: Scheme,
    /// 1-norm condition estimates of the iteration matrices, in the order
    /// they were first used (BDF1, BDF2, BDF3).
    pub conditions: Vec<f64>,
    /// Number of LU factorizations performed during the run.
    pub factorizations: usize,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn cond_first(&self) -> f64 {
        self.conditions[0]
    }

    /// Condition estimate of the matrix used from the second step onward.
    pub fn cond_rest(&self) -> f64 {
        *self.conditions.last().unwrap()
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().unwrap()
    }
}

/// `P^0_i = Φ(x_i)` at the interior nodes.
pub fn initial_condition(nodes: &NodeSet, market: &MarketParams) -> Vec<f64> {
    nodes.interior().iter().map(|&p| market.payoff(p)).collect()
}

fn iteration_matrix(a: &Mat<f64>, gamma_dt: f64) -> Mat<f64> {
    let n = a.nrows();
    Mat::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        id - gamma_dt * a[(i, j)]
    })
}

struct StepMatrix {
    lu: DenseLu,
    condition: f64,
}

impl StepMatrix {
    fn new(a: &Mat<f64>, gamma_dt: f64) -> Result<Self> {
        let lu = DenseLu::new(iteration_matrix(a, gamma_dt).as_ref());
        let condition = lu.condition_estimate();
        if !condition.is_finite() || condition > MAX_STEP_CONDITION {
            return Err(Error::SingularStepMatrix { condition });
        }
        Ok(Self { lu, condition })
    }
}

fn bdf_step(
    system: &SpatialSystem,
    solver: &StepMatrix,
    order: usize,
    history: &[&[f64]],
    dt: f64,
    boundary: &[f64],
) -> Vec<f64> {
    let (gamma, betas) = bdf_coefficients(order);
    let mut rhs: Vec<f64> = system
        .apply_boundary(boundary)
        .into_iter()
        .map(|v| gamma * dt * v)
        .collect();
    for (beta, prev) in betas.iter().zip(history) {
        for (r, p) in rhs.iter_mut().zip(prev.iter()) {
            *r += beta * p;
        }
    }
    solver.lu.solve(&rhs)
}

/// One backward Euler step `(I − Δt A) P^1 = P^0 + Δt B b(t^1)`.
pub fn step_bdf1(
    system: &SpatialSystem,
    nodes: &NodeSet,
    market: &MarketParams,
    p0: &[f64],
    dt: f64,
    t1: f64,
) -> Result<Vec<f64>> {
    check_dt(dt)?;
    let solver = StepMatrix::new(&system.a, dt)?;
    let b = boundary_vector(nodes, market, t1);
    Ok(bdf_step(system, &solver, 1, &[p0], dt, &b.values))
}

/// One BDF2 step
/// `(I − ⅔Δt A) P^n = ⁴⁄₃ P^{n−1} − ⅓ P^{n−2} + ⅔ Δt B b(t^n)`.
pub fn step_bdf2(
    system: &SpatialSystem,
    nodes: &NodeSet,
    market: &MarketParams,
    p_prev: &[f64],
    p_prev2: &[f64],
    dt: f64,
    t: f64,
) -> Result<Vec<f64>> {
    check_dt(dt)?;
    let solver = StepMatrix::new(&system.a, 2.0 / 3.0 * dt)?;
    let b = boundary_vector(nodes, market, t);
    Ok(bdf_step(system, &solver, 2, &[p_prev, p_prev2], dt, &b.values))
}

fn check_dt(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("timestepper", format!("dt must be positive, got {dt}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub steps: usize,
    pub scheme: Scheme,
    pub boundary: BoundaryUpdate,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            steps: 20,
            scheme: Scheme::Bdf2,
            boundary: BoundaryUpdate::PerStep,
        }
    }
}

/// Integrates from the payoff at `t = 0` to the maturity in `steps` uniform steps.
pub fn run(
    system: &SpatialSystem,
    nodes: &NodeSet,
    market: &MarketParams,
    opts: RunOptions,
) -> Result<Trajectory> {
    let m = opts.steps;
    let order = opts.scheme.order();
    if m < order.max(2) {
        return Err(Error::invalid(
            "timestepper",
            format!("{} needs at least {} steps, got {m}", opts.scheme.as_str(), order.max(2)),
        ));
    }
    let t_end = market.maturity;
    let dt = t_end / m as f64;
    let times: Vec<f64> = (0..=m)
        .map(|l| if l == m { t_end } else { t_end * l as f64 / m as f64 })
        .collect();

    let mut solvers: Vec<StepMatrix> = Vec::with_capacity(order);
    let mut states = vec![initial_condition(nodes, market)];
    let frozen = boundary_vector(nodes, market, times[1]).values;
    for l in 1..=m {
        let k = l.min(order);
        if solvers.len() < k {
            let (gamma, _) = bdf_coefficients(k);
            solvers.push(StepMatrix::new(&system.a, gamma * dt)?);
        }
        let b = match opts.boundary {
            BoundaryUpdate::PerStep => boundary_vector(nodes, market, times[l]).values,
            BoundaryUpdate::FrozenFirstStep => frozen.clone(),
        };
        let history: Vec<&[f64]> = (1..=k).map(|i| states[l - i].as_slice()).collect();
        let next = bdf_step(system, &solvers[k - 1], k, &history, dt, &b);
        states.push(next);
    }
    Ok(Trajectory {
        times,
        states,
        dt,
        scheme: opts.scheme,
        conditions: solvers.iter().map(|s| s.condition).collect(),
        factorizations: solvers.len(),
    })
}
