//! Multinode Shepard collocation for the two-asset Black-Scholes equation.
//!
//! The pipeline is:
//!
//! 1. [`geometry`] builds a [`NodeSet`] on the triangle with vertices
//!    `(0,0)`, `(8,0)`, `(0,8)`: interior nodes, the origin, and far-field
//!    nodes on `x + y = 8`.
//! 2. [`covering`] picks, for every node, a unisolvent subset of `τ` nearby
//!    nodes by greedy Leja selection.
//! 3. [`poly`] builds the local Lagrange interpolants on each subset and
//!    [`shepard`] blends them into the multinode cardinal basis `W_i`.
//! 4. [`assembly`] applies the Black-Scholes operator from [`model`] to the
//!    basis at the interior nodes, producing the matrices `A` and `B`.
//! 5. [`timestep`] integrates the semi-discrete system with a backward Euler
//!    start followed by BDF2 (or BDF3).
//!
//! [`fd`] provides the finite-difference reference used to measure errors,
//! [`rbf`] a global multiquadric baseline, and [`experiment`] ties everything
//! into configuration-driven runs.

pub mod assembly;
pub mod covering;
pub mod error;
pub mod experiment;
pub mod fd;
pub mod geometry;
mod linalg;
pub mod model;
pub mod poly;
pub mod rbf;
pub mod shepard;
mod sparse;
pub mod timestep;

pub use assembly::{assemble, boundary_vector, BoundaryVector, SpatialSystem};
pub use covering::{build_covering, leja_select, nearest_neighbors, Covering};
pub use error::{Error, Result};
pub use experiment::{
    evaluation_grid, measure_errors, run_experiment, ErrorReport, ExperimentConfig,
    NodeConfig,
};
pub use fd::{fd_solve, FdGrid, FdReference};
pub use geometry::{NodeRole, NodeSet, Point2};
pub use model::{MarketParams, OperatorCoeffs};
pub use poly::{Jet, LocalInterpolant};
pub use rbf::RbfModel;
pub use shepard::{ShepardBasis, ShepardParams, ShepardRow};
pub use timestep::{Scheme, Trajectory};
