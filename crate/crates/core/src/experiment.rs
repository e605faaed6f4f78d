//! Configuration-driven experiments: node set, Shepard solve, optional
//! multiquadric baseline, error tables against the finite-difference
//! reference.
//!
//! Configs are TOML with one section per stage. Every field has a default,
//! so an empty file runs the Halton setup:
//!
//! ```toml
//! [nodes]
//! kind = "halton"      # halton | uniform | waldron | waldron+lines | rbf-fig1
//! total = 5000
//! boundary = 141
//!
//! [market]
//! r = 0.03
//! sigma1 = 0.15
//! sigma2 = 0.15
//! rho = 0.5
//! strike = 1.0
//! maturity = 1.0
//!
//! [shepard]
//! mu = 4
//! p = 2
//! # q defaults to 30 for the waldron kinds and 10 otherwise
//!
//! [time]
//! steps = 20
//! scheme = "bdf2"       # bdf1 | bdf2 | bdf3
//! boundary = "per-step" # per-step | frozen-first-step
//!
//! [evaluation]
//! resolution = 64
//!
//! [reference]
//! n = 512
//! steps = 520           # must be a multiple of time.steps
//!
//! [rbf]
//! enabled = true
//! # shape = 0.5         # defaults to twice the mean nearest-neighbour spacing
//!
//! [output]
//! dir = "out"
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::{assemble, boundary_vector, SparsitySummary};
use crate::error::{Error, Result};
use crate::fd::{fd_solve_strided, FdReference};
use crate::geometry::{
    enrich_with_lines, halton_nodeset, uniform_simplex_nodes, waldron_composite_nodes,
    CellDistribution, NodeSet, Point2, DOMAIN_SIDE,
};
use crate::model::MarketParams;
use crate::rbf::{rbf_assemble, rbf_nodeset_fig1, RbfModel};
use crate::shepard::{ShepardBasis, ShepardParams};
use crate::timestep::{run, BoundaryUpdate, RunOptions, Scheme, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NodeConfig {
    Halton {
        #[serde(default = "default_halton_total")]
        total: usize,
        #[serde(default = "default_halton_boundary")]
        boundary: usize,
    },
    Uniform {
        #[serde(default = "default_uniform_degree")]
        degree: usize,
    },
    Waldron {
        #[serde(default = "default_net_degree")]
        net_degree: usize,
        #[serde(default = "default_cell_degree")]
        cell_degree: usize,
    },
    #[serde(rename = "waldron+lines")]
    WaldronLines {
        #[serde(default = "default_net_degree")]
        net_degree: usize,
        #[serde(default = "default_cell_degree")]
        cell_degree: usize,
    },
    RbfFig1,
}

fn default_halton_total() -> usize {
    5000
}
fn default_halton_boundary() -> usize {
    141
}
fn default_uniform_degree() -> usize {
    70
}
fn default_net_degree() -> usize {
    7
}
fn default_cell_degree() -> usize {
    10
}

impl NodeConfig {
    /// The four Shepard configurations with default parameters: Halton,
    /// uniform, composite, composite with lines.
    pub fn standard_kinds() -> Vec<NodeConfig> {
        vec![
            NodeConfig::default(),
            NodeConfig::Uniform {
                degree: default_uniform_degree(),
            },
            NodeConfig::Waldron {
                net_degree: default_net_degree(),
                cell_degree: default_cell_degree(),
            },
            NodeConfig::WaldronLines {
                net_degree: default_net_degree(),
                cell_degree: default_cell_degree(),
            },
        ]
    }
}

impl Default for NodeConfig {
    fn default() -> Self {
        NodeConfig::Halton {
            total: default_halton_total(),
            boundary: default_halton_boundary(),
        }
    }
}

impl NodeConfig {
    pub fn name(&self) -> &'static str {
        match self {
            NodeConfig::Halton { .. } => "halton",
            NodeConfig::Uniform { .. } => "uniform",
            NodeConfig::Waldron { .. } => "waldron",
            NodeConfig::WaldronLines { .. } => "waldron+lines",
            NodeConfig::RbfFig1 => "rbf-fig1",
        }
    }

    /// Candidate surplus used when the config leaves `q` unset.
    pub fn default_q(&self) -> usize {
        match self {
            NodeConfig::Waldron { .. } | NodeConfig::WaldronLines { .. } => 30,
            _ => 10,
        }
    }

    /// The node set, and how composite cells were filled where relevant.
    pub fn build(&self) -> Result<(NodeSet, Option<CellDistribution>)> {
        match *self {
            NodeConfig::Halton { total, boundary } => Ok((halton_nodeset(total, boundary)?, None)),
            NodeConfig::Uniform { degree } => {
                Ok((NodeSet::from_points(uniform_simplex_nodes(degree))?, None))
            }
            NodeConfig::Waldron {
                net_degree,
                cell_degree,
            } => {
                let (pts, kind) = waldron_composite_nodes(net_degree, cell_degree);
                Ok((NodeSet::from_points(pts)?, Some(kind)))
            }
            NodeConfig::WaldronLines {
                net_degree,
                cell_degree,
            } => {
                let (pts, kind) = waldron_composite_nodes(net_degree, cell_degree);
                Ok((enrich_with_lines(&NodeSet::from_points(pts)?)?, Some(kind)))
            }
            NodeConfig::RbfFig1 => Ok((rbf_nodeset_fig1(), None)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShepardSection {
    pub mu: u32,
    pub p: usize,
    pub q: Option<usize>,
}

impl Default for ShepardSection {
    fn default() -> Self {
        Self { mu: 4, p: 2, q: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    pub steps: usize,
    pub scheme: Scheme,
    pub boundary: BoundaryUpdate,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            steps: 20,
            scheme: Scheme::Bdf2,
            boundary: BoundaryUpdate::PerStep,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluationSection {
    pub resolution: usize,
}

impl Default for EvaluationSection {
    fn default() -> Self {
        Self { resolution: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReferenceSection {
    /// Grid cells per side.
    pub n: usize,
    /// Time steps `M_fd`.
    pub steps: usize,
}

impl Default for ReferenceSection {
    fn default() -> Self {
        Self { n: 512, steps: 520 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RbfSection {
    pub enabled: bool,
    pub shape: Option<f64>,
}

impl Default for RbfSection {
    fn default() -> Self {
        Self {
            enabled: true,
            shape: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("out") }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub nodes: NodeConfig,
    pub market: MarketParams,
    pub shepard: ShepardSection,
    pub time: TimeSection,
    pub evaluation: EvaluationSection,
    pub reference: ReferenceSection,
    pub rbf: RbfSection,
    pub output: OutputSection,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// The effective configuration with every default spelled out.
    pub fn to_toml(&self) -> String {
        let mut full = self.clone();
        full.shepard.q = Some(self.q());
        toml::to_string(&full).expect("config serializes")
    }

    pub fn q(&self) -> usize {
        self.shepard.q.unwrap_or_else(|| self.nodes.default_q())
    }

    pub fn shepard_params(&self) -> ShepardParams {
        ShepardParams::with_mu(self.shepard.mu)
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            steps: self.time.steps,
            scheme: self.time.scheme,
            boundary: self.time.boundary,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.market.validate()?;
        self.shepard_params().validate()?;
        if self.shepard.p == 0 {
            return Err(Error::invalid("covering", "polynomial degree p must be positive"));
        }
        if self.evaluation.resolution < 2 {
            return Err(Error::invalid("experiment", "evaluation resolution must be at least 2"));
        }
        if self.time.steps == 0 || !self.reference.steps.is_multiple_of(self.time.steps) {
            return Err(Error::TimeGridMismatch(format!(
                "reference steps {} is not a multiple of {} steps",
                self.reference.steps, self.time.steps
            )));
        }
        Ok(())
    }
}

/// Lattice of spacing `8/resolution` restricted to `x + y ≤ 8 − 8/resolution`.
pub fn evaluation_grid(resolution: usize) -> Vec<Point2> {
    let h = DOMAIN_SIDE / resolution as f64;
    let mut pts = Vec::with_capacity(resolution * (resolution + 1) / 2);
    for j in 0..resolution {
        for i in 0..resolution - j {
            pts.push(Point2::new(i as f64 * h, j as f64 * h));
        }
    }
    pts
}

/// Anything that expands nodal values in a cardinal basis.
pub trait CardinalEvaluator: Sync {
    fn nodes(&self) -> &NodeSet;
    /// Nonzero cardinal function values `(node, W_node(x))` at `x`.
    fn cardinal_values(&self, x: Point2) -> Vec<(usize, f64)>;
}

impl CardinalEvaluator for ShepardBasis {
    fn nodes(&self) -> &NodeSet {
        ShepardBasis::nodes(self)
    }

    fn cardinal_values(&self, x: Point2) -> Vec<(usize, f64)> {
        self.eval_values(x)
    }
}

impl CardinalEvaluator for RbfModel {
    fn nodes(&self) -> &NodeSet {
        RbfModel::nodes(self)
    }

    fn cardinal_values(&self, x: Point2) -> Vec<(usize, f64)> {
        RbfModel::cardinal_values(self, x).into_iter().enumerate().collect()
    }
}

/// Values at every node at time `t`: the interior state, the near-field
/// value at the origin and the far-field data.
pub fn nodal_values(nodes: &NodeSet, market: &MarketParams, interior: &[f64], t: f64) -> Vec<f64> {
    let mut out = interior.to_vec();
    out.push(market.near_field(t));
    out.extend(boundary_vector(nodes, market, t).values);
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepError {
    pub step: usize,
    pub t: f64,
    pub mean: f64,
    pub max: f64,
}

/// Evaluated solution, reference and absolute error at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub point: Point2,
    pub value: f64,
    pub reference: f64,
}

impl SurfaceSample {
    pub fn error(&self) -> f64 {
        (self.value - self.reference).abs()
    }
}

/// Errors at levels `1..=M`, plus the surface at the final level.
pub fn measure_errors(
    trajectory: &Trajectory,
    evaluator: &dyn CardinalEvaluator,
    market: &MarketParams,
    reference: &dyn Fn(Point2, f64) -> Result<f64>,
    grid: &[Point2],
) -> Result<(Vec<StepError>, Vec<SurfaceSample>)> {
    let nodes = evaluator.nodes();
    let weights: Vec<Vec<(usize, f64)>> =
        grid.par_iter().map(|&x| evaluator.cardinal_values(x)).collect();
    let mut errors = Vec::with_capacity(trajectory.steps());
    let mut surface = Vec::new();
    for (step, (state, &t)) in trajectory.states.iter().zip(&trajectory.times).enumerate().skip(1) {
        let data = nodal_values(nodes, market, state, t);
        let refs: Vec<f64> = grid.iter().map(|&x| reference(x, t)).collect::<Result<_>>()?;
        let values: Vec<f64> = weights
            .iter()
            .map(|w| w.iter().map(|&(i, v)| v * data[i]).sum())
            .collect();
        let (mut sum, mut max) = (0.0, 0.0f64);
        for (v, r) in values.iter().zip(&refs) {
            let e = (v - r).abs();
            sum += e;
            max = max.max(e);
        }
        errors.push(StepError {
            step,
            t,
            mean: sum / grid.len() as f64,
            max,
        });
        if step == trajectory.steps() {
            surface = grid
                .iter()
                .zip(values.iter().zip(&refs))
                .map(|(&point, (&value, &reference))| SurfaceSample {
                    point,
                    value,
                    reference,
                })
                .collect();
        }
    }
    Ok((errors, surface))
}

/// Errors against a stored finite-difference reference.
pub fn measure_against_reference(
    trajectory: &Trajectory,
    evaluator: &dyn CardinalEvaluator,
    market: &MarketParams,
    reference: &FdReference,
    grid: &[Point2],
) -> Result<(Vec<StepError>, Vec<SurfaceSample>)> {
    for &t in &trajectory.times {
        if reference.slice_at(t).is_err() {
            return Err(Error::TimeGridMismatch(format!("reference has no level at t = {t}")));
        }
    }
    measure_errors(trajectory, evaluator, market, &|x, t| reference.interpolate(x, t), grid)
}

#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub config: ExperimentConfig,
    pub nodes: NodeSet,
    pub cell_distribution: Option<CellDistribution>,
    pub ms: Vec<StepError>,
    pub rbf: Option<Vec<StepError>>,
    /// Condition estimates of the Shepard iteration matrices.
    pub conditions: Vec<f64>,
    pub rbf_conditions: Option<Vec<f64>>,
    pub escalations: usize,
    pub sparsity: SparsitySummary,
    pub surface: Vec<SurfaceSample>,
    /// `(stage, seconds)`.
    pub timings: Vec<(String, f64)>,
}

impl ErrorReport {
    pub fn error_table(&self) -> String {
        let mut out = String::from("step,t,E_mean_MS,E_max_MS,E_mean_RBF,E_max_RBF\n");
        for (k, e) in self.ms.iter().enumerate() {
            let _ = write!(out, "{},{:.4e},{:.4e},{:.4e}", e.step, e.t, e.mean, e.max);
            match self.rbf.as_ref().and_then(|r| r.get(k)) {
                Some(r) => {
                    let _ = writeln!(out, ",{:.4e},{:.4e}", r.mean, r.max);
                }
                None => out.push_str(",,\n"),
            }
        }
        out
    }

    pub fn sparsity_table(&self) -> String {
        let s = &self.sparsity;
        format!(
            "n_interior {}\nn_far_field {}\nnnz_A {}\nnnz_B {}\ndensity_A {:.4e}\nmax_row_support {}\nbandwidth_A {}\n",
            s.n_interior,
            s.n_far_field,
            s.nnz_a,
            s.nnz_b,
            s.density_a(),
            s.max_row_support,
            s.bandwidth_a
        )
    }

    pub fn surface_table(&self) -> String {
        let mut out = String::from("x,y,value,reference,abs_error\n");
        for s in &self.surface {
            let _ = writeln!(
                out,
                "{:.6e},{:.6e},{:.10e},{:.10e},{:.4e}",
                s.point.x,
                s.point.y,
                s.value,
                s.reference,
                s.error()
            );
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "configuration {}", self.config.nodes.name());
        if let Some(kind) = self.cell_distribution {
            let _ = writeln!(out, "cell_distribution {}", kind.as_str());
        }
        let _ = writeln!(out, "n_interior {}", self.nodes.n_interior());
        let _ = writeln!(out, "n_far_field {}", self.nodes.n_far_field());
        let _ = writeln!(out, "q {}", self.config.q());
        let _ = writeln!(out, "q_escalations {}", self.escalations);
        for (k, c) in self.conditions.iter().enumerate() {
            let _ = writeln!(out, "condition_bdf{} {:.4e}", k + 1, c);
        }
        if let Some(conds) = &self.rbf_conditions {
            for (k, c) in conds.iter().enumerate() {
                let _ = writeln!(out, "rbf_condition_bdf{} {:.4e}", k + 1, c);
            }
        }
        for (stage, secs) in &self.timings {
            let _ = writeln!(out, "time_{stage} {secs:.3}");
        }
        out
    }

    /// Writes the tables into `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("errors.csv"), self.error_table())?;
        fs::write(dir.join("nodes.txt"), self.nodes.to_table())?;
        fs::write(dir.join("sparsity.txt"), self.sparsity_table())?;
        fs::write(dir.join("surface.csv"), self.surface_table())?;
        fs::write(dir.join("config.toml"), self.config.to_toml())?;
        fs::write(dir.join("summary.txt"), self.summary())?;
        Ok(())
    }
}

/// The finite-difference reference at the levels of the coarse run.
pub fn build_reference(cfg: &ExperimentConfig) -> Result<FdReference> {
    cfg.validate()?;
    let stride = cfg.reference.steps / cfg.time.steps;
    fd_solve_strided(&cfg.market, cfg.reference.n, cfg.reference.steps, stride)
}

/// Shepard solve of the configured node set, without errors.
pub fn solve_shepard(cfg: &ExperimentConfig) -> Result<(ShepardBasis, Trajectory, Option<CellDistribution>)> {
    let (nodes, cells) = cfg.nodes.build()?;
    let basis = ShepardBasis::build(nodes, cfg.shepard.p, cfg.q(), cfg.shepard_params())?;
    let system = assemble(&basis, &cfg.market);
    let traj = run(&system, basis.nodes(), &cfg.market, cfg.run_options())?;
    Ok((basis, traj, cells))
}

/// Runs the configured experiment against an existing reference.
pub fn run_with_reference(cfg: &ExperimentConfig, reference: &FdReference) -> Result<ErrorReport> {
    cfg.validate()?;
    if reference.market != cfg.market {
        return Err(Error::Config("reference was computed with other market parameters".into()));
    }
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut Vec<(String, f64)>| {
        timings.push((name.to_string(), clock.elapsed().as_secs_f64()));
        clock = Instant::now();
    };

    let (nodes, cells) = cfg.nodes.build()?;
    let basis = ShepardBasis::build(nodes.clone(), cfg.shepard.p, cfg.q(), cfg.shepard_params())?;
    lap("basis", &mut timings);
    let system = assemble(&basis, &cfg.market);
    let sparsity = system.sparsity();
    lap("assembly", &mut timings);
    let traj = run(&system, &nodes, &cfg.market, cfg.run_options())?;
    lap("solve", &mut timings);
    let grid = evaluation_grid(cfg.evaluation.resolution);
    let (ms, surface) = measure_against_reference(&traj, &basis, &cfg.market, reference, &grid)?;
    lap("errors", &mut timings);

    let (rbf, rbf_conditions) = if cfg.rbf.enabled {
        let model = rbf_assemble(rbf_nodeset_fig1(), cfg.rbf.shape, &cfg.market)?;
        let rtraj = run(&model.system, model.nodes(), &cfg.market, cfg.run_options())?;
        let (errs, _) = measure_against_reference(&rtraj, &model, &cfg.market, reference, &grid)?;
        lap("rbf", &mut timings);
        (Some(errs), Some(rtraj.conditions))
    } else {
        (None, None)
    };

    Ok(ErrorReport {
        config: cfg.clone(),
        escalations: basis.covering().escalations(),
        nodes,
        cell_distribution: cells,
        ms,
        rbf,
        conditions: traj.conditions,
        rbf_conditions,
        sparsity,
        surface,
        timings,
    })
}

/// Full pipeline: reference, solve, errors, and the tables in the output
/// directory.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ErrorReport> {
    let start = Instant::now();
    let reference = build_reference(cfg)?;
    let elapsed = start.elapsed().as_secs_f64();
    let mut report = run_with_reference(cfg, &reference)?;
    report.timings.insert(0, ("reference".to_string(), elapsed));
    report.write(&cfg.output.dir)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_examples() {
        let g = evaluation_grid(2);
        assert_eq!(
            g,
            vec![Point2::new(0.0, 0.0), Point2::new(4.0, 0.0), Point2::new(0.0, 4.0)]
        );
        for res in [2, 10, 64, 101] {
            let g = evaluation_grid(res);
            assert_eq!(g.len(), res * (res + 1) / 2);
            let h = 8.0 / res as f64;
            assert!(g.iter().all(|p| p.x + p.y < 8.0 && p.x + p.y <= 8.0 - h + 1e-12));
        }
        assert_eq!(evaluation_grid(64).len(), 2080);
    }

    #[test]
    fn config_defaults_and_overrides() {
        let cfg = ExperimentConfig::from_toml("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.q(), 10);
        let cfg = ExperimentConfig::from_toml(
            "[nodes]\nkind = \"waldron+lines\"\n[time]\nscheme = \"bdf3\"\n[market]\nr = 0.05\n",
        )
        .unwrap();
        assert_eq!(cfg.q(), 30);
        assert_eq!(cfg.time.scheme, Scheme::Bdf3);
        assert_eq!(cfg.market.r, 0.05);
        assert_eq!(cfg.market.sigma1, 0.15);
        let round = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(round.nodes, cfg.nodes);
        assert_eq!(round.q(), 30);
    }

    #[test]
    fn config_rejects_bad_input() {
        assert!(ExperimentConfig::from_toml("[nodes]\nkind = \"hexagon\"\n").is_err());
        assert!(ExperimentConfig::from_toml("[time]\nsteps = 20\n[reference]\nsteps = 30\n").is_err());
        assert!(ExperimentConfig::from_toml("[shepard]\nmu = 3\n").is_err());
        assert!(ExperimentConfig::from_toml("[market]\nvol = 1\n").is_err());
    }

    fn tiny_run() -> (ShepardBasis, Trajectory, MarketParams) {
        let m = MarketParams::default();
        let basis = ShepardBasis::build(halton_nodeset(300, 21).unwrap(), 2, 10, ShepardParams::default()).unwrap();
        let sys = assemble(&basis, &m);
        let opts = RunOptions {
            steps: 4,
            ..RunOptions::default()
        };
        let traj = run(&sys, basis.nodes(), &m, opts).unwrap();
        (basis, traj, m)
    }

    #[test]
    fn self_reference_and_offset() {
        let (basis, traj, m) = tiny_run();
        let grid = evaluation_grid(12);
        let ms = |x: Point2, t: f64| -> Result<f64> {
            let l = traj.times.iter().position(|&s| s == t).unwrap();
            let data = nodal_values(basis.nodes(), &m, &traj.states[l], t);
            Ok(basis.interpolate(&data, x))
        };
        let (errs, surface) = measure_errors(&traj, &basis, &m, &ms, &grid).unwrap();
        assert_eq!(errs.len(), 4);
        assert_eq!(surface.len(), grid.len());
        for e in &errs {
            assert!(e.mean < 1e-13 && e.max < 1e-13);
        }
        let eps = 3e-3;
        let shifted = |x: Point2, t: f64| ms(x, t).map(|v| v + eps);
        let (errs, _) = measure_errors(&traj, &basis, &m, &shifted, &grid).unwrap();
        for e in &errs {
            assert!((e.mean - eps).abs() < 1e-12 && (e.max - eps).abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_reference_levels() {
        let (basis, traj, m) = tiny_run();
        let reference = fd_solve_strided(&m, 8, 6, 1).unwrap();
        let err = measure_against_reference(&traj, &basis, &m, &reference, &evaluation_grid(4)).unwrap_err();
        assert!(matches!(err, Error::TimeGridMismatch(_)));
    }

    #[test]
    fn table_formatting() {
        let report = ErrorReport {
            config: ExperimentConfig::default(),
            nodes: halton_nodeset(20, 3).unwrap(),
            cell_distribution: Some(CellDistribution::UniformFallback),
            ms: vec![StepError {
                step: 1,
                t: 0.05,
                mean: 1.95854e-4,
                max: 1.43628e-2,
            }],
            rbf: None,
            conditions: vec![8.4, 5.5],
            rbf_conditions: None,
            escalations: 0,
            sparsity: SparsitySummary {
                n_interior: 1,
                n_far_field: 1,
                nnz_a: 1,
                nnz_b: 0,
                max_row_support: 1,
                bandwidth_a: 0,
            },
            surface: vec![],
            timings: vec![],
        };
        assert_eq!(
            report.error_table(),
            "step,t,E_mean_MS,E_max_MS,E_mean_RBF,E_max_RBF\n1,5.0000e-2,1.9585e-4,1.4363e-2,,\n"
        );
        assert!(report.summary().contains("cell_distribution uniform-fallback"));
    }
}
