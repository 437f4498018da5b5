//! Minimizers of the penalized objective, one per penalty kind.
//!
//! * arc length: damped Newton with Armijo backtracking on the exact
//!   objective; the Hessian is tridiagonal and positive definite, so each
//!   step costs one O(n) solve.
//! * ridge on slopes: the objective is quadratic, one linear solve (followed
//!   by a couple of refinement passes).
//! * lasso on slopes: iteratively reweighted least squares with weights
//!   `1 / max(|k_i|, floor)`; the reported objective always uses the exact
//!   `|k_i|`.
//!
//! Non-convergence is never an error: the best iterate is returned together
//! with a [`Status`] saying why the iteration stopped.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    self, irls_weights, lasso_surrogate_gradient, lasso_surrogate_matrix, link_angles, BrokenLine,
    LinkAngles, PenaltyKind, PenaltySpec, PointSet,
};
use crate::tridiag::SymTridiagonal;

/// Slack used for the box certificate `min y <= a_i <= max y`.
pub const BOX_SLACK: f64 = 1e-9;

const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;
const REFINEMENT_PASSES: usize = 3;
/// Relative normal-equation residual accepted from the direct ridge solve.
pub const RIDGE_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Init {
    DataInterpolant,
    AverageLine,
    Custom(BrokenLine),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Stop once `||grad||_inf` falls below this.
    pub grad_tol: f64,
    /// Stop once a step is below `step_tol * (1 + ||a||_inf)`.
    pub step_tol: f64,
    pub max_iters: usize,
    pub irls_weight_floor: f64,
    pub init: Init,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grad_tol: 1e-10,
            step_tol: 1e-13,
            max_iters: 10_000,
            irls_weight_floor: 1e-8,
            init: Init::DataInterpolant,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.grad_tol) {
            return Err(Error::InvalidConfig(format!(
                "grad_tol = {}",
                self.grad_tol
            )));
        }
        if !positive(self.step_tol) {
            return Err(Error::InvalidConfig(format!(
                "step_tol = {}",
                self.step_tol
            )));
        }
        if !positive(self.irls_weight_floor) {
            return Err(Error::InvalidConfig(format!(
                "irls_weight_floor = {}",
                self.irls_weight_floor
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters = 0".into()));
        }
        Ok(())
    }

    fn initial_line(&self, data: &PointSet) -> Result<BrokenLine> {
        match &self.init {
            Init::DataInterpolant => Ok(BrokenLine::interpolant(data)),
            Init::AverageLine => Ok(BrokenLine::constant(data.len(), data.y_mean())),
            Init::Custom(line) => {
                line.check_bound(data)?;
                Ok(line.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Gradient criterion met (IRLS: step criterion; ridge: normal-equation
    /// residual).
    Converged,
    /// No further progress is representable in floating point: the step or
    /// the achievable decrease fell below rounding before the gradient
    /// criterion was met.
    Stalled,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub objective: f64,
    pub grad_inf_norm: f64,
    pub step_inf_norm: f64,
}

/// One record per iteration; the first record is the starting point with a
/// zero step.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConvergenceTrace {
    pub records: Vec<IterationRecord>,
}

impl ConvergenceTrace {
    pub fn objectives(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.objective)
    }

    /// Largest increase between consecutive objective values (0 when the
    /// sequence never goes up).
    pub fn max_increase(&self) -> f64 {
        self.records
            .windows(2)
            .map(|w| w[1].objective - w[0].objective)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub penalty: PenaltySpec,
    pub line: BrokenLine,
    pub objective: f64,
    pub grad_inf_norm: f64,
    pub iterations: usize,
    pub status: Status,
    pub angles: LinkAngles,
    /// All ordinates inside `[min y - BOX_SLACK, max y + BOX_SLACK]`.
    pub box_certificate: bool,
    pub max_abs_residual: f64,
}

impl FitResult {
    fn assemble(
        data: &PointSet,
        penalty: PenaltySpec,
        line: BrokenLine,
        grad_inf_norm: f64,
        iterations: usize,
        status: Status,
    ) -> Result<Self> {
        let objective = model::objective(&line, data, &penalty)?;
        let angles = link_angles(&line, data)?;
        let (lo, hi) = (data.y_min() - BOX_SLACK, data.y_max() + BOX_SLACK);
        let box_certificate = line.ordinates().iter().all(|&a| lo <= a && a <= hi);
        let max_abs_residual = line.max_abs_residual(data);
        Ok(Self {
            penalty,
            line,
            objective,
            grad_inf_norm,
            iterations,
            status,
            angles,
            box_certificate,
            max_abs_residual,
        })
    }

    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }

    pub fn ordinates(&self) -> &[f64] {
        self.line.ordinates()
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

fn axpy(a: &[f64], t: f64, p: &[f64]) -> Vec<f64> {
    a.iter().zip(p).map(|(ai, pi)| ai + t * pi).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves with the configured penalty kind. The trace is empty for ridge.
pub fn solve(
    data: &PointSet,
    penalty: PenaltySpec,
    cfg: &SolverConfig,
) -> Result<(FitResult, ConvergenceTrace)> {
    match penalty.kind {
        PenaltyKind::ArcLength => solve_arc_length(data, penalty.alpha, cfg),
        PenaltyKind::RidgeSlopes => {
            solve_ridge_slopes(data, penalty.alpha, cfg).map(|f| (f, ConvergenceTrace::default()))
        }
        PenaltyKind::LassoSlopes => solve_lasso_slopes(data, penalty.alpha, cfg),
    }
}

pub fn solve_arc_length(
    data: &PointSet,
    alpha: f64,
    cfg: &SolverConfig,
) -> Result<(FitResult, ConvergenceTrace)> {
    cfg.validate()?;
    let penalty = PenaltySpec::arc_length(alpha)?;
    let mut line = cfg.initial_line(data)?;
    let mut value = model::objective(&line, data, &penalty)?;
    let mut grad = model::gradient(&line, data, &penalty)?;
    let mut gnorm = inf_norm(&grad);
    let mut trace = ConvergenceTrace::default();
    trace.records.push(IterationRecord {
        objective: value,
        grad_inf_norm: gnorm,
        step_inf_norm: 0.0,
    });

    let mut status = Status::MaxIterations;
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        if gnorm <= cfg.grad_tol {
            status = Status::Converged;
            break;
        }
        let Some((next, next_value, next_grad, t, dir)) =
            arc_length_step(data, &penalty, &line, value, &grad)?
        else {
            status = Status::Stalled;
            break;
        };
        iterations += 1;
        let step = t * inf_norm(&dir);
        line = next;
        value = next_value;
        grad = next_grad;
        gnorm = inf_norm(&grad);
        trace.records.push(IterationRecord {
            objective: value,
            grad_inf_norm: gnorm,
            step_inf_norm: step,
        });
        if gnorm <= cfg.grad_tol {
            status = Status::Converged;
            break;
        }
        if step <= cfg.step_tol * (1.0 + inf_norm(line.ordinates())) {
            status = Status::Stalled;
            break;
        }
    }

    let fit = FitResult::assemble(data, penalty, line, gnorm, iterations, status)?;
    Ok((fit, trace))
}

type Accepted = (BrokenLine, f64, Vec<f64>, f64);

/// New line, its objective and gradient, the step length, and the direction.
type AcceptedStep = (BrokenLine, f64, Vec<f64>, f64, Vec<f64>);

/// One globalized Newton step.
///
/// The full Newton step is tried first. Far from the optimum, where links
/// are steep, the Hessian of `sqrt(da^2 + dx^2)` badly underestimates the
/// curvature and the step overshoots; the step then comes from the quadratic
/// majorizer with curvature `1 / l_i` per link, which decreases the
/// objective without backtracking. Steepest descent is the last resort.
fn arc_length_step(
    data: &PointSet,
    penalty: &PenaltySpec,
    line: &BrokenLine,
    value: f64,
    grad: &[f64],
) -> Result<Option<AcceptedStep>> {
    let neg_grad: Vec<f64> = grad.iter().map(|g| -g).collect();
    let newton = model::hessian(line, data, penalty)?.solve(&neg_grad);
    if let Some(dir) = newton.filter(|d| dot(grad, d) < 0.0) {
        if let Some((l, v, g, t)) = line_search(data, penalty, line, value, grad, &dir, 1)? {
            return Ok(Some((l, v, g, t, dir)));
        }
    }
    let majorizer = arc_length_majorizer(line, data, penalty.alpha).solve(&neg_grad);
    if let Some(dir) = majorizer.filter(|d| dot(grad, d) < 0.0) {
        if let Some((l, v, g, t)) =
            line_search(data, penalty, line, value, grad, &dir, MAX_HALVINGS)?
        {
            return Ok(Some((l, v, g, t, dir)));
        }
    }
    Ok(
        line_search(data, penalty, line, value, grad, &neg_grad, MAX_HALVINGS)?
            .map(|(l, v, g, t)| (l, v, g, t, neg_grad)),
    )
}

/// `2I + alpha * sum_i (1 / l_i) (e_i - e_{i+1})(e_i - e_{i+1})^T`: the
/// Hessian of the quadratic that touches the arc-length objective at `line`
/// and lies above it everywhere.
fn arc_length_majorizer(line: &BrokenLine, data: &PointSet, alpha: f64) -> SymTridiagonal {
    let a = line.ordinates();
    let mut m = SymTridiagonal::scaled_identity(a.len(), 2.0);
    for i in 0..a.len() - 1 {
        m.add_link(i, alpha / (a[i + 1] - a[i]).hypot(data.spacing(i)));
    }
    m
}

/// Armijo backtracking by halving, at most `tries` trial points. Near the
/// optimum the decrease predicted by the local model drops below the
/// rounding error of the objective; a step is then also accepted when the
/// objective stays within a few ulps and the gradient shrinks.
fn line_search(
    data: &PointSet,
    penalty: &PenaltySpec,
    line: &BrokenLine,
    value: f64,
    grad: &[f64],
    dir: &[f64],
    tries: usize,
) -> Result<Option<Accepted>> {
    let gnorm = inf_norm(grad);
    let slope = dot(grad, dir);
    let rounding = 8.0 * f64::EPSILON * value.abs().max(1.0);
    let mut t = 1.0;
    for _ in 0..tries {
        let trial = axpy(line.ordinates(), t, dir);
        if trial.iter().all(|v| v.is_finite()) {
            let trial = BrokenLine::new(trial)?;
            let trial_value = model::objective(&trial, data, penalty)?;
            if trial_value <= value + ARMIJO * t * slope {
                let g = model::gradient(&trial, data, penalty)?;
                return Ok(Some((trial, trial_value, g, t)));
            }
            if trial_value <= value + rounding {
                let g = model::gradient(&trial, data, penalty)?;
                if inf_norm(&g) < gnorm {
                    return Ok(Some((trial, trial_value, g, t)));
                }
            }
        }
        t *= 0.5;
    }
    Ok(None)
}

/// Minimizes `sum (y_i - a_i)^2 + alpha * sum k_i^2` by solving
/// `(2I + 2 alpha D) a = 2y`, `D` the slope-weighted second-difference
/// operator.
///
/// Counts as converged when the residual is below
/// `max(grad_tol, 1e-9 * ||y||_inf)`; for large `alpha` the residual is
/// limited by rounding in `alpha * D a`.
pub fn solve_ridge_slopes(data: &PointSet, alpha: f64, cfg: &SolverConfig) -> Result<FitResult> {
    cfg.validate()?;
    let penalty = PenaltySpec::new(PenaltyKind::RidgeSlopes, alpha)?;
    let system = ridge_system(data, alpha);
    let rhs: Vec<f64> = data.ys().iter().map(|y| 2.0 * y).collect();
    let mut a = system
        .solve(&rhs)
        .ok_or(Error::NonFiniteEvaluation { index: 0 })?;
    for _ in 0..REFINEMENT_PASSES {
        let r: Vec<f64> = rhs
            .iter()
            .zip(system.mul_vec(&a))
            .map(|(b, ma)| b - ma)
            .collect();
        match system.solve(&r) {
            Some(corr) => a.iter_mut().zip(corr).for_each(|(ai, ci)| *ai += ci),
            None => break,
        }
    }
    let line = BrokenLine::new(a)?;
    // the gradient is exactly the normal-equation residual `M a - 2y`
    let gnorm = inf_norm(&model::gradient(&line, data, &penalty)?);
    let residual_tol = cfg.grad_tol.max(RIDGE_RESIDUAL_TOL * inf_norm(data.ys()));
    let status = if gnorm <= residual_tol {
        Status::Converged
    } else {
        Status::Stalled
    };
    FitResult::assemble(data, penalty, line, gnorm, 1, status)
}

/// `2I + 2 alpha D`: the (constant) Hessian of the ridge-on-slopes objective.
pub fn ridge_system(data: &PointSet, alpha: f64) -> SymTridiagonal {
    let mut m = SymTridiagonal::scaled_identity(data.len(), 2.0);
    for i in 0..data.len() - 1 {
        let dx = data.spacing(i);
        m.add_link(i, 2.0 * alpha / (dx * dx));
    }
    m
}

/// IRLS for `sum (y_i - a_i)^2 + alpha * sum |k_i|`.
///
/// Each iteration freezes `w_i = 1 / max(|k_i|, floor)` and minimizes the
/// quadratic surrogate `sum (y_i - a_i)^2 + alpha/2 * sum w_i k_i^2`. If the
/// exact objective rises (possible only where the floor is active), the step
/// is halved until it does not.
///
/// The reported gradient is the surrogate gradient at the final weights.
/// Links held at the floor have curvature `alpha / (floor * dx^2)`, so that
/// gradient cannot drop below roughly `alpha / floor * eps * ||a||_inf`.
pub fn solve_lasso_slopes(
    data: &PointSet,
    alpha: f64,
    cfg: &SolverConfig,
) -> Result<(FitResult, ConvergenceTrace)> {
    cfg.validate()?;
    let penalty = PenaltySpec::new(PenaltyKind::LassoSlopes, alpha)?;
    let floor = cfg.irls_weight_floor;
    let rhs: Vec<f64> = data.ys().iter().map(|y| 2.0 * y).collect();

    let mut line = cfg.initial_line(data)?;
    let mut value = model::objective(&line, data, &penalty)?;
    let surrogate_norm = |l: &BrokenLine| -> Result<f64> {
        Ok(inf_norm(&lasso_surrogate_gradient(l, data, alpha, floor)?))
    };
    let mut trace = ConvergenceTrace::default();
    trace.records.push(IterationRecord {
        objective: value,
        grad_inf_norm: surrogate_norm(&line)?,
        step_inf_norm: 0.0,
    });

    let mut status = Status::MaxIterations;
    let mut iterations = 0;
    if alpha == 0.0 {
        // the surrogate is plain RSS; its minimizer is the data
        let exact = BrokenLine::interpolant(data);
        let moved = inf_norm(
            &exact
                .ordinates()
                .iter()
                .zip(line.ordinates())
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        );
        if moved > 0.0 {
            line = exact;
            value = model::objective(&line, data, &penalty)?;
            iterations = 1;
            trace.records.push(IterationRecord {
                objective: value,
                grad_inf_norm: 0.0,
                step_inf_norm: moved,
            });
        }
        status = Status::Converged;
    }

    while status != Status::Converged && iterations < cfg.max_iters {
        let weights = irls_weights(&line, data, floor);
        let system = lasso_surrogate_matrix(data, alpha, &weights);
        let Some(target) = system.solve(&rhs) else {
            status = Status::Stalled;
            break;
        };
        let dir: Vec<f64> = target
            .iter()
            .zip(line.ordinates())
            .map(|(t, a)| t - a)
            .collect();

        let mut accepted = None;
        let mut t = 1.0;
        for _ in 0..MAX_HALVINGS {
            let trial = BrokenLine::new(axpy(line.ordinates(), t, &dir))?;
            let trial_value = model::objective(&trial, data, &penalty)?;
            if trial_value <= value {
                accepted = Some((trial, trial_value, t));
                break;
            }
            t *= 0.5;
        }
        let Some((next, next_value, t)) = accepted else {
            status = Status::Stalled;
            break;
        };
        iterations += 1;
        let step = t * inf_norm(&dir);
        line = next;
        value = next_value;
        trace.records.push(IterationRecord {
            objective: value,
            grad_inf_norm: surrogate_norm(&line)?,
            step_inf_norm: step,
        });
        if step <= cfg.step_tol * (1.0 + inf_norm(line.ordinates())) {
            status = Status::Converged;
        }
    }

    let gnorm = surrogate_norm(&line)?;
    let fit = FitResult::assemble(data, penalty, line, gnorm, iterations, status)?;
    Ok((fit, trace))
}
