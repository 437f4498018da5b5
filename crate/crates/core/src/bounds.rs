//! The large-penalty limit and the penalty-coefficient bound.
//!
//! As `alpha` grows the arc-length fit flattens towards the horizontal line
//! through the mean ordinate. Writing the stationarity conditions of the
//! arc-length objective in terms of the link angles `phi_i = pi/2 + delta_i`
//! gives
//!
//! ```text
//! F(phi) + c = grad / alpha,   c_i = 2 (a_i - y_i) / alpha
//! ```
//!
//! with `F_1 = cos phi_1`, `F_i = cos phi_i - cos phi_{i-1}` and
//! `F_n = -cos phi_{n-1}`. The Jacobian of `F` is lower bidiagonal with
//! entries `+-sin phi`, so its row-sum norm never exceeds 2 and at a
//! stationary point `||delta||_inf >= max|a_i - y_i| / alpha`. Hence
//! `alpha < max|a_i - y_i| / eps` forces `||delta||_inf > eps`. Bounding the
//! residual by the data range gives the a-priori coefficient
//! `alpha_bar = (max y - min y) / eps`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{check_alpha, BrokenLine, LinkAngles, PenaltyKind, PenaltySpec, PointSet};
use crate::par::{self, Execution};
use crate::solvers::{self, FitResult, SolverConfig, Status};

/// Horizontal line through the mean ordinate.
pub fn average_line(data: &PointSet) -> BrokenLine {
    BrokenLine::constant(data.len(), data.y_mean())
}

/// Arc-length objective restricted to straight lines `a_i = k1 x_i + k2`:
/// `sum (k1 x_i + k2 - y_i)^2 + alpha (x_n - x_1) sqrt(1 + k1^2)`.
pub fn line_class_objective(data: &PointSet, alpha: f64, k1: f64, k2: f64) -> f64 {
    let rss: f64 = data
        .pairs()
        .map(|(x, y)| {
            let r = k1 * x + k2 - y;
            r * r
        })
        .sum();
    rss + alpha * extent(data) * k1.hypot(1.0)
}

/// Partial derivatives of [`line_class_objective`] in `(k1, k2)`.
pub fn line_class_gradient(data: &PointSet, alpha: f64, k1: f64, k2: f64) -> (f64, f64) {
    let (mut d1, mut d2) = (0.0, 0.0);
    for (x, y) in data.pairs() {
        let r = k1 * x + k2 - y;
        d1 += 2.0 * r * x;
        d2 += 2.0 * r;
    }
    d1 += alpha * extent(data) * k1 / k1.hypot(1.0);
    (d1, d2)
}

fn extent(data: &PointSet) -> f64 {
    data.xs()[data.len() - 1] - data.xs()[0]
}

/// Minimizer of [`line_class_objective`].
///
/// For fixed slope the best intercept is `mean y - k1 mean x`; the remaining
/// one-dimensional derivative is increasing in `k1`, so it is bracketed and
/// bisected. The slope vanishes only when `sum (x_i - mean x)(y_i - mean y)`
/// does; otherwise it only tends to zero as `alpha` grows.
pub fn line_class_minimizer(data: &PointSet, alpha: f64) -> (f64, f64) {
    let n = data.len() as f64;
    let x_mean = data.xs().iter().sum::<f64>() / n;
    let y_mean = data.y_mean();
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in data.pairs() {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    let len = extent(data);
    let deriv = |k: f64| 2.0 * (k * sxx - sxy) + alpha * len * k / k.hypot(1.0);
    // the least-squares slope sxy/sxx brackets the root together with 0
    let ls = sxy / sxx;
    let (mut lo, mut hi) = if ls >= 0.0 { (0.0, ls) } else { (ls, 0.0) };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if deriv(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let k1 = 0.5 * (lo + hi);
    (k1, y_mean - k1 * x_mean)
}

const GRID_HALF: i32 = 20;
const STATIONARITY_TOL: f64 = 1e-9;

/// Checks whether the horizontal mean line `(k1, k2) = (0, mean y)` is the
/// best straight line for the arc-length objective: both partial
/// derivatives of [`line_class_objective`] must vanish to 1e-9 and no point
/// of a 41 x 41 grid of perturbations around it may do better.
///
/// The `k2` equation always holds. The `k1` equation reads
/// `2 sum (mean y - y_i) x_i = 0`, which fails whenever abscissas and
/// ordinates are correlated; see [`line_class_minimizer`].
pub fn verify_average_line_optimality(data: &PointSet, alpha: f64) -> Result<bool> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Err(Error::InvalidAlpha(alpha));
    }
    let k2 = data.y_mean();
    let (d1, d2) = line_class_gradient(data, alpha, 0.0, k2);
    let scale = 1.0 + data.ys().iter().map(|y| y.abs()).fold(0.0, f64::max);
    let stationary = d1.abs() <= STATIONARITY_TOL * scale && d2.abs() <= STATIONARITY_TOL * scale;

    let centre = line_class_objective(data, alpha, 0.0, k2);
    let slope_step = 0.05 * (data.y_range() + 1.0) / extent(data) / GRID_HALF as f64;
    let level_step = 0.05 * (data.y_range() + 1.0) / GRID_HALF as f64;
    let beats_grid = (-GRID_HALF..=GRID_HALF).all(|i| {
        (-GRID_HALF..=GRID_HALF).all(|j| {
            let k1 = i as f64 * slope_step;
            let k = k2 + j as f64 * level_step;
            centre <= line_class_objective(data, alpha, k1, k)
        })
    });
    Ok(stationary && beats_grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaBound {
    pub epsilon: f64,
    pub y_range: f64,
    pub alpha_bar: f64,
    /// Set when all ordinates coincide; the bound is then 0.
    pub degenerate: bool,
}

pub fn alpha_upper_bound(data: &PointSet, epsilon: f64) -> Result<AlphaBound> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let y_range = data.y_range();
    Ok(AlphaBound {
        epsilon,
        y_range,
        alpha_bar: y_range / epsilon,
        degenerate: y_range == 0.0,
    })
}

/// The angle-system vector `F(phi)`, one entry per vertex.
pub fn angle_system(phi: &[f64]) -> Vec<f64> {
    let m = phi.len();
    let cos: Vec<f64> = phi.iter().map(|p| p.cos()).collect();
    (0..=m)
        .map(|i| {
            let here = if i < m { cos[i] } else { 0.0 };
            let before = if i > 0 { cos[i - 1] } else { 0.0 };
            here - before
        })
        .collect()
}

/// Jacobian of [`angle_system`]: an `n x (n-1)` lower bidiagonal matrix with
/// `-sin phi_i` at `(i, i)` and `sin phi_i` at `(i+1, i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleJacobian {
    pub diag: Vec<f64>,
    pub sub: Vec<f64>,
}

impl AngleJacobian {
    pub fn at(phi: &[f64]) -> Self {
        Self {
            diag: phi.iter().map(|p| -p.sin()).collect(),
            sub: phi.iter().map(|p| p.sin()).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.diag.len() + 1
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        if row == col && col < self.diag.len() {
            self.diag[col]
        } else if row == col + 1 {
            self.sub[col]
        } else {
            0.0
        }
    }

    /// Row-sum norm.
    pub fn inf_norm(&self) -> f64 {
        let m = self.diag.len();
        (0..=m)
            .map(|i| {
                let own = if i < m { self.diag[i].abs() } else { 0.0 };
                let prev = if i > 0 { self.sub[i - 1].abs() } else { 0.0 };
                own + prev
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaDiagnostics {
    pub epsilon: f64,
    pub alpha: f64,
    /// `c_i = 2 (a_i - y_i) / alpha`.
    pub c_vector: Vec<f64>,
    pub c_inf_norm: f64,
    pub delta_inf_norm: f64,
    /// Row-sum norm of the angle Jacobian at the fitted angles.
    pub jacobian_inf_norm: f64,
    /// `max_i |a_i - y_i| / eps`; below it `||delta||_inf > eps` is implied.
    pub tight_alpha: f64,
    /// `||F(phi) + c||_inf`.
    pub angle_residual: f64,
    /// `alpha < tight_alpha`.
    pub tight_condition_holds: bool,
    /// `||delta||_inf > eps`.
    pub separated: bool,
}

/// Angle-space diagnostics of a converged arc-length fit.
///
/// Refuses unconverged fits, and fails if the angle system does not vanish
/// to `10 * grad_tol * max(1, 1/alpha)`: the system equals the gradient
/// divided by `alpha`.
pub fn theta_diagnostics(
    fit: &FitResult,
    data: &PointSet,
    epsilon: f64,
    grad_tol: f64,
) -> Result<ThetaDiagnostics> {
    if fit.penalty.kind != PenaltyKind::ArcLength {
        return Err(Error::UnsupportedKind(fit.penalty.kind));
    }
    if fit.status != Status::Converged {
        return Err(Error::NotConverged(fit.status));
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let alpha = fit.penalty.alpha;
    if alpha <= 0.0 {
        return Err(Error::InvalidAlpha(alpha));
    }
    fit.line.check_bound(data)?;

    let c_vector: Vec<f64> = fit
        .ordinates()
        .iter()
        .zip(data.ys())
        .map(|(a, y)| 2.0 * (a - y) / alpha)
        .collect();
    let c_inf_norm = c_vector.iter().map(|c| c.abs()).fold(0.0, f64::max);
    let LinkAngles { phi, .. } = &fit.angles;
    let angle_residual = angle_system(phi)
        .iter()
        .zip(&c_vector)
        .map(|(f, c)| (f + c).abs())
        .fold(0.0, f64::max);
    let tolerance =
        10.0 * grad_tol * (1.0 / alpha).max(1.0) + 64.0 * f64::EPSILON * (1.0 + c_inf_norm);
    if angle_residual.is_nan() || angle_residual > tolerance {
        return Err(Error::AngleSystemInconsistent {
            residual: angle_residual,
            tolerance,
        });
    }

    let delta_inf_norm = fit.angles.delta_inf_norm();
    let tight_alpha = fit.max_abs_residual / epsilon;
    Ok(ThetaDiagnostics {
        epsilon,
        alpha,
        c_vector,
        c_inf_norm,
        delta_inf_norm,
        jacobian_inf_norm: AngleJacobian::at(phi).inf_norm(),
        tight_alpha,
        angle_residual,
        tight_condition_holds: alpha < tight_alpha,
        separated: delta_inf_norm > epsilon,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathEntry {
    pub alpha: f64,
    pub delta_inf_norm: f64,
    /// `||a - mean(y)||_inf`.
    pub distance_to_average_line: f64,
    pub objective: f64,
    pub converged: bool,
    pub fit: FitResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSweep {
    pub kind: PenaltyKind,
    pub entries: Vec<PathEntry>,
}

impl PathSweep {
    pub fn alphas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.alpha).collect()
    }

    pub fn distances(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|e| e.distance_to_average_line)
            .collect()
    }

    pub fn all_converged(&self) -> bool {
        self.entries.iter().all(|e| e.converged)
    }
}

pub fn validate_grid(alphas: &[f64]) -> Result<()> {
    if alphas.is_empty() {
        return Err(Error::InvalidGrid("grid is empty".into()));
    }
    if let Some(bad) = alphas.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
        return Err(Error::InvalidGrid(format!(
            "{bad} is not a valid coefficient"
        )));
    }
    if let Some(w) = alphas.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "grid must increase strictly ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// Fits every grid coefficient with the default execution strategy.
pub fn path_sweep(
    data: &PointSet,
    alphas: &[f64],
    kind: PenaltyKind,
    cfg: &SolverConfig,
) -> Result<PathSweep> {
    path_sweep_with(data, alphas, kind, cfg, Execution::default())
}

/// Fits every grid coefficient; entries keep grid order whatever the
/// execution strategy.
pub fn path_sweep_with(
    data: &PointSet,
    alphas: &[f64],
    kind: PenaltyKind,
    cfg: &SolverConfig,
    exec: Execution,
) -> Result<PathSweep> {
    validate_grid(alphas)?;
    cfg.validate()?;
    let mean = data.y_mean();
    let fits = par::map(alphas, exec, |&alpha| {
        solvers::solve(data, PenaltySpec::new(kind, alpha)?, cfg).map(|(fit, _)| fit)
    });
    let entries = alphas
        .iter()
        .zip(fits)
        .map(|(&alpha, fit)| {
            let fit = fit?;
            Ok(PathEntry {
                alpha,
                delta_inf_norm: fit.angles.delta_inf_norm(),
                distance_to_average_line: fit.line.distance_to_constant(mean),
                objective: fit.objective,
                converged: fit.converged(),
                fit,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PathSweep { kind, entries })
}
