//! Domain types and the penalized least-squares objective.
//!
//! A fit is described by the ordinates `a` of a broken line whose vertices sit
//! at the data abscissas. The objective is
//!
//! ```text
//! J(a) = sum_i (y_i - a_i)^2 + alpha * P(a)
//! ```
//!
//! where `P` is one of
//!
//! * arc length: `sum_i sqrt((a_{i+1} - a_i)^2 + (x_{i+1} - x_i)^2)`,
//! * ridge on slopes: `sum_i k_i^2`,
//! * lasso on slopes: `sum_i |k_i|`,
//!
//! with `k_i = (a_{i+1} - a_i) / (x_{i+1} - x_i)` the slope of link `i`.
//!
//! Only the broken-line form is represented: on each interval between two
//! abscissas a straight segment is never longer than any other curve joining
//! the same endpoints, so the continuous problem reduces to this one.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag::SymTridiagonal;

/// Weight floor used by the lasso surrogate when no solver configuration is at
/// hand.
pub const DEFAULT_IRLS_WEIGHT_FLOOR: f64 = 1e-8;

/// Points with strictly increasing abscissas.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PointSet {
    /// Builds a point set, sorting by abscissa. Duplicate abscissas are
    /// rejected; positions in the error refer to the input order.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                xs: xs.len(),
                ys: ys.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::TooFewPoints(xs.len()));
        }
        if let Some(index) = xs.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "abscissa",
                index,
            });
        }
        if let Some(index) = ys.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "ordinate",
                index,
            });
        }

        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]).then(i.cmp(&j)));
        for w in order.windows(2) {
            // -0.0 and 0.0 sort apart under total_cmp but are the same abscissa
            if xs[w[0]] == xs[w[1]] {
                return Err(Error::DuplicateAbscissa {
                    value: xs[w[0]],
                    first: w[0].min(w[1]),
                    second: w[0].max(w[1]),
                });
            }
        }
        let sorted_xs = order.iter().map(|&i| xs[i]).collect();
        let sorted_ys = order.iter().map(|&i| ys[i]).collect();
        Ok(Self {
            xs: sorted_xs,
            ys: sorted_ys,
        })
    }

    pub fn from_pairs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self> {
        let (xs, ys) = pairs.into_iter().unzip();
        Self::new(xs, ys)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// `x_{i+1} - x_i`, always positive.
    pub fn spacing(&self, link: usize) -> f64 {
        self.xs[link + 1] - self.xs[link]
    }

    pub fn y_min(&self) -> f64 {
        self.ys.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn y_max(&self) -> f64 {
        self.ys.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn y_range(&self) -> f64 {
        self.y_max() - self.y_min()
    }

    pub fn y_mean(&self) -> f64 {
        self.ys.iter().sum::<f64>() / self.len() as f64
    }

    /// Same abscissas, ordinates shifted by `c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| y + c).collect(),
        }
    }
}

/// Vertex ordinates of a broken line over some point set's abscissas.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrokenLine {
    ordinates: Vec<f64>,
}

impl BrokenLine {
    pub fn new(ordinates: Vec<f64>) -> Result<Self> {
        if let Some(index) = ordinates.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "vertex ordinate",
                index,
            });
        }
        Ok(Self { ordinates })
    }

    pub fn constant(n: usize, value: f64) -> Self {
        Self {
            ordinates: vec![value; n],
        }
    }

    /// The line through the data points themselves.
    pub fn interpolant(data: &PointSet) -> Self {
        Self {
            ordinates: data.ys.clone(),
        }
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn into_ordinates(self) -> Vec<f64> {
        self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn check_bound(&self, data: &PointSet) -> Result<()> {
        if self.len() == data.len() {
            Ok(())
        } else {
            Err(Error::LineLength {
                expected: data.len(),
                found: self.len(),
            })
        }
    }

    /// `max_i |a_i - y_i|`.
    pub fn max_abs_residual(&self, data: &PointSet) -> f64 {
        self.ordinates
            .iter()
            .zip(data.ys())
            .map(|(a, y)| (a - y).abs())
            .fold(0.0, f64::max)
    }

    /// `max_i |a_i - c|`.
    pub fn distance_to_constant(&self, c: f64) -> f64 {
        self.ordinates
            .iter()
            .map(|a| (a - c).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PenaltyKind {
    ArcLength,
    RidgeSlopes,
    LassoSlopes,
}

impl PenaltyKind {
    pub const ALL: [PenaltyKind; 3] = [
        PenaltyKind::ArcLength,
        PenaltyKind::RidgeSlopes,
        PenaltyKind::LassoSlopes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PenaltyKind::ArcLength => "arclength",
            PenaltyKind::RidgeSlopes => "ridge",
            PenaltyKind::LassoSlopes => "lasso",
        }
    }
}

impl fmt::Display for PenaltyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PenaltyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "arclength" | "arc-length" => Ok(PenaltyKind::ArcLength),
            "ridge" | "ridge-slopes" => Ok(PenaltyKind::RidgeSlopes),
            "lasso" | "lasso-slopes" => Ok(PenaltyKind::LassoSlopes),
            other => Err(format!("unknown penalty kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PenaltySpec {
    pub kind: PenaltyKind,
    pub alpha: f64,
}

impl PenaltySpec {
    pub fn new(kind: PenaltyKind, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { kind, alpha })
    }

    pub fn arc_length(alpha: f64) -> Result<Self> {
        Self::new(PenaltyKind::ArcLength, alpha)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// Inclination of every link: `delta` to the Ox axis, `phi = pi/2 + delta` to
/// the Oy axis. Both have one entry per link (`n - 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkAngles {
    pub phi: Vec<f64>,
    pub delta: Vec<f64>,
}

impl LinkAngles {
    pub fn delta_inf_norm(&self) -> f64 {
        self.delta.iter().map(|d| d.abs()).fold(0.0, f64::max)
    }
}

/// Slopes `k_i` of every link.
pub fn slopes(line: &BrokenLine, data: &PointSet) -> Vec<f64> {
    line.ordinates
        .windows(2)
        .enumerate()
        .map(|(i, w)| (w[1] - w[0]) / data.spacing(i))
        .collect()
}

pub fn link_angles(line: &BrokenLine, data: &PointSet) -> Result<LinkAngles> {
    line.check_bound(data)?;
    let delta: Vec<f64> = slopes(line, data).into_iter().map(f64::atan).collect();
    let phi = delta.iter().map(|d| FRAC_PI_2 + d).collect();
    Ok(LinkAngles { phi, delta })
}

fn finite_or(value: f64, index: usize) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteEvaluation { index })
    }
}

pub fn objective(line: &BrokenLine, data: &PointSet, penalty: &PenaltySpec) -> Result<f64> {
    line.check_bound(data)?;
    let a = line.ordinates();
    let mut rss = 0.0;
    for (i, (ai, yi)) in a.iter().zip(data.ys()).enumerate() {
        rss += finite_or((yi - ai) * (yi - ai), i)?;
    }
    if penalty.alpha == 0.0 {
        return Ok(rss);
    }
    let mut pen = 0.0;
    for i in 0..a.len() - 1 {
        let da = a[i + 1] - a[i];
        let dx = data.spacing(i);
        let term = match penalty.kind {
            PenaltyKind::ArcLength => da.hypot(dx),
            PenaltyKind::RidgeSlopes => (da / dx) * (da / dx),
            PenaltyKind::LassoSlopes => (da / dx).abs(),
        };
        pen += finite_or(term, i)?;
    }
    finite_or(rss + penalty.alpha * pen, a.len() - 1)
}

/// Gradient of [`objective`] with respect to the vertex ordinates.
///
/// Arc length: `2(a_i - y_i) + alpha * (s_{i-1} - s_i)` with
/// `s_i = (a_{i+1} - a_i) / l_i` the sine of link `i`, and the missing `s` at
/// either end taken as zero. For the lasso penalty this is the IRLS surrogate
/// gradient at the default weight floor, see [`lasso_surrogate_gradient`].
pub fn gradient(line: &BrokenLine, data: &PointSet, penalty: &PenaltySpec) -> Result<Vec<f64>> {
    match penalty.kind {
        PenaltyKind::LassoSlopes => {
            lasso_surrogate_gradient(line, data, penalty.alpha, DEFAULT_IRLS_WEIGHT_FLOOR)
        }
        _ => {
            line.check_bound(data)?;
            let a = line.ordinates();
            let mut g: Vec<f64> = a
                .iter()
                .zip(data.ys())
                .map(|(a, y)| 2.0 * (a - y))
                .collect();
            if penalty.alpha != 0.0 {
                for i in 0..a.len() - 1 {
                    let da = a[i + 1] - a[i];
                    let dx = data.spacing(i);
                    // derivative of the link term with respect to a_{i+1}
                    let d = match penalty.kind {
                        PenaltyKind::ArcLength => da / da.hypot(dx),
                        _ => 2.0 * da / (dx * dx),
                    };
                    g[i] -= penalty.alpha * d;
                    g[i + 1] += penalty.alpha * d;
                }
            }
            g.iter()
                .enumerate()
                .try_for_each(|(i, v)| finite_or(*v, i).map(|_| ()))?;
            Ok(g)
        }
    }
}

/// IRLS weights `1 / max(|k_i|, floor)` for the lasso-on-slopes penalty.
pub fn irls_weights(line: &BrokenLine, data: &PointSet, floor: f64) -> Vec<f64> {
    slopes(line, data)
        .into_iter()
        .map(|k| 1.0 / k.abs().max(floor))
        .collect()
}

/// Gradient of the quadratic IRLS surrogate `sum (y_i - a_i)^2 +
/// alpha/2 * sum w_i k_i^2` with the weights frozen at `line`.
///
/// Where `|k_i| >= floor` the link contributes `alpha * sign(k_i) / dx_i`,
/// which is the derivative of the exact lasso term.
pub fn lasso_surrogate_gradient(
    line: &BrokenLine,
    data: &PointSet,
    alpha: f64,
    floor: f64,
) -> Result<Vec<f64>> {
    line.check_bound(data)?;
    let a = line.ordinates();
    let mut g: Vec<f64> = a
        .iter()
        .zip(data.ys())
        .map(|(a, y)| 2.0 * (a - y))
        .collect();
    if alpha != 0.0 {
        for (i, k) in slopes(line, data).into_iter().enumerate() {
            let d = k / k.abs().max(floor) / data.spacing(i);
            g[i] -= alpha * d;
            g[i + 1] += alpha * d;
        }
    }
    g.iter()
        .enumerate()
        .try_for_each(|(i, v)| finite_or(*v, i).map(|_| ()))?;
    Ok(g)
}

/// Hessian of [`objective`]; tridiagonal because each penalty term couples
/// two neighbouring vertices only.
pub fn hessian(
    line: &BrokenLine,
    data: &PointSet,
    penalty: &PenaltySpec,
) -> Result<SymTridiagonal> {
    if penalty.kind == PenaltyKind::LassoSlopes {
        return Err(Error::UnsupportedKind(penalty.kind));
    }
    line.check_bound(data)?;
    let a = line.ordinates();
    let mut h = SymTridiagonal::scaled_identity(a.len(), 2.0);
    if penalty.alpha == 0.0 {
        return Ok(h);
    }
    for i in 0..a.len() - 1 {
        let dx = data.spacing(i);
        let curvature = match penalty.kind {
            PenaltyKind::ArcLength => {
                let l = (a[i + 1] - a[i]).hypot(dx);
                dx * dx / (l * l * l)
            }
            _ => 2.0 / (dx * dx),
        };
        h.add_link(i, finite_or(penalty.alpha * curvature, i)?);
    }
    Ok(h)
}

/// Curvature matrix of the IRLS surrogate: `2I + alpha * sum_i w_i/dx_i^2
/// (e_i - e_{i+1})(e_i - e_{i+1})^T`.
pub fn lasso_surrogate_matrix(data: &PointSet, alpha: f64, weights: &[f64]) -> SymTridiagonal {
    let mut m = SymTridiagonal::scaled_identity(data.len(), 2.0);
    for (i, w) in weights.iter().enumerate() {
        let dx = data.spacing(i);
        m.add_link(i, alpha * w / (dx * dx));
    }
    m
}
