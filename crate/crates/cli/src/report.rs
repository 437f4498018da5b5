//! Machine-readable run reports.
//!
//! Keys come out in declaration order and every float is printed with 17
//! significant digits, so equal inputs give byte-identical files. Wall-clock
//! measurements are kept out of the report (see [`Timings`]).

use arclen_core::{
    AlphaBound, FitResult, PathSweep, PenaltyKind, PointSet, SolverConfig, Status, ThetaDiagnostics,
};
use serde::ser::{Error as _, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

pub const SCHEMA: &str = "arclen-reg/1";

/// A float serialized as `d.dddddddddddddddde±x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Num {
    pub fn format(v: f64) -> String {
        format!("{v:.16e}")
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom(format!("non-finite value {}", self.0)));
        }
        RawValue::from_string(Self::format(self.0))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Tool {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputEcho {
    pub source: String,
    pub n: usize,
    pub xs: Vec<Num>,
    pub ys: Vec<Num>,
}

impl InputEcho {
    pub fn new(source: impl Into<String>, data: &PointSet) -> Self {
        InputEcho {
            source: source.into(),
            n: data.len(),
            xs: nums(data.xs()),
            ys: nums(data.ys()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub penalties: Vec<&'static str>,
    pub alphas: Vec<Num>,
    pub epsilon: Option<Num>,
    pub grid_fractions: Option<Vec<Num>>,
    pub grad_tol: Num,
    pub max_iters: usize,
}

impl ConfigEcho {
    pub fn new(
        penalties: &[PenaltyKind],
        alphas: &[f64],
        epsilon: Option<f64>,
        fractions: Option<&[f64]>,
        solver: &SolverConfig,
    ) -> Self {
        ConfigEcho {
            penalties: penalties.iter().map(|k| k.name()).collect(),
            alphas: nums(alphas),
            epsilon: epsilon.map(Num),
            grid_fractions: fractions.map(nums),
            grad_tol: Num(solver.grad_tol),
            max_iters: solver.max_iters,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundSummary {
    pub epsilon: Num,
    pub y_min: Num,
    pub y_max: Num,
    pub y_range: Num,
    pub alpha_bar: Num,
    pub degenerate: bool,
}

impl BoundSummary {
    pub fn new(bound: &AlphaBound, data: &PointSet) -> Self {
        BoundSummary {
            epsilon: Num(bound.epsilon),
            y_min: Num(data.y_min()),
            y_max: Num(data.y_max()),
            y_range: Num(bound.y_range),
            alpha_bar: Num(bound.alpha_bar),
            degenerate: bound.degenerate,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaSummary {
    pub epsilon: Num,
    pub c_inf_norm: Num,
    pub delta_inf_norm: Num,
    pub jacobian_inf_norm: Num,
    pub tight_alpha: Num,
    pub angle_residual: Num,
    pub tight_condition_holds: bool,
    pub separated: bool,
}

impl From<&ThetaDiagnostics> for ThetaSummary {
    fn from(t: &ThetaDiagnostics) -> Self {
        ThetaSummary {
            epsilon: Num(t.epsilon),
            c_inf_norm: Num(t.c_inf_norm),
            delta_inf_norm: Num(t.delta_inf_norm),
            jacobian_inf_norm: Num(t.jacobian_inf_norm),
            tight_alpha: Num(t.tight_alpha),
            angle_residual: Num(t.angle_residual),
            tight_condition_holds: t.tight_condition_holds,
            separated: t.separated,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitSummary {
    pub penalty: &'static str,
    pub alpha: Num,
    pub status: Status,
    pub iterations: usize,
    pub objective: Num,
    pub grad_inf_norm: Num,
    pub max_abs_residual: Num,
    pub delta_inf_norm: Num,
    pub distance_to_average_line: Num,
    pub box_certificate: bool,
    pub ordinates: Vec<Num>,
    pub theta: Option<ThetaSummary>,
}

impl FitSummary {
    pub fn new(fit: &FitResult, data: &PointSet, theta: Option<&ThetaDiagnostics>) -> Self {
        FitSummary {
            penalty: fit.penalty.kind.name(),
            alpha: Num(fit.penalty.alpha),
            status: fit.status,
            iterations: fit.iterations,
            objective: Num(fit.objective),
            grad_inf_norm: Num(fit.grad_inf_norm),
            max_abs_residual: Num(fit.max_abs_residual),
            delta_inf_norm: Num(fit.angles.delta_inf_norm()),
            distance_to_average_line: Num(fit.line.distance_to_constant(data.y_mean())),
            box_certificate: fit.box_certificate,
            ordinates: nums(fit.ordinates()),
            theta: theta.map(ThetaSummary::from),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PathSummary {
    pub penalty: &'static str,
    pub all_converged: bool,
    pub alphas: Vec<Num>,
    pub distances_to_average_line: Vec<Num>,
    pub entries: Vec<FitSummary>,
}

impl PathSummary {
    pub fn new(sweep: &PathSweep, data: &PointSet, thetas: &[Option<ThetaDiagnostics>]) -> Self {
        PathSummary {
            penalty: sweep.kind.name(),
            all_converged: sweep.all_converged(),
            alphas: nums(&sweep.alphas()),
            distances_to_average_line: nums(&sweep.distances()),
            entries: sweep
                .entries
                .iter()
                .zip(thetas)
                .map(|(e, t)| FitSummary::new(&e.fit, data, t.as_ref()))
                .collect(),
        }
    }
}

/// One row of the pass/fail table printed by the `examples` command.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub tool: Tool,
    pub command: &'static str,
    pub input: InputEcho,
    pub config: Option<ConfigEcho>,
    pub bound: Option<BoundSummary>,
    pub fits: Vec<FitSummary>,
    pub paths: Vec<PathSummary>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &'static str, input: InputEcho) -> Self {
        Report {
            schema: SCHEMA,
            tool: Tool::default(),
            command,
            input,
            config: None,
            bound: None,
            fits: Vec::new(),
            paths: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn all_converged(&self) -> bool {
        self.fits.iter().all(|f| f.status == Status::Converged)
            && self.paths.iter().all(|p| p.all_converged)
    }

    pub fn checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Wall-clock seconds per solve, written next to the report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Timings {
    pub solves: Vec<SolveTiming>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveTiming {
    pub penalty: &'static str,
    pub alpha: f64,
    pub seconds: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(Num::format(672.4), "6.7239999999999998e2");
        assert_eq!(Num::format(1250.0), "1.2500000000000000e3");
        assert_eq!(Num::format(-0.1), "-1.0000000000000001e-1");
        assert_eq!(Num::format(0.0), "0.0000000000000000e0");
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 1.7976931348623157e308] {
            assert_eq!(Num::format(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn num_serializes_raw() {
        let s = serde_json::to_string(&vec![Num(1.5), Num(-2.0)]).unwrap();
        assert_eq!(s, "[1.5000000000000000e0,-2.0000000000000000e0]");
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![1.5, -2.0]);
        assert!(serde_json::to_string(&Num(f64::NAN)).is_err());
    }

    #[test]
    fn schema_comes_first() {
        let d = PointSet::from_pairs([(0.0, 0.0), (1.0, 1.0)]).unwrap();
        let json = Report::new("bound", InputEcho::new("t.csv", &d))
            .to_json()
            .unwrap();
        assert!(json.starts_with("{\n  \"schema\": \"arclen-reg/1\",\n  \"tool\""));
    }
}
