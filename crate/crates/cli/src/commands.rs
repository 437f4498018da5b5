//! The four subcommands. Every command computes first and then writes its
//! files one after another from the calling thread.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use arclen_core::{
    bounds, datasets, par, path_sweep, solve, theta_diagnostics, AlphaBound, Execution, FitResult,
    PathSweep, PenaltyKind, PenaltySpec, PointSet, SolverConfig, ThetaDiagnostics,
};

use crate::config::{AlphaGrid, Emit, RunConfig};
use crate::csvio::{self, load_points, load_points_from_str};
use crate::error::{CliError, Result};
use crate::report::{
    BoundSummary, Check, ConfigEcho, FitSummary, InputEcho, PathSummary, Report, SolveTiming,
    Timings,
};
use crate::svg;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    /// Some fit did not meet its convergence criterion, or an `examples`
    /// check failed.
    NotConverged,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Clean => 0,
            Outcome::NotConverged => 2,
        }
    }
}

/// Everything a command produces, before anything touches the disk.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub report: Report,
    pub timings: Timings,
    pub svgs: Vec<(String, String)>,
    pub csvs: Vec<(String, String)>,
}

impl Artifacts {
    fn new(report: Report) -> Self {
        Artifacts {
            report,
            timings: Timings::default(),
            svgs: Vec::new(),
            csvs: Vec::new(),
        }
    }

    pub fn outcome(&self) -> Outcome {
        if self.report.all_converged() && self.report.checks_pass() {
            Outcome::Clean
        } else {
            Outcome::NotConverged
        }
    }

    pub fn write(&self, dir: &Path, emit: Emit) -> Result<()> {
        fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.to_path_buf(),
            source,
        })?;
        let put = |name: &str, body: &str| -> Result<()> {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|source| CliError::Write { path, source })
        };
        if emit.json {
            put("report.json", &self.report.to_json()?)?;
            let mut t = serde_json::to_string_pretty(&self.timings)?;
            t.push('\n');
            put("timings.json", &t)?;
        }
        if emit.csv {
            for (name, body) in &self.csvs {
                put(name, body)?;
            }
        }
        if emit.svg {
            for (name, body) in &self.svgs {
                put(name, body)?;
            }
        }
        Ok(())
    }
}

fn theta_for(
    fit: &FitResult,
    data: &PointSet,
    epsilon: Option<f64>,
    grad_tol: f64,
) -> Option<ThetaDiagnostics> {
    let eps = epsilon?;
    if fit.penalty.kind != PenaltyKind::ArcLength || !fit.converged() || fit.penalty.alpha <= 0.0 {
        return None;
    }
    theta_diagnostics(fit, data, eps, grad_tol).ok()
}

fn config_echo(
    penalties: &[PenaltyKind],
    alphas: &[f64],
    grid: &AlphaGrid,
    solver: &SolverConfig,
) -> ConfigEcho {
    ConfigEcho::new(penalties, alphas, grid.epsilon(), grid.fractions(), solver)
}

fn fit_title(kinds: &[PenaltyKind], alpha: f64) -> String {
    let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
    format!("{} fit, alpha = {alpha}", names.join(" / "))
}

/// Solves every (alpha, penalty) pair of the grid.
pub fn fit(
    source: &str,
    data: &PointSet,
    penalties: &[PenaltyKind],
    grid: &AlphaGrid,
    solver: &SolverConfig,
) -> Result<Artifacts> {
    solver.validate()?;
    let (alphas, bound) = grid.resolve(data)?;
    let requests: Vec<PenaltySpec> = alphas
        .iter()
        .flat_map(|&a| penalties.iter().map(move |&k| PenaltySpec::new(k, a)))
        .collect::<arclen_core::Result<_>>()?;
    let solved = par::map(&requests, Execution::default(), |&spec| {
        let start = Instant::now();
        let res = solve(data, spec, solver).map(|(fit, _)| fit);
        (res, start.elapsed().as_secs_f64())
    });

    let mut report = Report::new("fit", InputEcho::new(source, data));
    report.config = Some(config_echo(penalties, &alphas, grid, solver));
    report.bound = bound.as_ref().map(|b| BoundSummary::new(b, data));
    let mut art = Artifacts::new(report);
    let mut fits = Vec::with_capacity(solved.len());
    for (res, seconds) in solved {
        let fit = res?;
        art.timings.solves.push(SolveTiming {
            penalty: fit.penalty.kind.name(),
            alpha: fit.penalty.alpha,
            seconds,
        });
        let theta = theta_for(&fit, data, grid.epsilon(), solver.grad_tol);
        art.report
            .fits
            .push(FitSummary::new(&fit, data, theta.as_ref()));
        fits.push(fit);
    }

    let single = fits.len() == 1;
    for (i, chunk) in fits.chunks(penalties.len()).enumerate() {
        let alpha = alphas[i];
        let curves: Vec<_> = chunk
            .iter()
            .map(|f| (f.penalty.kind, alpha, &f.line))
            .collect();
        art.svgs.push((
            format!("fit-{}.svg", i + 1),
            svg::fit_plot(&fit_title(penalties, alpha), data, &curves),
        ));
        for f in chunk {
            let name = if single {
                "fit.csv".to_string()
            } else {
                format!("fit-{}-{}.csv", f.penalty.kind.name(), i + 1)
            };
            art.csvs.push((name, csvio::fit_to_csv(data, &f.line)));
        }
    }
    Ok(art)
}

pub fn bound(source: &str, data: &PointSet, epsilon: f64) -> Result<(Artifacts, AlphaBound)> {
    let b = bounds::alpha_upper_bound(data, epsilon)?;
    let mut report = Report::new("bound", InputEcho::new(source, data));
    report.bound = Some(BoundSummary::new(&b, data));
    Ok((Artifacts::new(report), b))
}

/// One sweep per penalty over the same grid.
pub fn path(
    source: &str,
    data: &PointSet,
    penalties: &[PenaltyKind],
    grid: &AlphaGrid,
    solver: &SolverConfig,
) -> Result<(Artifacts, Vec<PathSweep>)> {
    solver.validate()?;
    let (alphas, bound) = grid.resolve(data)?;
    let mut report = Report::new("path", InputEcho::new(source, data));
    report.config = Some(config_echo(penalties, &alphas, grid, solver));
    report.bound = bound.as_ref().map(|b| BoundSummary::new(b, data));
    let mut art = Artifacts::new(report);

    let mut sweeps = Vec::with_capacity(penalties.len());
    for &kind in penalties {
        let start = Instant::now();
        let sweep = path_sweep(data, &alphas, kind, solver)?;
        let per_solve = start.elapsed().as_secs_f64() / alphas.len() as f64;
        let thetas: Vec<_> = sweep
            .entries
            .iter()
            .map(|e| theta_for(&e.fit, data, grid.epsilon(), solver.grad_tol))
            .collect();
        for e in &sweep.entries {
            art.timings.solves.push(SolveTiming {
                penalty: kind.name(),
                alpha: e.alpha,
                seconds: per_solve,
            });
        }
        art.report
            .paths
            .push(PathSummary::new(&sweep, data, &thetas));
        sweeps.push(sweep);
    }

    for (i, &alpha) in alphas.iter().enumerate() {
        let curves: Vec<_> = sweeps
            .iter()
            .map(|s| (s.kind, alpha, &s.entries[i].fit.line))
            .collect();
        art.svgs.push((
            format!("path-{}.svg", i + 1),
            svg::fit_plot(&fit_title(penalties, alpha), data, &curves),
        ));
        for s in &sweeps {
            art.csvs.push((
                format!("path-{}-{}.csv", s.kind.name(), i + 1),
                csvio::fit_to_csv(data, &s.entries[i].fit.line),
            ));
        }
    }
    let series: Vec<_> = sweeps
        .iter()
        .map(|s| (s.kind, s.alphas(), s.distances()))
        .collect();
    art.svgs.push((
        "path-summary.svg".into(),
        svg::path_summary_plot("distance to the average line", &series),
    ));
    Ok((art, sweeps))
}

pub fn cmd_fit(cfg: &RunConfig) -> Result<Artifacts> {
    cfg.validate()?;
    let data = load_points(&cfg.input)?;
    let art = fit(
        &source_name(&cfg.input),
        &data,
        &cfg.penalties,
        &cfg.grid,
        &cfg.solver,
    )?;
    art.write(&cfg.out, cfg.emit)?;
    Ok(art)
}

pub fn cmd_bound(
    input: &Path,
    epsilon: f64,
    out: &Path,
    emit: Emit,
) -> Result<(Artifacts, AlphaBound)> {
    let data = load_points(input)?;
    let (art, b) = bound(&source_name(input), &data, epsilon)?;
    art.write(out, emit)?;
    Ok((art, b))
}

pub fn cmd_path(cfg: &RunConfig) -> Result<Artifacts> {
    cfg.validate()?;
    let data = load_points(&cfg.input)?;
    let (art, _) = path(
        &source_name(&cfg.input),
        &data,
        &cfg.penalties,
        &cfg.grid,
        &cfg.solver,
    )?;
    art.write(&cfg.out, cfg.emit)?;
    Ok(art)
}

fn source_name(path: &Path) -> String {
    path.display().to_string()
}

/// Bundled point files, identical to the tables in [`datasets`].
pub const FIXTURES: [(u8, &str); 4] = [
    (1, include_str!("../fixtures/example1.csv")),
    (2, include_str!("../fixtures/example2.csv")),
    (3, include_str!("../fixtures/example3.csv")),
    (4, include_str!("../fixtures/example4.csv")),
];

pub fn fixture(id: u8) -> PointSet {
    let (_, text) = FIXTURES
        .iter()
        .find(|(i, _)| *i == id)
        .unwrap_or_else(|| panic!("no fixture {id}"));
    load_points_from_str(text).expect("bundled fixture parses")
}

fn check(name: &str, expected: impl ToString, observed: impl ToString, pass: bool) -> Check {
    Check {
        name: name.into(),
        expected: expected.to_string(),
        observed: observed.to_string(),
        pass,
    }
}

fn rel_close(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol * target.abs()
}

/// Example 1: point list, bound and the reference minimizer.
fn example1(solver: &SolverConfig) -> Result<Artifacts> {
    let case = datasets::reference(1);
    let data = fixture(1);
    let eps = case.epsilon.expect("example 1 has epsilon");
    let grid = AlphaGrid::Fractions {
        epsilon: eps,
        fractions: vec![1.0],
    };
    let mut art = fit(
        "bundled:example1",
        &data,
        &[PenaltyKind::ArcLength],
        &grid,
        solver,
    )?;
    art.report.command = "examples";
    let bar = art
        .report
        .bound
        .as_ref()
        .map(|b| b.alpha_bar.0)
        .unwrap_or(f64::NAN);
    let checks = &mut art.report.checks;
    checks.push(check("n", 12, data.len(), data.len() == 12));
    checks.push(check(
        "max y",
        30.48287838,
        data.y_max(),
        data.y_max() == 30.48287838,
    ));
    checks.push(check(
        "min y",
        -40.121391,
        data.y_min(),
        data.y_min() == -40.121391,
    ));
    let printed = (bar * 10.0).round() / 10.0;
    checks.push(check(
        "alpha bar (1 decimal)",
        672.4,
        format!("{bar:.10}"),
        printed == 672.4,
    ));
    let fitted = &art.report.fits[0];
    let err = fitted
        .ordinates
        .iter()
        .zip(datasets::EXAMPLE1_MINIMIZER)
        .map(|(a, p)| (a.0 - p).abs())
        .fold(0.0, f64::max);
    checks.push(check(
        "minimizer vs reference (inf-norm)",
        "<= 5e-3",
        format!("{err:.3e}"),
        err <= 5e-3,
    ));
    Ok(art)
}

/// Example 2: bound and monotone flattening along fractions of it.
fn example2(solver: &SolverConfig) -> Result<Artifacts> {
    let data = fixture(2);
    let grid = AlphaGrid::Fractions {
        epsilon: 0.1,
        fractions: vec![0.4, 0.6, 0.8, 1.0],
    };
    let (mut art, sweeps) = path(
        "bundled:example2",
        &data,
        &[PenaltyKind::ArcLength],
        &grid,
        solver,
    )?;
    art.report.command = "examples";
    let bar = art
        .report
        .bound
        .as_ref()
        .map(|b| b.alpha_bar.0)
        .unwrap_or(f64::NAN);
    let alphas = sweeps[0].alphas();
    let d = sweeps[0].distances();
    let grid_ok = alphas
        .iter()
        .zip([500.0, 750.0, 1000.0, 1250.0])
        .all(|(a, t)| rel_close(*a, t, 1e-9));
    let checks = &mut art.report.checks;
    checks.push(check("alpha bar", 1250, bar, rel_close(bar, 1250.0, 1e-9)));
    checks.push(check(
        "grid",
        "[500, 750, 1000, 1250]",
        format!("{alphas:?}"),
        grid_ok,
    ));
    checks.push(check(
        "distance to average line decreases",
        "strictly decreasing",
        format!("{d:.6?}"),
        d.windows(2).all(|w| w[1] < w[0]),
    ));
    Ok(art)
}

/// Example 3: the three penalties side by side.
fn example3(solver: &SolverConfig) -> Result<Artifacts> {
    let case = datasets::reference(3);
    let data = fixture(3);
    let grid = AlphaGrid::Explicit {
        alphas: case.reference_alphas.to_vec(),
        epsilon: None,
    };
    let (mut art, sweeps) = path("bundled:example3", &data, &PenaltyKind::ALL, &grid, solver)?;
    art.report.command = "examples";
    let entries: Vec<usize> = sweeps.iter().map(|s| s.entries.len()).collect();
    let boxed = sweeps
        .iter()
        .all(|s| s.entries.iter().all(|e| e.fit.box_certificate));
    let checks = &mut art.report.checks;
    checks.push(check(
        "entries per penalty",
        "[4, 4, 4]",
        format!("{entries:?}"),
        entries == [4, 4, 4],
    ));
    checks.push(check("fits inside data range", true, boxed, boxed));
    Ok(art)
}

/// Example 4: arc length stays farther from the average line than both
/// slope penalties.
fn example4(solver: &SolverConfig) -> Result<Artifacts> {
    let case = datasets::reference(4);
    let data = fixture(4);
    let eps = case.epsilon.expect("example 4 has epsilon");
    let grid = AlphaGrid::Explicit {
        alphas: case.reference_alphas.to_vec(),
        epsilon: Some(eps),
    };
    // at this data scale the default gradient tolerance is below rounding
    let solver = SolverConfig {
        grad_tol: solver.grad_tol.max(1e-7),
        ..solver.clone()
    };
    let (mut art, sweeps) = path("bundled:example4", &data, &PenaltyKind::ALL, &grid, &solver)?;
    art.report.command = "examples";
    let bar = art
        .report
        .bound
        .as_ref()
        .map(|b| b.alpha_bar.0)
        .unwrap_or(f64::NAN);
    let slowest = (0..case.reference_alphas.len()).all(|i| {
        let arc = sweeps[0].entries[i].distance_to_average_line;
        sweeps[1..]
            .iter()
            .all(|s| arc > s.entries[i].distance_to_average_line)
    });
    let dist: Vec<Vec<f64>> = sweeps.iter().map(|s| s.distances()).collect();
    let checks = &mut art.report.checks;
    checks.push(check(
        "alpha bar",
        43520,
        bar,
        rel_close(bar, 43520.0, 1e-9),
    ));
    checks.push(check(
        "arc length farthest from average line",
        "arc > ridge, lasso at every alpha",
        format!("{dist:.4?}"),
        slowest,
    ));
    Ok(art)
}

/// Runs the bundled examples into `out/exampleN` and returns the reports in
/// order.
pub fn cmd_examples(out: &Path, emit: Emit) -> Result<Vec<(String, Artifacts)>> {
    fs::create_dir_all(out).map_err(|source| CliError::Write {
        path: out.to_path_buf(),
        source,
    })?;
    let solver = SolverConfig::default();
    let runs = [
        ("example1", example1(&solver)?),
        ("example2", example2(&solver)?),
        ("example3", example3(&solver)?),
        ("example4", example4(&solver)?),
    ];
    let mut done = Vec::with_capacity(runs.len());
    for (name, art) in runs {
        let dir: PathBuf = out.join(name);
        art.write(&dir, emit)?;
        done.push((name.to_string(), art));
    }
    Ok(done)
}

pub fn check_table(runs: &[(String, Artifacts)]) -> String {
    let mut out = String::new();
    for (name, art) in runs {
        for c in &art.report.checks {
            out.push_str(&format!(
                "{:<4} {name:<9} {:<40} expected {:<24} observed {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.expected,
                c.observed
            ));
        }
    }
    out
}
