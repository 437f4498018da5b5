//! Piecewise-linear approximation of 2D point sets with an arc-length
//! penalty.
//!
//! The fit is a broken line with vertices at the data abscissas. Its vertex
//! ordinates minimize the residual sum of squares plus `alpha` times the
//! length of the line. Ridge and lasso penalties on the link slopes are
//! provided as baselines.
//!
//! * [`model`]: data types, objective, gradient, Hessian and link angles.
//! * [`solvers`]: Newton (arc length), direct solve (ridge), IRLS (lasso).
//! * [`bounds`]: the flat-line limit, the `alpha` upper bound
//!   `(max y - min y) / eps`, angle-space diagnostics and path sweeps.
//!
//! ```
//! use arclen_core::{bounds, datasets, solvers};
//!
//! let data = datasets::reference(2).point_set();
//! let bound = bounds::alpha_upper_bound(&data, 0.1).unwrap();
//! assert_eq!(bound.alpha_bar, 1250.0);
//!
//! let (fit, _) = solvers::solve_arc_length(&data, bound.alpha_bar, &Default::default()).unwrap();
//! assert!(fit.converged() && fit.box_certificate);
//! ```

pub mod bounds;
pub mod datasets;
pub mod error;
pub mod model;
pub mod par;
pub mod solvers;
pub mod testdata;
pub mod tridiag;

pub use bounds::{
    alpha_upper_bound, average_line, path_sweep, theta_diagnostics, verify_average_line_optimality,
    AlphaBound, PathEntry, PathSweep, ThetaDiagnostics,
};
pub use error::{Error, Result};
pub use model::{
    gradient, hessian, link_angles, objective, BrokenLine, LinkAngles, PenaltyKind, PenaltySpec,
    PointSet,
};
pub use par::Execution;
pub use solvers::{
    solve, solve_arc_length, solve_lasso_slopes, solve_ridge_slopes, ConvergenceTrace, FitResult,
    Init, SolverConfig, Status,
};
pub use tridiag::SymTridiagonal;
