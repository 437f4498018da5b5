use std::path::PathBuf;

use arclen_core::{alpha_upper_bound, AlphaBound, PenaltyKind, PointSet, SolverConfig};

use crate::error::{CliError, Result};

/// Where the penalty coefficients come from.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaGrid {
    /// Coefficients given directly. `epsilon`, when present, only adds bound
    /// and angle diagnostics to the report.
    Explicit {
        alphas: Vec<f64>,
        epsilon: Option<f64>,
    },
    /// Fractions of the bound `(max y - min y) / epsilon`.
    Fractions { epsilon: f64, fractions: Vec<f64> },
}

impl AlphaGrid {
    /// Builds the grid from the raw command-line options: exactly one of an
    /// alpha list or an epsilon-driven grid. Epsilon on its own means the
    /// single coefficient at the bound.
    pub fn from_options(
        alphas: Option<Vec<f64>>,
        epsilon: Option<f64>,
        fractions: Option<Vec<f64>>,
    ) -> Result<Self> {
        match (alphas, epsilon, fractions) {
            (Some(_), _, Some(_)) => Err(CliError::Config(
                "give either --alpha or --grid-fractions, not both".into(),
            )),
            (Some(alphas), epsilon, None) => Ok(AlphaGrid::Explicit { alphas, epsilon }),
            (None, Some(epsilon), fractions) => Ok(AlphaGrid::Fractions {
                epsilon,
                fractions: fractions.unwrap_or_else(|| vec![1.0]),
            }),
            (None, None, Some(_)) => {
                Err(CliError::Config("--grid-fractions needs --epsilon".into()))
            }
            (None, None, None) => Err(CliError::Config(
                "one of --alpha or --epsilon is required".into(),
            )),
        }
    }

    pub fn epsilon(&self) -> Option<f64> {
        match self {
            AlphaGrid::Explicit { epsilon, .. } => *epsilon,
            AlphaGrid::Fractions { epsilon, .. } => Some(*epsilon),
        }
    }

    pub fn fractions(&self) -> Option<&[f64]> {
        match self {
            AlphaGrid::Explicit { .. } => None,
            AlphaGrid::Fractions { fractions, .. } => Some(fractions),
        }
    }

    /// The coefficients in grid order, and the bound whenever epsilon is
    /// known.
    pub fn resolve(&self, data: &PointSet) -> Result<(Vec<f64>, Option<AlphaBound>)> {
        let bound = self
            .epsilon()
            .map(|eps| alpha_upper_bound(data, eps))
            .transpose()?;
        let alphas = match self {
            AlphaGrid::Explicit { alphas, .. } => alphas.clone(),
            AlphaGrid::Fractions { fractions, .. } => {
                let bar = bound.as_ref().map_or(0.0, |b| b.alpha_bar);
                fractions.iter().map(|f| f * bar).collect()
            }
        };
        arclen_core::bounds::validate_grid(&alphas)?;
        Ok((alphas, bound))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Emit {
    pub svg: bool,
    pub json: bool,
    pub csv: bool,
}

impl Default for Emit {
    fn default() -> Self {
        Emit {
            svg: true,
            json: true,
            csv: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub penalties: Vec<PenaltyKind>,
    pub grid: AlphaGrid,
    pub solver: SolverConfig,
    pub out: PathBuf,
    pub emit: Emit,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.penalties.is_empty() {
            return Err(CliError::Config("no penalty selected".into()));
        }
        self.solver.validate()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_one_grid_source() {
        assert!(AlphaGrid::from_options(Some(vec![1.0]), None, Some(vec![0.5])).is_err());
        assert!(AlphaGrid::from_options(None, None, None).is_err());
        assert!(AlphaGrid::from_options(None, None, Some(vec![0.5])).is_err());
        assert_eq!(
            AlphaGrid::from_options(None, Some(0.1), None).unwrap(),
            AlphaGrid::Fractions {
                epsilon: 0.1,
                fractions: vec![1.0]
            }
        );
    }

    #[test]
    fn fractions_scale_the_bound() {
        let d = PointSet::from_pairs([(0.0, 0.0), (1.0, 125.0), (2.0, 10.0)]).unwrap();
        let grid = AlphaGrid::Fractions {
            epsilon: 0.1,
            fractions: vec![0.4, 0.6, 0.8, 1.0],
        };
        let (alphas, bound) = grid.resolve(&d).unwrap();
        assert_eq!(bound.unwrap().alpha_bar, 1250.0);
        assert_eq!(alphas, vec![500.0, 750.0, 1000.0, 1250.0]);
    }

    #[test]
    fn bad_grid_is_rejected() {
        let d = PointSet::from_pairs([(0.0, 0.0), (1.0, 1.0)]).unwrap();
        let grid = AlphaGrid::Explicit {
            alphas: vec![2.0, 1.0],
            epsilon: None,
        };
        assert!(grid.resolve(&d).is_err());
    }
}
