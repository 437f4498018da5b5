//! Symmetric tridiagonal matrices.
//!
//! Every system the solvers face has the form `2I + penalty curvature`, where
//! the penalty couples only neighbouring vertices. Those matrices are
//! symmetric and diagonally dominant, so plain elimination without pivoting
//! is stable.

use serde::Serialize;

/// Symmetric tridiagonal matrix stored by its main diagonal (length `n`) and
/// off-diagonal (length `n - 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            !diag.is_empty() && off.len() + 1 == diag.len(),
            "off-diagonal must be one shorter than the diagonal"
        );
        Self { diag, off }
    }

    /// `scale * I` of size `n`.
    pub fn scaled_identity(n: usize, scale: f64) -> Self {
        Self::new(vec![scale; n], vec![0.0; n.saturating_sub(1)])
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Adds `weight * (e_i - e_{i+1})(e_i - e_{i+1})^T`, the curvature of a
    /// term that depends on `a_{i+1} - a_i` only.
    pub fn add_link(&mut self, i: usize, weight: f64) {
        self.diag[i] += weight;
        self.diag[i + 1] += weight;
        self.off[i] -= weight;
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        match row.abs_diff(col) {
            0 => self.diag[row],
            1 => self.off[row.min(col)],
            _ => 0.0,
        }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(v.len(), n);
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Solves `self * x = rhs` by forward elimination and back substitution.
    ///
    /// Returns `None` if a pivot vanishes or turns non-finite, which cannot
    /// happen for the positive definite systems built in this crate.
    pub fn solve(&self, rhs: &[f64]) -> Option<Vec<f64>> {
        let n = self.dim();
        assert_eq!(rhs.len(), n);
        let mut pivots = Vec::with_capacity(n);
        let mut x = Vec::with_capacity(n);
        pivots.push(self.diag[0]);
        x.push(rhs[0]);
        for i in 1..n {
            let prev = pivots[i - 1];
            if prev == 0.0 || !prev.is_finite() {
                return None;
            }
            let m = self.off[i - 1] / prev;
            pivots.push(self.diag[i] - m * self.off[i - 1]);
            x.push(rhs[i] - m * x[i - 1]);
        }
        if pivots[n - 1] == 0.0 || !pivots[n - 1].is_finite() {
            return None;
        }
        x[n - 1] /= pivots[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = (x[i] - self.off[i] * x[i + 1]) / pivots[i];
        }
        x.iter().all(|v| v.is_finite()).then_some(x)
    }

    /// Row-sum norm.
    pub fn inf_norm(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.off[i - 1].abs();
                }
                if i + 1 < n {
                    s += self.off[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_known_system() {
        // [[4,1,0],[1,4,1],[0,1,4]] x = [5,6,5] has x = (1,1,1)
        let m = SymTridiagonal::new(vec![4.0, 4.0, 4.0], vec![1.0, 1.0]);
        let x = m.solve(&[5.0, 6.0, 5.0]).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn one_by_one() {
        let m = SymTridiagonal::scaled_identity(1, 2.0);
        assert_eq!(m.solve(&[3.0]).unwrap(), vec![1.5]);
    }

    #[test]
    fn singular_pivot_is_reported() {
        let m = SymTridiagonal::new(vec![0.0, 1.0], vec![1.0]);
        assert!(m.solve(&[1.0, 1.0]).is_none());
    }

    #[test]
    fn add_link_builds_laplacian() {
        let mut m = SymTridiagonal::scaled_identity(3, 0.0);
        m.add_link(0, 1.0);
        m.add_link(1, 1.0);
        assert_eq!(m.diag, vec![1.0, 2.0, 1.0]);
        assert_eq!(m.off, vec![-1.0, -1.0]);
        assert_eq!(m.get(2, 1), -1.0);
        assert_eq!(m.get(0, 2), 0.0);
    }

    #[test]
    fn residual_of_solution_is_small() {
        let m = SymTridiagonal::new(vec![3.0, 5.0, 7.0, 2.5], vec![-1.0, 0.5, -2.0]);
        let b = [1.0, -2.0, 3.0, 0.25];
        let x = m.solve(&b).unwrap();
        let r = m.mul_vec(&x);
        for (ri, bi) in r.iter().zip(b) {
            assert!((ri - bi).abs() < 1e-14);
        }
    }
}
