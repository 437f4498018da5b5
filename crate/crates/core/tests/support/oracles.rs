//! Reference computations that share no code with the solvers they check.
#![allow(dead_code)]

/// Arc-length objective evaluated from scratch.
pub fn arc_objective(xs: &[f64], ys: &[f64], alpha: f64, a: &[f64]) -> f64 {
    let rss: f64 = ys.iter().zip(a).map(|(y, a)| (y - a).powi(2)).sum();
    let len: f64 = (1..a.len())
        .map(|i| ((a[i] - a[i - 1]).powi(2) + (xs[i] - xs[i - 1]).powi(2)).sqrt())
        .sum();
    rss + alpha * len
}

pub fn lasso_objective(xs: &[f64], ys: &[f64], alpha: f64, a: &[f64]) -> f64 {
    let rss: f64 = ys.iter().zip(a).map(|(y, a)| (y - a).powi(2)).sum();
    let pen: f64 = (1..a.len())
        .map(|i| ((a[i] - a[i - 1]) / (xs[i] - xs[i - 1])).abs())
        .sum();
    rss + alpha * pen
}

/// Brute-force minimizer of the 3-point arc-length objective over the box
/// `[min y, max y]^3` on a grid of the given resolution, followed by grid
/// refinement around the best point.
///
/// For fixed `a2` the objective splits into a function of `a1` plus a
/// function of `a3`, so the full 3D grid minimum is found with two 1D scans
/// per value of `a2`.
pub fn brute_force_arc3(xs: &[f64; 3], ys: &[f64; 3], alpha: f64, resolution: f64) -> [f64; 3] {
    let lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let steps = ((hi - lo) / resolution).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect();
    let mut best = scan(xs, ys, alpha, &grid, &grid, &grid);

    let mut h = resolution;
    for _ in 0..4 {
        let axis = |c: f64| -> Vec<f64> { (-20..=20).map(|k| c + k as f64 * h / 10.0).collect() };
        best = scan(
            xs,
            ys,
            alpha,
            &axis(best[0]),
            &axis(best[1]),
            &axis(best[2]),
        );
        h /= 10.0;
    }
    best
}

fn scan(xs: &[f64; 3], ys: &[f64; 3], alpha: f64, g1: &[f64], g2: &[f64], g3: &[f64]) -> [f64; 3] {
    let (dx1, dx2) = (xs[1] - xs[0], xs[2] - xs[1]);
    let mut best = (f64::INFINITY, [0.0; 3]);
    for &a2 in g2 {
        let (mut v1, mut b1) = (f64::INFINITY, 0.0);
        for &a1 in g1 {
            let v = (a1 - ys[0]).powi(2) + alpha * ((a2 - a1).powi(2) + dx1 * dx1).sqrt();
            if v < v1 {
                (v1, b1) = (v, a1);
            }
        }
        let (mut v3, mut b3) = (f64::INFINITY, 0.0);
        for &a3 in g3 {
            let v = (a3 - ys[2]).powi(2) + alpha * ((a3 - a2).powi(2) + dx2 * dx2).sqrt();
            if v < v3 {
                (v3, b3) = (v, a3);
            }
        }
        let total = v1 + v3 + (a2 - ys[1]).powi(2);
        if total < best.0 {
            best = (total, [b1, a2, b3]);
        }
    }
    best.1
}

/// Proximal gradient (ISTA) for the lasso-on-slopes objective in the
/// coordinates `(a_1, k_1, ..., k_{n-1})`, where the penalty is a plain
/// `l1` norm on the `k` block and `a_1` is unpenalized.
pub fn proximal_gradient_lasso(
    xs: &[f64],
    ys: &[f64],
    alpha: f64,
    step: f64,
    max_iters: usize,
) -> Vec<f64> {
    let n = ys.len();
    let dx: Vec<f64> = (1..n).map(|i| xs[i] - xs[i - 1]).collect();
    let mut a1 = ys[0];
    let mut k: Vec<f64> = (1..n).map(|i| (ys[i] - ys[i - 1]) / dx[i - 1]).collect();
    let mut a = vec![0.0; n];
    let mut r = vec![0.0; n];
    for _ in 0..max_iters {
        a[0] = a1;
        for i in 1..n {
            a[i] = a[i - 1] + k[i - 1] * dx[i - 1];
        }
        for i in 0..n {
            r[i] = 2.0 * (a[i] - ys[i]);
        }
        // d/dk_i of RSS = dx_i * sum_{j > i} 2 r_j
        let mut tail = 0.0;
        let mut moved: f64 = 0.0;
        for i in (1..n).rev() {
            tail += r[i];
            let z = k[i - 1] - step * dx[i - 1] * tail;
            let t = step * alpha;
            let next = z.signum() * (z.abs() - t).max(0.0);
            moved = moved.max((next - k[i - 1]).abs());
            k[i - 1] = next;
        }
        tail += r[0];
        let next = a1 - step * tail;
        moved = moved.max((next - a1).abs());
        a1 = next;
        if moved <= 1e-15 * (1.0 + a1.abs()) {
            break;
        }
    }
    a[0] = a1;
    for i in 1..n {
        a[i] = a[i - 1] + k[i - 1] * dx[i - 1];
    }
    a
}

/// Central differences with step `1e-6 * (1 + |a_i|)`.
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, a: &[f64]) -> Vec<f64> {
    let mut p = a.to_vec();
    (0..a.len())
        .map(|i| {
            let h = 1e-6 * (1.0 + a[i].abs());
            p[i] = a[i] + h;
            let up = f(&p);
            p[i] = a[i] - h;
            let down = f(&p);
            p[i] = a[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Central-difference Jacobian of a vector field, row-major `n x n`.
pub fn fd_jacobian(g: impl Fn(&[f64]) -> Vec<f64>, a: &[f64]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    let mut p = a.to_vec();
    for j in 0..n {
        let h = 1e-6 * (1.0 + a[j].abs());
        p[j] = a[j] + h;
        let up = g(&p);
        p[j] = a[j] - h;
        let down = g(&p);
        p[j] = a[j];
        cols.push(
            up.iter()
                .zip(&down)
                .map(|(u, d)| (u - d) / (2.0 * h))
                .collect::<Vec<f64>>(),
        );
    }
    (0..n)
        .map(|i| (0..n).map(|j| cols[j][i]).collect())
        .collect()
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
