//! Seeded random instances for property suites and benchmarks.
//!
//! The base seed comes from `ARCLEN_REG_SEED` when set, so a failing run can
//! be reproduced; solvers themselves never consult it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{BrokenLine, PointSet};

pub const SEED_VAR: &str = "ARCLEN_REG_SEED";
const DEFAULT_SEED: u64 = 0x5eed_a7c1;

pub fn base_seed() -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

/// Independent generator for one named stream.
pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(base_seed());
    r.set_stream(stream);
    r
}

/// `n` points with gaps drawn from `[0.2, 1.8)` and ordinates from
/// `[y_lo, y_hi)`.
pub fn random_point_set<R: Rng>(rng: &mut R, n: usize, y_lo: f64, y_hi: f64) -> PointSet {
    let mut x = rng.gen_range(-5.0..5.0);
    let mut xs = Vec::with_capacity(n);
    for _ in 0..n {
        xs.push(x);
        x += rng.gen_range(0.2..1.8);
    }
    let ys = (0..n).map(|_| rng.gen_range(y_lo..y_hi)).collect();
    PointSet::new(xs, ys).expect("generated abscissas increase")
}

pub fn random_line<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> BrokenLine {
    BrokenLine::new((0..n).map(|_| rng.gen_range(lo..hi)).collect()).expect("finite")
}
