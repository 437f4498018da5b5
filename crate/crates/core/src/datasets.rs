//! Four bundled 12-point reference datasets with their reference settings.

use crate::model::PointSet;

#[derive(Debug, Clone, Copy)]
pub struct ReferenceCase {
    pub id: u8,
    pub points: &'static [(f64, f64)],
    /// Separation threshold used to derive the penalty bound, when known.
    pub epsilon: Option<f64>,
    /// Bound as printed alongside the data.
    pub reference_alpha_bar: Option<f64>,
    /// Coefficients of the reference runs.
    pub reference_alphas: &'static [f64],
}

impl ReferenceCase {
    pub fn point_set(&self) -> PointSet {
        PointSet::from_pairs(self.points.iter().copied()).expect("reference data is valid")
    }

    pub fn name(&self) -> String {
        format!("example{}", self.id)
    }
}

const ELEVENTHS: [f64; 12] = [
    0.0,
    1.0 / 11.0,
    2.0 / 11.0,
    3.0 / 11.0,
    4.0 / 11.0,
    5.0 / 11.0,
    6.0 / 11.0,
    7.0 / 11.0,
    8.0 / 11.0,
    9.0 / 11.0,
    10.0 / 11.0,
    1.0,
];

const EXAMPLE1: [(f64, f64); 12] = [
    (ELEVENTHS[0], 8.74970396),
    (ELEVENTHS[1], -20.44713479),
    (ELEVENTHS[2], -32.91463106),
    (ELEVENTHS[3], 3.15417017),
    (ELEVENTHS[4], 7.00412727),
    (ELEVENTHS[5], 28.91840718),
    (ELEVENTHS[6], 30.48287838),
    (ELEVENTHS[7], 3.75438939),
    (ELEVENTHS[8], -0.06462388),
    (ELEVENTHS[9], 0.46098988),
    (ELEVENTHS[10], -12.35515561),
    (ELEVENTHS[11], -40.121391),
];

const EXAMPLE2: [(f64, f64); 12] = [
    (ELEVENTHS[0], 2.0),
    (ELEVENTHS[1], 4.0),
    (ELEVENTHS[2], 8.0),
    (ELEVENTHS[3], 1.0),
    (ELEVENTHS[4], 0.5),
    (ELEVENTHS[5], 0.0),
    (ELEVENTHS[6], 25.0),
    (ELEVENTHS[7], 10.0),
    (ELEVENTHS[8], 0.0),
    (ELEVENTHS[9], 125.0),
    (ELEVENTHS[10], 14.0),
    (ELEVENTHS[11], 12.0),
];

const EXAMPLE3: [(f64, f64); 12] = [
    (0.0, 0.0),
    (1.0, 20.0),
    (2.0, 15.0),
    (3.0, 5.0),
    (4.0, 12.0),
    (5.0, 5.0),
    (6.0, 6.0),
    (7.0, 5.0),
    (8.0, 5.0),
    (9.0, 7.0),
    (10.0, 19.0),
    (11.0, 2.0),
];

const EXAMPLE4: [(f64, f64); 12] = [
    (0.0, -32.0),
    (1.0, 2048.0),
    (2.0, 0.0),
    (3.0, 256.0),
    (4.0, -128.0),
    (5.0, 16.0),
    (6.0, -4.0),
    (7.0, 2.0),
    (8.0, 128.0),
    (9.0, -64.0),
    (10.0, -32.0),
    (11.0, 8.0),
];

/// Reference minimizer for example 1 at `alpha = 672.4`.
pub const EXAMPLE1_MINIMIZER: [f64; 12] = [
    -1.94981404,
    -1.95270849,
    -1.95060026,
    -1.9400497,
    -1.93090088,
    -1.92419569,
    -1.92584876,
    -1.93633343,
    -1.94839252,
    -1.96097549,
    -1.97423314,
    -1.98461195,
];

pub const REFERENCE_CASES: [ReferenceCase; 4] = [
    ReferenceCase {
        id: 1,
        points: &EXAMPLE1,
        epsilon: Some(0.105),
        reference_alpha_bar: Some(672.4),
        reference_alphas: &[672.4],
    },
    ReferenceCase {
        id: 2,
        points: &EXAMPLE2,
        epsilon: Some(0.1),
        reference_alpha_bar: Some(1250.0),
        reference_alphas: &[500.0, 750.0, 1000.0, 1250.0],
    },
    ReferenceCase {
        id: 3,
        points: &EXAMPLE3,
        epsilon: None,
        reference_alpha_bar: None,
        reference_alphas: &[10.0, 25.0, 50.0, 250.0],
    },
    ReferenceCase {
        id: 4,
        points: &EXAMPLE4,
        epsilon: Some(0.05),
        reference_alpha_bar: Some(43520.0),
        reference_alphas: &[10840.0, 21760.0, 32640.0, 43520.0],
    },
];

pub fn reference(id: u8) -> &'static ReferenceCase {
    REFERENCE_CASES
        .iter()
        .find(|c| c.id == id)
        .unwrap_or_else(|| panic!("no reference case {id}"))
}
