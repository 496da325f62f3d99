//! The bundled synthetic benchmark set.
//!
//! Two overlapping classes in `d` dimensions. Labels are fair coin flips;
//! a point of class `y` is `y * shift + noise`, where `shift` puts its mass on
//! the first two coordinates and the noise is a Gaussian scale mixture: with
//! probability [`OUTLIER_RATE`] the per-coordinate standard deviations are
//! multiplied by [`OUTLIER_SCALE`]. Coordinate `j` has base deviation
//! `1 / (1 + 0.15 j)`.

use crate::dataset::{Label, LabeledDataset, LabeledPoint};
use crate::error::Result;
use crate::rng;

pub const BUNDLED_N: usize = 5_000;
pub const BUNDLED_D: usize = 10;
pub const BUNDLED_SEED: u64 = 20_180_517;

pub const OUTLIER_RATE: f64 = 0.1;
pub const OUTLIER_SCALE: f64 = 3.0;

const SHIFT: [f64; 2] = [0.8, 0.4];

pub fn two_gaussians(n: usize, d: usize, seed: u64) -> Result<LabeledDataset> {
    let mut rng = rng::seeded(seed);
    let points = (0..n)
        .map(|_| {
            let label = if rng::unit_f64(&mut rng) < 0.5 {
                Label::Positive
            } else {
                Label::Negative
            };
            let spread = if rng::unit_f64(&mut rng) < OUTLIER_RATE {
                OUTLIER_SCALE
            } else {
                1.0
            };
            let features = (0..d)
                .map(|j| {
                    let shift = SHIFT.get(j).copied().unwrap_or(0.0);
                    let sd = spread / (1.0 + 0.15 * j as f64);
                    label.sign() * shift + sd * rng::standard_normal(&mut rng)
                })
                .collect();
            LabeledPoint::new(features, label)
        })
        .collect();
    LabeledDataset::with_dim(points, d)
}

/// The raw bundled set (`n = 5000`, `d = 10`).
pub fn bundled() -> LabeledDataset {
    two_gaussians(BUNDLED_N, BUNDLED_D, BUNDLED_SEED).expect("finite synthetic data")
}

/// The bundled set after centering and unit-ball scaling.
pub fn bundled_preprocessed() -> LabeledDataset {
    crate::dataset::preprocess(&bundled(), false).expect("bundled set preprocesses")
}
