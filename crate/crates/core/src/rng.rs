//! Seeded random streams.
//!
//! Every random decision in the crate is drawn from ChaCha20 keyed by a
//! 64-bit seed (expanded with `rand_core`'s `seed_from_u64`). Index and
//! coin draws are computed from raw `next_u64` output so the stream does not
//! depend on `rand`'s higher-level range sampling algorithms.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

/// Identifier written into coreset metadata.
pub const GENERATOR_ID: &str = "chacha20/seed_from_u64";

pub type SeededRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from a base seed and a sequence of integer keys.
pub fn derive_seed(base: u64, keys: &[u64]) -> u64 {
    keys.iter()
        .fold(mix64(base), |acc, &k| mix64(acc ^ mix64(k.wrapping_add(0x632b_e59b_d9b4_e019))))
}

/// Uniform in [0, 1) with 53 bits of precision.
pub fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `0..n` by widening multiplication. The bias is at most
/// n / 2^64 and is ignored.
pub fn index<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> usize {
    debug_assert!(n > 0);
    ((rng.next_u64() as u128 * n as u128) >> 64) as usize
}

pub fn standard_normal<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Uniform draw from the closed ball of the given radius in `d` dimensions:
/// a normalized Gaussian direction scaled by `radius * U^(1/d)`.
pub fn uniform_in_ball<R: RngCore + ?Sized>(rng: &mut R, d: usize, radius: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..d).map(|_| standard_normal(rng)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return vec![0.0; d];
    }
    let r = radius * unit_f64(rng).powf(1.0 / d as f64);
    for x in &mut v {
        *x *= r / norm;
    }
    v
}
