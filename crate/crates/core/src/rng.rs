//! Counter-based random streams.
//!
//! Every random draw is keyed by `(seed, stream)`: sample `i` of a run uses
//! its own ChaCha stream, so results do not depend on evaluation order or on
//! how work is split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Independent generator for sample `stream` of run `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer; derives sub-seeds such as `(seed, radius index)`.
pub fn mix(seed: u64, key: u64) -> u64 {
    let mut z = seed ^ key.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x6A09_E667_F3BC_C909);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform point in the open unit ball of ℝ^dim: a normalized Gaussian
/// direction scaled by `U^{1/dim}`.
pub fn unit_ball_point<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            continue;
        }
        let u: f64 = rng.random();
        let r = u.powf(1.0 / dim as f64);
        if r >= 1.0 {
            continue;
        }
        return g.into_iter().map(|x| x / norm * r).collect();
    }
}
