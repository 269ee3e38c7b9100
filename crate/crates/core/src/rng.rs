//! Replayable random streams.
//!
//! Every sampler takes an explicit [`StreamRng`]. Replica `i` of an
//! experiment seeded with `seed` always uses `stream(seed, i)`, so results do
//! not depend on how replicas are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform on (0, 1].
#[inline]
pub fn uniform_open0<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Unit-rate exponential by inversion.
#[inline]
pub fn exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -uniform_open0(rng).ln()
}

/// Box-Muller normal. Always consumes exactly two uniforms; the sine branch
/// is discarded so that draw counts stay fixed per call.
#[inline]
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let r = (-2.0 * uniform_open0(rng).ln()).sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    r * theta.cos()
}
