//! Seeded randomness. Every random draw in the crate goes through a ChaCha stream.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent sub-stream `index` of `seed`.
pub fn substream(seed: u64, index: u64) -> Stream {
    let mut s = ChaCha8Rng::seed_from_u64(seed);
    s.set_stream(index);
    s
}

pub fn unit(rng: &mut Stream) -> Complex64 {
    crate::numeric::e(rng.gen::<f64>())
}

/// Uniform in the closed unit disc.
pub fn disc(rng: &mut Stream) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    unit(rng) * r
}

/// Standard normal via Box-Muller.
pub fn normal(rng: &mut Stream) -> f64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

pub fn complex_normal(rng: &mut Stream) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}
