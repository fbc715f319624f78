//! Fixed inputs shared by the benchmarks.

use charp_core::poly::Ring;
use charp_core::random::Sampler;

pub const SEED: u64 = 7;

pub fn sampler(p: u32, nvars: usize) -> Sampler {
    Sampler::new(Ring::new(p, nvars).expect("valid ring"), SEED)
}
