//! Counter-based substream derivation: each (realization, purpose) pair
//! gets an independent, order-free random stream from the master seed, so
//! results do not depend on execution order or worker count and adding a
//! scheme never perturbs another scheme's draws.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn fnv1a64(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

pub fn substream(master_seed: u64, realization: u64, purpose: &str) -> ChaCha12Rng {
    let mut z = splitmix64(master_seed);
    z = splitmix64(z ^ fnv1a64(purpose));
    z = splitmix64(z ^ realization.wrapping_mul(0x2545f4914f6cdd1d));
    ChaCha12Rng::seed_from_u64(z)
}
