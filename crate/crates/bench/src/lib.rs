//! Fixtures for the benchmarks.

use quatjordan::generate::{default_grid, random_spec};
use quatjordan::{generate, HMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SIZES: [usize; 4] = [2, 4, 6, 8];

/// A reproducible `P J P⁻¹` instance of dimension `n`.
pub fn fixture(n: usize) -> HMatrix {
    let seed = 7000 + n as u64;
    let spec = random_spec(n, &default_grid(), &mut ChaCha8Rng::seed_from_u64(seed)).expect("valid dimension");
    generate(&spec, seed, 1e3).expect("generation succeeds").a
}
