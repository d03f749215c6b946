//! Seeded randomness.
//!
//! Every stochastic operation takes an explicit `u64` seed and draws from
//! ChaCha20 ([`rand_chacha::ChaCha20Rng`]), a counter-based generator whose
//! output depends only on the 256-bit key, the 64-bit stream id and the block
//! counter. The key is expanded from the seed with `SeedableRng::seed_from_u64`.
//! Independent substreams (one per instance, per epoch, ...) are selected with
//! [`rand_chacha::ChaCha20Rng::set_stream`], so results do not depend on the
//! order in which substreams are consumed or on the platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Identifier recorded in manifests.
pub const ALGORITHM: &str = "chacha20";

pub type DetRng = ChaCha20Rng;

/// Stream ids reserved for top-level purposes. Per-item substreams use
/// [`substream`] with the item index, which never collides with these because
/// each purpose also perturbs the key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Split = 1,
    NoiseRates = 2,
    NoiseInjection = 3,
    Init = 4,
    Shuffle = 5,
    Synthetic = 6,
    Verify = 7,
}

pub fn from_seed(seed: u64) -> DetRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// The generator for `purpose` under `seed`.
pub fn for_purpose(seed: u64, purpose: Purpose) -> DetRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ (purpose as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(purpose as u64);
    rng
}

/// Substream `index` of `purpose` under `seed`.
pub fn substream(seed: u64, purpose: Purpose, index: u64) -> DetRng {
    let mut rng = for_purpose(seed, purpose);
    rng.set_stream(index.wrapping_add(1 << 32));
    rng
}

/// Uniform integer in `0..n` drawn through a `u64` so the result is the same on
/// 32- and 64-bit targets.
#[inline]
pub fn index_below<R: Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    rng.random_range(0..n as u64) as usize
}

/// Fisher-Yates shuffle.
pub fn shuffle<T, R: Rng + ?Sized>(rng: &mut R, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = index_below(rng, i + 1);
        items.swap(i, j);
    }
}

/// A random permutation of `0..n`.
pub fn permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> alloc::vec::Vec<usize> {
    let mut idx: alloc::vec::Vec<usize> = (0..n).collect();
    shuffle(rng, &mut idx);
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a: [u64; 4] = core::array::from_fn(|_| for_purpose(9, Purpose::Init).random());
        let mut r = for_purpose(9, Purpose::Init);
        let first: u64 = r.random();
        assert!(a.iter().all(|&v| v == first));
        let mut s1 = substream(9, Purpose::Shuffle, 3);
        let mut s2 = substream(9, Purpose::Shuffle, 3);
        let mut s3 = substream(9, Purpose::Shuffle, 4);
        let (x1, x2, x3): (u64, u64, u64) = (s1.random(), s2.random(), s3.random());
        assert_eq!(x1, x2);
        assert_ne!(x1, x3);
    }

    #[test]
    fn permutation_is_a_permutation() {
        let mut rng = from_seed(1);
        let mut p = permutation(&mut rng, 100);
        p.sort_unstable();
        assert!(p.iter().enumerate().all(|(i, &v)| i == v));
    }

    #[test]
    fn golden_first_draw() {
        // Pins the generator: a change in the algorithm or the seeding breaks
        // reproducibility of every recorded experiment.
        let a: u64 = from_seed(0).random();
        let b: u64 = for_purpose(0, Purpose::Shuffle).random();
        let c: u64 = substream(0, Purpose::NoiseInjection, 3).random();
        assert_eq!(
            (a, b, c),
            (449479075714955186, 12088329350626459925, 3301354821241234189)
        );
    }
}
