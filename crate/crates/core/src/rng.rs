//! Counter-based random substreams.
//!
//! Every path owns one ChaCha8 stream per [`Purpose`]. The stream is a pure
//! function of `(seed, path_index, purpose)`, so a path's randomness does not
//! depend on which thread simulates it, on the order paths are scheduled, or on
//! how many draws another purpose consumed (the number of jumps, say).

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// What a substream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Purpose {
    /// Brownian increments of the price flow.
    Wiener = 0,
    /// Exponential clocks driving the jump times.
    JumpClock = 1,
    /// Uniforms fed to the Laplace drift kernel.
    Kernel = 2,
}

pub type Stream = ChaCha8Rng;

pub fn stream(seed: u64, path_index: u64, purpose: Purpose) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((path_index << 2) | purpose as u64);
    rng
}

/// The three substreams of one path.
pub struct PathStreams {
    pub wiener: Stream,
    pub clock: Stream,
    pub kernel: Stream,
}

impl PathStreams {
    pub fn new(seed: u64, path_index: u64) -> Self {
        Self {
            wiener: stream(seed, path_index, Purpose::Wiener),
            clock: stream(seed, path_index, Purpose::JumpClock),
            kernel: stream(seed, path_index, Purpose::Kernel),
        }
    }
}

/// Uniform on the open interval (0, 1).
#[inline]
pub fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

#[inline]
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: [u64; 4] = core::array::from_fn({
            let mut s = stream(7, 3, Purpose::Wiener);
            move |_| s.next_u64()
        });
        let b: [u64; 4] = core::array::from_fn({
            let mut s = stream(7, 3, Purpose::Wiener);
            move |_| s.next_u64()
        });
        assert_eq!(a, b);

        let mut other_purpose = stream(7, 3, Purpose::Kernel);
        let mut other_path = stream(7, 4, Purpose::Wiener);
        let mut other_seed = stream(8, 3, Purpose::Wiener);
        assert_ne!(a[0], other_purpose.next_u64());
        assert_ne!(a[0], other_path.next_u64());
        assert_ne!(a[0], other_seed.next_u64());
    }

    #[test]
    fn open01_never_hits_endpoints() {
        let mut s = stream(1, 0, Purpose::JumpClock);
        for _ in 0..100_000 {
            let u = open01(&mut s);
            assert!(u > 0.0 && u < 1.0);
        }
    }
}
