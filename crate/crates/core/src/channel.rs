//! Synchronous real-valued Gaussian multiple-access channel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("noise spectral density must be positive and finite, got {0}")]
    NoiseDensity(f64),
    #[error("signal {index} has length {got}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("no signals to superimpose")]
    Empty,
}

/// SplitMix64 finalizer over `(seed, index)`; used to derive independent
/// per-frame and per-attempt seeds.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for frame `frame` of a run seeded with `seed`.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, frame))
}

/// AWGN with variance `N0 / 2` per real dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmacChannel {
    n0: f64,
    seed: u64,
}

impl GmacChannel {
    pub fn new(n0: f64, seed: u64) -> Result<Self, ChannelError> {
        if !(n0 > 0.0 && n0.is_finite()) {
            return Err(ChannelError::NoiseDensity(n0));
        }
        Ok(GmacChannel { n0, seed })
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn noise_std(&self) -> f64 {
        (self.n0 / 2.0).sqrt()
    }

    /// Noise stream for one frame, independent of the order frames run in.
    pub fn frame_rng(&self, frame: u64) -> ChaCha8Rng {
        frame_rng(self.seed, frame)
    }

    /// `y = r + z`, drawing `z` from `rng`.
    pub fn add_awgn<R: Rng + ?Sized>(&self, r: &[f64], rng: &mut R) -> Vec<f64> {
        let sigma = self.noise_std();
        r.iter()
            .map(|&x| x + sigma * rng.sample::<f64, _>(StandardNormal))
            .collect()
    }
}

/// Complex-field sum pattern `r_n = Σ_j x_{j,n}`.
pub fn superimpose<S: AsRef<[f64]>>(signals: &[S]) -> Result<Vec<f64>, ChannelError> {
    let first = signals.first().ok_or(ChannelError::Empty)?.as_ref();
    let mut r = first.to_vec();
    for (index, s) in signals.iter().enumerate().skip(1) {
        let s = s.as_ref();
        if s.len() != r.len() {
            return Err(ChannelError::LengthMismatch {
                index,
                expected: r.len(),
                got: s.len(),
            });
        }
        r.iter_mut().zip(s).for_each(|(a, b)| *a += b);
    }
    Ok(r)
}
