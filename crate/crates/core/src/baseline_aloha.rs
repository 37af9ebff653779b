//! Collision-free slotted ALOHA: user `j` owns slot `j` of `N/J` symbols and
//! repeats each of its `K` bits `L = N/(JK)` times.

use rand::Rng;
use thiserror::Error;

use crate::channel::GmacChannel;
use crate::ffma_system::FrameResult;
use crate::linear_code::{repetition_encode, repetition_soft_decode, CodeError};

#[derive(Debug, Error)]
pub enum AlohaError {
    #[error("invalid ALOHA parameters: N={n}, K={k}, J={users} (need J | N and J·K | N)")]
    Divisibility { n: usize, k: usize, users: usize },
    #[error("expected {expected} values, got {got}")]
    Shape { expected: usize, got: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
}

pub type Result<T> = std::result::Result<T, AlohaError>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlohaConfig {
    n: usize,
    k: usize,
    users: usize,
    p_avg: f64,
}

impl AlohaConfig {
    pub fn new(n: usize, k: usize, users: usize) -> Result<Self> {
        Self::with_power(n, k, users, 1.0)
    }

    pub fn with_power(n: usize, k: usize, users: usize, p_avg: f64) -> Result<Self> {
        let bad = AlohaError::Divisibility { n, k, users };
        if n == 0 || k == 0 || users == 0 || !n.is_multiple_of(users) || !n.is_multiple_of(users * k) {
            return Err(bad);
        }
        if !(p_avg > 0.0) {
            return Err(bad);
        }
        Ok(AlohaConfig { n, k, users, p_avg })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn users(&self) -> usize {
        self.users
    }
    pub fn p_avg(&self) -> f64 {
        self.p_avg
    }

    pub fn slot_len(&self) -> usize {
        self.n / self.users
    }

    pub fn repeat_factor(&self) -> usize {
        self.n / (self.users * self.k)
    }

    /// Energy one user spends per frame.
    pub fn energy_per_user(&self) -> f64 {
        self.slot_len() as f64 * self.p_avg
    }

    fn check_bits(&self, bits: &[Vec<u8>]) -> Result<()> {
        if bits.len() != self.users {
            return Err(AlohaError::Shape {
                expected: self.users,
                got: bits.len(),
            });
        }
        if let Some(b) = bits.iter().find(|b| b.len() != self.k) {
            return Err(AlohaError::Shape {
                expected: self.k,
                got: b.len(),
            });
        }
        Ok(())
    }
}

/// One length-`N` signal per user, nonzero only inside its slot.
pub fn aloha_transmit(bits: &[Vec<u8>], cfg: &AlohaConfig) -> Result<Vec<Vec<f64>>> {
    cfg.check_bits(bits)?;
    let amplitude = cfg.p_avg.sqrt();
    let slot = cfg.slot_len();
    bits.iter()
        .enumerate()
        .map(|(j, b)| {
            let mut x = vec![0.0; cfg.n];
            let coded = repetition_encode(b, cfg.repeat_factor())?;
            for (dst, &c) in x[j * slot..(j + 1) * slot].iter_mut().zip(&coded) {
                *dst = amplitude * (2.0 * c as f64 - 1.0);
            }
            Ok(x)
        })
        .collect()
}

/// Equal-gain soft combining of the `L` copies of each bit.
pub fn aloha_receive(y: &[f64], cfg: &AlohaConfig, n0: f64) -> Result<Vec<Vec<u8>>> {
    if y.len() != cfg.n {
        return Err(AlohaError::Shape {
            expected: cfg.n,
            got: y.len(),
        });
    }
    let scale = 4.0 * cfg.p_avg.sqrt() / n0;
    let slot = cfg.slot_len();
    (0..cfg.users)
        .map(|j| {
            let llrs: Vec<f64> = y[j * slot..(j + 1) * slot]
                .iter()
                .map(|v| scale * v)
                .collect();
            Ok(repetition_soft_decode(&llrs, cfg.repeat_factor())?)
        })
        .collect()
}

/// One Monte-Carlo frame of the baseline.
pub fn aloha_frame<R: Rng + ?Sized>(cfg: &AlohaConfig, rng: &mut R, channel: &GmacChannel) -> Result<FrameResult> {
    let bits: Vec<Vec<u8>> = (0..cfg.users)
        .map(|_| (0..cfg.k).map(|_| rng.random_range(0..2u8)).collect())
        .collect();
    let signals = aloha_transmit(&bits, cfg)?;
    let mut r = vec![0.0; cfg.n];
    for s in &signals {
        r.iter_mut().zip(s).for_each(|(a, b)| *a += b);
    }
    let y = channel.add_awgn(&r, rng);
    let rx = aloha_receive(&y, cfg, channel.n0())?;
    let active_flags = rx.iter().map(|b| b.contains(&1)).collect();
    Ok(FrameResult {
        tx_bits: bits,
        rx_bits: rx,
        active_flags,
        decoder_converged: true,
    })
}
