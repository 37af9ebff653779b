//! Closed-form figures: the normal approximation of the maximal rate at
//! finite blocklength, and the power/repetition gains quoted for FFMA.

use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

/// Gaussian tail `Q(x) = P(Z > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Inverse Gaussian tail.
pub fn q_inverse(p: f64) -> f64 {
    Normal::standard().inverse_cdf(1.0 - p)
}

/// AWGN capacity `½ log2(1 + P)` in bits per channel use.
pub fn capacity_bits(p: f64) -> f64 {
    0.5 * (1.0 + p).log2()
}

/// Channel dispersion `P(P+2) / (2(1+P)²)` in nats².
pub fn dispersion_nats(p: f64) -> f64 {
    p * (p + 2.0) / (2.0 * (1.0 + p).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FblParams {
    pub snr: f64,
    pub blocklength: usize,
    pub epsilon: f64,
}

impl FblParams {
    pub fn new(snr: f64, blocklength: usize, epsilon: f64) -> Option<Self> {
        (snr > 0.0 && blocklength > 0 && epsilon > 0.0 && epsilon < 1.0).then_some(FblParams {
            snr,
            blocklength,
            epsilon,
        })
    }
}

/// `C(P) - √(V(P)/n)·Q⁻¹(ε) + ½·log2(n)/n` in bits per channel use, with the
/// dispersion converted from nats² to bits² and the `O(1/n)` term dropped.
pub fn fbl_rate_bound(params: &FblParams) -> f64 {
    let n = params.blocklength as f64;
    let v_bits = dispersion_nats(params.snr) * std::f64::consts::LOG2_E.powi(2);
    capacity_bits(params.snr) - (v_bits / n).sqrt() * q_inverse(params.epsilon) + 0.5 * n.log2() / n
}

pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainReport {
    /// `10·log10(μ_pas)`.
    pub polarization_db: f64,
    /// `10·log10(N / (J·K))`, the repetition gain of a slotted user.
    pub repetition_db: f64,
}

pub fn gain_figures(n: usize, k: usize, users: usize, mu_pas: f64) -> GainReport {
    GainReport {
        polarization_db: db(mu_pas),
        repetition_db: db(n as f64 / (users * k) as f64),
    }
}
