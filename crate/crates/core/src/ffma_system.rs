//! FFMA transmitter and receiver chains over the orthogonal element-pair code.
//!
//! * Sparse form (SF): every user encodes its zero-padded m-tuple sequence
//!   over the whole blocklength and transmits all `N` BPSK symbols.
//! * Diagonal form (DF): the information array is rearranged so user `j`
//!   owns coordinates `(j-1)K .. jK`; a user transmits only its information
//!   slot plus the shared parity segment `mK .. N` and stays silent elsewhere.
//! * Polarization-adjusted (PA): DF with the silent power moved onto the
//!   information symbols, scaled by `μ1` and `μ2` under a fixed total energy.
//!
//! The receiver turns each received sample into a posterior on the parity of
//! the superposed bits (the FFSP bit), decodes the FFSP codeword once, and
//! reads every user's bits off its own m-tuple coordinate.

use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::channel::{superimpose, ChannelError, GmacChannel};
use crate::ep_code::{encode_user_sequence, f_q2b, EpError, EpSet};
use crate::gf2m::{FieldError, WideField};
use crate::linear_code::{BpDecoder, CodeError, LinearCode, DEFAULT_MAX_ITER, LLR_CLAMP};

#[derive(Debug, Error)]
pub enum FfmaError {
    #[error("code message length {got} does not equal m·K = {expected}")]
    CodeDimension { expected: usize, got: usize },
    #[error("code length {code} does not match blocklength {n}")]
    BlockLength { n: usize, code: usize },
    #[error("bits per user must be at least 1")]
    NoBits,
    #[error("{users} users is outside 1..={m}")]
    UserCount { users: usize, m: usize },
    #[error("scaling factor {mu_pas} violates 1 ≤ μ_pas ≤ {m}")]
    ScalingFactor { mu_pas: f64, m: usize },
    #[error("average power must be positive, got {0}")]
    Power(f64),
    #[error("expected {expected} values, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("unknown mode {0:?} (expected sf, df or pa)")]
    UnknownMode(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Ep(#[from] EpError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

pub type Result<T> = std::result::Result<T, FfmaError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Sparse,
    Diagonal,
    PolarizationAdjusted,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Sparse => "SF",
            Mode::Diagonal => "DF",
            Mode::PolarizationAdjusted => "PA",
        }
    }
}

impl FromStr for Mode {
    type Err = FfmaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sf" | "sparse" => Ok(Mode::Sparse),
            "df" | "diagonal" => Ok(Mode::Diagonal),
            "pa" | "polarization-adjusted" => Ok(Mode::PolarizationAdjusted),
            _ => Err(FfmaError::UnknownMode(s.to_string())),
        }
    }
}

/// Power scales `(μ1, μ2)` for information and parity symbols.
///
/// Solves `N = K·μ1 + (N - mK)·μ2` with `μ1 = μ_pas·μ2`.
pub fn pa_power_allocation(n: usize, k: usize, m: usize, mu_pas: f64) -> Result<(f64, f64)> {
    if !(1.0..=m as f64).contains(&mu_pas) {
        return Err(FfmaError::ScalingFactor { mu_pas, m });
    }
    let parity = n
        .checked_sub(m * k)
        .ok_or(FfmaError::CodeDimension { expected: m * k, got: n })?;
    let mu2 = n as f64 / (k as f64 * mu_pas + parity as f64);
    Ok((mu_pas * mu2, mu2))
}

/// Sum-pattern statistics of `J` superposed antipodal users with uniform bits.
#[derive(Debug, Clone, PartialEq)]
pub struct SumPatternModel {
    /// CFSP values `-J, -J+2, …, J` (unit amplitude).
    pub omega_r: Vec<i64>,
    /// FFSP bit of each CFSP value: `ι mod 2`.
    pub omega_v: Vec<u8>,
    /// `C(J, ι) / 2^J`.
    pub probs: Vec<f64>,
    log_probs: Vec<f64>,
}

impl SumPatternModel {
    pub fn new(users: usize) -> Self {
        assert!(users >= 1, "at least one user");
        let j = users as i64;
        let mut log_binom = Vec::with_capacity(users + 1);
        let mut acc = 0.0f64;
        log_binom.push(0.0);
        for i in 1..=users {
            acc += ((users - i + 1) as f64).ln() - (i as f64).ln();
            log_binom.push(acc);
        }
        let ln2j = users as f64 * std::f64::consts::LN_2;
        let log_probs: Vec<f64> = log_binom.iter().map(|l| l - ln2j).collect();
        SumPatternModel {
            omega_r: (0..=j).map(|i| 2 * i - j).collect(),
            omega_v: (0..=users).map(|i| (i % 2) as u8).collect(),
            probs: log_probs.iter().map(|l| l.exp()).collect(),
            log_probs,
        }
    }

    pub fn users(&self) -> usize {
        self.omega_r.len() - 1
    }

    /// Log-domain masses of FFSP bit 0 and bit 1 given `y`, up to a common constant.
    fn class_log_masses(&self, y: f64, amplitude: f64, n0: f64) -> (f64, f64) {
        // terms more than this far below the peak are below f64 resolution
        const CUTOFF: f64 = 60.0;
        let mut peak = f64::NEG_INFINITY;
        let terms: Vec<f64> = self
            .omega_r
            .iter()
            .zip(&self.log_probs)
            .map(|(&r, &lp)| {
                let d = y - amplitude * r as f64;
                let t = lp - d * d / n0;
                peak = peak.max(t);
                t
            })
            .collect();
        let (mut even, mut odd) = (0.0f64, 0.0f64);
        for (i, &t) in terms.iter().enumerate() {
            if t - peak < -CUTOFF {
                continue;
            }
            let e = (t - peak).exp();
            if i % 2 == 0 {
                even += e;
            } else {
                odd += e;
            }
        }
        (peak + even.ln(), peak + odd.ln())
    }

    /// `(Pr(v = 0 | y), Pr(v = 1 | y))` for symbol amplitude `amplitude` and
    /// noise variance `N0 / 2`.
    pub fn posterior(&self, y: f64, amplitude: f64, n0: f64) -> (f64, f64) {
        let (l0, l1) = self.class_log_masses(y, amplitude, n0);
        let p1 = 1.0 / (1.0 + (l0 - l1).exp());
        let p0 = 1.0 / (1.0 + (l1 - l0).exp());
        (p0, p1)
    }

    /// `ln(Pr(v=1|y) / Pr(v=0|y))`, clamped to `±LLR_CLAMP`.
    pub fn llr(&self, y: f64, amplitude: f64, n0: f64) -> f64 {
        let (l0, l1) = self.class_log_masses(y, amplitude, n0);
        let l = l1 - l0;
        if l.is_nan() {
            0.0
        } else {
            l.clamp(-LLR_CLAMP, LLR_CLAMP)
        }
    }
}

pub fn sum_pattern_model(users: usize) -> SumPatternModel {
    SumPatternModel::new(users)
}

/// Posterior of the FFSP bit for one received sample.
pub fn cfsp_posterior(y: f64, users: usize, amplitude: f64, n0: f64) -> (f64, f64) {
    debug_assert!(amplitude > 0.0 && n0 > 0.0);
    SumPatternModel::new(users).posterior(y, amplitude, n0)
}

/// Scenario parameters shared by transmitter and receiver.
#[derive(Debug, Clone)]
pub struct SystemConfig {
    n: usize,
    k: usize,
    m: usize,
    users: usize,
    mode: Mode,
    mu_pas: f64,
    p_avg: f64,
    code: Arc<LinearCode>,
    eps: EpSet<WideField>,
}

impl SystemConfig {
    /// `mu_pas` is only consulted in PA mode.
    pub fn new(
        code: Arc<LinearCode>,
        k: usize,
        m: usize,
        users: usize,
        mode: Mode,
        mu_pas: f64,
        p_avg: f64,
    ) -> Result<Self> {
        if k == 0 {
            return Err(FfmaError::NoBits);
        }
        if users == 0 || users > m {
            return Err(FfmaError::UserCount { users, m });
        }
        if code.k() != m * k {
            return Err(FfmaError::CodeDimension {
                expected: m * k,
                got: code.k(),
            });
        }
        if !(p_avg > 0.0 && p_avg.is_finite()) {
            return Err(FfmaError::Power(p_avg));
        }
        let n = code.n();
        if mode == Mode::PolarizationAdjusted {
            pa_power_allocation(n, k, m, mu_pas)?;
        }
        let eps = EpSet::orthogonal(WideField::new(m)?, users)?;
        Ok(SystemConfig {
            n,
            k,
            m,
            users,
            mode,
            mu_pas,
            p_avg,
            code,
            eps,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn users(&self) -> usize {
        self.users
    }
    pub fn mode(&self) -> Mode {
        self.mode
    }
    pub fn mu_pas(&self) -> f64 {
        self.mu_pas
    }
    pub fn p_avg(&self) -> f64 {
        self.p_avg
    }
    pub fn code(&self) -> &LinearCode {
        &self.code
    }
    pub fn eps(&self) -> &EpSet<WideField> {
        &self.eps
    }

    /// Number of shared parity coordinates `N - mK`.
    pub fn parity_len(&self) -> usize {
        self.n - self.m * self.k
    }

    /// `(μ1, μ2)`; both 1 outside PA mode.
    pub fn power_scales(&self) -> (f64, f64) {
        match self.mode {
            Mode::PolarizationAdjusted => {
                pa_power_allocation(self.n, self.k, self.m, self.mu_pas).expect("validated")
            }
            _ => (1.0, 1.0),
        }
    }

    /// Symbol amplitudes on information and parity coordinates.
    pub fn amplitudes(&self) -> (f64, f64) {
        let (mu1, mu2) = self.power_scales();
        ((mu1 * self.p_avg).sqrt(), (mu2 * self.p_avg).sqrt())
    }

    /// Energy one user spends per frame.
    pub fn energy_per_user(&self) -> f64 {
        let (mu1, mu2) = self.power_scales();
        match self.mode {
            Mode::Sparse => self.n as f64 * self.p_avg,
            _ => (self.k as f64 * mu1 + self.parity_len() as f64 * mu2) * self.p_avg,
        }
    }

    /// Index of information bit `(k, i)` in the DF message layout.
    fn diagonal_index(&self, k: usize, i: usize) -> usize {
        i * self.k + k
    }
}

/// One user's transmitted waveform as a set of occupied segments; all other
/// coordinates are silent.
#[derive(Debug, Clone, PartialEq)]
pub struct UserSignal {
    n: usize,
    segments: Vec<(usize, Vec<f64>)>,
}

impl UserSignal {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn segments(&self) -> &[(usize, Vec<f64>)] {
        &self.segments
    }

    /// Number of coordinates the user actually transmits on.
    pub fn occupied(&self) -> usize {
        self.segments.iter().map(|(_, s)| s.len()).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.segments
            .iter()
            .flat_map(|(off, s)| *off..*off + s.len())
    }

    pub fn energy(&self) -> f64 {
        self.segments
            .iter()
            .flat_map(|(_, s)| s.iter())
            .map(|x| x * x)
            .sum()
    }

    pub fn add_into(&self, r: &mut [f64]) {
        for (off, s) in &self.segments {
            r[*off..*off + s.len()]
                .iter_mut()
                .zip(s)
                .for_each(|(a, b)| *a += b);
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.add_into(&mut out);
        out
    }
}

fn bpsk(bits: &[u8], amplitude: f64) -> Vec<f64> {
    bits.iter()
        .map(|&b| amplitude * (2.0 * b as f64 - 1.0))
        .collect()
}

/// Result of detecting one frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detection {
    pub bits: Vec<Vec<u8>>,
    pub active_flags: Vec<bool>,
    pub decoder_converged: bool,
}

/// Per-frame record of transmitted and decoded bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameResult {
    pub tx_bits: Vec<Vec<u8>>,
    pub rx_bits: Vec<Vec<u8>>,
    pub active_flags: Vec<bool>,
    pub decoder_converged: bool,
}

impl FrameResult {
    pub fn new(tx_bits: Vec<Vec<u8>>, detection: Detection) -> Self {
        FrameResult {
            tx_bits,
            rx_bits: detection.bits,
            active_flags: detection.active_flags,
            decoder_converged: detection.decoder_converged,
        }
    }

    pub fn user_errors(&self) -> Vec<usize> {
        self.tx_bits
            .iter()
            .zip(&self.rx_bits)
            .map(|(t, r)| t.iter().zip(r).filter(|(a, b)| a != b).count())
            .collect()
    }

    pub fn bit_errors(&self) -> usize {
        self.user_errors().iter().sum()
    }

    pub fn is_frame_error(&self) -> bool {
        self.tx_bits != self.rx_bits
    }

    /// Activity implied by the transmitted data: a user sending only zeros
    /// is indistinguishable from a silent one.
    pub fn true_activity(&self) -> Vec<bool> {
        self.tx_bits
            .iter()
            .map(|b| b.contains(&1))
            .collect()
    }
}

/// Transmitter and receiver for one configuration.
#[derive(Debug, Clone)]
pub struct FfmaSystem {
    cfg: SystemConfig,
    decoder: BpDecoder,
    model: SumPatternModel,
    single: SumPatternModel,
    max_iter: usize,
}

impl FfmaSystem {
    pub fn new(cfg: SystemConfig) -> Self {
        Self::with_max_iter(cfg, DEFAULT_MAX_ITER)
    }

    pub fn with_max_iter(cfg: SystemConfig, max_iter: usize) -> Self {
        let decoder = BpDecoder::new(cfg.code.parity_check());
        let model = SumPatternModel::new(cfg.users);
        FfmaSystem {
            cfg,
            decoder,
            model,
            single: SumPatternModel::new(1),
            max_iter,
        }
    }

    pub fn config(&self) -> &SystemConfig {
        &self.cfg
    }

    fn check_bits(&self, bits: &[Vec<u8>]) -> Result<()> {
        if bits.len() != self.cfg.users {
            return Err(FfmaError::Shape {
                expected: self.cfg.users,
                got: bits.len(),
            });
        }
        for b in bits {
            if b.len() != self.cfg.k {
                return Err(FfmaError::Shape {
                    expected: self.cfg.k,
                    got: b.len(),
                });
            }
        }
        Ok(())
    }

    /// User `j`'s (1-based) message in the sparse layout: element sequence
    /// flattened to `mK` bits, position `k·m + i` holding coordinate `i` of
    /// element `k`.
    pub fn sparse_message(&self, j: usize, bits: &[u8]) -> Result<Vec<u8>> {
        let field = self.cfg.eps.field();
        let seq = encode_user_sequence(bits, self.cfg.eps.pair(j)?)?;
        Ok(seq.iter().flat_map(|e| field.to_tuple(e)).collect())
    }

    /// The same message rearranged into the diagonal layout, where user `j`
    /// occupies positions `(j-1)K .. jK`.
    pub fn diagonal_message(&self, j: usize, bits: &[u8]) -> Result<Vec<u8>> {
        let sparse = self.sparse_message(j, bits)?;
        let (k_len, m) = (self.cfg.k, self.cfg.m);
        let mut out = vec![0u8; m * k_len];
        for k in 0..k_len {
            for i in 0..m {
                out[self.cfg.diagonal_index(k, i)] = sparse[k * m + i];
            }
        }
        Ok(out)
    }

    pub fn sf_transmit(&self, bits: &[Vec<u8>]) -> Result<Vec<UserSignal>> {
        self.check_bits(bits)?;
        let amplitude = self.cfg.p_avg.sqrt();
        bits.iter()
            .enumerate()
            .map(|(idx, b)| {
                let v = self.cfg.code.encode(&self.sparse_message(idx + 1, b)?)?;
                Ok(UserSignal {
                    n: self.cfg.n,
                    segments: vec![(0, bpsk(&v, amplitude))],
                })
            })
            .collect()
    }

    /// Full-length diagonal-form codeword of user `j` (1-based).
    pub fn diagonal_codeword(&self, j: usize, bits: &[u8]) -> Result<Vec<u8>> {
        Ok(self.cfg.code.encode(&self.diagonal_message(j, bits)?)?)
    }

    fn shortened_transmit(&self, bits: &[Vec<u8>], info_amp: f64, parity_amp: f64) -> Result<Vec<UserSignal>> {
        self.check_bits(bits)?;
        let (k, mk) = (self.cfg.k, self.cfg.m * self.cfg.k);
        bits.iter()
            .enumerate()
            .map(|(idx, b)| {
                let v = self.diagonal_codeword(idx + 1, b)?;
                let slot = idx * k;
                Ok(UserSignal {
                    n: self.cfg.n,
                    segments: vec![
                        (slot, bpsk(&v[slot..slot + k], info_amp)),
                        (mk, bpsk(&v[mk..], parity_amp)),
                    ],
                })
            })
            .collect()
    }

    /// Shortened codewords `(b_j, parity)` at unit power scaling.
    pub fn df_transmit(&self, bits: &[Vec<u8>]) -> Result<Vec<UserSignal>> {
        let a = self.cfg.p_avg.sqrt();
        self.shortened_transmit(bits, a, a)
    }

    /// Shortened codewords with information amplitude `√(μ1·P)` and parity
    /// amplitude `√(μ2·P)`.
    pub fn pa_transmit(&self, bits: &[Vec<u8>]) -> Result<Vec<UserSignal>> {
        let (mu1, mu2) = pa_power_allocation(self.cfg.n, self.cfg.k, self.cfg.m, self.cfg.mu_pas)?;
        let p = self.cfg.p_avg;
        self.shortened_transmit(bits, (mu1 * p).sqrt(), (mu2 * p).sqrt())
    }

    pub fn transmit(&self, bits: &[Vec<u8>]) -> Result<Vec<UserSignal>> {
        match self.cfg.mode {
            Mode::Sparse => self.sf_transmit(bits),
            Mode::Diagonal => self.df_transmit(bits),
            Mode::PolarizationAdjusted => self.pa_transmit(bits),
        }
    }

    /// Noise-free channel sum of the users' signals.
    pub fn cfsp(&self, signals: &[UserSignal]) -> Result<Vec<f64>> {
        if self.cfg.mode == Mode::Sparse {
            let dense: Vec<Vec<f64>> = signals.iter().map(UserSignal::to_dense).collect();
            return Ok(superimpose(&dense)?);
        }
        let mut r = vec![0.0; self.cfg.n];
        for s in signals {
            s.add_into(&mut r);
        }
        Ok(r)
    }

    /// Channel LLRs (`ln P1/P0`) of the FFSP codeword bits.
    pub fn channel_llrs(&self, y: &[f64], n0: f64) -> Result<Vec<f64>> {
        if y.len() != self.cfg.n {
            return Err(FfmaError::Shape {
                expected: self.cfg.n,
                got: y.len(),
            });
        }
        let (info_amp, parity_amp) = self.cfg.amplitudes();
        let mk = self.cfg.m * self.cfg.k;
        let active_info = self.cfg.users * self.cfg.k;
        Ok(match self.cfg.mode {
            Mode::Sparse => y
                .iter()
                .map(|&v| self.model.llr(v, parity_amp, n0))
                .collect(),
            Mode::Diagonal | Mode::PolarizationAdjusted => y
                .iter()
                .enumerate()
                .map(|(idx, &v)| {
                    if idx < active_info {
                        // only the slot owner transmits here
                        self.single.llr(v, info_amp, n0)
                    } else if idx < mk {
                        // slots of absent users are known zeros
                        -LLR_CLAMP
                    } else {
                        self.model.llr(v, parity_amp, n0)
                    }
                })
                .collect(),
        })
    }

    /// Detects all users' bits from the received sequence.
    pub fn receive(&self, y: &[f64], n0: f64) -> Result<Detection> {
        let llrs = self.channel_llrs(y, n0)?;
        let outcome = self.decoder.decode(&llrs, self.max_iter)?;
        let (k_len, m) = (self.cfg.k, self.cfg.m);
        let field = self.cfg.eps.field();
        let mut bits = vec![Vec::with_capacity(k_len); self.cfg.users];
        for k in 0..k_len {
            let tuple: Vec<u8> = match self.cfg.mode {
                Mode::Sparse => outcome.bits[k * m..(k + 1) * m].to_vec(),
                _ => (0..m)
                    .map(|i| outcome.bits[self.cfg.diagonal_index(k, i)])
                    .collect(),
            };
            let w = field.from_tuple(&tuple)?;
            for (j, user_bits) in bits.iter_mut().enumerate() {
                user_bits.push(f_q2b(field, &w, j + 1)?);
            }
        }
        let active_flags = bits.iter().map(|b| b.contains(&1)).collect();
        Ok(Detection {
            bits,
            active_flags,
            decoder_converged: outcome.converged,
        })
    }

    pub fn random_bits<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Vec<u8>> {
        (0..self.cfg.users)
            .map(|_| (0..self.cfg.k).map(|_| rng.random_range(0..2u8)).collect())
            .collect()
    }

    /// Draws bits and noise from `rng`, sends them through `channel` and detects.
    pub fn simulate_frame<R: Rng + ?Sized>(&self, rng: &mut R, channel: &GmacChannel) -> Result<FrameResult> {
        let bits = self.random_bits(rng);
        let r = self.cfsp(&self.transmit(&bits)?)?;
        let y = channel.add_awgn(&r, rng);
        let detection = self.receive(&y, channel.n0())?;
        Ok(FrameResult::new(bits, detection))
    }
}
