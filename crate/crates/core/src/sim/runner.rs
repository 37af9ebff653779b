//! Frame loop, stopping rule and CSV records.

use std::io::{Read, Write};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use super::spec::{CodeSource, ExperimentSpec, SnrAxis, SystemKind};
use super::{Result, SimError};
use crate::baseline_aloha::{aloha_frame, AlohaConfig};
use crate::channel::{mix_seed, GmacChannel};
use crate::ffma_system::{FfmaSystem, FrameResult, SystemConfig};
use crate::linear_code::{ldpc_construct, read_alist, LinearCode};

/// Frames simulated between two checks of the stopping rule.
const BATCH: u64 = 32;

pub const CSV_HEADER: [&str; 11] = [
    "system",
    "snr_db",
    "j",
    "frames",
    "bit_errors",
    "ber",
    "frame_errors",
    "wall_s",
    "ebn0_db",
    "esn0_db",
    "worst_user_ber",
];

/// A system ready to run frames at one user count.
#[derive(Debug, Clone)]
pub enum Simulator {
    Ffma(FfmaSystem),
    Aloha(AlohaConfig),
}

impl Simulator {
    pub fn build(spec: &ExperimentSpec, code: Option<&Arc<LinearCode>>, users: usize) -> Result<Self> {
        match spec.system {
            SystemKind::Aloha => Ok(Simulator::Aloha(AlohaConfig::with_power(
                spec.n, spec.k, users, spec.p_avg,
            )?)),
            SystemKind::Ffma(mode) => {
                let code = code.ok_or_else(|| SimError::Setting {
                    key: "code".into(),
                    msg: "no code available".into(),
                })?;
                let cfg = SystemConfig::new(code.clone(), spec.k, spec.m, users, mode, spec.mu_pas, spec.p_avg)?;
                Ok(Simulator::Ffma(FfmaSystem::with_max_iter(cfg, spec.max_iter)))
            }
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Simulator::Ffma(s) => s.config().k(),
            Simulator::Aloha(c) => c.k(),
        }
    }

    pub fn users(&self) -> usize {
        match self {
            Simulator::Ffma(s) => s.config().users(),
            Simulator::Aloha(c) => c.users(),
        }
    }

    pub fn p_avg(&self) -> f64 {
        match self {
            Simulator::Ffma(s) => s.config().p_avg(),
            Simulator::Aloha(c) => c.p_avg(),
        }
    }

    /// Energy one user spends on a frame.
    pub fn energy_per_user(&self) -> f64 {
        match self {
            Simulator::Ffma(s) => s.config().energy_per_user(),
            Simulator::Aloha(c) => c.energy_per_user(),
        }
    }

    /// Noise density for an SNR given in dB on `axis`.
    pub fn n0_for(&self, snr_db: f64, axis: SnrAxis) -> f64 {
        let lin = 10f64.powf(snr_db / 10.0);
        match axis {
            SnrAxis::EsN0 => self.p_avg() / lin,
            SnrAxis::EbN0 => self.energy_per_user() / self.k() as f64 / lin,
        }
    }

    pub fn frame(&self, frame: u64, channel: &GmacChannel) -> Result<FrameResult> {
        let mut rng = channel.frame_rng(frame);
        Ok(match self {
            Simulator::Ffma(s) => s.simulate_frame(&mut rng, channel)?,
            Simulator::Aloha(c) => aloha_frame(c, &mut rng, channel)?,
        })
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    frames: u64,
    bit_errors: u64,
    frame_errors: u64,
    user_errors: Vec<u64>,
}

impl Tally {
    fn add(&mut self, other: &Tally) {
        self.frames += other.frames;
        self.bit_errors += other.bit_errors;
        self.frame_errors += other.frame_errors;
        if self.user_errors.len() < other.user_errors.len() {
            self.user_errors.resize(other.user_errors.len(), 0);
        }
        for (a, b) in self.user_errors.iter_mut().zip(&other.user_errors) {
            *a += b;
        }
    }

    fn from_frame(f: &FrameResult) -> Tally {
        let user_errors: Vec<u64> = f.user_errors().into_iter().map(|e| e as u64).collect();
        Tally {
            frames: 1,
            bit_errors: user_errors.iter().sum(),
            frame_errors: u64::from(f.is_frame_error()),
            user_errors,
        }
    }
}

/// One row of the results table.
#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub system: String,
    pub snr_db: f64,
    pub users: usize,
    pub frames: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub frame_errors: u64,
    pub wall_s: Option<f64>,
    pub ebn0_db: f64,
    pub esn0_db: f64,
    pub worst_user_ber: f64,
}

impl BerPoint {
    /// Number of information bits the BER is measured over.
    pub fn bits(&self) -> u64 {
        if self.ber > 0.0 {
            (self.bit_errors as f64 / self.ber).round() as u64
        } else {
            0
        }
    }

    /// Wilson score interval for the bit error rate over `total_bits` trials.
    pub fn wilson_interval(errors: u64, total_bits: u64, z: f64) -> (f64, f64) {
        if total_bits == 0 {
            return (0.0, 1.0);
        }
        let n = total_bits as f64;
        let p = errors as f64 / n;
        let z2 = z * z;
        let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
        let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
        ((centre - half).max(0.0), (centre + half).min(1.0))
    }
}

/// Runs frames at one operating point until the stopping rule holds.
pub fn run_point(
    sim: &Simulator,
    spec: &ExperimentSpec,
    snr_db: f64,
    seed: u64,
) -> Result<BerPoint> {
    let start = Instant::now();
    let n0 = sim.n0_for(snr_db, spec.snr_axis);
    let channel = GmacChannel::new(n0, seed)?;
    let mut tally = Tally {
        user_errors: vec![0; sim.users()],
        ..Tally::default()
    };
    loop {
        let done = tally.frames >= spec.max_frames
            || (tally.frames >= spec.min_frames && tally.bit_errors >= spec.min_bit_errors);
        if done {
            break;
        }
        let batch = BATCH.min(spec.max_frames - tally.frames);
        let first = tally.frames;
        let results: Vec<Tally> = (first..first + batch)
            .into_par_iter()
            .map(|f| sim.frame(f, &channel).map(|r| Tally::from_frame(&r)))
            .collect::<Result<_>>()?;
        for t in &results {
            tally.add(t);
        }
    }
    let k = sim.k() as f64;
    let bits_total = tally.frames as f64 * k * sim.users() as f64;
    let per_user_bits = tally.frames as f64 * k;
    let worst = tally.user_errors.iter().copied().max().unwrap_or(0);
    let es = sim.p_avg() / n0;
    let eb = sim.energy_per_user() / k / n0;
    Ok(BerPoint {
        system: spec.system.label().to_string(),
        snr_db,
        users: sim.users(),
        frames: tally.frames,
        bit_errors: tally.bit_errors,
        ber: tally.bit_errors as f64 / bits_total,
        frame_errors: tally.frame_errors,
        wall_s: spec.record_timing.then(|| start.elapsed().as_secs_f64()),
        ebn0_db: 10.0 * eb.log10(),
        esn0_db: 10.0 * es.log10(),
        worst_user_ber: worst as f64 / per_user_bits,
    })
}

fn load_code(spec: &ExperimentSpec) -> Result<Option<Arc<LinearCode>>> {
    if spec.system == SystemKind::Aloha {
        return Ok(None);
    }
    let code = match &spec.code {
        CodeSource::Generated => ldpc_construct(spec.n, spec.m * spec.k, spec.col_weight, spec.code_seed)?,
        CodeSource::Alist(path) => LinearCode::from_parity_check(&read_alist(path)?)?,
    };
    if code.n() != spec.n || code.k() != spec.m * spec.k {
        return Err(SimError::Setting {
            key: "code".into(),
            msg: format!(
                "code is ({}, {}) but the experiment needs ({}, {})",
                code.n(),
                code.k(),
                spec.n,
                spec.m * spec.k
            ),
        });
    }
    Ok(Some(Arc::new(code)))
}

/// Sweeps every user count over the SNR grid.
///
/// Each point gets its own seed derived from `spec.seed`, the user count and
/// the grid index, so results do not depend on the thread count.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<BerPoint>> {
    spec.validate()?;
    let code = load_code(spec)?;
    let mut points = Vec::new();
    for &users in &spec.j_list {
        let sim = Simulator::build(spec, code.as_ref(), users)?;
        for (idx, &snr) in spec.snr_grid.iter().enumerate() {
            let seed = mix_seed(mix_seed(spec.seed, users as u64), idx as u64);
            let point = run_point(&sim, spec, snr, seed)?;
            log::info!(
                "{} J={} snr={} dB: {} errors in {} frames, BER {:.3e}",
                point.system,
                users,
                snr,
                point.bit_errors,
                point.frames,
                point.ber
            );
            points.push(point);
        }
    }
    Ok(points)
}

pub fn write_csv<W: Write>(out: W, points: &[BerPoint]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for p in points {
        w.write_record([
            p.system.clone(),
            p.snr_db.to_string(),
            p.users.to_string(),
            p.frames.to_string(),
            p.bit_errors.to_string(),
            p.ber.to_string(),
            p.frame_errors.to_string(),
            p.wall_s.map(|t| format!("{t:.3}")).unwrap_or_default(),
            p.ebn0_db.to_string(),
            p.esn0_db.to_string(),
            p.worst_user_ber.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, idx: usize, line: u64) -> Result<T> {
    let raw = rec.get(idx).unwrap_or("");
    raw.trim().parse().map_err(|_| {
        SimError::Csv(format!("line {line}: column {} holds {raw:?}", CSV_HEADER[idx]))
    })
}

/// Reads a table written by [`write_csv`]. The first eight columns are required.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<BerPoint>> {
    let mut r = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let header = r.headers()?.clone();
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names.len() < 8 || names[..8] != CSV_HEADER[..8] {
        return Err(SimError::Csv(format!("unexpected header {names:?}")));
    }
    let mut points = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() < 8 {
            return Err(SimError::Csv(format!("line {line}: expected at least 8 columns")));
        }
        let optional = |idx: usize| -> Result<f64> {
            match rec.get(idx).map(str::trim) {
                None | Some("") => Ok(f64::NAN),
                Some(_) => field(&rec, idx, line),
            }
        };
        let wall = rec.get(7).map(str::trim).unwrap_or("");
        points.push(BerPoint {
            system: rec[0].trim().to_string(),
            snr_db: field(&rec, 1, line)?,
            users: field(&rec, 2, line)?,
            frames: field(&rec, 3, line)?,
            bit_errors: field(&rec, 4, line)?,
            ber: field(&rec, 5, line)?,
            frame_errors: field(&rec, 6, line)?,
            wall_s: if wall.is_empty() { None } else { Some(field(&rec, 7, line)?) },
            ebn0_db: optional(8)?,
            esn0_db: optional(9)?,
            worst_user_ber: optional(10)?,
        });
    }
    Ok(points)
}
