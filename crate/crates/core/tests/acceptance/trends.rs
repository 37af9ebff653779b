//! Desk-scale BER trends: N = 600, K = 5, m = 60, a generated (600, 300) code,
//! J ∈ {1, 30, 60}, per-symbol SNR axis, crossings of BER 1e-4.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use ffma::channel::mix_seed;
use ffma::ffma_system::Mode;
use ffma::linear_code::{ldpc_construct, LinearCode};
use ffma::sim::{run_point, BerPoint, ExperimentSpec, Simulator, SystemKind};

use super::Outcome;

/// Es/N0 points where single-user SF sits in its waterfall.
pub const SINGLE_USER_GRID: [f64; 3] = [-2.0, -1.5, -1.0];

const TARGET: f64 = 1e-4;
const STEP: f64 = 0.5;
const MAX_BITS: u64 = 200_000;
const MIN_ERRORS: u64 = 50;
const USERS: [usize; 3] = [1, 30, 60];

struct Curve {
    system: SystemKind,
    users: usize,
    /// keyed by SNR in hundredths of a dB
    points: BTreeMap<i64, BerPoint>,
}

fn key(snr: f64) -> i64 {
    (snr * 100.0).round() as i64
}

fn bits(p: &BerPoint) -> u64 {
    p.frames * 5 * p.users as u64
}

impl Curve {
    /// BER 1e-4 crossing, log-linear between the last point above and the
    /// first point at or below the target. Zero-error points count as half an
    /// error.
    fn crossing(&self) -> Option<f64> {
        let pts: Vec<&BerPoint> = self.points.values().collect();
        let log_ber = |p: &BerPoint| (p.ber.max(0.5 / bits(p) as f64)).log10();
        pts.windows(2).find_map(|w| {
            let (a, b) = (w[0], w[1]);
            (a.ber > TARGET && b.ber <= TARGET).then(|| {
                let (la, lb, lt) = (log_ber(a), log_ber(b), TARGET.log10());
                a.snr_db + (b.snr_db - a.snr_db) * (la - lt) / (la - lb)
            })
        })
    }
}

struct Bench {
    spec: ExperimentSpec,
    code: Arc<LinearCode>,
    sims: BTreeMap<(String, usize), Simulator>,
}

impl Bench {
    fn new() -> Self {
        let mut spec = ExperimentSpec::default();
        spec.n = 600;
        spec.k = 5;
        spec.m = 60;
        spec.mu_pas = 60.0;
        spec.min_bit_errors = MIN_ERRORS;
        spec.min_frames = 32;
        let code = Arc::new(ldpc_construct(600, 300, 3, spec.code_seed).unwrap());
        Bench {
            spec,
            code,
            sims: BTreeMap::new(),
        }
    }

    fn measure(&mut self, curve: &mut Curve, snr: f64) -> f64 {
        if let Some(p) = curve.points.get(&key(snr)) {
            return p.ber;
        }
        let mut spec = self.spec.clone();
        spec.system = curve.system;
        spec.max_frames = MAX_BITS.div_ceil((spec.k * curve.users) as u64).max(spec.min_frames);
        let sim = self
            .sims
            .entry((curve.system.label().to_string(), curve.users))
            .or_insert_with(|| Simulator::build(&spec, Some(&self.code), curve.users).unwrap());
        let tag = curve.system.label().bytes().fold(0u64, |acc, b| acc * 131 + b as u64);
        let seed = mix_seed(mix_seed(tag, curve.users as u64), key(snr) as u64);
        let p = run_point(sim, &spec, snr, seed).unwrap();
        let ber = p.ber;
        curve.points.insert(key(snr), p);
        ber
    }

    /// Walks a 0.5 dB lattice from `start` until one point is above and the
    /// next at or below the target.
    fn trace(&mut self, system: SystemKind, users: usize, start: f64) -> Curve {
        let mut curve = Curve {
            system,
            users,
            points: BTreeMap::new(),
        };
        let mut snr = start;
        while self.measure(&mut curve, snr) <= TARGET && snr > start - 20.0 {
            snr -= STEP;
        }
        while self.measure(&mut curve, snr) > TARGET && snr < start + 20.0 {
            snr += STEP;
        }
        curve
    }
}

fn fmt_cross(c: Option<f64>) -> String {
    c.map_or("none".into(), |v| format!("{v:.2}"))
}

pub fn run() -> Vec<(&'static str, Outcome)> {
    let start = Instant::now();
    let mut bench = Bench::new();
    let sf = SystemKind::Ffma(Mode::Sparse);
    let df = SystemKind::Ffma(Mode::Diagonal);
    let pa = SystemKind::Ffma(Mode::PolarizationAdjusted);
    // lattice starting points above the 1e-4 crossing
    let starts: BTreeMap<(&str, usize), f64> = [
        (("SF", 1), -3.0),
        (("SF", 30), 1.5),
        (("SF", 60), 2.0),
        (("DF", 1), -8.0),
        (("DF", 30), -1.0),
        (("DF", 60), -0.5),
        (("PA", 1), -14.0),
        (("PA", 30), -12.0),
        (("PA", 60), -12.0),
        (("ALOHA", 30), 0.0),
        (("ALOHA", 60), 3.0),
    ]
    .into_iter()
    .collect();

    let mut curves: BTreeMap<(&str, usize), Curve> = BTreeMap::new();
    for (&(label, users), &s) in &starts {
        let system = match label {
            "SF" => sf,
            "DF" => df,
            "PA" => pa,
            _ => SystemKind::Aloha,
        };
        curves.insert((label, users), bench.trace(system, users, s));
    }
    // fill SF and DF onto a common grid for the pointwise comparison
    for users in USERS {
        let grid: Vec<i64> = curves[&("SF", users)]
            .points
            .keys()
            .chain(curves[&("DF", users)].points.keys())
            .copied()
            .collect();
        for label in ["SF", "DF"] {
            let mut c = curves.remove(&(label, users)).unwrap();
            for &g in &grid {
                bench.measure(&mut c, g as f64 / 100.0);
            }
            curves.insert((label, users), c);
        }
    }
    let cross = |label: &str, users: usize| curves[&(label, users)].crossing();
    let table: Vec<String> = curves
        .iter()
        .map(|((l, j), c)| format!("{l} J={j}: {}", fmt_cross(c.crossing())))
        .collect();
    println!("       trend crossings at BER 1e-4 (Es/N0 dB): {}", table.join(", "));

    let mut out = Vec::new();

    // (a)
    let (a30, a60) = (cross("SF", 30), cross("SF", 60));
    let gap_a = a30.zip(a60).map(|(x, y)| (x - y).abs());
    out.push((
        "7a SF J=30 vs J=60 within 0.5 dB",
        Outcome::new(
            gap_a.is_some_and(|g| g <= 0.5),
            format!("SF J=30 {} dB, J=60 {} dB, |Δ| = {}", fmt_cross(a30), fmt_cross(a60), fmt_cross(gap_a)),
        ),
    ));

    // (b)
    let mut worse = Vec::new();
    let mut gaps = Vec::new();
    for users in USERS {
        let (s, d) = (&curves[&("SF", users)], &curves[&("DF", users)]);
        for (k, ps) in &s.points {
            let pd = &d.points[k];
            let (d_lo, _) = BerPoint::wilson_interval(pd.bit_errors, bits(pd), 1.96);
            let (_, s_hi) = BerPoint::wilson_interval(ps.bit_errors, bits(ps), 1.96);
            if d_lo > s_hi {
                worse.push(format!("J={users} {} dB", ps.snr_db));
            }
        }
        gaps.push(cross("SF", users).zip(cross("DF", users)).map(|(x, y)| x - y));
    }
    let shrinking = gaps.iter().all(Option::is_some)
        && gaps.windows(2).all(|w| w[1].unwrap() <= w[0].unwrap() + 0.25)
        && gaps[2].unwrap() < gaps[0].unwrap();
    out.push((
        "7b DF <= SF pointwise, gap shrinking in J",
        Outcome::new(
            worse.is_empty() && shrinking,
            format!(
                "DF significantly worse at {worse:?}; SF-DF gap at J=1/30/60: {}",
                gaps.iter().map(|g| fmt_cross(*g)).collect::<Vec<_>>().join("/")
            ),
        ),
    ));

    // (c)
    let mut pass_c = true;
    let mut lines_c = Vec::new();
    for users in USERS {
        let g = cross("DF", users).zip(cross("PA", users)).map(|(d, p)| d - p);
        pass_c &= g.is_some_and(|g| g >= 5.0);
        lines_c.push(format!("J={users} {}", fmt_cross(g)));
    }
    out.push((
        "7c PA beats DF by >= 5 dB",
        Outcome::new(pass_c, format!("DF - PA gap (dB): {}", lines_c.join(", "))),
    ));

    // (d)
    let mut pass_d = true;
    let mut lines_d = Vec::new();
    for users in [30usize, 60] {
        let aloha = cross("ALOHA", users);
        for label in ["SF", "DF", "PA"] {
            let g = aloha.zip(cross(label, users)).map(|(a, f)| a - f);
            pass_d &= g.is_some_and(|g| g >= 3.0);
            lines_d.push(format!("{label} J={users} {}", fmt_cross(g)));
        }
    }
    out.push((
        "7d FFMA beats ALOHA by >= 3 dB at J >= 30",
        Outcome::new(pass_d, format!("ALOHA - FFMA gap (dB): {}", lines_d.join(", "))),
    ));

    let elapsed = start.elapsed().as_secs_f64();
    out.push((
        "7 runtime",
        Outcome::new(elapsed < 3600.0, format!("{elapsed:.0} s (budget 3600 s)")),
    ));
    out
}
