//! Experiment description and its flat `key = value` text form.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{Result, SimError};
use crate::ffma_system::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemKind {
    Ffma(Mode),
    Aloha,
}

impl SystemKind {
    pub fn label(self) -> &'static str {
        match self {
            SystemKind::Ffma(mode) => mode.label(),
            SystemKind::Aloha => "ALOHA",
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SystemKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("aloha") {
            return Ok(SystemKind::Aloha);
        }
        s.parse::<Mode>()
            .map(SystemKind::Ffma)
            .map_err(|e| SimError::Setting {
                key: "system".into(),
                msg: e.to_string(),
            })
    }
}

/// What `snr_db` on the sweep axis means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrAxis {
    /// Per-symbol `P_avg / N0`.
    EsN0,
    /// Per-bit `E_user / (K·N0)`, with `E_user` the energy a user spends per frame.
    EbN0,
}

impl FromStr for SnrAxis {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "esn0" | "es" => Ok(SnrAxis::EsN0),
            "ebn0" | "eb" => Ok(SnrAxis::EbN0),
            _ => Err(SimError::Setting {
                key: "snr_axis".into(),
                msg: format!("{s:?} is not esn0 or ebn0"),
            }),
        }
    }
}

impl fmt::Display for SnrAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SnrAxis::EsN0 => "esn0",
            SnrAxis::EbN0 => "ebn0",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeSource {
    Generated,
    Alist(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub system: SystemKind,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub j_list: Vec<usize>,
    pub snr_grid: Vec<f64>,
    pub snr_axis: SnrAxis,
    pub mu_pas: f64,
    pub p_avg: f64,
    pub min_frames: u64,
    pub max_frames: u64,
    pub min_bit_errors: u64,
    pub max_iter: usize,
    pub seed: u64,
    pub code: CodeSource,
    pub code_seed: u64,
    pub col_weight: usize,
    pub output: Option<PathBuf>,
    pub record_timing: bool,
}

impl Default for ExperimentSpec {
    /// Desk-scale sparse-form sweep.
    fn default() -> Self {
        ExperimentSpec {
            system: SystemKind::Ffma(Mode::Sparse),
            n: 600,
            k: 5,
            m: 60,
            j_list: vec![1, 30, 60],
            snr_grid: vec![0.0, 1.0, 2.0, 3.0],
            snr_axis: SnrAxis::EsN0,
            mu_pas: 60.0,
            p_avg: 1.0,
            min_frames: 100,
            max_frames: 100_000,
            min_bit_errors: 100,
            max_iter: crate::linear_code::DEFAULT_MAX_ITER,
            seed: 1,
            code: CodeSource::Generated,
            code_seed: 1,
            col_weight: 3,
            output: None,
            record_timing: false,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value.trim().parse().map_err(|e: T::Err| SimError::Setting {
        key: key.into(),
        msg: format!("{value:?}: {e}"),
    })
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(SimError::Setting {
            key: key.into(),
            msg: format!("{value:?} is not a boolean"),
        }),
    }
}

/// Either a comma-separated list or an inclusive `start:step:stop` range.
fn parse_grid(key: &str, value: &str) -> Result<Vec<f64>> {
    let value = value.trim();
    if value.contains(':') {
        let parts: Vec<f64> = value
            .split(':')
            .map(|p| parse_num(key, p))
            .collect::<Result<_>>()?;
        let [start, step, stop] = parts[..] else {
            return Err(SimError::Setting {
                key: key.into(),
                msg: "range must be start:step:stop".into(),
            });
        };
        if !(step > 0.0) || stop < start {
            return Err(SimError::Setting {
                key: key.into(),
                msg: "range needs a positive step and stop ≥ start".into(),
            });
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        // rounded to 1e-9 so grid points print cleanly
        return Ok((0..count)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect());
    }
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

impl ExperimentSpec {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        match key {
            "system" => self.system = value.trim().parse()?,
            "n" => self.n = parse_num(key, value)?,
            "k" => self.k = parse_num(key, value)?,
            "m" => self.m = parse_num(key, value)?,
            "j_list" | "j" => {
                self.j_list = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_num(key, s))
                    .collect::<Result<_>>()?
            }
            "snr_grid" | "snr" => self.snr_grid = parse_grid(key, value)?,
            "snr_axis" => self.snr_axis = value.trim().parse()?,
            "mu_pas" => self.mu_pas = parse_num(key, value)?,
            "p_avg" => self.p_avg = parse_num(key, value)?,
            "min_frames" => self.min_frames = parse_num(key, value)?,
            "max_frames" => self.max_frames = parse_num(key, value)?,
            "min_bit_errors" => self.min_bit_errors = parse_num(key, value)?,
            "max_iter" => self.max_iter = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "code_seed" => self.code_seed = parse_num(key, value)?,
            "col_weight" => self.col_weight = parse_num(key, value)?,
            "code" => {
                let v = value.trim();
                self.code = if v.eq_ignore_ascii_case("generated") {
                    CodeSource::Generated
                } else {
                    CodeSource::Alist(PathBuf::from(v))
                }
            }
            "output" => {
                let v = value.trim();
                self.output = (!v.is_empty()).then(|| PathBuf::from(v));
            }
            "record_timing" => self.record_timing = parse_bool(key, value)?,
            _ => return Err(SimError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Applies every setting in a `key = value` text; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| SimError::Syntax {
                line: idx + 1,
                text: raw.to_string(),
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let mut spec = ExperimentSpec::default();
        spec.apply_text(&std::fs::read_to_string(path)?)?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |key: &str, msg: &str| {
            Err(SimError::Setting {
                key: key.into(),
                msg: msg.into(),
            })
        };
        if self.snr_grid.is_empty() || self.snr_grid.iter().any(|s| !s.is_finite()) {
            return fail("snr_grid", "needs at least one finite value");
        }
        if self.j_list.is_empty() || self.j_list.contains(&0) {
            return fail("j_list", "needs at least one positive user count");
        }
        if self.min_frames == 0 {
            return fail("min_frames", "must be at least 1");
        }
        if self.max_frames < self.min_frames {
            return fail("max_frames", "must be at least min_frames");
        }
        if self.k == 0 || self.n == 0 {
            return fail("n", "n and k must be positive");
        }
        if let SystemKind::Ffma(_) = self.system {
            if self.m * self.k >= self.n {
                return fail("m", "m·K must be smaller than n");
            }
            if self.j_list.iter().any(|&j| j > self.m) {
                return fail("j_list", "user counts must not exceed m");
            }
        }
        Ok(())
    }

    /// The spec in the same text form [`ExperimentSpec::apply_text`] reads.
    pub fn to_text(&self) -> String {
        let join = |v: &[String]| v.join(",");
        let system = match self.system {
            SystemKind::Ffma(m) => m.label().to_ascii_lowercase(),
            SystemKind::Aloha => "aloha".into(),
        };
        let code = match &self.code {
            CodeSource::Generated => "generated".to_string(),
            CodeSource::Alist(p) => p.display().to_string(),
        };
        let mut out = String::new();
        let mut push = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        push("system", system);
        push("n", self.n.to_string());
        push("k", self.k.to_string());
        push("m", self.m.to_string());
        push("j_list", join(&self.j_list.iter().map(|j| j.to_string()).collect::<Vec<_>>()));
        push("snr_grid", join(&self.snr_grid.iter().map(|s| s.to_string()).collect::<Vec<_>>()));
        push("snr_axis", self.snr_axis.to_string());
        push("mu_pas", self.mu_pas.to_string());
        push("p_avg", self.p_avg.to_string());
        push("min_frames", self.min_frames.to_string());
        push("max_frames", self.max_frames.to_string());
        push("min_bit_errors", self.min_bit_errors.to_string());
        push("max_iter", self.max_iter.to_string());
        push("seed", self.seed.to_string());
        push("code", code);
        push("code_seed", self.code_seed.to_string());
        push("col_weight", self.col_weight.to_string());
        if let Some(o) = &self.output {
            push("output", o.display().to_string());
        }
        push("record_timing", self.record_timing.to_string());
        out
    }
}
