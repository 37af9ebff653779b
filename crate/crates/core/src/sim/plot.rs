//! gnuplot data and script for a results table.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::runner::{read_csv, BerPoint};
use super::{Result, SimError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotFiles {
    pub data: PathBuf,
    pub script: PathBuf,
}

/// Groups rows by (system, J) in order of first appearance.
fn curves(points: &[BerPoint]) -> Vec<(String, usize, Vec<&BerPoint>)> {
    let mut out: Vec<(String, usize, Vec<&BerPoint>)> = Vec::new();
    for p in points {
        match out.iter_mut().find(|(s, j, _)| *s == p.system && *j == p.users) {
            Some((_, _, rows)) => rows.push(p),
            None => out.push((p.system.clone(), p.users, vec![p])),
        }
    }
    out
}

/// Writes `<stem>.dat` (one gnuplot index block per curve) and `<stem>.gp`
/// next to `out_stem`, reading rows from `csv_path`.
pub fn emit_plot_data(csv_path: impl AsRef<Path>, out_stem: impl AsRef<Path>) -> Result<PlotFiles> {
    let points = read_csv(fs::File::open(csv_path.as_ref())?)?;
    if points.is_empty() {
        return Err(SimError::Csv("no data rows".into()));
    }
    let stem = out_stem.as_ref();
    let data = stem.with_extension("dat");
    let script = stem.with_extension("gp");

    let groups = curves(&points);
    let mut dat = String::new();
    for (idx, (system, users, rows)) in groups.iter().enumerate() {
        if idx > 0 {
            dat.push_str("\n\n");
        }
        writeln!(dat, "# {system} J={users}").unwrap();
        writeln!(dat, "# snr_db ber frames bit_errors").unwrap();
        let mut rows = rows.clone();
        rows.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
        for p in rows {
            writeln!(dat, "{} {:e} {} {}", p.snr_db, p.ber, p.frames, p.bit_errors).unwrap();
        }
    }
    fs::write(&data, dat)?;

    let data_name = data.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut gp = String::new();
    gp.push_str("set logscale y\nset format y '10^{%L}'\nset grid\n");
    gp.push_str("set xlabel 'SNR (dB)'\nset ylabel 'BER'\nset key bottom left\n");
    gp.push_str("plot \\\n");
    for (idx, (system, users, _)) in groups.iter().enumerate() {
        let sep = if idx + 1 == groups.len() { "" } else { ", \\" };
        writeln!(
            gp,
            "  '{data_name}' index {idx} using 1:($2 > 0 ? $2 : 1/0) with linespoints title '{system} J={users}'{sep}"
        )
        .unwrap();
    }
    fs::write(&script, gp)?;
    Ok(PlotFiles { data, script })
}
