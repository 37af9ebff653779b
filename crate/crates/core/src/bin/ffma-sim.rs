use std::fs::File;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ffma::analysis::{fbl_rate_bound, gain_figures, FblParams};
use ffma::linear_code::{ldpc_construct, write_alist};
use ffma::sim::{emit_plot_data, run_experiment, write_csv, ExperimentSpec, SimError};

#[derive(Parser)]
#[command(name = "ffma-sim", version, about = "Finite-field multiple access BER simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a BER sweep and write a CSV table.
    Run(RunArgs),
    /// Turn a CSV table into gnuplot data and script files.
    Plot {
        csv: PathBuf,
        /// Output stem; `.dat` and `.gp` are appended. Defaults to the CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the power and repetition gain figures.
    Gains {
        #[arg(long, default_value_t = 6000)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 300)]
        j: usize,
        #[arg(long, default_value_t = 300.0)]
        mu_pas: f64,
    },
    /// Print the finite-blocklength rate approximation.
    Fbl {
        /// Linear SNR.
        #[arg(long)]
        snr: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-3)]
        epsilon: f64,
    },
    /// Construct an LDPC code and write its parity-check matrix as alist.
    Code {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        col_weight: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Experiment file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` settings applied after the file and flags.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// sf, df, pa or aloha.
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Comma-separated user counts.
    #[arg(long)]
    j_list: Option<String>,
    /// Comma list or start:step:stop in dB.
    #[arg(long, allow_hyphen_values = true)]
    snr_grid: Option<String>,
    /// esn0 or ebn0.
    #[arg(long)]
    snr_axis: Option<String>,
    #[arg(long)]
    mu_pas: Option<f64>,
    #[arg(long)]
    min_frames: Option<u64>,
    #[arg(long)]
    max_frames: Option<u64>,
    #[arg(long)]
    min_bit_errors: Option<u64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// `generated` or a path to an alist file.
    #[arg(long)]
    code: Option<String>,
    #[arg(long)]
    code_seed: Option<u64>,
    #[arg(long)]
    col_weight: Option<usize>,
    /// CSV path; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    record_timing: bool,
}

impl RunArgs {
    fn spec(&self) -> Result<ExperimentSpec, SimError> {
        let mut spec = match &self.config {
            Some(path) => ExperimentSpec::from_file(path)?,
            None => ExperimentSpec::default(),
        };
        let flags: [(&str, Option<String>); 17] = [
            ("system", self.system.clone()),
            ("n", self.n.map(|v| v.to_string())),
            ("k", self.k.map(|v| v.to_string())),
            ("m", self.m.map(|v| v.to_string())),
            ("j_list", self.j_list.clone()),
            ("snr_grid", self.snr_grid.clone()),
            ("snr_axis", self.snr_axis.clone()),
            ("mu_pas", self.mu_pas.map(|v| v.to_string())),
            ("min_frames", self.min_frames.map(|v| v.to_string())),
            ("max_frames", self.max_frames.map(|v| v.to_string())),
            ("min_bit_errors", self.min_bit_errors.map(|v| v.to_string())),
            ("max_iter", self.max_iter.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("code", self.code.clone()),
            ("code_seed", self.code_seed.map(|v| v.to_string())),
            ("col_weight", self.col_weight.map(|v| v.to_string())),
            ("output", self.output.as_ref().map(|p| p.display().to_string())),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                spec.set(key, &v)?;
            }
        }
        if self.record_timing {
            spec.record_timing = true;
        }
        for kv in &self.set {
            let (key, value) = kv.split_once('=').ok_or_else(|| SimError::Setting {
                key: kv.clone(),
                msg: "expected KEY=VALUE".into(),
            })?;
            spec.set(key, value)?;
        }
        Ok(spec)
    }
}

fn run(cli: Cli) -> Result<(), SimError> {
    match cli.command {
        Command::Run(args) => {
            let spec = args.spec()?;
            if let ffma::sim::SystemKind::Ffma(_) = spec.system {
                for &j in &spec.j_list {
                    let g = gain_figures(spec.n, spec.k, j, spec.mu_pas);
                    log::info!(
                        "J={j}: polarization gain {:.2} dB, repetition gain {:.2} dB",
                        g.polarization_db,
                        g.repetition_db
                    );
                }
            }
            let points = run_experiment(&spec)?;
            match &spec.output {
                Some(path) => write_csv(File::create(path)?, &points)?,
                None => write_csv(io::stdout().lock(), &points)?,
            }
        }
        Command::Plot { csv, out } => {
            let stem = out.unwrap_or_else(|| csv.clone());
            let files = emit_plot_data(&csv, &stem)?;
            println!("{}", files.data.display());
            println!("{}", files.script.display());
        }
        Command::Gains { n, k, j, mu_pas } => {
            let g = gain_figures(n, k, j, mu_pas);
            println!("polarization_gain_db {:.2}", g.polarization_db);
            println!("repetition_gain_db {:.2}", g.repetition_db);
        }
        Command::Fbl { snr, n, epsilon } => {
            let params = FblParams::new(snr, n, epsilon).ok_or_else(|| SimError::Setting {
                key: "fbl".into(),
                msg: "need snr > 0, n > 0 and 0 < epsilon < 1".into(),
            })?;
            println!("{}", fbl_rate_bound(&params));
        }
        Command::Code { n, k, col_weight, seed, out } => {
            let code = ldpc_construct(n, k, col_weight, seed)?;
            write_alist(code.parity_check(), &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
