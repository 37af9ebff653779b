//! Monte-Carlo BER experiments: configuration, execution and output.

mod plot;
mod runner;
mod spec;

use thiserror::Error;

pub use plot::{emit_plot_data, PlotFiles};
pub use runner::{read_csv, run_experiment, run_point, write_csv, BerPoint, Simulator, CSV_HEADER};
pub use spec::{CodeSource, ExperimentSpec, SnrAxis, SystemKind};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid experiment setting {key}: {msg}")]
    Setting { key: String, msg: String },
    #[error("unknown setting {0:?}")]
    UnknownKey(String),
    #[error("malformed line {line}: {text:?}")]
    Syntax { line: usize, text: String },
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Code(#[from] crate::linear_code::CodeError),
    #[error(transparent)]
    Ffma(#[from] crate::ffma_system::FfmaError),
    #[error(transparent)]
    Aloha(#[from] crate::baseline_aloha::AlohaError),
    #[error(transparent)]
    Channel(#[from] crate::channel::ChannelError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for SimError {
    fn from(e: csv::Error) -> Self {
        SimError::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
