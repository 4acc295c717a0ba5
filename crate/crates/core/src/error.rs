use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported feature: {0}")]
    Unsupported(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid orbital partition: {0}")]
    Partition(String),

    #[error("SCF did not converge after {iterations} iterations (last energy {last_energy:.12})")]
    ScfNotConverged { iterations: usize, last_energy: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("operator label inconsistent with partition: {0}")]
    Label(String),

    #[error("missing {0}-particle reduced density matrix")]
    MissingRdm(usize),

    #[error("degenerate metric: no overlap eigenvalue above threshold {threshold:e} (largest {largest:e})")]
    DegenerateMetric { threshold: f64, largest: f64 },

    #[error("rotation is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
