use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its allowed range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("{0} must be finite")]
    NonFinite(&'static str),

    #[error("state is not normalized: squared norm {norm_sq} (tolerance {tolerance:e})")]
    NotNormalized { norm_sq: f64, tolerance: f64 },

    #[error(
        "matrix is not Hermitian: entries ({row},{col}) and ({col},{row}) differ by {deviation:e}"
    )]
    NonHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error(
        "state leaks out of span{{|+-⟩, |-+⟩}}: |amps[0]|² = {amp0_sq:e}, |amps[3]|² = {amp3_sq:e}"
    )]
    Leakage { amp0_sq: f64, amp3_sq: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("state file line {line}: {message}")]
    StateFormat { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
