use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix entry ({row}, {col}) is not finite or exceeds {max:e} in magnitude")]
    EntryOutOfRange { row: usize, col: usize, max: f64 },

    #[error("matrix is not symmetric: max |V - V^T| = {deviation:e} exceeds {tolerance:e}")]
    Asymmetric { deviation: f64, tolerance: f64 },

    #[error("state is not physical: nu_minus = {nu_minus}, smallest eigenvalue of V = {min_eigenvalue}")]
    Unphysical { nu_minus: f64, min_eigenvalue: f64 },

    #[error("non-positive determinant ({det}) in {what}")]
    NonPositiveDeterminant { what: &'static str, det: f64 },

    #[error("invalid mode index {0}, expected 1 or 2")]
    InvalidMode(i64),

    #[error("transmittance T{channel} = {value} is outside [0, 1]")]
    TransmittanceOutOfRange { channel: u8, value: f64 },

    #[error("invalid link budget: {0}")]
    InvalidLink(String),

    #[error("Duan weight a must be a nonzero finite number, got {0}")]
    InvalidDuanWeight(f64),

    #[error("state is separable (W_ppt = {w_ppt}); the operation needs an entangled state")]
    Separable { w_ppt: f64 },

    #[error("state is not in symmetric-mode form: {0}")]
    NotSymmetricModes(String),

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: String,
    },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Spec(String),

    #[error("numerical routine failed to converge: {0}")]
    NoConvergence(&'static str),
}
