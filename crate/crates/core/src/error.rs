use thiserror::Error;

/// Failures raised by the grids, builders and coincidence engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid frequency range: {0}")]
    InvalidRange(String),

    #[error(
        "sampling criterion violated: |tau| * spacing = {product:.4} >= pi/4 \
         (tau = {tau:e} s, spacing = {spacing:e} rad/s); refine the grid"
    )]
    Aliasing {
        tau: f64,
        spacing: f64,
        product: f64,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate samples: {0}")]
    Degenerate(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("grid is not symmetric about zero detuning (omega_min = {omega_min:e}, omega_max = {omega_max:e})")]
    AsymmetricGrid { omega_min: f64, omega_max: f64 },

    #[error("expected a two-photon state, found {0} photon(s)")]
    PhotonNumber(usize),

    #[error("beam-splitter reflectivity {0} outside [0, 1]")]
    EtaOutOfRange(f64),

    #[error("numerical contract violated: {0}")]
    Contract(String),

    #[error("singular value decomposition failed: {0}")]
    Svd(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
