//! Numerical time-frequency operator calculus on discrete periodic grids.
//!
//! The library discretizes the continuum objects of time-frequency analysis —
//! short-time Fourier transforms, (cross-)Wigner distributions, Weyl
//! pseudodifferential operators, multilinear localization operators, and
//! weighted modulation-space norms — on uniform periodic lattices of
//! `[-L/2, L/2)^d`. All integrals become Riemann sums with cell volume
//! `(L/N)^d`, which makes the classical operator identities (weak forms,
//! kernel representations, the Weyl connection for localization operators)
//! hold to near machine precision and keeps every transform FFT-friendly.
//!
//! Modules:
//! - [`grid`]: lattices, quadrature, Fourier transforms, resampling, test signals.
//! - [`tf_transforms`]: translation/modulation, involution, STFT, Wigner, and
//!   their tensor-product multilinear variants.
//! - [`operators`]: Weyl quantization, localization operators, weak forms,
//!   kernels, and the Weyl-symbol connection.
//! - [`modspaces`]: weighted Lebesgue / mixed / modulation norms and
//!   phase-space convolution.
//! - [`admissibility`]: exact rational checking of exponent/weight hypotheses
//!   for the convolution, Wigner, Weyl, and localization boundedness theorems.
//! - [`verify`]: reproducible identity certifications and inequality ratio
//!   sweeps with machine-readable reports.
//! - [`io`]: CSV + JSON-sidecar serialization of signals and phase-space data.

pub mod admissibility;
pub(crate) mod fft;
pub mod grid;
pub mod io;
pub mod modspaces;
pub mod operators;
pub mod tf_transforms;
pub mod verify;

use thiserror::Error;

/// Errors produced by grid construction, operator application, and I/O.
#[derive(Debug, Error)]
pub enum TfError {
    /// Invalid grid parameters (odd N, non-positive L, ...).
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    /// Two operands live on incompatible grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// Malformed argument (zero window, off-lattice shift, bad exponent, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A dense kernel would exceed the configured memory cap.
    #[error("kernel of {entries} complex entries exceeds the cap of {cap}")]
    KernelTooLarge { entries: u128, cap: u128 },
    /// An admissibility gate refused to run a sweep.
    #[error("admissibility gate failed for theorem `{theorem}`: condition `{condition}` not satisfied")]
    GateFailed { theorem: String, condition: String },
    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// CSV (de)serialization failure.
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    /// Malformed textual input (exponents, parameter files).
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, TfError>;
