//! Simulation and analysis toolkit for bi-frequency Raman gain media.
//!
//! The crate models the gain doublet produced by two pump fields separated by
//! `Δ`, the anomalous dispersion between the two lines, a heterodyne phase
//! measurement of that dispersion, the temporal gain modulation at harmonics of
//! `Δ`, and the search for the pump separation at which the group index
//! vanishes.
//!
//! Conventions used throughout:
//!
//! * detunings and pump separations are ordinary frequencies in Hz,
//! * line amplitudes, half-widths and carriers are angular frequencies in rad/s,
//! * dispersion slopes `∂n/∂ω` are in rad⁻¹·s.

pub mod cad;
pub mod constants;
pub mod error;
pub mod filter;
pub mod fit;
pub mod gyro;
pub mod heterodyne;
pub mod kk;
pub mod medium;
pub mod modulation;
pub mod profile;
pub mod roots;

pub use error::{Error, ErrorKind, Result};
pub use medium::MediumParams;
pub use profile::{ProfileKind, SpectralProfile};
