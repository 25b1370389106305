//! Two-Lorentzian model of the bi-frequency Raman gain doublet.
//!
//! The complex susceptibility seen by the probe at angular detuning `x` from
//! the doublet center is
//!
//! ```text
//! χ(x) = M · [ 1/(x − d/2 + iγ) + 1/(x + d/2 + iγ) ],   d = 2πΔ
//! ```
//!
//! `Im χ < 0` is gain, the index deviation is `Δn = Re χ / 2` and the
//! single-pass intensity gain over a cell of length `L` is `exp(−k·Im χ·L)`.
//! Both lines share amplitude and width.

use std::f64::consts::{LN_10, PI};

use num_complex::Complex64;

use crate::constants::{
    half_width_from_fwhm, DEFAULT_CELL_LENGTH, DEFAULT_LINE_FWHM, DEFAULT_PEAK_GAIN_DB,
    DEFAULT_PUMP_SEPARATION, RB85_D2_CARRIER, SPEED_OF_LIGHT,
};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::profile::SpectralProfile;

/// Parameters of the gain doublet and the probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    line_amplitude: f64,
    half_width: f64,
    pump_separation: f64,
    cell_length: f64,
    carrier: f64,
    wavenumber: f64,
}

impl MediumParams {
    /// * `line_amplitude` – `M`, rad/s
    /// * `half_width` – Lorentzian HWHM `γ`, rad/s
    /// * `pump_separation` – `Δ`, Hz
    /// * `cell_length` – `L`, m
    /// * `carrier` – probe carrier `ω_o`, rad/s
    pub fn new(
        line_amplitude: f64,
        half_width: f64,
        pump_separation: f64,
        cell_length: f64,
        carrier: f64,
    ) -> Result<Self> {
        require_non_negative("line_amplitude", line_amplitude)?;
        require_positive("half_width", half_width)?;
        require_non_negative("pump_separation", pump_separation)?;
        require_positive("cell_length", cell_length)?;
        require_positive("carrier_angular_frequency", carrier)?;
        Ok(Self {
            line_amplitude,
            half_width,
            pump_separation,
            cell_length,
            carrier,
            wavenumber: carrier / SPEED_OF_LIGHT,
        })
    }

    /// Builds parameters whose isolated lines peak at `peak_gain_db` with the
    /// given FWHM (Hz).
    pub fn from_peak_gain(
        peak_gain_db: f64,
        fwhm_hz: f64,
        pump_separation: f64,
        cell_length: f64,
        carrier: f64,
    ) -> Result<Self> {
        let m = calibrate_amplitude(peak_gain_db, fwhm_hz, cell_length, carrier)?;
        Self::new(
            m,
            half_width_from_fwhm(fwhm_hz),
            pump_separation,
            cell_length,
            carrier,
        )
    }

    pub fn line_amplitude(&self) -> f64 {
        self.line_amplitude
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn pump_separation(&self) -> f64 {
        self.pump_separation
    }

    pub fn cell_length(&self) -> f64 {
        self.cell_length
    }

    pub fn carrier(&self) -> f64 {
        self.carrier
    }

    /// `k = ω_o / c`, rad/m.
    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    /// Angular separation of the two lines, `d = 2πΔ`.
    pub fn line_separation(&self) -> f64 {
        2.0 * PI * self.pump_separation
    }

    pub fn with_pump_separation(&self, pump_separation: f64) -> Result<Self> {
        require_non_negative("pump_separation", pump_separation)?;
        Ok(Self {
            pump_separation,
            ..*self
        })
    }

    pub fn with_line_amplitude(&self, line_amplitude: f64) -> Result<Self> {
        require_non_negative("line_amplitude", line_amplitude)?;
        Ok(Self {
            line_amplitude,
            ..*self
        })
    }

    /// Offset (Hz) from the doublet center beyond which each line has fallen
    /// to 1/26 of its peak, `Δ/2 + 5γ/2π`.
    pub fn spectral_support(&self) -> f64 {
        self.pump_separation / 2.0 + 5.0 * self.half_width / (2.0 * PI)
    }
}

impl Default for MediumParams {
    /// 3.5 dB, 700 kHz lines at Δ = 2 MHz in a 10 cm cell at the Rb D2 carrier.
    fn default() -> Self {
        Self::from_peak_gain(
            DEFAULT_PEAK_GAIN_DB,
            DEFAULT_LINE_FWHM,
            DEFAULT_PUMP_SEPARATION,
            DEFAULT_CELL_LENGTH,
            RB85_D2_CARRIER,
        )
        .expect("default medium parameters are valid")
    }
}

/// Offsets of the two lines from the probe at detuning `detuning` (Hz).
fn line_offsets(params: &MediumParams, detuning: f64) -> [f64; 2] {
    let x = 2.0 * PI * detuning;
    let half = params.line_separation() / 2.0;
    [x - half, x + half]
}

/// Complex susceptibility χ at `detuning` (Hz from the doublet center).
pub fn susceptibility(params: &MediumParams, detuning: f64) -> Complex64 {
    let g = params.half_width;
    line_offsets(params, detuning)
        .iter()
        .map(|&u| params.line_amplitude / Complex64::new(u, g))
        .sum()
}

/// Single-pass intensity gain in dB, `10·log10(exp(−k·Im χ·L))`.
pub fn gain_db(params: &MediumParams, detuning: f64) -> f64 {
    let chi = susceptibility(params, detuning);
    -10.0 / LN_10 * params.wavenumber * params.cell_length * chi.im
}

/// Linear single-pass intensity gain `exp(−k·Im χ·L)`.
pub fn gain_linear(params: &MediumParams, detuning: f64) -> f64 {
    let chi = susceptibility(params, detuning);
    (-params.wavenumber * params.cell_length * chi.im).exp()
}

/// Refractive-index deviation Δn = Re χ / 2.
pub fn index_deviation(params: &MediumParams, detuning: f64) -> f64 {
    let g2 = params.half_width * params.half_width;
    let sum: f64 = line_offsets(params, detuning)
        .iter()
        .map(|&u| u / (u * u + g2))
        .sum();
    0.5 * params.line_amplitude * sum
}

/// Analytic dispersion slope ∂n/∂ω (rad⁻¹·s) at `detuning`.
pub fn dispersion_slope(params: &MediumParams, detuning: f64) -> f64 {
    let g2 = params.half_width * params.half_width;
    let sum: f64 = line_offsets(params, detuning)
        .iter()
        .map(|&u| {
            let den = u * u + g2;
            (g2 - u * u) / (den * den)
        })
        .sum();
    0.5 * params.line_amplitude * sum
}

/// Group index `1 + ω_o·∂n/∂ω` for a dilute medium (background index 1).
pub fn group_index(params: &MediumParams, detuning: f64) -> f64 {
    1.0 + params.carrier * dispersion_slope(params, detuning)
}

/// Line amplitude `M` (rad/s) such that an isolated line peaks at
/// `peak_gain_db`: `M = ln(10^(G/10))·γ/(k·L)` with `γ = π·fwhm`.
pub fn calibrate_amplitude(
    peak_gain_db: f64,
    fwhm_hz: f64,
    cell_length: f64,
    carrier: f64,
) -> Result<f64> {
    for (name, value) in [
        ("fwhm", fwhm_hz),
        ("cell_length", cell_length),
        ("carrier", carrier),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveInput { name, value });
        }
    }
    if !(peak_gain_db.is_finite() && peak_gain_db >= 0.0) {
        return Err(Error::NonPositiveInput {
            name: "peak_gain_db",
            value: peak_gain_db,
        });
    }
    let k = carrier / SPEED_OF_LIGHT;
    let gamma = half_width_from_fwhm(fwhm_hz);
    Ok(peak_gain_db * LN_10 / 10.0 * gamma / (k * cell_length))
}

pub fn susceptibility_profile(params: &MediumParams, detunings: &[f64]) -> Result<SpectralProfile> {
    let values = detunings
        .iter()
        .map(|&d| susceptibility(params, d))
        .collect();
    SpectralProfile::susceptibility(detunings.to_vec(), values)
}

pub fn index_profile(params: &MediumParams, detunings: &[f64]) -> Result<SpectralProfile> {
    let values = detunings
        .iter()
        .map(|&d| index_deviation(params, d))
        .collect();
    SpectralProfile::index_deviation(detunings.to_vec(), values)
}

pub fn gain_profile(params: &MediumParams, detunings: &[f64]) -> Result<SpectralProfile> {
    let values = detunings.iter().map(|&d| gain_db(params, d)).collect();
    SpectralProfile::gain_db(detunings.to_vec(), values)
}
