//! Physical constants and default operating point.

use std::f64::consts::PI;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// ⁸⁵Rb D2 line vacuum wavelength, m.
pub const RB85_D2_WAVELENGTH: f64 = 780.24e-9;

/// Probe carrier angular frequency at the ⁸⁵Rb D2 line, rad/s (≈ 2.4142e15).
pub const RB85_D2_CARRIER: f64 = 2.0 * PI * SPEED_OF_LIGHT / RB85_D2_WAVELENGTH;

/// Vapor cell length, m.
pub const DEFAULT_CELL_LENGTH: f64 = 0.1;

/// Full width at half maximum of each Raman gain line, Hz.
pub const DEFAULT_LINE_FWHM: f64 = 700e3;

/// Peak single-pass gain used to calibrate the default line amplitude, dB.
pub const DEFAULT_PEAK_GAIN_DB: f64 = 3.5;

/// Pump separation of the reference doublet, Hz.
pub const DEFAULT_PUMP_SEPARATION: f64 = 2e6;

/// Heterodyne reference offset (AOM frequency), Hz.
pub const DEFAULT_BEAT_FREQUENCY: f64 = 40e6;

/// Heterodyne digitizer rate, Hz.
pub const DEFAULT_SAMPLE_RATE: f64 = 400e6;

/// Demodulator low-pass cutoff, Hz.
pub const DEFAULT_LOWPASS_CUTOFF: f64 = 300e3;

/// Photodetector bandwidth for the gain-modulation model, Hz.
pub const DEFAULT_DETECTOR_CUTOFF: f64 = 5e6;

/// Window over which dispersion slopes are fitted, Hz.
pub const DEFAULT_FIT_BANDWIDTH: f64 = 0.5e6;

/// Angular frequency of a vacuum wavelength.
pub fn carrier_from_wavelength(wavelength: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / wavelength
}

/// Lorentzian half width at half maximum in rad/s for a FWHM given in Hz.
pub fn half_width_from_fwhm(fwhm_hz: f64) -> f64 {
    PI * fwhm_hz
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rb_carrier_matches_quoted_values() {
        assert!((RB85_D2_CARRIER / 2.4141e15 - 1.0).abs() < 1e-4);
        let k = RB85_D2_CARRIER / SPEED_OF_LIGHT;
        assert!((k / 8.053e6 - 1.0).abs() < 1e-4);
    }
}
