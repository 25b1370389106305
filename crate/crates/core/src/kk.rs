//! Numerical Kramers-Kronig transform from gain (Im χ) to index (Re χ).
//!
//! For a causal response `Re χ = −H[Im χ]` with the Hilbert transform
//! `H[g](x) = (1/π) PV ∫ g(s)/(x − s) ds`. On a uniform grid the principal
//! value integral is evaluated with the odd/even (Maclaurin) rule
//!
//! ```text
//! H[g]_i ≈ (2/π) Σ_{j : i−j odd} g_j / (i − j)
//! ```
//!
//! which skips the singular point and is spectrally accurate for smooth,
//! well-resolved lines. The sum is a linear convolution, computed with a
//! zero-padded FFT so that no periodic images enter the result. Samples
//! outside the grid are taken as zero, so the grid must extend well into the
//! tails of the lines.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::profile::{ProfileKind, SpectralProfile};

/// Minimum ratio of grid half-span to spectral support accepted.
pub const MIN_SPAN_RATIO: f64 = 20.0;

/// Ratio of grid half-span to spectral support recommended for tail accuracy.
pub const RECOMMENDED_SPAN_RATIO: f64 = 50.0;

/// A Lorentzian falls to 1/26 of its peak at five half-widths; the spectral
/// support is the extent of the region above this fraction of the peak.
const SUPPORT_FRACTION: f64 = 1.0 / 26.0;

/// Principal-value Hilbert transform of uniformly sampled data.
pub fn hilbert_uniform(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    if n < 2 {
        return vec![0.0; n];
    }
    // Zero padding to at least 2n keeps the linear convolution clear of wrap-around.
    let len = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);

    let mut data: Vec<Complex64> = samples
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .chain(std::iter::repeat(Complex64::new(0.0, 0.0)))
        .take(len)
        .collect();

    let mut kernel = vec![Complex64::new(0.0, 0.0); len];
    for k in (1..n).step_by(2) {
        let w = 2.0 / (PI * k as f64);
        kernel[k].re = w;
        kernel[len - k].re = -w;
    }

    fwd.process(&mut data);
    fwd.process(&mut kernel);
    for (d, k) in data.iter_mut().zip(&kernel) {
        *d *= k;
    }
    inv.process(&mut data);
    let scale = 1.0 / len as f64;
    data.iter().take(n).map(|c| c.re * scale).collect()
}

/// Half-width (Hz) of the region where `|values|` exceeds 1/26 of its peak,
/// together with the center of that region. `None` for an all-zero profile.
pub fn spectral_support(detunings: &[f64], values: &[f64]) -> Option<(f64, f64)> {
    let peak = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return None;
    }
    // Samples sitting exactly on the threshold do not count as support.
    let threshold = peak * SUPPORT_FRACTION * (1.0 + 1e-9);
    let first = values.iter().position(|v| v.abs() > threshold)?;
    let last = values.iter().rposition(|v| v.abs() > threshold)?;
    let center = 0.5 * (detunings[first] + detunings[last]);
    let half = 0.5 * (detunings[last] - detunings[first]);
    Some((center, half))
}

/// Transforms the gain part of a susceptibility profile into the index
/// deviation `Re χ / 2` on the same grid.
///
/// Fails with [`Error::NonUniformGrid`] for irregular grids and with
/// [`Error::GridTooNarrow`] when the grid reaches less than
/// [`MIN_SPAN_RATIO`] times the spectral support on either side of the line
/// center.
pub fn kramers_kronig(gain_profile: &SpectralProfile) -> Result<SpectralProfile> {
    let chi = gain_profile
        .complex_values()
        .ok_or(Error::WrongProfileKind {
            expected: ProfileKind::Susceptibility,
            found: gain_profile.kind(),
        })?;
    let step = gain_profile.uniform_step()?;
    let detunings = gain_profile.detunings();
    let gain: Vec<f64> = chi.iter().map(|c| c.im).collect();

    let Some((center, support)) = spectral_support(detunings, &gain) else {
        return SpectralProfile::index_deviation(detunings.to_vec(), vec![0.0; detunings.len()]);
    };
    let support = support.max(step);
    let half_span = (center - detunings[0]).min(detunings[detunings.len() - 1] - center);
    let ratio = half_span / support;
    if ratio < MIN_SPAN_RATIO {
        return Err(Error::GridTooNarrow {
            ratio,
            required: MIN_SPAN_RATIO,
        });
    }

    let index = hilbert_uniform(&gain)
        .into_iter()
        .map(|h| -0.5 * h)
        .collect();
    SpectralProfile::index_deviation(detunings.to_vec(), index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{linspace, symmetric_grid};

    fn lorentzian_profile(gamma_hz: f64, half_span: f64, step: f64) -> SpectralProfile {
        let grid = symmetric_grid(half_span, step);
        let values = grid
            .iter()
            .map(|&d| {
                let x = 2.0 * PI * d;
                let g = 2.0 * PI * gamma_hz;
                Complex64::new(0.0, -g / (x * x + g * g))
            })
            .collect();
        SpectralProfile::susceptibility(grid, values).unwrap()
    }

    #[test]
    fn hilbert_of_odd_length_impulse_pair() {
        // H of a unit sample at j is (2/π)/(i−j) on odd offsets.
        let mut v = vec![0.0; 9];
        v[4] = 1.0;
        let h = hilbert_uniform(&v);
        assert!((h[5] - 2.0 / PI).abs() < 1e-12);
        assert!((h[3] + 2.0 / PI).abs() < 1e-12);
        assert!(h[6].abs() < 1e-12);
        assert!((h[7] - 2.0 / (3.0 * PI)).abs() < 1e-12);
        assert!(h[4].abs() < 1e-12);
    }

    #[test]
    fn zero_gain_gives_zero_index() {
        let grid = linspace(-1e6, 1e6, 101);
        let p = SpectralProfile::susceptibility(grid, vec![Complex64::new(0.0, 0.0); 101]).unwrap();
        let out = kramers_kronig(&p).unwrap();
        assert!(out.real_values().unwrap().iter().all(|&v| v == 0.0));
        assert_eq!(out.kind(), ProfileKind::IndexDeviation);
    }

    #[test]
    fn rejects_non_uniform_grid() {
        let grid = vec![-2.0, -1.0, 0.0, 1.5, 2.0];
        let vals = vec![Complex64::new(0.0, -1.0); 5];
        let p = SpectralProfile::susceptibility(grid, vals).unwrap();
        assert!(matches!(
            kramers_kronig(&p),
            Err(Error::NonUniformGrid { .. })
        ));
    }

    #[test]
    fn rejects_narrow_grid() {
        // ±50γ against a 5γ support (one grid step less on the discrete grid): ratio ~10.1.
        let p = lorentzian_profile(100e3, 5e6, 5e3);
        match kramers_kronig(&p) {
            Err(Error::GridTooNarrow { ratio, .. }) => {
                assert!((ratio - 10.1).abs() < 0.05, "{ratio}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_real_profiles() {
        let p = SpectralProfile::gain_db(linspace(0.0, 1.0, 4), vec![0.0; 4]).unwrap();
        assert!(matches!(
            kramers_kronig(&p),
            Err(Error::WrongProfileKind { .. })
        ));
    }

    #[test]
    fn single_lorentzian_pair() {
        // γ = 2π·100 kHz on ±100γ, closed-form pair Re χ = x/(x² + γ²).
        let gamma_hz = 100e3;
        let p = lorentzian_profile(gamma_hz, 100.0 * gamma_hz, gamma_hz / 20.0);
        let out = kramers_kronig(&p).unwrap();
        let g = 2.0 * PI * gamma_hz;
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (&d, &dn) in out.detunings().iter().zip(out.real_values().unwrap()) {
            if d.abs() <= 10.0 * gamma_hz {
                let x = 2.0 * PI * d;
                let exact = 0.5 * x / (x * x + g * g);
                err = err.max((dn - exact).abs());
                scale = scale.max(exact.abs());
            }
        }
        assert!(err / scale < 1e-3, "relative error {}", err / scale);
    }
}
