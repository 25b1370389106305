//! Temporal gain modulation of the amplified probe.
//!
//! With both pumps acting on the same atoms the probe beats with Raman
//! components offset by integer multiples of the pump separation Δ, so the
//! detected intensity is `|Σ a_m·exp(i2πmΔt)|²`. Cascading two cells, each
//! driven by one pump, removes the beating.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::constants::DEFAULT_DETECTOR_CUTOFF;
use crate::error::{require_positive, Error, Result};
use crate::filter::OnePole;
use crate::fit::local_maxima;

/// Default ratio between successive harmonic amplitudes.
pub const DEFAULT_HARMONIC_RATIO: f64 = 0.2;

/// Minimum series length accepted by [`power_spectrum`].
pub const MIN_SPECTRUM_SAMPLES: usize = 1 << 10;

/// Complex amplitudes of the probe and its Raman sidebands at `m·Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldComponents {
    amplitudes: Vec<Complex64>,
    pump_separation: f64,
    cascade_mode: bool,
}

impl FieldComponents {
    pub fn new(
        amplitudes: Vec<Complex64>,
        pump_separation: f64,
        cascade_mode: bool,
    ) -> Result<Self> {
        match amplitudes.first() {
            Some(a0) if a0.norm() > 0.0 => {}
            _ => return Err(Error::invalid("amplitudes", "a_0 must be non-zero")),
        }
        if !cascade_mode && amplitudes.len() < 2 {
            return Err(Error::invalid(
                "amplitudes",
                "need at least one sideband unless in cascade mode",
            ));
        }
        if amplitudes
            .iter()
            .any(|a| !(a.re.is_finite() && a.im.is_finite()))
        {
            return Err(Error::invalid("amplitudes", "must be finite"));
        }
        require_positive("pump_separation", pump_separation)?;
        Ok(Self {
            amplitudes,
            pump_separation,
            cascade_mode,
        })
    }

    /// Geometric ladder `a_m = a_0·ratio^m` for `m = 0..=max_harmonic`.
    pub fn geometric(
        a0: f64,
        ratio: f64,
        max_harmonic: usize,
        pump_separation: f64,
        cascade_mode: bool,
    ) -> Result<Self> {
        let amplitudes = (0..=max_harmonic)
            .map(|m| Complex64::new(a0 * ratio.powi(m as i32), 0.0))
            .collect();
        Self::new(amplitudes, pump_separation, cascade_mode)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn pump_separation(&self) -> f64 {
        self.pump_separation
    }

    pub fn cascade_mode(&self) -> bool {
        self.cascade_mode
    }

    pub fn max_harmonic(&self) -> usize {
        self.amplitudes.len() - 1
    }
}

/// Photodetector bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorModel {
    /// First-order low-pass cutoff, Hz.
    pub cutoff: f64,
}

impl Default for DetectorModel {
    fn default() -> Self {
        Self {
            cutoff: DEFAULT_DETECTOR_CUTOFF,
        }
    }
}

/// Detected intensity `|Σ a_m·exp(i2πmΔt)|²` sampled at `sample_rate`.
/// In cascade mode the sidebands do not beat and the result is `|a_0|²`.
pub fn intensity_timeseries(
    fc: &FieldComponents,
    duration: f64,
    sample_rate: f64,
) -> Result<Vec<f64>> {
    require_positive("duration", duration)?;
    require_positive("sample_rate", sample_rate)?;
    let top = fc.max_harmonic() as f64 * fc.pump_separation;
    if sample_rate <= 4.0 * top {
        return Err(Error::Undersampled {
            sample_rate,
            max_frequency: top,
        });
    }
    let n = (duration * sample_rate).round() as usize;
    if fc.cascade_mode {
        return Ok(vec![fc.amplitudes[0].norm_sqr(); n]);
    }
    let w = 2.0 * PI * fc.pump_separation / sample_rate;
    Ok((0..n)
        .map(|i| {
            let t = w * i as f64;
            fc.amplitudes
                .iter()
                .enumerate()
                .map(|(m, a)| a * Complex64::from_polar(1.0, m as f64 * t))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .collect())
}

/// Modulation of the dispersion phase by the same harmonic ladder,
/// `δφ(t) = δφ·I(t)/⟨I⟩`.
pub fn index_modulation_trace(
    delta_phi: f64,
    fc: &FieldComponents,
    duration: f64,
    sample_rate: f64,
) -> Result<Vec<f64>> {
    let intensity = intensity_timeseries(fc, duration, sample_rate)?;
    let mean = intensity.iter().sum::<f64>() / intensity.len().max(1) as f64;
    Ok(intensity.iter().map(|i| delta_phi * i / mean).collect())
}

/// One-sided power spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    /// Bin frequencies, Hz.
    pub frequencies: Vec<f64>,
    /// Power per bin in squared series units; sums to the mean square.
    pub power: Vec<f64>,
}

impl PowerSpectrum {
    /// Power in dB relative to one squared unit, floored at −300 dB.
    pub fn power_db(&self) -> Vec<f64> {
        self.power
            .iter()
            .map(|p| 10.0 * p.max(1e-30).log10())
            .collect()
    }

    pub fn bin_width(&self) -> f64 {
        self.frequencies.get(1).copied().unwrap_or(0.0)
    }

    pub fn total_power(&self) -> f64 {
        self.power.iter().sum()
    }

    /// Frequencies of local maxima within `floor_db` of the strongest bin.
    pub fn peaks(&self, floor_db: f64) -> Vec<f64> {
        let db = self.power_db();
        let top = db.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        local_maxima(&db)
            .into_iter()
            .filter(|&i| db[i] >= top - floor_db)
            .map(|i| self.frequencies[i])
            .collect()
    }
}

/// Hann-windowed periodogram (periodic window), normalised so the bins sum
/// to the window-corrected mean square of the series.
pub fn power_spectrum(series: &[f64], sample_rate: f64) -> Result<PowerSpectrum> {
    require_positive("sample_rate", sample_rate)?;
    let n = series.len();
    if n < MIN_SPECTRUM_SAMPLES {
        return Err(Error::RecordTooShort {
            samples: n,
            required: MIN_SPECTRUM_SAMPLES,
        });
    }
    let window: Vec<f64> = (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect();
    let w2: f64 = window.iter().map(|w| w * w).sum();
    let mut buf: Vec<Complex64> = series
        .iter()
        .zip(&window)
        .map(|(x, w)| Complex64::new(x * w, 0.0))
        .collect();
    FftPlanner::<f64>::new()
        .plan_fft_forward(n)
        .process(&mut buf);

    let half = n / 2;
    let norm = 1.0 / (n as f64 * w2);
    let power = (0..=half)
        .map(|k| {
            let p = buf[k].norm_sqr() * norm;
            let one_sided = k != 0 && !(n.is_multiple_of(2) && k == half);
            if one_sided {
                2.0 * p
            } else {
                p
            }
        })
        .collect();
    let frequencies = (0..=half)
        .map(|k| k as f64 * sample_rate / n as f64)
        .collect();
    Ok(PowerSpectrum { frequencies, power })
}

/// Applies the detector's first-order low-pass response.
pub fn detector_filter(series: &[f64], sample_rate: f64, det: &DetectorModel) -> Result<Vec<f64>> {
    let filter = OnePole::new(det.cutoff, sample_rate)?;
    let initial = series.first().copied().unwrap_or(0.0);
    Ok(filter.apply(series, initial))
}

/// Modulation depth `(max − min)/(max + min)` of the series after skipping
/// the first `skip` samples.
pub fn modulation_depth(series: &[f64], skip: usize) -> f64 {
    let tail = &series[skip.min(series.len())..];
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if tail.is_empty() || hi + lo == 0.0 {
        return 0.0;
    }
    (hi - lo) / (hi + lo)
}
