//! Run configuration: a flat `key = value` file with unit-suffixed keys.
//! Every key is optional; anything unknown is rejected.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use cadsim_core::cad::Extrapolation;
use cadsim_core::constants::RB85_D2_CARRIER;
use cadsim_core::gyro::{SweepOptions, DEFAULT_EPSILON, DEFAULT_LINEARITY_THRESHOLD};
use cadsim_core::heterodyne::{BeatSpec, DemodConfig, NoiseConfig, Sweep};
use cadsim_core::modulation::DetectorModel;
use cadsim_core::MediumParams;

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub peak_gain_db: f64,
    pub line_fwhm_hz: f64,
    /// Overrides the amplitude calibrated from `peak_gain_db`.
    pub line_amplitude_rad_s: Option<f64>,
    pub pump_separation_hz: f64,
    pub cell_length_m: f64,
    pub carrier_rad_s: Option<f64>,

    pub sweep_start_hz: f64,
    pub sweep_stop_hz: f64,
    pub sweep_points: usize,

    pub grid_half_span_hz: Option<f64>,
    pub grid_step_hz: Option<f64>,

    pub beat_frequency_hz: f64,
    pub sample_rate_hz: f64,
    pub lowpass_cutoff_hz: f64,
    pub filter_order: usize,
    pub quadrature_bias_rad: f64,
    pub record_duration_s: f64,
    pub phase_jitter_rad: f64,
    pub intensity_noise_rel: f64,
    pub noise_replicates: usize,

    pub null_search_min_hz: Option<f64>,
    pub null_search_max_hz: f64,
    pub extrapolation: String,
    pub extrapolation_trailing: usize,

    pub harmonic_ratio: f64,
    pub max_harmonic: usize,
    pub cascade: bool,
    pub spectrum_sample_rate_hz: f64,
    pub spectrum_samples: usize,
    pub detector_cutoff_hz: f64,
    pub peak_floor_db: f64,

    pub enhancement_start_hz: f64,
    pub enhancement_stop_hz: f64,
    pub enhancement_points: usize,
    pub epsilon: f64,
    pub linearity_threshold: f64,

    pub seed: u64,
    pub out_dir: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            peak_gain_db: 3.5,
            line_fwhm_hz: 700e3,
            line_amplitude_rad_s: None,
            pump_separation_hz: 2e6,
            cell_length_m: 0.1,
            carrier_rad_s: None,
            sweep_start_hz: -3e6,
            sweep_stop_hz: 3e6,
            sweep_points: 121,
            grid_half_span_hz: None,
            grid_step_hz: None,
            beat_frequency_hz: 40e6,
            sample_rate_hz: 400e6,
            lowpass_cutoff_hz: 300e3,
            filter_order: 1,
            quadrature_bias_rad: FRAC_PI_2,
            record_duration_s: 50e-6,
            phase_jitter_rad: 0.0,
            intensity_noise_rel: 0.0,
            noise_replicates: 8,
            null_search_min_hz: None,
            null_search_max_hz: 200e6,
            extrapolation: "log_linear".into(),
            extrapolation_trailing: 3,
            harmonic_ratio: 0.2,
            max_harmonic: 2,
            cascade: false,
            spectrum_sample_rate_hz: 64e6,
            spectrum_samples: 4096,
            detector_cutoff_hz: 5e6,
            peak_floor_db: 80.0,
            enhancement_start_hz: 2e6,
            enhancement_stop_hz: 40e6,
            enhancement_points: 153,
            epsilon: DEFAULT_EPSILON,
            linearity_threshold: DEFAULT_LINEARITY_THRESHOLD,
            seed: 0,
            out_dir: ".".into(),
        }
    }
}

/// Validated, typed view of a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Resolved {
    pub medium: MediumParams,
    pub sweep: Sweep,
    pub demod: DemodConfig,
    pub detector: DetectorModel,
    pub extrapolation: Extrapolation,
    pub enhancement: SweepOptions,
}

fn positive(field: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::config(
            field,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

fn non_negative(field: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(CliError::config(
            field,
            format!("must be finite and >= 0, got {v}"),
        ))
    }
}

fn at_least(field: &str, v: usize, min: usize) -> Result<(), CliError> {
    if v >= min {
        Ok(())
    } else {
        Err(CliError::config(
            field,
            format!("must be >= {min}, got {v}"),
        ))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config("--config", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::config("config", e.message().to_string()))
    }

    pub fn carrier(&self) -> f64 {
        self.carrier_rad_s.unwrap_or(RB85_D2_CARRIER)
    }

    /// SHA-256 of the canonical serialization, first 16 hex digits.
    pub fn hash(&self) -> String {
        let canonical = toml::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes())
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        positive("line_fwhm_hz", self.line_fwhm_hz)?;
        non_negative("peak_gain_db", self.peak_gain_db)?;
        positive("pump_separation_hz", self.pump_separation_hz)?;
        positive("cell_length_m", self.cell_length_m)?;
        if let Some(c) = self.carrier_rad_s {
            positive("carrier_rad_s", c)?;
        }
        if let Some(m) = self.line_amplitude_rad_s {
            non_negative("line_amplitude_rad_s", m)?;
        }
        let mut medium = MediumParams::from_peak_gain(
            self.peak_gain_db,
            self.line_fwhm_hz,
            self.pump_separation_hz,
            self.cell_length_m,
            self.carrier(),
        )?;
        if let Some(m) = self.line_amplitude_rad_s {
            medium = medium.with_line_amplitude(m)?;
        }

        at_least("sweep_points", self.sweep_points, 2)?;
        if !(self.sweep_start_hz.is_finite()
            && self.sweep_stop_hz.is_finite()
            && self.sweep_stop_hz > self.sweep_start_hz)
        {
            return Err(CliError::config(
                "sweep_stop_hz",
                "must exceed sweep_start_hz",
            ));
        }
        let sweep = Sweep {
            start: self.sweep_start_hz,
            stop: self.sweep_stop_hz,
            points: self.sweep_points,
        };

        if let Some(v) = self.grid_half_span_hz {
            positive("grid_half_span_hz", v)?;
        }
        if let Some(v) = self.grid_step_hz {
            positive("grid_step_hz", v)?;
        }

        positive("beat_frequency_hz", self.beat_frequency_hz)?;
        positive("sample_rate_hz", self.sample_rate_hz)?;
        positive("lowpass_cutoff_hz", self.lowpass_cutoff_hz)?;
        if self.lowpass_cutoff_hz >= self.beat_frequency_hz {
            return Err(CliError::config(
                "lowpass_cutoff_hz",
                "must be below beat_frequency_hz",
            ));
        }
        at_least("filter_order", self.filter_order, 1)?;
        if !self.quadrature_bias_rad.is_finite() {
            return Err(CliError::config("quadrature_bias_rad", "must be finite"));
        }
        positive("record_duration_s", self.record_duration_s)?;
        non_negative("phase_jitter_rad", self.phase_jitter_rad)?;
        non_negative("intensity_noise_rel", self.intensity_noise_rel)?;
        at_least("noise_replicates", self.noise_replicates, 2)?;
        let demod = DemodConfig {
            lowpass_cutoff: self.lowpass_cutoff_hz,
            filter_order: self.filter_order,
            quadrature_bias: self.quadrature_bias_rad,
            noise: NoiseConfig {
                phase_jitter_rms: self.phase_jitter_rad,
                intensity_noise_rel: self.intensity_noise_rel,
                seed: self.seed,
            },
            beat: BeatSpec {
                sample_rate: self.sample_rate_hz,
                beat_frequency: self.beat_frequency_hz,
            },
            record_duration: self.record_duration_s,
        };
        // Sampling problems are numeric-domain errors, not configuration ones.
        demod.validate()?;

        if let Some(v) = self.null_search_min_hz {
            non_negative("null_search_min_hz", v)?;
        }
        positive("null_search_max_hz", self.null_search_max_hz)?;
        at_least("extrapolation_trailing", self.extrapolation_trailing, 3)?;
        let extrapolation = match self.extrapolation.as_str() {
            "log_linear" => Extrapolation::LogLinear {
                trailing: self.extrapolation_trailing,
            },
            "linear" => Extrapolation::Linear {
                trailing: self.extrapolation_trailing,
            },
            "doublet_model_fit" => Extrapolation::DoubletModel,
            other => {
                return Err(CliError::config(
                    "extrapolation",
                    format!("expected log_linear, linear or doublet_model_fit, got {other:?}"),
                ))
            }
        };

        non_negative("harmonic_ratio", self.harmonic_ratio)?;
        positive("spectrum_sample_rate_hz", self.spectrum_sample_rate_hz)?;
        at_least("spectrum_samples", self.spectrum_samples, 1)?;
        positive("detector_cutoff_hz", self.detector_cutoff_hz)?;
        positive("peak_floor_db", self.peak_floor_db)?;

        positive("enhancement_start_hz", self.enhancement_start_hz)?;
        positive("enhancement_stop_hz", self.enhancement_stop_hz)?;
        if self.enhancement_stop_hz <= self.enhancement_start_hz {
            return Err(CliError::config(
                "enhancement_stop_hz",
                "must exceed enhancement_start_hz",
            ));
        }
        at_least("enhancement_points", self.enhancement_points, 2)?;
        positive("epsilon", self.epsilon)?;
        positive("linearity_threshold", self.linearity_threshold)?;

        Ok(Resolved {
            medium,
            sweep,
            demod,
            detector: DetectorModel {
                cutoff: self.detector_cutoff_hz,
            },
            extrapolation,
            enhancement: SweepOptions {
                epsilon: self.epsilon,
                linearity_threshold: self.linearity_threshold,
            },
        })
    }
}
