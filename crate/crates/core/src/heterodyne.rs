//! Simulated heterodyne measurement of the dispersion-induced phase.
//!
//! A reference wave offset by the beat frequency is mixed onto two
//! photodetectors: one with the probe that crossed the cell and one with an
//! unperturbed copy. The phase difference between the two RF beat notes is
//! `δφ = k·Δn·L`. The demodulator multiplies the probe channel by the
//! reference channel shifted by the quadrature bias, low-pass filters the
//! product and normalises by the channel amplitudes, which yields
//! `cos(δφ − bias)`; with the default bias of π/2 this is `sin δφ`, and the
//! arcsine recovers `δφ` beyond the small-angle regime.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::constants::{DEFAULT_BEAT_FREQUENCY, DEFAULT_LOWPASS_CUTOFF, DEFAULT_SAMPLE_RATE};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::filter::OnePole;
use crate::medium::{gain_linear, index_deviation, MediumParams};
use crate::profile::{linspace, SpectralProfile};

/// Sampling of a heterodyne channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeatSpec {
    pub sample_rate: f64,
    pub beat_frequency: f64,
}

impl Default for BeatSpec {
    fn default() -> Self {
        Self {
            sample_rate: DEFAULT_SAMPLE_RATE,
            beat_frequency: DEFAULT_BEAT_FREQUENCY,
        }
    }
}

impl BeatSpec {
    pub fn validate(&self) -> Result<()> {
        require_positive("beat_frequency", self.beat_frequency)?;
        require_positive("sample_rate", self.sample_rate)?;
        if self.sample_rate <= 2.0 * self.beat_frequency {
            return Err(Error::Undersampled {
                sample_rate: self.sample_rate,
                max_frequency: self.beat_frequency,
            });
        }
        Ok(())
    }
}

/// Seeded noise applied while synthesizing beat notes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseConfig {
    /// White phase jitter per sample, rad RMS.
    pub phase_jitter_rms: f64,
    /// Relative amplitude noise per sample.
    pub intensity_noise_rel: f64,
    pub seed: u64,
}

impl NoiseConfig {
    pub fn is_silent(&self) -> bool {
        self.phase_jitter_rms == 0.0 && self.intensity_noise_rel == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        require_non_negative("phase_jitter_rms", self.phase_jitter_rms)?;
        require_non_negative("intensity_noise_rel", self.intensity_noise_rel)
    }
}

/// Demodulator and acquisition settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemodConfig {
    /// Low-pass cutoff after the mixer, Hz.
    pub lowpass_cutoff: f64,
    /// Number of cascaded single-pole sections.
    pub filter_order: usize,
    /// Phase added to the reference before mixing, rad.
    pub quadrature_bias: f64,
    pub noise: NoiseConfig,
    pub beat: BeatSpec,
    /// Length of each acquired record, s.
    pub record_duration: f64,
}

impl Default for DemodConfig {
    fn default() -> Self {
        Self {
            lowpass_cutoff: DEFAULT_LOWPASS_CUTOFF,
            filter_order: 1,
            quadrature_bias: FRAC_PI_2,
            noise: NoiseConfig::default(),
            beat: BeatSpec::default(),
            record_duration: 50e-6,
        }
    }
}

impl DemodConfig {
    pub fn validate(&self) -> Result<()> {
        self.beat.validate()?;
        require_positive("lowpass_cutoff", self.lowpass_cutoff)?;
        if self.lowpass_cutoff >= self.beat.beat_frequency {
            return Err(Error::invalid(
                "lowpass_cutoff",
                "must be below the beat frequency",
            ));
        }
        if self.filter_order == 0 {
            return Err(Error::invalid("filter_order", "must be >= 1"));
        }
        if !self.quadrature_bias.is_finite() {
            return Err(Error::invalid("quadrature_bias", "must be finite"));
        }
        require_positive("record_duration", self.record_duration)?;
        self.noise.validate()
    }

    /// Samples needed so the central half of a record is clear of the filter
    /// transients (ten time constants per section on each side).
    pub fn min_record_samples(&self) -> usize {
        let tau_samples = self.beat.sample_rate / (2.0 * PI * self.lowpass_cutoff);
        (40.0 * self.filter_order as f64 * tau_samples).ceil() as usize
    }
}

/// A sampled heterodyne channel.
#[derive(Debug, Clone, PartialEq)]
pub struct BeatRecord {
    samples: Vec<f64>,
    sample_rate: f64,
    beat_frequency: f64,
}

impl BeatRecord {
    pub fn new(samples: Vec<f64>, sample_rate: f64, beat_frequency: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("samples", "record is empty"));
        }
        BeatSpec {
            sample_rate,
            beat_frequency,
        }
        .validate()?;
        Ok(Self {
            samples,
            sample_rate,
            beat_frequency,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn beat_frequency(&self) -> f64 {
        self.beat_frequency
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Amplitude of the beat note inferred from the RMS, `√2·rms`.
    pub fn amplitude(&self) -> f64 {
        let ms = self.samples.iter().map(|v| v * v).sum::<f64>() / self.samples.len() as f64;
        (2.0 * ms).sqrt()
    }

    /// Writes `time_s,amplitude` rows preceded by `#` metadata lines.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# sample_rate_hz = {:.8e}", self.sample_rate)?;
        writeln!(out, "# beat_frequency_hz = {:.8e}", self.beat_frequency)?;
        writeln!(out, "time_s,amplitude")?;
        for (i, v) in self.samples.iter().enumerate() {
            writeln!(out, "{:.8e},{:.8e}", i as f64 / self.sample_rate, v)?;
        }
        Ok(())
    }

    /// Reads the format produced by [`BeatRecord::write_csv`]. The sample
    /// rate comes from the metadata line or, failing that, the time column.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let bad = |reason: String| Error::InvalidData { reason };
        let mut sample_rate = None;
        let mut beat_frequency = None;
        let mut times = Vec::new();
        let mut samples = Vec::new();
        let mut header_seen = false;
        for (lineno, line) in input.lines().enumerate() {
            let line = line.map_err(|e| bad(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                if let Some((key, value)) = meta.split_once('=') {
                    let value: f64 = value
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("line {}: bad metadata value", lineno + 1)))?;
                    match key.trim() {
                        "sample_rate_hz" => sample_rate = Some(value),
                        "beat_frequency_hz" => beat_frequency = Some(value),
                        _ => {}
                    }
                }
                continue;
            }
            if !header_seen {
                if line != "time_s,amplitude" {
                    return Err(bad(format!(
                        "line {}: expected header time_s,amplitude",
                        lineno + 1
                    )));
                }
                header_seen = true;
                continue;
            }
            let mut cols = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|v| v.trim().parse::<f64>().ok())
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad(format!("line {}: expected two finite numbers", lineno + 1)))
            };
            times.push(parse(cols.next())?);
            samples.push(parse(cols.next())?);
        }
        let sample_rate = match sample_rate {
            Some(r) => r,
            None if times.len() >= 2 => {
                (times.len() - 1) as f64 / (times[times.len() - 1] - times[0])
            }
            None => return Err(bad("cannot infer the sample rate".into())),
        };
        let beat_frequency =
            beat_frequency.ok_or_else(|| bad("missing `# beat_frequency_hz` metadata".into()))?;
        Self::new(samples, sample_rate, beat_frequency)
    }
}

/// Phase recovered from a pair of beat records.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseEstimate {
    /// Normalised mixer output read directly as a phase (valid for |δφ| ≪ 1).
    pub small_angle: f64,
    /// Arcsine-corrected phase.
    pub phase: f64,
}

/// Synthesizes `√gain·cos(2π·f·t + phase)` with optional seeded noise.
///
/// `stream` selects an independent random stream for the same seed so that
/// several channels can share one [`NoiseConfig`].
pub fn synthesize_beat(
    phase: f64,
    gain_linear: f64,
    spec: &BeatSpec,
    duration: f64,
    noise: &NoiseConfig,
    stream: u64,
) -> Result<BeatRecord> {
    spec.validate()?;
    noise.validate()?;
    require_non_negative("gain_linear", gain_linear)?;
    if !phase.is_finite() {
        return Err(Error::invalid("phase", "must be finite"));
    }
    let n = (duration * spec.sample_rate).round();
    let min = (10.0 / spec.beat_frequency * spec.sample_rate).ceil();
    if n.is_nan() || n < min {
        return Err(Error::RecordTooShort {
            samples: n.max(0.0) as usize,
            required: min as usize,
        });
    }
    let n = n as usize;
    let amplitude = gain_linear.sqrt();
    let w = 2.0 * PI * spec.beat_frequency / spec.sample_rate;

    let samples = if noise.is_silent() {
        (0..n)
            .map(|i| amplitude * (w * i as f64 + phase).cos())
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
        rng.set_stream(stream);
        (0..n)
            .map(|i| {
                let jitter: f64 = StandardNormal.sample(&mut rng);
                let scale: f64 = StandardNormal.sample(&mut rng);
                let a = amplitude * (1.0 + noise.intensity_noise_rel * scale);
                a * (w * i as f64 + phase + noise.phase_jitter_rms * jitter).cos()
            })
            .collect()
    };
    BeatRecord::new(samples, spec.sample_rate, spec.beat_frequency)
}

/// Hilbert transform of a real record via the analytic signal (cos → sin).
fn hilbert_record(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    for (k, c) in buf.iter_mut().enumerate() {
        let factor = if k == 0 || (n.is_multiple_of(2) && k == half) {
            Complex64::new(0.0, 0.0)
        } else if k <= half {
            Complex64::new(0.0, -1.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        *c *= factor;
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|c| c.re / n as f64).collect()
}

fn check_pair(signal: &BeatRecord, reference: &BeatRecord) -> Result<()> {
    if signal.sample_rate != reference.sample_rate
        || signal.beat_frequency != reference.beat_frequency
        || signal.len() != reference.len()
    {
        return Err(Error::RateMismatch);
    }
    Ok(())
}

/// Normalised mixer output `cos(δφ(t) − bias)` per sample. When `lowpass` is
/// false the product is returned unfiltered, exposing the 2f mixing term and
/// any modulation of the phase.
pub fn demodulate_trace(
    signal: &BeatRecord,
    reference: &BeatRecord,
    cfg: &DemodConfig,
    lowpass: bool,
) -> Result<Vec<f64>> {
    check_pair(signal, reference)?;
    let filter = OnePole::new(cfg.lowpass_cutoff, signal.sample_rate)?;
    let norm = 0.5 * signal.amplitude() * reference.amplitude();
    if norm == 0.0 {
        return Err(Error::InvalidData {
            reason: "beat record has zero amplitude".into(),
        });
    }
    let quad = hilbert_record(reference.samples());
    let (cb, sb) = (cfg.quadrature_bias.cos(), cfg.quadrature_bias.sin());
    let product: Vec<f64> = signal
        .samples()
        .iter()
        .zip(reference.samples())
        .zip(&quad)
        .map(|((&s, &r), &q)| s * (cb * r - sb * q) / norm)
        .collect();
    Ok(if lowpass {
        filter.filtfilt(&product, cfg.filter_order)
    } else {
        product
    })
}

/// Recovers the phase of `signal` relative to `reference`.
pub fn demodulate(
    signal: &BeatRecord,
    reference: &BeatRecord,
    cfg: &DemodConfig,
) -> Result<PhaseEstimate> {
    check_pair(signal, reference)?;
    OnePole::new(cfg.lowpass_cutoff, signal.sample_rate)?;
    let required = cfg.min_record_samples();
    if signal.len() < required {
        return Err(Error::RecordTooShort {
            samples: signal.len(),
            required,
        });
    }
    let trace = demodulate_trace(signal, reference, cfg, true)?;
    let n = trace.len();
    let window = &trace[n / 4..n - n / 4];
    let v = window.iter().sum::<f64>() / window.len() as f64;
    let offset = cfg.quadrature_bias - FRAC_PI_2;
    Ok(PhaseEstimate {
        small_angle: v + offset,
        phase: v.clamp(-1.0, 1.0).asin() + offset,
    })
}

/// Probe detuning sweep, Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Sweep {
    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::invalid("sweep_points", "need at least 2 points"));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.stop > self.start) {
            return Err(Error::invalid("sweep_stop", "sweep must have stop > start"));
        }
        Ok(())
    }

    pub fn detunings(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }
}

/// Simulates the swept heterodyne measurement of Δn(δ).
///
/// Each sweep point synthesizes the cell channel with phase `k·Δn·L` and
/// amplitude gain from the medium, plus an unperturbed reference channel,
/// demodulates them and converts the phase back to Δn.
pub fn sweep_measure(
    params: &MediumParams,
    sweep: &Sweep,
    cfg: &DemodConfig,
) -> Result<SpectralProfile> {
    sweep.validate()?;
    cfg.validate()?;
    let kl = params.wavenumber() * params.cell_length();
    let detunings = sweep.detunings();
    let values = detunings
        .par_iter()
        .enumerate()
        .map(|(i, &det)| {
            let phase = kl * index_deviation(params, det);
            let gain = gain_linear(params, det);
            let stream = 2 * i as u64;
            let signal = synthesize_beat(
                phase,
                gain,
                &cfg.beat,
                cfg.record_duration,
                &cfg.noise,
                stream,
            )?;
            let reference = synthesize_beat(
                0.0,
                1.0,
                &cfg.beat,
                cfg.record_duration,
                &cfg.noise,
                stream + 1,
            )?;
            Ok(demodulate(&signal, &reference, cfg)?.phase / kl)
        })
        .collect::<Result<Vec<f64>>>()?;
    SpectralProfile::index_deviation(detunings, values)
}

/// `|k·Δn·L|`; values below 0.1 are treated as small-angle.
pub fn small_angle_ratio(delta_n: f64, cell_length: f64, wavenumber: f64) -> f64 {
    (wavenumber * delta_n * cell_length).abs()
}

/// Upper bound of `|k·Δn·L|` for which the mixer output is read as linear.
pub const SMALL_ANGLE_LIMIT: f64 = 0.1;

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> NoiseConfig {
        NoiseConfig::default()
    }

    fn pair(phase: f64, gain: f64, cfg: &DemodConfig) -> (BeatRecord, BeatRecord) {
        let s =
            synthesize_beat(phase, gain, &cfg.beat, cfg.record_duration, &cfg.noise, 0).unwrap();
        let r = synthesize_beat(0.0, 1.0, &cfg.beat, cfg.record_duration, &cfg.noise, 1).unwrap();
        (s, r)
    }

    #[test]
    fn pure_cosine() {
        let rec = synthesize_beat(0.0, 1.0, &BeatSpec::default(), 1e-6, &quiet(), 0).unwrap();
        let peak = rec.samples().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!((peak - 1.0).abs() < 1e-12);
        assert_eq!(rec.samples()[0], 1.0);
    }

    #[test]
    fn quadrature_phase_is_sine() {
        let rec = synthesize_beat(FRAC_PI_2, 1.0, &BeatSpec::default(), 1e-6, &quiet(), 0).unwrap();
        let s = rec.samples();
        assert!(s[0].abs() < 1e-12);
        // −sin(ωt): negative just after t = 0.
        assert!(s[1] < 0.0);
    }

    #[test]
    fn rms_scales_with_sqrt_gain() {
        let g = 10f64.powf(0.35);
        let spec = BeatSpec::default();
        let a = synthesize_beat(0.3, 1.0, &spec, 2e-6, &quiet(), 0).unwrap();
        let b = synthesize_beat(0.3, g, &spec, 2e-6, &quiet(), 0).unwrap();
        let ratio = b.amplitude() / a.amplitude();
        assert!((ratio / g.sqrt() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn synthesis_errors() {
        let slow = BeatSpec {
            sample_rate: 70e6,
            beat_frequency: 40e6,
        };
        assert!(matches!(
            synthesize_beat(0.0, 1.0, &slow, 1e-6, &quiet(), 0),
            Err(Error::Undersampled { .. })
        ));
        assert!(matches!(
            synthesize_beat(0.0, 1.0, &BeatSpec::default(), 1e-8, &quiet(), 0),
            Err(Error::RecordTooShort { .. })
        ));
    }

    #[test]
    fn seeded_noise_is_reproducible() {
        let noise = NoiseConfig {
            phase_jitter_rms: 0.1,
            intensity_noise_rel: 0.05,
            seed: 42,
        };
        let spec = BeatSpec::default();
        let a = synthesize_beat(0.2, 1.5, &spec, 1e-6, &noise, 3).unwrap();
        let b = synthesize_beat(0.2, 1.5, &spec, 1e-6, &noise, 3).unwrap();
        let c = synthesize_beat(0.2, 1.5, &spec, 1e-6, &noise, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn zero_phase_recovered() {
        let cfg = DemodConfig::default();
        let (s, r) = pair(0.0, 1.0, &cfg);
        let est = demodulate(&s, &r, &cfg).unwrap();
        assert!(est.phase.abs() < 1e-6, "{}", est.phase);
    }

    #[test]
    fn small_phase_recovered() {
        let cfg = DemodConfig::default();
        let (s, r) = pair(0.05, 2.0, &cfg);
        let est = demodulate(&s, &r, &cfg).unwrap();
        assert!((est.phase - 0.05).abs() < 1e-3);
    }

    #[test]
    fn large_phase_needs_arcsine() {
        let cfg = DemodConfig::default();
        let phi = 0.8;
        let (s, r) = pair(phi, 1.0, &cfg);
        let est = demodulate(&s, &r, &cfg).unwrap();
        assert!((est.phase - phi).abs() / phi < 0.01);
        assert!((est.small_angle - phi.sin()).abs() < 1e-3);
    }

    #[test]
    fn non_default_bias() {
        let cfg = DemodConfig {
            quadrature_bias: 1.2,
            ..DemodConfig::default()
        };
        let (s, r) = pair(-0.3, 1.0, &cfg);
        let est = demodulate(&s, &r, &cfg).unwrap();
        assert!((est.phase + 0.3).abs() < 1e-3);
    }

    #[test]
    fn demodulation_errors() {
        let cfg = DemodConfig::default();
        let (s, _) = pair(0.0, 1.0, &cfg);
        let other = synthesize_beat(
            0.0,
            1.0,
            &BeatSpec {
                sample_rate: 200e6,
                beat_frequency: 40e6,
            },
            cfg.record_duration,
            &quiet(),
            0,
        )
        .unwrap();
        assert_eq!(demodulate(&s, &other, &cfg), Err(Error::RateMismatch));

        let near_nyquist = DemodConfig {
            lowpass_cutoff: 190e6,
            ..cfg
        };
        assert!(matches!(
            demodulate(&s, &s, &near_nyquist),
            Err(Error::FilterUnstable { .. })
        ));

        let short = synthesize_beat(0.0, 1.0, &cfg.beat, 2e-6, &quiet(), 0).unwrap();
        assert!(matches!(
            demodulate(&short, &short, &cfg),
            Err(Error::RecordTooShort { .. })
        ));
    }

    #[test]
    fn csv_round_trip() {
        let rec = synthesize_beat(0.4, 1.3, &BeatSpec::default(), 5e-7, &quiet(), 0).unwrap();
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        let back = BeatRecord::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), rec.len());
        assert_eq!(back.sample_rate(), rec.sample_rate());
        for (a, b) in back.samples().iter().zip(rec.samples()) {
            assert!((a - b).abs() <= 1e-8 * b.abs().max(1e-300));
        }
    }

    #[test]
    fn csv_requires_header() {
        let text = "# beat_frequency_hz = 4e7\n0,1\n1e-9,0.5\n";
        assert!(BeatRecord::read_csv(text.as_bytes()).is_err());
    }

    #[test]
    fn small_angle_ratio_values() {
        assert!((small_angle_ratio(1e-6, 0.1, 8.053e6) - 0.8053).abs() < 1e-12);
        assert_eq!(small_angle_ratio(0.0, 0.1, 8.053e6), 0.0);
        assert!((small_angle_ratio(1e-8, 0.1, 8.053e6) - 8.053e-3).abs() < 1e-15);
    }

    #[test]
    fn empty_medium_gives_flat_profile() {
        let p = MediumParams::default().with_line_amplitude(0.0).unwrap();
        let sweep = Sweep {
            start: -3e6,
            stop: 3e6,
            points: 7,
        };
        let prof = sweep_measure(&p, &sweep, &DemodConfig::default()).unwrap();
        assert!(prof.real_values().unwrap().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn sweep_validation() {
        let p = MediumParams::default();
        let sweep = Sweep {
            start: 0.0,
            stop: 0.0,
            points: 10,
        };
        assert!(sweep_measure(&p, &sweep, &DemodConfig::default()).is_err());
    }
}
