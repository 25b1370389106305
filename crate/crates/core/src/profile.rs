//! Sampled spectral responses on a detuning grid.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// What the samples of a [`SpectralProfile`] represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// Complex susceptibility χ (dimensionless).
    Susceptibility,
    /// Refractive-index deviation Δn = Re χ / 2.
    IndexDeviation,
    /// Single-pass intensity gain in dB.
    GainDb,
}

#[derive(Debug, Clone, PartialEq)]
enum Samples {
    Complex(Vec<Complex64>),
    Real(Vec<f64>),
}

impl Samples {
    fn len(&self) -> usize {
        match self {
            Samples::Complex(v) => v.len(),
            Samples::Real(v) => v.len(),
        }
    }
}

/// Samples of a spectral response against two-photon detuning δ (Hz) measured
/// from the doublet center. Detunings are strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    detunings: Vec<f64>,
    samples: Samples,
    kind: ProfileKind,
}

impl SpectralProfile {
    pub fn susceptibility(detunings: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        Self::build(
            detunings,
            Samples::Complex(values),
            ProfileKind::Susceptibility,
        )
    }

    pub fn index_deviation(detunings: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::build(
            detunings,
            Samples::Real(values),
            ProfileKind::IndexDeviation,
        )
    }

    pub fn gain_db(detunings: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::build(detunings, Samples::Real(values), ProfileKind::GainDb)
    }

    fn build(detunings: Vec<f64>, samples: Samples, kind: ProfileKind) -> Result<Self> {
        if detunings.len() < 2 {
            return Err(Error::invalid("detunings", "need at least two samples"));
        }
        if samples.len() != detunings.len() {
            return Err(Error::invalid(
                "values",
                format!(
                    "length {} != detuning length {}",
                    samples.len(),
                    detunings.len()
                ),
            ));
        }
        if detunings.iter().any(|d| !d.is_finite()) {
            return Err(Error::invalid("detunings", "non-finite detuning"));
        }
        if detunings.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("detunings", "must be strictly increasing"));
        }
        Ok(Self {
            detunings,
            samples,
            kind,
        })
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.detunings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detunings.is_empty()
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    /// Complex samples, present only for [`ProfileKind::Susceptibility`].
    pub fn complex_values(&self) -> Option<&[Complex64]> {
        match &self.samples {
            Samples::Complex(v) => Some(v),
            Samples::Real(_) => None,
        }
    }

    /// Real samples, present for index-deviation and gain profiles.
    pub fn real_values(&self) -> Option<&[f64]> {
        match &self.samples {
            Samples::Real(v) => Some(v),
            Samples::Complex(_) => None,
        }
    }

    pub(crate) fn expect_real(&self, expected: ProfileKind) -> Result<&[f64]> {
        match (&self.samples, self.kind == expected) {
            (Samples::Real(v), true) => Ok(v),
            _ => Err(Error::WrongProfileKind {
                expected,
                found: self.kind,
            }),
        }
    }

    /// Grid step if the detunings are uniformly spaced to 1 part in 10⁶.
    pub fn uniform_step(&self) -> Result<f64> {
        let (min_step, max_step) = self
            .detunings
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), s| {
                (lo.min(s), hi.max(s))
            });
        let span = self.detunings[self.len() - 1] - self.detunings[0];
        let mean = span / (self.len() - 1) as f64;
        if (max_step - min_step) > 1e-6 * mean {
            return Err(Error::NonUniformGrid { min_step, max_step });
        }
        Ok(mean)
    }
}

/// `n` equally spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n).map(|i| start + step * i as f64).collect()
        }
    }
}

/// Uniform grid with step `step` that is symmetric about zero and contains it,
/// extending to at least `half_span` on each side.
pub fn symmetric_grid(half_span: f64, step: f64) -> Vec<f64> {
    let half = (half_span / step).ceil() as i64;
    (-half..=half).map(|i| i as f64 * step).collect()
}
