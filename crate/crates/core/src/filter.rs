//! First-order low-pass filters.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Single-pole low-pass discretized with the bilinear transform, pre-warped so
/// that the −3 dB point falls exactly on `cutoff`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnePole {
    b0: f64,
    a1: f64,
}

impl OnePole {
    pub fn new(cutoff: f64, sample_rate: f64) -> Result<Self> {
        let unstable = Error::FilterUnstable {
            cutoff,
            sample_rate,
        };
        if !(cutoff.is_finite() && sample_rate.is_finite() && cutoff > 0.0 && sample_rate > 0.0) {
            return Err(unstable);
        }
        // tan() diverges at Nyquist; stay clear of it.
        if cutoff >= 0.45 * sample_rate {
            return Err(unstable);
        }
        let k = (PI * cutoff / sample_rate).tan();
        Ok(Self {
            b0: k / (1.0 + k),
            a1: (k - 1.0) / (k + 1.0),
        })
    }

    /// Causal pass with the state initialised at rest on `initial`.
    pub fn apply(&self, input: &[f64], initial: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(input.len());
        let mut x_prev = initial;
        let mut y_prev = initial;
        for &x in input {
            let y = self.b0 * (x + x_prev) - self.a1 * y_prev;
            out.push(y);
            x_prev = x;
            y_prev = y;
        }
        out
    }

    /// `order` cascaded passes forward, then the same backward: zero phase,
    /// magnitude response squared.
    pub fn filtfilt(&self, input: &[f64], order: usize) -> Vec<f64> {
        let mut y = input.to_vec();
        for _ in 0..order {
            y = self.apply(&y, 0.0);
        }
        y.reverse();
        for _ in 0..order {
            y = self.apply(&y, 0.0);
        }
        y.reverse();
        y
    }

    /// Magnitude response at `frequency` for a single causal pass.
    pub fn magnitude(&self, frequency: f64, sample_rate: f64) -> f64 {
        let w = 2.0 * PI * frequency / sample_rate;
        let z = num_complex::Complex64::from_polar(1.0, -w);
        let h = self.b0 * (1.0 + z) / (1.0 + self.a1 * z);
        h.norm()
    }
}
