//! Scale-factor figures of merit for a fast-light resonator gyroscope.
//!
//! The enhancement is the mode-pulling proxy `1/|n_g|`: the frequency splitting
//! of the counter-propagating cavity modes scales inversely with the group
//! index of the intracavity medium. It is a proxy, not a full sensitivity
//! model, and every report says so.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::cad::model_group_index;
use crate::error::{require_positive, Error, Result};
use crate::medium::{dispersion_slope, index_deviation, MediumParams};
use crate::profile::linspace;
use crate::roots::bisect;

/// Model tag carried by every [`EnhancementReport`].
pub const MODEL_TAG: &str = "mode-pulling proxy";

/// Default relative deviation from the center tangent that ends the linear region.
pub const DEFAULT_LINEARITY_THRESHOLD: f64 = 0.05;

/// Default divergence gate on `|n_g|`.
pub const DEFAULT_EPSILON: f64 = 1e-6;

const NEGATIVE_NG_NOTE: &str =
    "n_g is negative with magnitude above one; operation with |n_g| < 1 is required for enhancement > 1";

#[derive(Debug, Clone, PartialEq)]
pub struct EnhancementReport {
    /// Pump separation the report refers to, Hz; `None` for a bare group index.
    pub pump_separation: Option<f64>,
    pub n_g: f64,
    /// `1/|n_g|`, capped at `1/epsilon` when diverged.
    pub enhancement: f64,
    /// Set when `|n_g| < epsilon`.
    pub diverged: bool,
    /// Full width (Hz) of the region where Δn stays within the linearity
    /// threshold of its center tangent. `None` if never left within the scan
    /// or if the medium has no dispersion.
    pub linear_bandwidth: Option<f64>,
    pub model: &'static str,
    pub note: Option<&'static str>,
}

/// Enhancement `1/|n_g|` with an `epsilon` gate in place of a division by ~0.
pub fn scale_factor_enhancement(n_g: f64, epsilon: f64) -> EnhancementReport {
    let epsilon = if epsilon.is_finite() && epsilon > 0.0 {
        epsilon
    } else {
        DEFAULT_EPSILON
    };
    let mag = n_g.abs();
    let diverged = mag.is_nan() || mag < epsilon;
    let enhancement = if diverged { 1.0 / epsilon } else { 1.0 / mag };
    let note = (n_g < 0.0 && mag > 1.0).then_some(NEGATIVE_NG_NOTE);
    EnhancementReport {
        pump_separation: None,
        n_g: if n_g.is_finite() { n_g } else { 0.0 },
        enhancement,
        diverged,
        linear_bandwidth: None,
        model: MODEL_TAG,
        note,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub epsilon: f64,
    pub linearity_threshold: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            linearity_threshold: DEFAULT_LINEARITY_THRESHOLD,
        }
    }
}

/// Width of the linear dispersion region around the doublet center.
///
/// Scans outward from the center on a grid of `min(fwhm, Δ)/400` and refines
/// the first threshold crossing by bisection. Δn is odd in detuning, so the
/// width is twice the one-sided crossing.
pub fn linear_bandwidth(params: &MediumParams, threshold: f64) -> Result<Option<f64>> {
    require_positive("linearity_threshold", threshold)?;
    let slope = dispersion_slope(params, 0.0);
    if slope == 0.0 || params.line_amplitude() == 0.0 {
        return Ok(None);
    }
    let deviation = |f: f64| {
        let tangent = slope * 2.0 * PI * f;
        (index_deviation(params, f) - tangent).abs() / tangent.abs() - threshold
    };
    let fwhm = params.half_width() / PI;
    let step = fwhm.min(params.pump_separation()) / 400.0;
    let limit = params.pump_separation() / 2.0 + 20.0 * fwhm;
    let mut prev = step;
    if deviation(prev) >= 0.0 {
        return Ok(Some(2.0 * step));
    }
    while prev < limit {
        let next = prev + step;
        if deviation(next) >= 0.0 {
            let edge = bisect(deviation, prev, next, step * 1e-6, 0.0)
                .map(|b| b.root)
                .unwrap_or(next);
            return Ok(Some(2.0 * edge));
        }
        prev = next;
    }
    Ok(None)
}

/// Center enhancement over `points` pump separations spanning `delta_range` (Hz).
pub fn enhancement_sweep(
    params: &MediumParams,
    delta_range: (f64, f64),
    points: usize,
    options: &SweepOptions,
) -> Result<Vec<EnhancementReport>> {
    let (lo, hi) = delta_range;
    require_positive("delta_range.start", lo)?;
    require_positive("delta_range.stop", hi)?;
    if hi <= lo {
        return Err(Error::invalid(
            "delta_range",
            format!("stop {hi} must exceed start {lo}"),
        ));
    }
    if points < 2 {
        return Err(Error::invalid(
            "points",
            format!("need at least 2, got {points}"),
        ));
    }
    require_positive("epsilon", options.epsilon)?;
    linspace(lo, hi, points)
        .into_par_iter()
        .map(|delta| {
            let p = params.with_pump_separation(delta)?;
            let mut report =
                scale_factor_enhancement(model_group_index(params, delta), options.epsilon);
            report.pump_separation = Some(delta);
            report.linear_bandwidth = linear_bandwidth(&p, options.linearity_threshold)?;
            Ok(report)
        })
        .collect()
}
