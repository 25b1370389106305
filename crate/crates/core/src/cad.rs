//! Dispersion slopes, group index and the pump separation that nulls it.
//!
//! The group index of the dilute medium at the doublet center is
//! `n_g = 1 + ω_o·∂n/∂ω`, so the null condition is a center slope of
//! `−1/ω_o`. Two routes to the null are provided: a bisection root of the
//! doublet model ([`find_null_delta`]) and an extrapolation of measured
//! `(Δ, n_g)` points ([`extrapolate_null`]).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fit::{fit_line, levenberg_marquardt};
use crate::medium::MediumParams;
use crate::profile::{ProfileKind, SpectralProfile};
use crate::roots::bisect;

/// Minimum number of samples inside a slope-fit window.
pub const MIN_FIT_SAMPLES: usize = 8;

/// A dispersion slope fitted at the doublet center for one pump separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeMeasurement {
    /// Δ, Hz.
    pub pump_separation: f64,
    /// ∂n/∂ω, rad⁻¹·s.
    pub slope: f64,
    /// Width of the fit window, Hz.
    pub fit_bandwidth: f64,
    /// Standard error of `slope`, rad⁻¹·s.
    pub stderr: f64,
}

impl SlopeMeasurement {
    pub fn new(pump_separation: f64, slope: f64, fit_bandwidth: f64, stderr: f64) -> Result<Self> {
        if !(pump_separation.is_finite() && slope.is_finite()) {
            return Err(Error::InvalidData {
                reason: "pump separation and slope must be finite".into(),
            });
        }
        if !(fit_bandwidth.is_finite() && fit_bandwidth > 0.0) {
            return Err(Error::InvalidData {
                reason: format!("fit bandwidth must be > 0, got {fit_bandwidth}"),
            });
        }
        if !(stderr.is_finite() && stderr >= 0.0) {
            return Err(Error::InvalidData {
                reason: format!("stderr must be >= 0, got {stderr}"),
            });
        }
        Ok(Self {
            pump_separation,
            slope,
            fit_bandwidth,
            stderr,
        })
    }

    pub fn group_index(&self, carrier: f64) -> f64 {
        ng_from_slope(self.slope, carrier)
    }
}

/// A group index observed at one pump separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupIndexPoint {
    /// Δ, Hz.
    pub pump_separation: f64,
    pub group_index: f64,
}

impl GroupIndexPoint {
    pub fn from_slope(m: &SlopeMeasurement, carrier: f64) -> Self {
        Self {
            pump_separation: m.pump_separation,
            group_index: m.group_index(carrier),
        }
    }
}

/// How a [`NullEstimate`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NullMethod {
    /// Root of the doublet model.
    ModelRoot,
    /// Extrapolation of measured points.
    DataExtrapolation,
}

impl NullMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            NullMethod::ModelRoot => "model_root",
            NullMethod::DataExtrapolation => "data_extrapolation",
        }
    }
}

/// Functional form used to reach the null.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extrapolation {
    /// Straight line through `ln(1 − n_g)` against Δ on the trailing points.
    LogLinear { trailing: usize },
    /// Straight line through `n_g` against Δ on the trailing points.
    Linear { trailing: usize },
    /// Least-squares fit of the doublet model's `(M, γ)` to all points,
    /// followed by a root of the fitted model.
    DoubletModel,
}

impl Default for Extrapolation {
    fn default() -> Self {
        Extrapolation::LogLinear { trailing: 3 }
    }
}

impl Extrapolation {
    pub fn tag(&self) -> &'static str {
        match self {
            Extrapolation::LogLinear { .. } => "log_linear",
            Extrapolation::Linear { .. } => "linear",
            Extrapolation::DoubletModel => "doublet_model_fit",
        }
    }
}

/// Estimated pump separation at which `n_g = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullEstimate {
    /// Δ at the null, Hz.
    pub delta_null: f64,
    pub method: NullMethod,
    /// Functional form tag, e.g. `"bisection"` or `"log_linear"`.
    pub form: &'static str,
    /// Confidence bracket `(lo, hi)` in Hz, `lo <= delta_null <= hi`.
    pub interval: (f64, f64),
}

/// Least-squares slope of Δn against angular frequency `2π·δ` inside the
/// window `center ± bandwidth/2` (Hz). `pump_separation` only tags the result.
pub fn fit_linear_slope(
    profile: &SpectralProfile,
    center: f64,
    bandwidth: f64,
    pump_separation: f64,
) -> Result<SlopeMeasurement> {
    let values = profile.expect_real(ProfileKind::IndexDeviation)?;
    if !(bandwidth.is_finite() && bandwidth > 0.0) {
        return Err(Error::invalid("bandwidth", "must be > 0"));
    }
    let lo = center - bandwidth / 2.0;
    let hi = center + bandwidth / 2.0;
    let det = profile.detunings();
    let slack = 1e-9 * bandwidth;
    if det[0] > lo + slack || det[det.len() - 1] < hi - slack {
        return Err(Error::InsufficientCoverage { lo, hi });
    }
    let (x, y): (Vec<f64>, Vec<f64>) = det
        .iter()
        .zip(values)
        .filter(|(&d, _)| d >= lo - slack && d <= hi + slack)
        .map(|(&d, &v)| (2.0 * PI * (d - center), v))
        .unzip();
    if x.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples {
            found: x.len(),
            required: MIN_FIT_SAMPLES,
        });
    }
    let line = fit_line(&x, &y)?;
    Ok(SlopeMeasurement {
        pump_separation,
        slope: line.slope,
        fit_bandwidth: bandwidth,
        stderr: line.slope_stderr,
    })
}

/// `n_g = 1 + ω_o·slope`.
pub fn ng_from_slope(slope: f64, carrier: f64) -> f64 {
    1.0 + carrier * slope
}

/// Dispersion slope that gives `n_g = 0`, `−1/ω_o`.
pub fn null_slope(carrier: f64) -> f64 {
    -1.0 / carrier
}

/// Closed-form ∂n/∂ω at the doublet center:
/// `M·(γ² − d²/4) / (d²/4 + γ²)²` with `d = 2πΔ`.
pub fn model_slope_at_center(params: &MediumParams) -> f64 {
    let g2 = params.half_width().powi(2);
    let s = params.line_separation().powi(2) / 4.0;
    params.line_amplitude() * (g2 - s) / (s + g2).powi(2)
}

/// Center group index of the model at pump separation `delta` (Hz).
pub fn model_group_index(params: &MediumParams, delta: f64) -> f64 {
    let g2 = params.half_width().powi(2);
    let s = (PI * delta).powi(2);
    1.0 + params.carrier() * params.line_amplitude() * (g2 - s) / (s + g2).powi(2)
}

/// Pump separation (Hz) at which the model's center slope is most negative,
/// `d = 2√3·γ`. Beyond it the center group index rises monotonically to 1.
pub fn steepest_separation(params: &MediumParams) -> f64 {
    3f64.sqrt() * params.half_width() / PI
}

/// Bisection for the Δ in `bracket` (Hz) where the model's center group index
/// is zero.
pub fn find_null_delta(params: &MediumParams, bracket: (f64, f64)) -> Result<NullEstimate> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi > lo) {
        return Err(Error::invalid(
            "bracket",
            format!("need 0 <= lo < hi, got ({lo}, {hi})"),
        ));
    }
    let f = |delta: f64| model_group_index(params, delta);
    let b = bisect(f, lo, hi, 1.0, 1e-6).ok_or(Error::NoSignChange {
        lo,
        hi,
        ng_lo: f(lo),
        ng_hi: f(hi),
    })?;
    Ok(NullEstimate {
        delta_null: b.root,
        method: NullMethod::ModelRoot,
        form: "bisection",
        interval: (b.lo.min(b.root), b.hi.max(b.root)),
    })
}

/// Two-sided normal quantile used for extrapolation intervals (95 %).
pub const INTERVAL_Z: f64 = 1.96;

fn sorted_points(points: &[GroupIndexPoint]) -> Result<Vec<GroupIndexPoint>> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            found: points.len(),
            required: 3,
        });
    }
    if points
        .iter()
        .any(|p| !(p.pump_separation.is_finite() && p.group_index.is_finite()))
    {
        return Err(Error::InvalidData {
            reason: "non-finite measurement".into(),
        });
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.pump_separation.total_cmp(&b.pump_separation));
    if let Some(w) = pts
        .windows(2)
        .find(|w| w[0].pump_separation == w[1].pump_separation)
    {
        return Err(Error::InvalidData {
            reason: format!("duplicate pump separation {} Hz", w[0].pump_separation),
        });
    }
    if let Some(p) = pts.iter().find(|p| p.group_index >= 1.0) {
        return Err(Error::InvalidData {
            reason: format!(
                "n_g = {} at {} Hz is not in the anomalous regime (n_g < 1)",
                p.group_index, p.pump_separation
            ),
        });
    }
    if let Some(w) = pts
        .windows(2)
        .find(|w| w[1].group_index <= w[0].group_index)
    {
        return Err(Error::NonMonotoneData {
            reason: format!(
                "n_g goes {} -> {} between {} and {} Hz",
                w[0].group_index, w[1].group_index, w[0].pump_separation, w[1].pump_separation
            ),
        });
    }
    Ok(pts)
}

/// Root of a straight-line fit of `y` against Δ, or `None` when the fitted
/// line does not fall through zero.
fn line_root(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let line = fit_line(xs, ys).ok()?;
    // Both forms decrease toward the null as Δ grows: ln(1 − n_g) falls, n_g rises.
    line.zero_crossing().filter(|r| r.is_finite())
}

fn trailing_root(pts: &[GroupIndexPoint], form: Extrapolation) -> Option<f64> {
    let xs: Vec<f64> = pts.iter().map(|p| p.pump_separation).collect();
    match form {
        Extrapolation::LogLinear { .. } => {
            let ys: Vec<f64> = pts.iter().map(|p| (1.0 - p.group_index).ln()).collect();
            line_root(&xs, &ys)
        }
        Extrapolation::Linear { .. } => {
            let ys: Vec<f64> = pts.iter().map(|p| p.group_index).collect();
            line_root(&xs, &ys)
        }
        Extrapolation::DoubletModel => None,
    }
}

/// Jackknife interval `θ̂ ± z·SE` from leave-one-out estimates.
fn jackknife_interval(estimate: f64, loo: &[f64]) -> (f64, f64) {
    let n = loo.len() as f64;
    let mean = loo.iter().sum::<f64>() / n;
    let var = (n - 1.0) / n * loo.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
    let half = INTERVAL_Z * var.sqrt();
    (estimate - half, estimate + half)
}

/// Extrapolates measured `(Δ, n_g)` points to the Δ where `n_g = 0`.
///
/// Requires at least three distinct separations with `n_g < 1` and `1 − n_g`
/// strictly decreasing in Δ. The interval is a jackknife over the points
/// entering the fit.
pub fn extrapolate_null(points: &[GroupIndexPoint], form: Extrapolation) -> Result<NullEstimate> {
    let pts = sorted_points(points)?;
    match form {
        Extrapolation::LogLinear { trailing } | Extrapolation::Linear { trailing } => {
            if trailing < 3 {
                return Err(Error::invalid(
                    "trailing",
                    "need at least 3 trailing points",
                ));
            }
            let used = &pts[pts.len().saturating_sub(trailing)..];
            let no_root = || Error::InvalidData {
                reason: "fitted trend never reaches n_g = 0".into(),
            };
            let estimate = trailing_root(used, form).ok_or_else(no_root)?;
            let loo: Vec<f64> = (0..used.len())
                .map(|skip| {
                    let rest: Vec<GroupIndexPoint> = used
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, p)| *p)
                        .collect();
                    trailing_root(&rest, form).ok_or_else(no_root)
                })
                .collect::<Result<_>>()?;
            Ok(NullEstimate {
                delta_null: estimate,
                method: NullMethod::DataExtrapolation,
                form: form.tag(),
                interval: jackknife_interval(estimate, &loo),
            })
        }
        Extrapolation::DoubletModel => {
            let estimate = doublet_model_root(&pts)?;
            let loo: Vec<f64> = (0..pts.len())
                .map(|skip| {
                    let rest: Vec<GroupIndexPoint> = pts
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, p)| *p)
                        .collect();
                    doublet_model_root(&rest)
                })
                .collect::<Result<_>>()?;
            Ok(NullEstimate {
                delta_null: estimate,
                method: NullMethod::DataExtrapolation,
                form: form.tag(),
                interval: jackknife_interval(estimate, &loo),
            })
        }
    }
}

/// Fits `ln(1 − n_g)` of the model with free `(ω_o·M, γ)` and returns the
/// rising-branch null of the fitted model.
fn doublet_model_root(pts: &[GroupIndexPoint]) -> Result<f64> {
    // Work in units of the smallest separation so parameters are O(1).
    let unit = pts[0].pump_separation.abs().max(1.0);
    let log_excess = |a: f64, gamma: f64, delta: f64| {
        let s = (PI * delta / unit).powi(2);
        let g2 = gamma * gamma;
        (a * (s - g2) / (s + g2).powi(2)).ln()
    };
    let residuals = |p: &[f64]| -> Vec<f64> {
        let (a, gamma) = (p[0].exp(), p[1].exp());
        pts.iter()
            .map(|q| log_excess(a, gamma, q.pump_separation) - (1.0 - q.group_index).ln())
            .collect()
    };
    // Start with γ well inside the smallest separation and the amplitude
    // matching the first point in the large-separation limit 1 − n_g ≈ a/s.
    let gamma0 = 0.5 * PI * pts[0].pump_separation / unit;
    let s0 = (PI * pts[0].pump_separation / unit).powi(2);
    let a0 = (1.0 - pts[0].group_index) * s0;
    let sol = levenberg_marquardt(residuals, &[a0.ln(), gamma0.ln()], 500)?;
    let (a, gamma) = (sol.params[0].exp(), sol.params[1].exp());

    // Rising branch: s > 3γ², where 1 − n_g = a(s − γ²)/(s + γ²)² decreases.
    let excess = |delta: f64| {
        let s = (PI * delta / unit).powi(2);
        let g2 = gamma * gamma;
        a * (s - g2) / (s + g2).powi(2) - 1.0
    };
    let lo = 3f64.sqrt() * gamma / PI * unit;
    let mut hi = lo.max(pts[pts.len() - 1].pump_separation) * 2.0;
    for _ in 0..200 {
        if excess(hi) < 0.0 {
            break;
        }
        hi *= 2.0;
    }
    bisect(excess, lo, hi, 1e-6 * unit, 1e-12)
        .map(|b| b.root)
        .ok_or(Error::InvalidData {
            reason: "fitted doublet model has no group-index null".into(),
        })
}

/// Ratio of |slope| at the smallest pump separation to |slope| at the largest.
pub fn controllability_factor(measurements: &[SlopeMeasurement]) -> Result<f64> {
    if measurements.len() < 2 {
        return Err(Error::TooFewPoints {
            found: measurements.len(),
            required: 2,
        });
    }
    let first = measurements
        .iter()
        .min_by(|a, b| a.pump_separation.total_cmp(&b.pump_separation))
        .expect("non-empty");
    let last = measurements
        .iter()
        .max_by(|a, b| a.pump_separation.total_cmp(&b.pump_separation))
        .expect("non-empty");
    if last.slope == 0.0 {
        return Err(Error::InvalidData {
            reason: "zero slope at the largest pump separation".into(),
        });
    }
    Ok((first.slope / last.slope).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::RB85_D2_CARRIER;
    use crate::medium::{dispersion_slope, index_deviation, index_profile};
    use crate::profile::{linspace, symmetric_grid};

    fn paper_like(delta: f64) -> MediumParams {
        MediumParams::from_peak_gain(3.5, 700e3, delta, 0.1, RB85_D2_CARRIER).unwrap()
    }

    fn pt(delta_mhz: f64, ng: f64) -> GroupIndexPoint {
        GroupIndexPoint {
            pump_separation: delta_mhz * 1e6,
            group_index: ng,
        }
    }

    #[test]
    fn exact_linear_profile() {
        let s = -1e-13;
        let grid = linspace(-1e6, 1e6, 201);
        let vals: Vec<f64> = grid.iter().map(|d| s * 2.0 * PI * d).collect();
        let p = SpectralProfile::index_deviation(grid, vals).unwrap();
        let m = fit_linear_slope(&p, 0.0, 0.5e6, 2e6).unwrap();
        assert!((m.slope - s).abs() < 1e-12 * s.abs());
        assert!(m.stderr < 1e-6 * s.abs());
        assert_eq!(m.fit_bandwidth, 0.5e6);
    }

    #[test]
    fn constant_profile_has_zero_slope() {
        let grid = linspace(-1e6, 1e6, 201);
        let p = SpectralProfile::index_deviation(grid, vec![3e-7; 201]).unwrap();
        let m = fit_linear_slope(&p, 0.0, 0.5e6, 2e6).unwrap();
        assert!(m.slope.abs() < 1e-25);
    }

    #[test]
    fn fit_window_errors() {
        let grid = linspace(-1e6, 1e6, 21);
        let p = SpectralProfile::index_deviation(grid, vec![0.0; 21]).unwrap();
        assert!(matches!(
            fit_linear_slope(&p, 0.9e6, 0.5e6, 2e6),
            Err(Error::InsufficientCoverage { .. })
        ));
        // 0.1 MHz spacing leaves 5 samples in a 0.5 MHz window.
        assert!(matches!(
            fit_linear_slope(&p, 0.0, 0.5e6, 2e6),
            Err(Error::InsufficientSamples { found: 5, .. })
        ));
        let g = SpectralProfile::gain_db(linspace(-1e6, 1e6, 21), vec![0.0; 21]).unwrap();
        assert!(matches!(
            fit_linear_slope(&g, 0.0, 0.5e6, 2e6),
            Err(Error::WrongProfileKind { .. })
        ));
    }

    #[test]
    fn model_profile_slope_within_two_percent() {
        let p = paper_like(2e6);
        let prof = index_profile(&p, &symmetric_grid(1e6, 5e3)).unwrap();
        let m = fit_linear_slope(&prof, 0.0, 0.5e6, 2e6).unwrap();
        let exact = model_slope_at_center(&p);
        assert!(
            (m.slope / exact - 1.0).abs() < 0.02,
            "{} vs {}",
            m.slope,
            exact
        );
    }

    #[test]
    fn ng_from_slope_values() {
        assert_eq!(ng_from_slope(0.0, RB85_D2_CARRIER), 1.0);
        assert!((ng_from_slope(-4e-15, RB85_D2_CARRIER) + 8.66).abs() < 0.02);
        assert!((ng_from_slope(-1.4e-13, RB85_D2_CARRIER) + 337.0).abs() < 1.0);
        assert!((ng_from_slope(-8.05e-14, RB85_D2_CARRIER) + 193.4).abs() < 0.5);
        let (a, b) = (-3e-14, 7e-15);
        let lhs = ng_from_slope(a, RB85_D2_CARRIER) - ng_from_slope(b, RB85_D2_CARRIER);
        assert!((lhs - RB85_D2_CARRIER * (a - b)).abs() < 1e-12);
    }

    #[test]
    fn center_slope_closed_form() {
        let p = paper_like(2e6);
        // d = 2γ is the algebraic zero.
        let q = p.with_pump_separation(p.half_width() / PI).unwrap();
        assert_eq!(model_slope_at_center(&q), 0.0);
        for delta in [1.5e6, 2e6, 3e6, 4e6] {
            let q = p.with_pump_separation(delta).unwrap();
            let h = 1.0;
            let fd = (index_deviation(&q, h) - index_deviation(&q, -h)) / (4.0 * PI * h);
            let an = model_slope_at_center(&q);
            assert!(((fd - an) / an).abs() < 1e-6);
            assert!((an - dispersion_slope(&q, 0.0)).abs() <= 1e-12 * an.abs());
            assert!(an < 0.0);
        }
        let s2 = model_slope_at_center(&p.with_pump_separation(2e6).unwrap());
        let s4 = model_slope_at_center(&p.with_pump_separation(4e6).unwrap());
        assert!(s4.abs() < s2.abs());
    }

    #[test]
    fn null_absent_for_empty_medium() {
        let p = paper_like(2e6).with_line_amplitude(0.0).unwrap();
        assert!(matches!(
            find_null_delta(&p, (1e6, 50e6)),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn null_bracket_validation() {
        let p = paper_like(2e6);
        assert!(matches!(
            find_null_delta(&p, (5e6, 1e6)),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn null_root_quality() {
        let p = paper_like(2e6);
        let lo = steepest_separation(&p);
        let est = find_null_delta(&p, (lo, 100e6)).unwrap();
        assert_eq!(est.method, NullMethod::ModelRoot);
        assert!(model_group_index(&p, est.delta_null).abs() < 1e-6);
        assert!(est.interval.1 - est.interval.0 < 1.0);
        assert!(est.interval.0 <= est.delta_null && est.delta_null <= est.interval.1);
    }

    #[test]
    fn extrapolation_input_errors() {
        let two = [pt(2.0, -100.0), pt(3.0, -10.0)];
        assert!(matches!(
            extrapolate_null(&two, Extrapolation::default()),
            Err(Error::TooFewPoints { found: 2, .. })
        ));
        let dup = [pt(2.0, -100.0), pt(2.0, -50.0), pt(3.0, -10.0)];
        assert!(matches!(
            extrapolate_null(&dup, Extrapolation::default()),
            Err(Error::InvalidData { .. })
        ));
        let nonmono = [pt(2.0, -100.0), pt(3.0, -200.0), pt(4.0, -10.0)];
        assert!(matches!(
            extrapolate_null(&nonmono, Extrapolation::default()),
            Err(Error::NonMonotoneData { .. })
        ));
        let normal = [pt(2.0, -100.0), pt(3.0, -10.0), pt(4.0, 1.5)];
        assert!(matches!(
            extrapolate_null(&normal, Extrapolation::default()),
            Err(Error::InvalidData { .. })
        ));
    }

    #[test]
    fn log_linear_on_exact_exponential() {
        // 1 − n_g = exp(−(Δ − 5 MHz)/1 MHz) crosses n_g = 0 at 5 MHz.
        let pts: Vec<GroupIndexPoint> = [2.0, 3.0, 3.5, 4.0]
            .iter()
            .map(|&d| pt(d, 1.0 - (-(d - 5.0)).exp()))
            .collect();
        let est = extrapolate_null(&pts, Extrapolation::default()).unwrap();
        assert!((est.delta_null - 5e6).abs() < 1e-3);
        assert!(est.interval.1 - est.interval.0 < 1e-3);
        assert_eq!(est.method, NullMethod::DataExtrapolation);
        assert_eq!(est.form, "log_linear");
    }

    #[test]
    fn linear_form() {
        let pts = [pt(2.0, -30.0), pt(3.0, -20.0), pt(4.0, -10.0)];
        let est = extrapolate_null(&pts, Extrapolation::Linear { trailing: 3 }).unwrap();
        assert!((est.delta_null - 5e6).abs() < 1e-3);
    }

    #[test]
    fn doublet_model_fit_recovers_generating_null() {
        let p = paper_like(2e6);
        let truth = find_null_delta(&p, (steepest_separation(&p), 100e6)).unwrap();
        let pts: Vec<GroupIndexPoint> = [0.4, 0.5, 0.6, 0.7]
            .iter()
            .map(|f| {
                let d = f * truth.delta_null;
                GroupIndexPoint {
                    pump_separation: d,
                    group_index: model_group_index(&p, d),
                }
            })
            .collect();
        let est = extrapolate_null(&pts, Extrapolation::DoubletModel).unwrap();
        assert!((est.delta_null / truth.delta_null - 1.0).abs() < 1e-3);
    }

    #[test]
    fn controllability_ratio() {
        let ms = [
            SlopeMeasurement::new(4e6, -4e-15, 0.5e6, 0.0).unwrap(),
            SlopeMeasurement::new(2e6, -1.08e-12, 0.5e6, 0.0).unwrap(),
        ];
        assert!((controllability_factor(&ms).unwrap() - 270.0).abs() < 1e-9);
        assert!(controllability_factor(&ms[..1]).is_err());
    }

    #[test]
    fn slope_measurement_validation() {
        assert!(SlopeMeasurement::new(2e6, -1e-13, 0.0, 0.0).is_err());
        assert!(SlopeMeasurement::new(2e6, -1e-13, 0.5e6, -1.0).is_err());
    }
}
