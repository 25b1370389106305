use std::fs::File;
use std::path::Path;

use cadsim_core::cad::{
    controllability_factor, extrapolate_null, find_null_delta, steepest_separation, NullEstimate,
};
use cadsim_core::fit::local_maxima;
use cadsim_core::gyro::{enhancement_sweep, MODEL_TAG};
use cadsim_core::heterodyne::{small_angle_ratio, sweep_measure, SMALL_ANGLE_LIMIT};
use cadsim_core::kk::{kramers_kronig, RECOMMENDED_SPAN_RATIO};
use cadsim_core::medium::{gain_db, index_deviation, susceptibility_profile};
use cadsim_core::modulation::{
    detector_filter, intensity_timeseries, modulation_depth, power_spectrum, FieldComponents,
};
use cadsim_core::profile::symmetric_grid;

use crate::config::{Resolved, RunConfig};
use crate::data::{read_measurements, Measurements};
use crate::error::CliError;
use crate::output::{num, Emitter};

fn column(rows: &[Vec<String>], i: usize) -> Vec<f64> {
    rows.iter()
        .map(|r| r[i].parse().unwrap_or(f64::NAN))
        .collect()
}

/// Gain doublet over the sweep, with the Kramers-Kronig index alongside the
/// closed-form one.
pub fn gain(cfg: &RunConfig, r: &Resolved, out: &mut Emitter) -> Result<(), CliError> {
    let p = &r.medium;
    let half_span = cfg
        .grid_half_span_hz
        .unwrap_or(RECOMMENDED_SPAN_RATIO * p.spectral_support());
    let step = cfg.grid_step_hz.unwrap_or(cfg.line_fwhm_hz / 40.0);
    let grid = symmetric_grid(half_span, step);
    let chi = susceptibility_profile(p, &grid)?;
    let kk = kramers_kronig(&chi)?;
    let kk_values = kk.real_values().expect("index profile");

    let rows: Vec<Vec<String>> = grid
        .iter()
        .zip(kk_values)
        .filter(|(&d, _)| d >= r.sweep.start && d <= r.sweep.stop)
        .map(|(&d, &n_kk)| {
            vec![
                num(d),
                num(gain_db(p, d)),
                num(index_deviation(p, d)),
                num(n_kk),
            ]
        })
        .collect();
    let det = column(&rows, 0);
    let gain = column(&rows, 1);

    let tags = [
        ("gain_model", "lorentzian_doublet".to_string()),
        ("index_transform", "kramers_kronig_maclaurin".to_string()),
        ("grid_step_hz", num(step)),
        ("grid_half_span_hz", num(half_span)),
    ];
    out.csv(
        "gain.csv",
        &tags,
        &["delta_hz", "gain_db", "delta_n_model", "delta_n_kk"],
        &rows,
    )?;
    out.svg_plot(
        "gain.svg",
        &tags,
        "probe detuning (Hz)",
        "gain (dB)",
        &[("gain_db", &det, &gain)],
    )?;

    let peaks: Vec<f64> = local_maxima(&gain).into_iter().map(|i| det[i]).collect();
    println!("line amplitude M = {} rad/s", num(p.line_amplitude()));
    println!(
        "gain peaks (Hz): {}",
        peaks.iter().map(|&v| num(v)).collect::<Vec<_>>().join(", ")
    );
    if let [a, b] = peaks[..] {
        println!(
            "peak separation = {} Hz (grid step {} Hz)",
            num(b - a),
            num(step)
        );
    }
    Ok(())
}

/// Closed-form index profile against a simulated heterodyne sweep.
pub fn dispersion(cfg: &RunConfig, r: &Resolved, out: &mut Emitter) -> Result<(), CliError> {
    let p = &r.medium;
    let det = r.sweep.detunings();
    let model: Vec<f64> = det.iter().map(|&d| index_deviation(p, d)).collect();
    let noisy = !r.demod.noise.is_silent();
    let replicates = if noisy { cfg.noise_replicates } else { 1 };

    let mut runs = Vec::with_capacity(replicates);
    for k in 0..replicates {
        let mut demod = r.demod;
        demod.noise.seed = cfg.seed.wrapping_add(k as u64);
        let measured = sweep_measure(p, &r.sweep, &demod)?;
        runs.push(measured.real_values().expect("index profile").to_vec());
    }
    let n = replicates as f64;
    let mean: Vec<f64> = (0..det.len())
        .map(|i| runs.iter().map(|run| run[i]).sum::<f64>() / n)
        .collect();

    let kl = p.wavenumber() * p.cell_length();
    let rows: Vec<Vec<String>> = det
        .iter()
        .zip(&model)
        .zip(&mean)
        .map(|((&d, &m), &h)| vec![num(d), num(m), num(h), num(kl * m)])
        .collect();
    let mut tags = vec![
        ("model", "lorentzian_doublet_closed_form".to_string()),
        ("measurement", "heterodyne_quadrature_arcsine".to_string()),
        ("noise_seed", cfg.seed.to_string()),
        ("replicates", replicates.to_string()),
    ];
    if noisy {
        tags.push(("heterodyne_column", "replicate_mean".to_string()));
    }
    out.csv(
        "dispersion.csv",
        &tags,
        &[
            "delta_hz",
            "delta_n_model",
            "delta_n_heterodyne",
            "phase_model_rad",
        ],
        &rows,
    )?;
    out.svg_plot(
        "dispersion.svg",
        &tags,
        "probe detuning (Hz)",
        "index deviation",
        &[("model", &det, &model), ("heterodyne", &det, &mean)],
    )?;

    if noisy {
        let stats: Vec<Vec<String>> = (0..det.len())
            .map(|i| {
                let vals: Vec<f64> = runs.iter().map(|run| run[i]).collect();
                let var = vals.iter().map(|v| (v - mean[i]).powi(2)).sum::<f64>() / (n - 1.0);
                let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                vec![num(det[i]), num(mean[i]), num(var.sqrt()), num(lo), num(hi)]
            })
            .collect();
        out.csv(
            "dispersion_stats.csv",
            &tags,
            &["delta_hz", "mean", "std", "min", "max"],
            &stats,
        )?;
    }

    let err: f64 = model.iter().zip(&mean).map(|(m, h)| (m - h).powi(2)).sum();
    let norm: f64 = model.iter().map(|m| m * m).sum();
    let max_phase = model
        .iter()
        .map(|&m| small_angle_ratio(m, p.cell_length(), p.wavenumber()))
        .fold(0.0, f64::max);
    if norm > 0.0 {
        println!("relative RMS difference = {}", num((err / norm).sqrt()));
    }
    println!(
        "max |k dn L| = {} rad ({})",
        num(max_phase),
        if max_phase <= SMALL_ANGLE_LIMIT {
            "small-angle regime"
        } else {
            "arcsine-corrected regime"
        }
    );
    Ok(())
}

fn print_estimate(est: &NullEstimate) {
    println!("method = {}", est.method.tag());
    println!("form = {}", est.form);
    println!("delta_null_hz = {}", num(est.delta_null));
    println!(
        "interval_hz = [{}, {}]",
        num(est.interval.0),
        num(est.interval.1)
    );
}

/// Null pump separation from measured data, or from the model if no data are given.
pub fn null(
    cfg: &RunConfig,
    r: &Resolved,
    data: Option<&Path>,
    out: &mut Emitter,
) -> Result<(), CliError> {
    let mut tags = Vec::new();
    let est = match data {
        Some(path) => {
            let file =
                File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            let measurements = read_measurements(file)?;
            tags.push(("input_schema", measurements.schema().to_string()));
            if let Measurements::Slopes(ms) = &measurements {
                if ms.len() >= 2 {
                    let ratio = controllability_factor(ms)?;
                    println!("controllability factor = {}", num(ratio));
                    tags.push(("controllability_factor", num(ratio)));
                }
            }
            let points = measurements.group_index_points(cfg.carrier());
            extrapolate_null(&points, r.extrapolation)?
        }
        None => {
            let lo = cfg
                .null_search_min_hz
                .unwrap_or_else(|| steepest_separation(&r.medium));
            find_null_delta(&r.medium, (lo, cfg.null_search_max_hz))?
        }
    };
    tags.insert(0, ("method", est.method.tag().to_string()));
    tags.insert(1, ("form", est.form.to_string()));
    print_estimate(&est);
    out.csv(
        "null.csv",
        &tags,
        &[
            "method",
            "form",
            "delta_null_hz",
            "interval_lo_hz",
            "interval_hi_hz",
        ],
        &[vec![
            est.method.tag().to_string(),
            est.form.to_string(),
            num(est.delta_null),
            num(est.interval.0),
            num(est.interval.1),
        ]],
    )
}

/// Intensity time series at harmonics of the pump separation and its spectrum.
pub fn spectrum(cfg: &RunConfig, r: &Resolved, out: &mut Emitter) -> Result<(), CliError> {
    let fs = cfg.spectrum_sample_rate_hz;
    let fc = FieldComponents::geometric(
        1.0,
        cfg.harmonic_ratio,
        cfg.max_harmonic,
        cfg.pump_separation_hz,
        cfg.cascade,
    )?;
    let duration = cfg.spectrum_samples as f64 / fs;
    let raw = intensity_timeseries(&fc, duration, fs)?;
    let detected = detector_filter(&raw, fs, &r.detector)?;
    let spec_raw = power_spectrum(&raw, fs)?;
    let spec_det = power_spectrum(&detected, fs)?;
    let skip = raw.len() / 4;

    let tags = [
        ("window", "hann_periodic".to_string()),
        ("detector", "one_pole_bilinear".to_string()),
        ("detector_cutoff_hz", num(r.detector.cutoff)),
        (
            "harmonic_ladder",
            format!("geometric r = {}", cfg.harmonic_ratio),
        ),
        ("cascade", cfg.cascade.to_string()),
        (
            "depth_note",
            "illustrative amplitudes, not a measured depth".to_string(),
        ),
    ];
    let time: Vec<f64> = (0..raw.len()).map(|i| i as f64 / fs).collect();
    let ts_rows: Vec<Vec<String>> = (0..raw.len())
        .map(|i| vec![num(time[i]), num(raw[i]), num(detected[i])])
        .collect();
    out.csv(
        "modulation_timeseries.csv",
        &tags,
        &["time_s", "intensity", "detected"],
        &ts_rows,
    )?;

    let db_raw = spec_raw.power_db();
    let db_det = spec_det.power_db();
    let sp_rows: Vec<Vec<String>> = (0..db_raw.len())
        .map(|i| vec![num(spec_raw.frequencies[i]), num(db_raw[i]), num(db_det[i])])
        .collect();
    out.csv(
        "spectrum.csv",
        &tags,
        &["frequency_hz", "power_db", "detected_power_db"],
        &sp_rows,
    )?;
    out.svg_plot(
        "spectrum.svg",
        &tags,
        "frequency (Hz)",
        "power (dB)",
        &[
            ("intensity", &spec_raw.frequencies, &db_raw),
            ("detected", &spec_det.frequencies, &db_det),
        ],
    )?;

    let peaks = spec_raw.peaks(cfg.peak_floor_db);
    println!(
        "spectral peaks (Hz): {}",
        peaks.iter().map(|&v| num(v)).collect::<Vec<_>>().join(", ")
    );
    println!("modulation depth = {}", num(modulation_depth(&raw, skip)));
    println!(
        "detected modulation depth = {}",
        num(modulation_depth(&detected, skip))
    );
    Ok(())
}

/// Scale-factor enhancement proxy over a range of pump separations.
pub fn sweep_enhancement(cfg: &RunConfig, r: &Resolved, out: &mut Emitter) -> Result<(), CliError> {
    let reports = enhancement_sweep(
        &r.medium,
        (cfg.enhancement_start_hz, cfg.enhancement_stop_hz),
        cfg.enhancement_points,
        &r.enhancement,
    )?;
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|rep| {
            vec![
                num(rep.pump_separation.unwrap_or(f64::NAN)),
                num(rep.n_g),
                num(rep.enhancement),
                rep.diverged.to_string(),
                rep.linear_bandwidth.map(num).unwrap_or_default(),
            ]
        })
        .collect();
    let tags = [
        ("model", MODEL_TAG.to_string()),
        ("epsilon", num(r.enhancement.epsilon)),
        (
            "linearity_threshold",
            num(r.enhancement.linearity_threshold),
        ),
    ];
    out.csv(
        "enhancement.csv",
        &tags,
        &["delta_hz", "n_g", "enhancement", "diverged", "linear_bw_hz"],
        &rows,
    )?;
    let delta: Vec<f64> = column(&rows, 0);
    let enh: Vec<f64> = column(&rows, 2);
    out.svg_plot(
        "enhancement.svg",
        &tags,
        "pump separation (Hz)",
        "enhancement 1/|n_g|",
        &[("enhancement", &delta, &enh)],
    )?;

    if let Some(best) = reports
        .iter()
        .filter(|rep| !rep.diverged)
        .max_by(|a, b| a.enhancement.total_cmp(&b.enhancement))
    {
        println!(
            "largest finite enhancement {} at {} Hz ({})",
            num(best.enhancement),
            num(best.pump_separation.unwrap_or(f64::NAN)),
            MODEL_TAG
        );
    }
    let diverged = reports.iter().filter(|rep| rep.diverged).count();
    if diverged > 0 {
        println!("{diverged} point(s) flagged diverged (|n_g| < epsilon)");
    }
    Ok(())
}
