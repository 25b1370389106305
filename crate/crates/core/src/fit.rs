//! Least-squares helpers: straight lines, a small Levenberg-Marquardt solver
//! and Lorentzian peak fitting.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Ordinary least-squares line `y = intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope from the residual variance.
    pub slope_stderr: f64,
}

impl LineFit {
    /// Abscissa where the fitted line crosses zero, if the slope is non-zero.
    pub fn zero_crossing(&self) -> Option<f64> {
        (self.slope != 0.0).then(|| -self.intercept / self.slope)
    }
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let n = x.len();
    if n != y.len() || n < 2 {
        return Err(Error::FitFailed {
            reason: format!("line fit needs >= 2 paired samples, got {n} / {}", y.len()),
        });
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    if sxx == 0.0 {
        return Err(Error::FitFailed {
            reason: "abscissae are all equal".into(),
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = if n > 2 {
        let ssr: f64 = x
            .iter()
            .zip(y)
            .map(|(&xi, &yi)| {
                let r = yi - intercept - slope * xi;
                r * r
            })
            .sum();
        (ssr / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LineFit {
        slope,
        intercept,
        slope_stderr,
    })
}

/// Outcome of [`levenberg_marquardt`].
#[derive(Debug, Clone)]
pub struct LmSolution {
    pub params: Vec<f64>,
    pub cost: f64,
    pub iterations: usize,
}

/// Minimizes `Σ r_i(p)²` with a forward-difference Jacobian.
///
/// `residuals` may return non-finite values to reject a trial point.
pub fn levenberg_marquardt<F>(residuals: F, initial: &[f64], max_iter: usize) -> Result<LmSolution>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let cost_of = |r: &[f64]| -> f64 {
        if r.iter().all(|v| v.is_finite()) {
            r.iter().map(|v| v * v).sum()
        } else {
            f64::INFINITY
        }
    };

    let mut p = initial.to_vec();
    let mut r = residuals(&p);
    let mut cost = cost_of(&r);
    if !cost.is_finite() {
        return Err(Error::FitFailed {
            reason: "residuals are not finite at the initial point".into(),
        });
    }
    let m = r.len();
    let n = p.len();
    let mut lambda = 1e-3;
    let mut iterations = 0;

    while iterations < max_iter {
        iterations += 1;
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let h = 1e-7 * p[j].abs().max(1e-7);
            let mut q = p.clone();
            q[j] += h;
            let rq = residuals(&q);
            for i in 0..m {
                jac[(i, j)] = (rq[i] - r[i]) / h;
            }
        }
        let rv = DVector::from_column_slice(&r);
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * rv;

        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj.clone();
            for k in 0..n {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-30);
            }
            let Some(step) = a.lu().solve(&(-&jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rt = residuals(&trial);
            let ct = cost_of(&rt);
            if ct < cost {
                let rel = (cost - ct) / cost.max(f64::MIN_POSITIVE);
                let small_step = step
                    .iter()
                    .zip(&p)
                    .all(|(s, v)| s.abs() <= 1e-12 * v.abs().max(1e-12));
                p = trial;
                r = rt;
                cost = ct;
                lambda = (lambda / 10.0).max(1e-12);
                improved = true;
                if rel < 1e-15 || small_step {
                    return Ok(LmSolution {
                        params: p,
                        cost,
                        iterations,
                    });
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Ok(LmSolution {
        params: p,
        cost,
        iterations,
    })
}

/// Lorentzian peak `amplitude·w²/((x − center)² + w²) + baseline`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianFit {
    pub amplitude: f64,
    pub center: f64,
    /// Half width at half maximum, in the units of `x`.
    pub half_width: f64,
    pub baseline: f64,
}

impl LorentzianFit {
    pub fn fwhm(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn eval(&self, x: f64) -> f64 {
        let w2 = self.half_width * self.half_width;
        let u = x - self.center;
        self.amplitude * w2 / (u * u + w2) + self.baseline
    }
}

/// Fits a single Lorentzian with constant baseline to `(x, y)`.
///
/// Initial values come from the largest sample and its half-maximum crossings.
pub fn fit_lorentzian(x: &[f64], y: &[f64]) -> Result<LorentzianFit> {
    if x.len() != y.len() || x.len() < 5 {
        return Err(Error::FitFailed {
            reason: format!("need >= 5 samples for a Lorentzian, got {}", x.len()),
        });
    }
    let (imax, &ymax) = y
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let ymin = y.iter().copied().fold(f64::INFINITY, f64::min);
    let half = 0.5 * (ymax + ymin);
    let left = (0..imax).rev().find(|&i| y[i] < half).unwrap_or(0);
    let right = (imax..y.len())
        .find(|&i| y[i] < half)
        .unwrap_or(y.len() - 1);
    let w0 = (0.5 * (x[right] - x[left])).abs().max((x[1] - x[0]).abs());

    // Parameters are scaled to O(1) so the finite-difference Jacobian behaves.
    let xs = w0;
    let ys = (ymax - ymin).abs().max(f64::MIN_POSITIVE);
    let model = |p: &[f64], xi: f64| {
        let w = p[2] * xs;
        let u = xi - p[1] * xs;
        (p[0] * w * w / (u * u + w * w) + p[3]) * ys
    };
    let residuals = |p: &[f64]| -> Vec<f64> {
        x.iter()
            .zip(y)
            .map(|(&xi, &yi)| (model(p, xi) - yi) / ys)
            .collect()
    };
    let init = [1.0, x[imax] / xs, 1.0, ymin / ys];
    let sol = levenberg_marquardt(residuals, &init, 200)?;
    let p = sol.params;
    Ok(LorentzianFit {
        amplitude: p[0] * ys,
        center: p[1] * xs,
        half_width: (p[2] * xs).abs(),
        baseline: p[3] * ys,
    })
}

/// Indices of strict local maxima (ties broken to the left). The end points
/// count when they exceed their single neighbour.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    if n < 2 {
        return (0..n).collect();
    }
    let mut out = Vec::new();
    if values[0] > values[1] {
        out.push(0);
    }
    for i in 1..n - 1 {
        if values[i] > values[i - 1] && values[i] >= values[i + 1] {
            out.push(i);
        }
    }
    if values[n - 1] > values[n - 2] {
        out.push(n - 1);
    }
    out
}
