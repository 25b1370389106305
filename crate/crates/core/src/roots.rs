//! Bracketing root finder.

/// Result of a bisection: the final bracket and its midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub root: f64,
}

/// Bisection on `[lo, hi]`. Returns `None` unless `f(lo)` and `f(hi)` have
/// opposite signs (or one of them is exactly zero).
///
/// Iterates until the bracket is narrower than `x_tol` and `|f(root)| <=
/// f_tol`, or until the bracket can no longer be split in floating point.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, x_tol: f64, f_tol: f64) -> Option<Bracket>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Some(Bracket {
            lo,
            hi: lo,
            root: lo,
        });
    }
    if f_hi == 0.0 {
        return Some(Bracket {
            lo: hi,
            hi,
            root: hi,
        });
    }
    if !(f_lo.is_finite() && f_hi.is_finite()) || f_lo.signum() == f_hi.signum() {
        return None;
    }

    loop {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if (hi - lo) < x_tol && f_mid.abs() <= f_tol {
            return Some(Bracket { lo, hi, root: mid });
        }
        if mid <= lo || mid >= hi || f_mid == 0.0 {
            return Some(Bracket { lo, hi, root: mid });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
}
