use crate::error::{GeomError, Result};

/// Bisection on a sign-changing bracket, stopped when the bracket width falls
/// below `rel_tol * |midpoint|`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(GeomError::RootFindingFailed(format!("no sign change on [{lo}, {hi}] (f = {flo}, {fhi})")));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= rel_tol * mid.abs() {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One Newton correction, accepted only if it stays inside `[lo, hi]` and
/// reduces the residual.
pub fn newton_polish<F, D>(f: F, df: D, x: f64, lo: f64, hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let fx = f(x);
    let d = df(x);
    if d == 0.0 || !d.is_finite() {
        return x;
    }
    let y = x - fx / d;
    if y >= lo && y <= hi && f(y).abs() <= fx.abs() {
        y
    } else {
        x
    }
}
