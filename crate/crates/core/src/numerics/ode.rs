//! Adaptive Dormand-Prince 5(4) integration of a scalar ODE.

use crate::error::{GeomError, Result};

/// Accepted integration nodes `(x, y)` in the order they were reached.
#[derive(Debug, Clone, PartialEq)]
pub struct OdePath {
    pub nodes: Vec<(f64, f64)>,
    pub rejected_steps: usize,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// Integrates `y' = rhs(x, y)` from `(x0, y0)` to `x1` (either direction).
///
/// The local error per step is held below `atol + rtol * |y|`.
pub fn dormand_prince<F>(rhs: F, x0: f64, y0: f64, x1: f64, rtol: f64, atol: f64) -> Result<OdePath>
where
    F: Fn(f64, f64) -> f64,
{
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(OdePath { nodes: vec![(x0, y0)], rejected_steps: 0 });
    }
    let dir = span.signum();
    let mut h = span / 100.0;
    let mut x = x0;
    let mut y = y0;
    let mut nodes = vec![(x, y)];
    let mut rejected = 0;
    let mut k = [0.0; 7];
    k[0] = rhs(x, y);
    for _ in 0..1_000_000 {
        if (x1 - x) * dir <= 0.0 {
            return Ok(OdePath { nodes, rejected_steps: rejected });
        }
        let last = (x + h - x1) * dir >= 0.0;
        if last {
            h = x1 - x;
        }
        for s in 1..7 {
            let ys = y + h * (0..s).map(|j| A[s][j] * k[j]).sum::<f64>();
            k[s] = rhs(x + C[s] * h, ys);
        }
        let y5 = y + h * (0..7).map(|j| B5[j] * k[j]).sum::<f64>();
        let y4 = y + h * (0..7).map(|j| B4[j] * k[j]).sum::<f64>();
        let scale = atol + rtol * y.abs().max(y5.abs());
        let err = (y5 - y4).abs() / scale;
        if !err.is_finite() {
            return Err(GeomError::OdeFailure(format!("non-finite step at x = {x}")));
        }
        if err <= 1.0 {
            x = if last { x1 } else { x + h };
            y = y5;
            nodes.push((x, y));
            k[0] = k[6];
        } else {
            rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h.abs() < 1e-14 * x.abs().max(1.0) {
            return Err(GeomError::OdeFailure(format!("step size underflow at x = {x}")));
        }
    }
    Err(GeomError::OdeFailure("step budget exhausted".into()))
}
