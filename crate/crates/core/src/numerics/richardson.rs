//! Richardson extrapolation on a geometric ladder `h_j = h_0 / 2^j`.

use crate::error::{GeomError, Result};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderFit {
    /// Extrapolated limit (last entry of the final column).
    pub estimate: f64,
    /// Spread (max - min) of the last three entries of the final column.
    pub residual: f64,
    /// Convergence order observed on the raw ladder, if measurable.
    pub observed_order: Option<f64>,
    /// Raw ladder values, coarsest first.
    pub raw: Vec<f64>,
}

/// Order `p` with `|e_j - e_{j+1}| / |e_{j+1} - e_{j+2}| = 2^p`, taken from
/// the first three ladder entries (where round-off has not set in).
pub fn observed_order(values: &[f64]) -> Option<f64> {
    if values.len() < 3 {
        return None;
    }
    let d0 = (values[0] - values[1]).abs();
    let d1 = (values[1] - values[2]).abs();
    if d0 == 0.0 || d1 == 0.0 {
        return None;
    }
    let p = (d0 / d1).log2();
    p.is_finite().then_some(p)
}

/// Eliminates error terms of the given `orders` in turn (one column each).
pub fn extrapolate(values: &[f64], orders: &[f64]) -> Result<LadderFit> {
    if values.len() < orders.len() + 3 {
        return Err(GeomError::ExtrapolationUnstable(format!(
            "ladder of {} values too short for {} levels",
            values.len(),
            orders.len()
        )));
    }
    let mut column = values.to_vec();
    for p in orders {
        let f = 2f64.powf(*p);
        column = column.windows(2).map(|w| w[1] + (w[1] - w[0]) / (f - 1.0)).collect();
    }
    let tail = &column[column.len() - 3..];
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let estimate = *column.last().unwrap();
    if !estimate.is_finite() {
        return Err(GeomError::ExtrapolationUnstable("non-finite extrapolant".into()));
    }
    Ok(LadderFit { estimate, residual: hi - lo, observed_order: observed_order(values), raw: values.to_vec() })
}
