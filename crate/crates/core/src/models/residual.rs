//! Residuals of `f Ric - Hess f + (Δf) g = 0` and `Δf = -eps n f`.
//!
//! Two independent evaluations: hard-coded curvature of the warped product,
//! and generic warped-product formulas fed by fourth-order finite
//! differences of the metric coefficient `g^{ss} = f^2`, the warp `B(s) = s`
//! and the potential.

use super::StaticModel;
use crate::error::Result;
use crate::numerics::central_derivatives;
use serde::Serialize;

/// Orthonormal-frame components of the static tensor and the trace equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticComponents {
    /// Along the radial direction.
    pub radial: f64,
    /// Along any tangent direction of the cross-section.
    pub tangential: f64,
    /// `Δf + eps n f`.
    pub trace: f64,
    pub scalar_curvature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub s: f64,
    /// Max over sampled unit directions of `|E(v, v)|`, closed-form curvature.
    pub static_residual: f64,
    pub trace_residual: f64,
    /// `R - eps n (n-1)`, closed-form curvature.
    pub scalar_curvature_error: f64,
    pub fd_static_residual: f64,
    pub fd_trace_residual: f64,
    pub fd_scalar_curvature_error: f64,
    pub direction_samples: usize,
}

impl ResidualReport {
    /// Largest residual over both evaluation paths.
    pub fn max_residual(&self) -> f64 {
        [self.static_residual, self.trace_residual, self.fd_static_residual, self.fd_trace_residual]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn max_scalar_error(&self) -> f64 {
        self.scalar_curvature_error.abs().max(self.fd_scalar_curvature_error.abs())
    }
}

fn assemble(model: &StaticModel, f: f64, k_rad: f64, k_tan: f64, f_rr: f64, f_r_h: f64) -> StaticComponents {
    // f_r_h = (df/dr) (h_r / h): the tangential Hessian eigenvalue
    let n = model.n as f64;
    let ric_rr = (n - 1.0) * k_rad;
    let ric_tt = k_rad + (n - 2.0) * k_tan;
    let laplacian = f_rr + (n - 1.0) * f_r_h;
    StaticComponents {
        radial: f * ric_rr - f_rr + laplacian,
        tangential: f * ric_tt - f_r_h + laplacian,
        trace: laplacian + model.epsilon as f64 * n * f,
        scalar_curvature: ric_rr + (n - 1.0) * ric_tt,
    }
}

/// Closed-form evaluation.
pub fn closed_form_components(model: &StaticModel, s: f64) -> Result<StaticComponents> {
    model.check_inside(s)?;
    let v = model.lapse.value(s);
    let f = v.sqrt();
    let f_r = 0.5 * model.lapse.d1(s);
    let f_rr = 0.5 * f * model.lapse.d2(s);
    Ok(assemble(model, f, model.radial_sectional_curvature(s), model.tangential_curvature(s), f_rr, f_r * f / s))
}

/// Generic warped-product formulas on finite differences of the metric.
pub fn finite_difference_components(model: &StaticModel, s: f64) -> Result<StaticComponents> {
    model.check_inside(s)?;
    let (lo, hi) = model.s_domain;
    let mut room = s;
    if lo > 0.0 {
        room = room.min(s - lo);
    }
    if hi.is_finite() {
        room = room.min(hi - s);
    }
    let step = 1e-3 * room;
    let inverse_radial = |x: f64| model.lapse.value(x);
    let warp = |x: f64| x;
    let potential = |x: f64| model.lapse.value(x).sqrt();
    let v = inverse_radial(s);
    let (dv, _) = central_derivatives(inverse_radial, s, step);
    let (db, d2b) = central_derivatives(warp, s, step);
    let (fs, fss) = central_derivatives(potential, s, step);
    let b = warp(s);
    let root_v = v.sqrt();
    // d/dr = sqrt(v) d/ds along unit-speed radial geodesics
    let h_r = db * root_v;
    let h_rr = v * d2b + 0.5 * db * dv;
    let f_r = root_v * fs;
    let f_rr = v * fss + 0.5 * dv * fs;
    let k_rad = -h_rr / b;
    let k_tan = (model.section_curvature() - h_r * h_r) / (b * b);
    Ok(assemble(model, potential(s), k_rad, k_tan, f_rr, f_r * h_r / b))
}

fn sampled_max(c: &StaticComponents, samples: usize) -> f64 {
    let count = samples.max(2);
    (0..count)
        .map(|j| {
            let angle = std::f64::consts::FRAC_PI_2 * j as f64 / (count - 1) as f64;
            let (sin, cos) = angle.sin_cos();
            (cos * cos * c.radial + sin * sin * c.tangential).abs()
        })
        .fold(0.0, f64::max)
}

/// `count` interior radii, evenly spaced over the domain; an unbounded domain
/// is cut at `max(10, 10 lo)`.
pub fn sample_radii(model: &StaticModel, count: usize) -> Vec<f64> {
    let (lo, hi) = model.s_domain;
    let hi = if hi.is_finite() { hi } else { f64::max(10.0, 10.0 * lo) };
    (1..=count).map(|i| lo + (hi - lo) * i as f64 / (count + 1) as f64).collect()
}

/// Residuals at radius `s`, sampling `direction_samples` unit vectors between
/// the radial and a tangential direction (mixed components vanish by symmetry).
pub fn static_residual(model: &StaticModel, s: f64, direction_samples: usize) -> Result<ResidualReport> {
    let exact = closed_form_components(model, s)?;
    let fd = finite_difference_components(model, s)?;
    let r0 = model.scalar_curvature();
    Ok(ResidualReport {
        s,
        static_residual: sampled_max(&exact, direction_samples),
        trace_residual: exact.trace.abs(),
        scalar_curvature_error: exact.scalar_curvature - r0,
        fd_static_residual: sampled_max(&fd, direction_samples),
        fd_trace_residual: fd.trace.abs(),
        fd_scalar_curvature_error: fd.scalar_curvature - r0,
        direction_samples: direction_samples.max(2),
    })
}
