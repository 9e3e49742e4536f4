//! Horizon data of the three-dimensional reference Kottler space.

use crate::error::{GeomError, Result};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceInput {
    HorizonRadius(f64),
    SurfaceGravity(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceData {
    pub k: i32,
    pub s0: f64,
    pub mass: f64,
    pub kappa: f64,
    pub area: f64,
    pub scalar_curvature: f64,
    /// `(kappa / 4 pi) (1 - 2 / ((R0 + 6)/2)) area`.
    pub bound: f64,
    /// `|bound - mass|`.
    pub identity_deviation: f64,
}

/// `m0 = (k s0 + s0^3)/2`, `kappa = 3 s0/2 + k/(2 s0)`, area `4 pi s0^2`, `R0 = 2k/s0^2`.
///
/// From a surface gravity the larger root of `3 s0^2 - 2 kappa s0 + k = 0` is
/// taken (the branch on which `kappa` increases with `s0`).
pub fn chrusciel_simon_reference(k: i32, input: ReferenceInput) -> Result<ReferenceData> {
    if !(-1..=1).contains(&k) {
        return Err(GeomError::ParameterOutOfRange(format!("k = {k}")));
    }
    let kf = k as f64;
    let s0 = match input {
        ReferenceInput::HorizonRadius(s0) => s0,
        ReferenceInput::SurfaceGravity(kappa) => {
            let disc = kappa * kappa - 3.0 * kf;
            if !(kappa > 0.0) || disc < 0.0 {
                return Err(GeomError::InvalidRoot(format!("no horizon with surface gravity {kappa} for k = {k}")));
            }
            (kappa + disc.sqrt()) / 3.0
        }
    };
    if !(s0 > 0.0 && s0.is_finite()) {
        return Err(GeomError::InvalidRoot(format!("horizon radius {s0} must be positive")));
    }
    let kappa = 1.5 * s0 + kf / (2.0 * s0);
    if !(kappa > 0.0) {
        // s0 is then not the largest zero of s^2 + k - 2 m0 / s
        return Err(GeomError::InvalidRoot(format!("s0 = {s0} gives non-positive surface gravity for k = {k}")));
    }
    let mass = 0.5 * (kf * s0 + s0.powi(3));
    let area = 4.0 * PI * s0 * s0;
    let scalar_curvature = 2.0 * kf / (s0 * s0);
    let bound = kappa / (4.0 * PI) * (1.0 - 2.0 / ((scalar_curvature + 6.0) / 2.0)) * area;
    Ok(ReferenceData { k, s0, mass, kappa, area, scalar_curvature, bound, identity_deviation: (bound - mass).abs() })
}
