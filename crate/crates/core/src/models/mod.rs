//! Explicit warped-product static manifolds.
//!
//! Every family is stored in the areal chart
//! `g = f(s)^{-2} ds^2 + s^2 g0`, with `f(s)^2 = k - eps s^2 - mu s^{2-n}` and
//! `(N, g0)` an Einstein manifold with `Ric(g0) = (n-2) k g0`.

mod brendle;
mod chart;
mod config;
mod residual;

pub use brendle::{BrendleChart, BrendleOrigin};
pub use chart::{RadialFrame, WarpedChart};
pub use config::{ModelConfig, ModelParams};
pub use residual::{sample_radii, static_residual, ResidualReport};

use crate::error::{GeomError, Result};
use crate::numerics::roots::{bisect, newton_polish};
use crate::numerics::unit_sphere_volume;
use serde::Serialize;

/// The model families with their dimensionless parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Round sphere / Euclidean / hyperbolic space with `f = cos r, 1, cosh r`.
    SpaceForm {
        epsilon: i32,
    },
    Schwarzschild {
        m: f64,
    },
    DeSitterSchwarzschild {
        m: f64,
    },
    Kottler {
        k: i32,
        m: f64,
    },
}

impl Family {
    pub fn epsilon(&self) -> i32 {
        match *self {
            Family::SpaceForm { epsilon } => epsilon,
            Family::Schwarzschild { .. } => 0,
            Family::DeSitterSchwarzschild { .. } => 1,
            Family::Kottler { .. } => -1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::SpaceForm { .. } => "space_form",
            Family::Schwarzschild { .. } => "schwarzschild",
            Family::DeSitterSchwarzschild { .. } => "de_sitter_schwarzschild",
            Family::Kottler { .. } => "kottler",
        }
    }
}

/// Upper end of the admissible de Sitter-Schwarzschild mass range.
pub fn dss_critical_mass(n: usize) -> f64 {
    let nf = n as f64;
    2.0 / (nf - 2.0) * ((nf - 2.0) / nf).powf(nf / 2.0)
}

/// `f^2 = k - eps s^2 - mu s^{2-n}` and its derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lapse {
    pub n: usize,
    pub k: f64,
    pub eps: f64,
    pub mu: f64,
}

impl Lapse {
    fn mass_power(&self) -> i32 {
        2 - self.n as i32
    }

    pub fn value(&self, s: f64) -> f64 {
        self.k - self.eps * s * s - self.mu * s.powi(self.mass_power())
    }

    pub fn d1(&self, s: f64) -> f64 {
        let p = self.mass_power();
        -2.0 * self.eps * s - self.mu * p as f64 * s.powi(p - 1)
    }

    pub fn d2(&self, s: f64) -> f64 {
        let p = self.mass_power();
        -2.0 * self.eps - self.mu * (p * (p - 1)) as f64 * s.powi(p - 2)
    }

    /// `f^2(root + delta) - f^2(root)` without cancellation for small `delta`.
    pub fn increment(&self, root: f64, delta: f64) -> f64 {
        let p = self.mass_power() as f64;
        let quad = -self.eps * delta * (2.0 * root + delta);
        let mass = -self.mu * root.powf(p) * (p * (delta / root).ln_1p()).exp_m1();
        quad + mass
    }

    /// Positive stationary point of `f^2`, when one exists.
    pub fn stationary_point(&self) -> Option<f64> {
        // -2 eps s + (n-2) mu s^{1-n} = 0
        let ratio = (self.n as f64 - 2.0) * self.mu / (2.0 * self.eps);
        (self.eps != 0.0 && ratio > 0.0).then(|| ratio.powf(1.0 / self.n as f64))
    }
}

/// Which end of the radial domain a horizon bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HorizonSide {
    /// Lower end: `f` increases into the domain (black-hole type).
    Inner,
    /// Upper end: `f` decreases into the boundary (cosmological type).
    Outer,
}

/// A boundary component `{f = 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Horizon {
    pub s_root: f64,
    /// Surface gravity `|Df|_g`.
    pub kappa: f64,
    /// Scalar curvature of the induced metric.
    pub scalar_curvature: f64,
    pub volume: f64,
    /// `R^N > eps n (n-1)`.
    pub admissible: bool,
    pub side: HorizonSide,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticModel {
    pub family: Family,
    pub n: usize,
    pub epsilon: i32,
    pub section_volume: f64,
    pub lapse: Lapse,
    /// Open interval of valid `s`; endpoints are horizons, the center `0`, or infinity.
    pub s_domain: (f64, f64),
    horizons: Vec<Horizon>,
}

/// Builds and validates a model.
pub fn build_model(family: Family, n: usize, section_volume: Option<f64>) -> Result<StaticModel> {
    if n < 3 {
        return Err(GeomError::ParameterOutOfRange(format!("dimension n = {n} must be at least 3")));
    }
    let section_volume = section_volume.unwrap_or_else(|| unit_sphere_volume(n - 1));
    if !(section_volume > 0.0 && section_volume.is_finite()) {
        return Err(GeomError::ParameterOutOfRange(format!("section volume {section_volume} must be positive")));
    }
    let lapse = match family {
        Family::SpaceForm { epsilon } => {
            if !(-1..=1).contains(&epsilon) {
                return Err(GeomError::ParameterOutOfRange(format!("epsilon = {epsilon}")));
            }
            Lapse { n, k: 1.0, eps: epsilon as f64, mu: 0.0 }
        }
        Family::Schwarzschild { m } => {
            if !(m > 0.0 && m.is_finite()) {
                return Err(GeomError::ParameterOutOfRange(format!("Schwarzschild mass {m} must be positive")));
            }
            Lapse { n, k: 1.0, eps: 0.0, mu: 2.0 * m }
        }
        Family::DeSitterSchwarzschild { m } => {
            let crit = dss_critical_mass(n);
            if !(m > 0.0 && m < crit) {
                return Err(GeomError::ParameterOutOfRange(format!(
                    "de Sitter-Schwarzschild mass {m} outside (0, {crit})"
                )));
            }
            Lapse { n, k: 1.0, eps: 1.0, mu: m }
        }
        Family::Kottler { k, m } => {
            if !(-1..=1).contains(&k) || !m.is_finite() {
                return Err(GeomError::ParameterOutOfRange(format!("Kottler k = {k}, m = {m}")));
            }
            Lapse { n, k: k as f64, eps: -1.0, mu: 2.0 * m }
        }
    };
    let mut model = StaticModel {
        family,
        n,
        epsilon: family.epsilon(),
        section_volume,
        lapse,
        s_domain: (0.0, f64::INFINITY),
        horizons: Vec::new(),
    };
    let roots = lapse_roots(&lapse)?;
    let (domain, horizons) = domain_from_roots(&model, &roots)?;
    model.s_domain = domain;
    model.horizons = horizons;
    Ok(model)
}

/// Sorted positive zeros of `f^2`, bracketed on a 256-point log grid
/// augmented with the stationary point of `f^2`.
fn lapse_roots(lapse: &Lapse) -> Result<Vec<f64>> {
    let n = lapse.n as f64;
    let mut scales = vec![];
    if lapse.k != 0.0 && lapse.eps != 0.0 {
        scales.push((lapse.k / lapse.eps).abs().sqrt());
    }
    if lapse.mu != 0.0 {
        if lapse.k != 0.0 {
            scales.push((lapse.mu / lapse.k).abs().powf(1.0 / (n - 2.0)));
        }
        if lapse.eps != 0.0 {
            scales.push((lapse.mu / lapse.eps).abs().powf(1.0 / n));
        }
    }
    if scales.is_empty() {
        return Ok(Vec::new());
    }
    let lo = scales.iter().cloned().fold(f64::INFINITY, f64::min) * 1e-3;
    let hi = scales.iter().cloned().fold(0.0, f64::max) * 1e3;
    const POINTS: usize = 256;
    let ratio = (hi / lo).ln() / (POINTS - 1) as f64;
    let mut grid: Vec<f64> = (0..POINTS).map(|i| lo * (ratio * i as f64).exp()).collect();
    if let Some(sp) = lapse.stationary_point() {
        if sp > lo && sp < hi {
            grid.push(sp);
            grid.sort_by(|a, b| a.total_cmp(b));
        }
    }
    let f = |s: f64| lapse.value(s);
    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() != fb.signum() && fb != 0.0 {
            let r = bisect(f, a, b, 1e-13)?;
            roots.push(newton_polish(f, |s| lapse.d1(s), r, a, b));
        }
    }
    if let Some(&last) = grid.last() {
        if f(last) == 0.0 {
            roots.push(last);
        }
    }
    Ok(roots)
}

fn domain_from_roots(model: &StaticModel, roots: &[f64]) -> Result<((f64, f64), Vec<Horizon>)> {
    let lapse = &model.lapse;
    // sign of f^2 at infinity and near zero
    let positive_at_infinity = lapse.eps < 0.0 || (lapse.eps == 0.0 && lapse.k > 0.0);
    let (lo, hi) = if positive_at_infinity {
        match roots.last() {
            Some(&r) => (r, f64::INFINITY),
            None => {
                if lapse.mu != 0.0 {
                    return Err(GeomError::NoHorizon(format!(
                        "f^2 = {} - ({}) s^2 - {} s^(2-n) has no positive zero",
                        lapse.k, lapse.eps, lapse.mu
                    )));
                }
                (0.0, f64::INFINITY)
            }
        }
    } else {
        // f^2 negative at infinity: domain is the last positive interval
        match roots.len() {
            0 => return Err(GeomError::NoHorizon("f^2 is nowhere positive".into())),
            1 => {
                if lapse.mu > 0.0 {
                    return Err(GeomError::NoHorizon("f^2 has a single zero and a mass term".into()));
                }
                (0.0, roots[0])
            }
            len => (roots[len - 2], roots[len - 1]),
        }
    };
    let mut horizons = Vec::new();
    if lo > 0.0 {
        horizons.push(model.horizon_at(lo, HorizonSide::Inner));
    }
    if hi.is_finite() {
        horizons.push(model.horizon_at(hi, HorizonSide::Outer));
    }
    for h in &horizons {
        if !(h.kappa > 0.0) {
            return Err(GeomError::RootFindingFailed(format!(
                "degenerate horizon at s = {} (kappa = {})",
                h.s_root, h.kappa
            )));
        }
    }
    Ok(((lo, hi), horizons))
}

/// Locates the horizons of a model by bracketing and bisection.
pub fn find_horizons(model: &StaticModel) -> Result<Vec<Horizon>> {
    let roots = lapse_roots(&model.lapse)?;
    Ok(domain_from_roots(model, &roots)?.1)
}

/// `Ric(d_r, d_r)` on the horizon, from the Gauss equation on a totally geodesic `N`.
pub fn ricci_rr_at_horizon(model: &StaticModel, horizon: &Horizon) -> f64 {
    let n = model.n as f64;
    (model.epsilon as f64 * n * (n - 1.0) - horizon.scalar_curvature) / 2.0
}

impl StaticModel {
    pub fn horizons(&self) -> &[Horizon] {
        &self.horizons
    }

    pub fn horizon(&self, index: usize) -> Result<&Horizon> {
        self.horizons
            .get(index)
            .ok_or(GeomError::HorizonCountMismatch { expected: index + 1, found: self.horizons.len() })
    }

    /// The inner (black-hole type) horizon, if the model has one.
    pub fn inner_horizon(&self) -> Option<(usize, &Horizon)> {
        self.horizons.iter().enumerate().find(|(_, h)| h.side == HorizonSide::Inner)
    }

    /// Scalar curvature `eps n (n-1)` forced by the static equations.
    pub fn scalar_curvature(&self) -> f64 {
        let n = self.n as f64;
        self.epsilon as f64 * n * (n - 1.0)
    }

    /// Whether the model has a smooth center at `s = 0` (space forms).
    pub fn has_center(&self) -> bool {
        self.s_domain.0 == 0.0
    }

    pub fn contains(&self, s: f64) -> bool {
        s > self.s_domain.0 && s < self.s_domain.1
    }

    pub fn check_inside(&self, s: f64) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(GeomError::OutsideDomain { s, lo: self.s_domain.0, hi: self.s_domain.1 })
        }
    }

    pub fn potential(&self, s: f64) -> f64 {
        self.lapse.value(s).max(0.0).sqrt()
    }

    /// `df/ds`.
    pub fn potential_d1(&self, s: f64) -> f64 {
        self.lapse.d1(s) / (2.0 * self.potential(s))
    }

    /// `d^2 f/ds^2`.
    pub fn potential_d2(&self, s: f64) -> f64 {
        let f = self.potential(s);
        let v1 = self.lapse.d1(s);
        (2.0 * self.lapse.d2(s) * f * f - v1 * v1) / (4.0 * f * f * f)
    }

    /// Sectional curvature of planes containing the radial direction.
    pub fn radial_sectional_curvature(&self, s: f64) -> f64 {
        let n = self.n as f64;
        self.lapse.eps - (n - 2.0) * self.lapse.mu * s.powi(-(self.n as i32)) / 2.0
    }

    /// Tangential curvature term `(k - f^2)/s^2`.
    pub fn tangential_curvature(&self, s: f64) -> f64 {
        self.lapse.eps + self.lapse.mu * s.powi(-(self.n as i32))
    }

    /// `Ric(e_r, e_r)` at radius `s`.
    pub fn ricci_radial(&self, s: f64) -> f64 {
        (self.n as f64 - 1.0) * self.radial_sectional_curvature(s)
    }

    /// `Ric(e, e)` for a unit tangent `e` of the cross-section.
    pub fn ricci_tangential(&self, s: f64) -> f64 {
        self.radial_sectional_curvature(s) + (self.n as f64 - 2.0) * self.tangential_curvature(s)
    }

    /// Curvature constant of the cross-section, `Ric(g0) = (n-2) k g0`.
    pub fn section_curvature(&self) -> f64 {
        self.lapse.k
    }

    /// Whether the cross-section is the round unit sphere (axisymmetric graphs need it).
    pub fn has_round_section(&self) -> bool {
        let omega = unit_sphere_volume(self.n - 1);
        self.lapse.k == 1.0 && (self.section_volume - omega).abs() <= 1e-12 * omega
    }

    fn horizon_at(&self, s_root: f64, side: HorizonSide) -> Horizon {
        let n = self.n as f64;
        let kappa = 0.5 * self.lapse.d1(s_root).abs();
        let scalar_curvature = (n - 1.0) * (n - 2.0) * self.lapse.k / (s_root * s_root);
        Horizon {
            s_root,
            kappa,
            scalar_curvature,
            volume: s_root.powi(self.n as i32 - 1) * self.section_volume,
            admissible: scalar_curvature > self.scalar_curvature(),
            side,
        }
    }
}
