//! Coordinate spheres and axisymmetric radial graphs `s = u(theta)`.
//!
//! Orientation is always outward from the enclosed region, i.e. toward
//! increasing `s`. Graphs need a round cross-section `(S^{n-1}, g_round)`.

mod csv;

pub use self::csv::{read_profile_csv, write_profile_csv};

use crate::error::{GeomError, Result};
use crate::models::{HorizonSide, StaticModel, WarpedChart};
use crate::numerics::cosine::{CosineSeries, Jet};
use crate::numerics::quad::{romberg, Quadrature};
use crate::numerics::unit_sphere_volume;
use serde::Serialize;
use std::f64::consts::PI;

/// Relative tolerance of every angular quadrature.
pub const QUAD_REL_TOL: f64 = 1e-12;
/// Profiles whose top-quarter spectrum carries more than this share are under-resolved.
pub const POLE_TAIL_LIMIT: f64 = 1e-6;
/// Below this `|sin theta|` the pole limit `cot(theta) u' -> u''` is used.
const POLE_ZONE: f64 = 1e-5;

/// Samples `u(theta_i)`, `theta_i = i pi / M`, with their even cosine interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    samples: Vec<f64>,
    series: CosineSeries,
}

impl Profile {
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(GeomError::InvalidInput(format!("profile needs at least 3 samples, got {}", samples.len())));
        }
        if let Some(bad) = samples.iter().find(|u| !(u.is_finite() && **u > 0.0)) {
            return Err(GeomError::InvalidInput(format!("profile value {bad} is not a positive radius")));
        }
        let series = CosineSeries::interpolate(&samples);
        Ok(Self { samples, series })
    }

    /// Samples `u` on a grid of `grid_size` intervals.
    pub fn from_fn<F: Fn(f64) -> f64>(grid_size: usize, u: F) -> Result<Self> {
        let m = grid_size.max(2);
        Self::from_samples((0..=m).map(|i| u(PI * i as f64 / m as f64)).collect())
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Number of grid intervals `M`.
    pub fn grid_size(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn theta(&self, i: usize) -> f64 {
        PI * i as f64 / self.grid_size() as f64
    }

    pub fn series(&self) -> &CosineSeries {
        &self.series
    }

    pub fn jet(&self, theta: f64) -> Jet {
        self.series.jet(theta)
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    fn check_resolved(&self) -> Result<()> {
        let tail = self.series.tail_fraction();
        if tail > POLE_TAIL_LIMIT {
            return Err(GeomError::PoleSingularity(format!(
                "profile spectrum tail {tail:e} on a {}-interval grid",
                self.grid_size()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Hypersurface {
    CoordinateSphere { s: f64 },
    AxisymGraph(Profile),
}

impl Hypersurface {
    pub fn sphere(s: f64) -> Self {
        Hypersurface::CoordinateSphere { s }
    }

    pub fn graph(profile: Profile) -> Self {
        Hypersurface::AxisymGraph(profile)
    }

    /// Smallest areal radius reached.
    pub fn min_radius(&self) -> f64 {
        match self {
            Hypersurface::CoordinateSphere { s } => *s,
            Hypersurface::AxisymGraph(p) => p.min(),
        }
    }

    pub fn max_radius(&self) -> f64 {
        match self {
            Hypersurface::CoordinateSphere { s } => *s,
            Hypersurface::AxisymGraph(p) => p.max(),
        }
    }

    /// Checks that the surface lies strictly inside the model domain.
    pub fn validate(&self, model: &StaticModel) -> Result<()> {
        match self {
            Hypersurface::CoordinateSphere { s } => model.check_inside(*s),
            Hypersurface::AxisymGraph(p) => {
                require_round_section(model)?;
                for u in p.samples() {
                    model.check_inside(*u)?;
                }
                Ok(())
            }
        }
    }
}

/// Inner boundary of a region `Omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerBoundary {
    Horizon(usize),
    /// `Omega` is a ball about the center of a space form.
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionSpec {
    pub inner: InnerBoundary,
    pub outer: Hypersurface,
}

impl RegionSpec {
    pub fn new(inner: InnerBoundary, outer: Hypersurface) -> Self {
        Self { inner, outer }
    }

    /// Areal radius of the inner boundary (0 for a ball).
    pub fn inner_radius(&self, model: &StaticModel) -> Result<f64> {
        match self.inner {
            InnerBoundary::Empty => {
                if !model.has_center() {
                    return Err(GeomError::RegionInvalid("model has no smooth center to bound a ball".into()));
                }
                Ok(0.0)
            }
            InnerBoundary::Horizon(index) => {
                let h = model
                    .horizon(index)
                    .map_err(|_| GeomError::RegionInvalid(format!("model has no horizon with index {index}")))?;
                if h.side != HorizonSide::Inner {
                    return Err(GeomError::RegionInvalid(format!("horizon {index} bounds the domain from above")));
                }
                Ok(h.s_root)
            }
        }
    }

    pub fn validate(&self, model: &StaticModel) -> Result<()> {
        let inner = self.inner_radius(model)?;
        self.outer.validate(model).map_err(|e| match e {
            GeomError::OutsideDomain { s, .. } => {
                GeomError::RegionInvalid(format!("outer surface reaches s = {s} outside the model domain"))
            }
            other => other,
        })?;
        if self.outer.min_radius() <= inner {
            return Err(GeomError::RegionInvalid(format!(
                "outer surface does not enclose the inner boundary at s = {inner}"
            )));
        }
        Ok(())
    }
}

fn require_round_section(model: &StaticModel) -> Result<()> {
    if model.has_round_section() {
        Ok(())
    } else {
        Err(GeomError::UnsupportedSection(format!(
            "axisymmetric graphs need the round unit sphere (k = {}, section volume {})",
            model.section_curvature(),
            model.section_volume
        )))
    }
}

/// Pointwise geometry of a surface in a chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointGeometry {
    pub theta: f64,
    /// Areal radius of the point.
    pub s: f64,
    /// Principal curvature along the meridian.
    pub kappa_theta: f64,
    /// Principal curvature along the `n-2` rotational directions.
    pub kappa_rot: f64,
    pub mean_curvature: f64,
    /// Area element per `d theta`, including the rotational factor.
    pub area_density: f64,
    pub potential: f64,
    /// `df(nu)` for the outward unit normal.
    pub normal_derivative: f64,
    /// Coordinate speed `d x / d t` of a unit normal speed.
    pub normal_to_radial: f64,
    /// `|A - H/(n-1) g|^2`.
    pub umbilicity: f64,
}

/// Geometry of the graph `x = w(theta)` where `w` is the chart image of the profile jet.
pub fn graph_point<C: WarpedChart + ?Sized>(chart: &C, jet: Jet, theta: f64) -> Result<PointGeometry> {
    let n = chart.n();
    let nf = n as f64;
    let w = chart.jet_from_areal(jet)?;
    let fr = chart.frame(w.value)?;
    let (a, b) = (fr.a, fr.b);
    let (w1, w2) = (w.d1, w.d2);
    let weight = (1.0 / a + w1 * w1 / (b * b)).sqrt();
    let sin = theta.sin();
    let cot_term = if sin.abs() < POLE_ZONE { w2 } else { w1 * theta.cos() / sin };
    let kappa_rot = (fr.db / (a * b) - cot_term / (b * b)) / weight;
    let kappa_theta = (fr.db / (a * a * b) + 2.0 * w1 * w1 * fr.db / (a * b * b * b)
        - fr.da * w1 * w1 / (2.0 * a * a * b * b)
        - w2 / (a * b * b))
        / weight.powi(3);
    let mean_curvature = kappa_theta + (nf - 2.0) * kappa_rot;
    let area_density = unit_sphere_volume(n - 2) * (a * w1 * w1 + b * b).sqrt() * (b * sin.abs()).powi(n as i32 - 2);
    let gap = kappa_theta - kappa_rot;
    Ok(PointGeometry {
        theta,
        s: jet.value,
        kappa_theta,
        kappa_rot,
        mean_curvature,
        area_density,
        potential: fr.f,
        normal_derivative: fr.df / (a * weight),
        normal_to_radial: weight,
        umbilicity: (nf - 2.0) / (nf - 1.0) * gap * gap,
    })
}

/// Geometry of the coordinate sphere of areal radius `s` (area element is the whole area).
fn sphere_point<C: WarpedChart + ?Sized>(chart: &C, s: f64) -> Result<PointGeometry> {
    let model = chart.model();
    let x = chart.radial_of_areal(s)?;
    let fr = chart.frame(x)?;
    let root_a = fr.a.sqrt();
    let kappa = fr.db / (root_a * fr.b);
    Ok(PointGeometry {
        theta: 0.0,
        s,
        kappa_theta: kappa,
        kappa_rot: kappa,
        mean_curvature: (model.n as f64 - 1.0) * kappa,
        area_density: fr.b.powi(model.n as i32 - 1) * model.section_volume,
        potential: fr.f,
        normal_derivative: fr.df / root_a,
        normal_to_radial: 1.0 / root_a,
        umbilicity: 0.0,
    })
}

/// Geometry at angle `theta` of any surface.
pub fn point_geometry<C: WarpedChart + ?Sized>(chart: &C, surface: &Hypersurface, theta: f64) -> Result<PointGeometry> {
    if !(0.0..=PI).contains(&theta) {
        return Err(GeomError::InvalidInput(format!("polar angle {theta} outside [0, pi]")));
    }
    match surface {
        Hypersurface::CoordinateSphere { s } => {
            let mut p = sphere_point(chart, *s)?;
            p.theta = theta;
            Ok(p)
        }
        Hypersurface::AxisymGraph(profile) => {
            require_round_section(chart.model())?;
            profile.check_resolved()?;
            graph_point(chart, profile.jet(theta), theta)
        }
    }
}

/// Integrates `integrand(point)` over the surface.
pub fn surface_integral<C, F>(chart: &C, surface: &Hypersurface, integrand: F) -> Result<Quadrature>
where
    C: WarpedChart + ?Sized,
    F: FnMut(&PointGeometry) -> Result<f64>,
{
    surface_integral_abs(chart, surface, integrand, 1e-300)
}

/// As [`surface_integral`] with an absolute error floor, for integrands that vanish identically on spheres.
fn surface_integral_abs<C, F>(chart: &C, surface: &Hypersurface, mut integrand: F, abs_tol: f64) -> Result<Quadrature>
where
    C: WarpedChart + ?Sized,
    F: FnMut(&PointGeometry) -> Result<f64>,
{
    surface.validate(chart.model())?;
    match surface {
        Hypersurface::CoordinateSphere { s } => {
            let p = sphere_point(chart, *s)?;
            Ok(Quadrature { value: integrand(&p)? * p.area_density, error: 0.0, intervals: 0 })
        }
        Hypersurface::AxisymGraph(profile) => {
            profile.check_resolved()?;
            romberg(
                |theta| {
                    let p = graph_point(chart, profile.jet(theta), theta)?;
                    Ok(integrand(&p)? * p.area_density)
                },
                0.0,
                PI,
                QUAD_REL_TOL,
                abs_tol,
            )
        }
    }
}

pub fn area<C: WarpedChart + ?Sized>(chart: &C, surface: &Hypersurface) -> Result<Quadrature> {
    surface_integral(chart, surface, |_| Ok(1.0))
}

pub fn mean_curvature<C: WarpedChart + ?Sized>(chart: &C, surface: &Hypersurface, theta: f64) -> Result<f64> {
    surface.validate(chart.model())?;
    Ok(point_geometry(chart, surface, theta)?.mean_curvature)
}

/// Minimum of `H` over the grid samples (the sphere value for spheres).
pub fn min_mean_curvature<C: WarpedChart + ?Sized>(chart: &C, surface: &Hypersurface) -> Result<f64> {
    surface.validate(chart.model())?;
    match surface {
        Hypersurface::CoordinateSphere { s } => Ok(sphere_point(chart, *s)?.mean_curvature),
        Hypersurface::AxisymGraph(profile) => {
            profile.check_resolved()?;
            let mut min = f64::INFINITY;
            for i in 0..=profile.grid_size() {
                let theta = profile.theta(i);
                min = min.min(graph_point(chart, profile.jet(theta), theta)?.mean_curvature);
            }
            Ok(min)
        }
    }
}

pub fn is_mean_convex<C: WarpedChart + ?Sized>(chart: &C, surface: &Hypersurface) -> Result<bool> {
    Ok(min_mean_curvature(chart, surface)? > 0.0)
}

fn require_mean_convex<C: WarpedChart + ?Sized>(chart: &C, surface: &Hypersurface) -> Result<()> {
    let h = min_mean_curvature(chart, surface)?;
    if h > 0.0 {
        Ok(())
    } else {
        Err(GeomError::NotMeanConvex(format!("minimum sampled H = {h}")))
    }
}

/// `integral_Sigma f / H dmu`.
pub fn integral_f_over_h<C: WarpedChart + ?Sized>(chart: &C, surface: &Hypersurface) -> Result<Quadrature> {
    require_mean_convex(chart, surface)?;
    surface_integral(chart, surface, |p| {
        if p.mean_curvature > 0.0 {
            Ok(p.potential / p.mean_curvature)
        } else {
            Err(GeomError::NotMeanConvex(format!("H = {} at theta = {}", p.mean_curvature, p.theta)))
        }
    })
}

/// `integral_Sigma f H dmu`.
pub fn integral_fh<C: WarpedChart + ?Sized>(chart: &C, surface: &Hypersurface) -> Result<Quadrature> {
    surface_integral(chart, surface, |p| Ok(p.potential * p.mean_curvature))
}

/// `integral_Sigma df(nu) dmu`.
pub fn flux_integral<C: WarpedChart + ?Sized>(chart: &C, surface: &Hypersurface) -> Result<Quadrature> {
    surface_integral(chart, surface, |p| Ok(p.normal_derivative))
}

/// `integral_Sigma |A - H/(n-1) g|^2 dmu`.
///
/// The error floor is `QUAD_REL_TOL` times `integral H^2/(n-1)`.
pub fn umbilicity_deficit<C: WarpedChart + ?Sized>(chart: &C, surface: &Hypersurface) -> Result<Quadrature> {
    let nf = chart.n() as f64;
    let scale = surface_integral(chart, surface, |p| Ok(p.mean_curvature * p.mean_curvature / (nf - 1.0)))?;
    surface_integral_abs(chart, surface, |p| Ok(p.umbilicity), QUAD_REL_TOL * scale.value)
}

/// `n integral_Omega f dvol`.
pub fn bulk_integral<C: WarpedChart + ?Sized>(chart: &C, region: &RegionSpec) -> Result<Quadrature> {
    let model = chart.model();
    region.validate(model)?;
    let inner = chart.radial_of_areal(region.inner_radius(model)?)?;
    match &region.outer {
        Hypersurface::CoordinateSphere { s } => {
            let outer = chart.radial_of_areal(*s)?;
            Ok(Quadrature { value: model.section_volume * chart.radial_bulk(inner, outer)?, error: 0.0, intervals: 0 })
        }
        Hypersurface::AxisymGraph(profile) => {
            let n = model.n as i32;
            let omega = unit_sphere_volume(model.n - 2);
            romberg(
                |theta| {
                    let outer = chart.radial_of_areal(profile.jet(theta).value)?;
                    Ok(omega * theta.sin().powi(n - 2) * chart.radial_bulk(inner, outer)?)
                },
                0.0,
                PI,
                QUAD_REL_TOL,
                1e-300,
            )
        }
    }
}

/// Smallest potential over the surface samples divided by the largest: a
/// conditioning indicator that tends to 0 as the surface nears a horizon.
pub fn horizon_proximity(model: &StaticModel, surface: &Hypersurface) -> f64 {
    let fmin = model.potential(surface.min_radius());
    let fmax = model.potential(surface.max_radius());
    let (lo, hi) = if fmin <= fmax { (fmin, fmax) } else { (fmax, fmin) };
    lo / hi
}

/// Legendre polynomial `P_l(x)` by the three-term recurrence.
pub fn legendre(l: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return p0;
    }
    for k in 1..l {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `u(theta) = s0 (1 + amplitude P_l(cos theta))`, checked for mean convexity in `chart`.
pub fn perturb_sphere<C: WarpedChart + ?Sized>(
    chart: &C,
    s0: f64,
    amplitude: f64,
    mode: usize,
    grid_size: usize,
) -> Result<Hypersurface> {
    if amplitude == 0.0 {
        let surface = Hypersurface::sphere(s0);
        surface.validate(chart.model())?;
        return Ok(surface);
    }
    let profile = Profile::from_fn(grid_size, |t| s0 * (1.0 + amplitude * legendre(mode, t.cos())))?;
    let surface = Hypersurface::graph(profile);
    surface.validate(chart.model())?;
    require_mean_convex(chart, &surface)?;
    Ok(surface)
}

#[cfg(test)]
mod tests;
