//! Inverse mean curvature flow of coordinate spheres and axisymmetric graphs,
//! and the area-normalized functional `Q` along it.
//!
//! A graph `s = u(theta, t)` moving with unit-normal speed `1/H` has
//! coordinate speed `u_t = W/H`, `W = |d(s - u)|_g`.

use crate::error::{GeomError, Result};
use crate::hypersurfaces::{
    area, bulk_integral, graph_point, integral_fh, min_mean_curvature, umbilicity_deficit, Hypersurface, InnerBoundary,
    Profile, RegionSpec,
};
use crate::models::{ModelConfig, StaticModel};
use crate::numerics::cosine::Jet;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

/// Number of sampling intervals of a trace.
pub const TRACE_SAMPLES: usize = 64;
/// Explicit-step safety factor.
pub const CFL: f64 = 0.2;
/// Relative distance to a domain end that counts as leaving the domain.
pub const EXIT_GAP: f64 = 1e-6;
/// Step budget of one flow.
pub const MAX_STEPS: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub surface: Hypersurface,
    pub area: f64,
    /// Present only in backgrounds with `epsilon = -1`.
    pub q: Option<f64>,
    pub min_h: f64,
    pub umbilicity_deficit: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct MonotoneViolations {
    /// Consecutive samples with `Q(t_{k+1}) > Q(t_k)`.
    pub count: usize,
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace {
    pub states: Vec<FlowState>,
    /// Largest time step taken.
    pub dt: f64,
    pub grid: usize,
    pub monotone_violations: MonotoneViolations,
    /// Reason the flow stopped early; the states up to that time are kept.
    pub stopped: Option<GeomError>,
}

impl FlowTrace {
    fn new(states: Vec<FlowState>, dt: f64, grid: usize, stopped: Option<GeomError>) -> Self {
        let mut v = MonotoneViolations::default();
        for w in states.windows(2) {
            if let (Some(a), Some(b)) = (w[0].q, w[1].q) {
                if b > a {
                    v.count += 1;
                    v.worst = v.worst.max(b - a);
                }
            }
        }
        FlowTrace { states, dt, grid, monotone_violations: v, stopped }
    }

    pub fn last(&self) -> &FlowState {
        self.states.last().expect("traces hold the initial state")
    }

    /// The trace, or the error that stopped it.
    pub fn complete(&self) -> Result<&Self> {
        match &self.stopped {
            Some(e) => Err(e.clone()),
            None => Ok(self),
        }
    }

    /// Largest relative deviation from `area(t) = e^t area(0)`.
    pub fn area_law_error(&self) -> f64 {
        let a0 = self.states[0].area;
        self.states.iter().map(|s| (s.area - s.t.exp() * a0).abs() / (s.t.exp() * a0)).fold(0.0, f64::max)
    }

    /// CSV with the model and grid in header comments, then `t,area,Q,min_H,umbilicity_deficit`.
    pub fn write_csv<W: Write>(&self, model: &StaticModel, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| GeomError::InvalidInput(format!("writing trace: {e}"));
        let config = serde_json::to_string(&ModelConfig::from_model(model))
            .map_err(|e| GeomError::InvalidInput(e.to_string()))?;
        writeln!(out, "# model: {config}").map_err(io)?;
        writeln!(out, "# grid: {}, dt: {:.16e}", self.grid, self.dt).map_err(io)?;
        if let Some(e) = &self.stopped {
            writeln!(out, "# stopped: {e}").map_err(io)?;
        }
        writeln!(out, "# t,area,Q,min_H,umbilicity_deficit").map_err(io)?;
        for s in &self.states {
            let q = s.q.map_or_else(|| "nan".to_string(), |q| format!("{q:.16e}"));
            writeln!(out, "{:.16e},{:.16e},{},{:.16e},{:.16e}", s.t, s.area, q, s.min_h, s.umbilicity_deficit)
                .map_err(io)?;
        }
        Ok(())
    }
}

/// `(n-1)/(n-2) (2 - n(n-1)/((R^N + n(n-1))/2)) kappa vol(N)` for the inner horizon.
pub fn q_horizon_constant(model: &StaticModel) -> Result<f64> {
    let (_, h) = model.inner_horizon().ok_or_else(|| GeomError::NoHorizon("Q needs an inner horizon".into()))?;
    if !h.admissible {
        return Err(GeomError::HorizonInadmissible {
            scalar_curvature: h.scalar_curvature,
            threshold: model.scalar_curvature(),
        });
    }
    let nf = model.n as f64;
    let top = (h.scalar_curvature + nf * (nf - 1.0)) / 2.0;
    Ok((nf - 1.0) / (nf - 2.0) * (2.0 - nf * (nf - 1.0) / top) * h.kappa * h.volume)
}

/// `|Sigma|^{-(n-2)/(n-1)} (int f H - (n-1) n int_Omega f + C)`.
pub fn q_functional(model: &StaticModel, region: &RegionSpec) -> Result<f64> {
    if model.epsilon != -1 {
        return Err(GeomError::WrongCosmologicalSign(model.epsilon));
    }
    if !matches!(region.inner, InnerBoundary::Horizon(_)) {
        return Err(GeomError::RegionInvalid("Q is defined on regions bounded by the horizon".into()));
    }
    let nf = model.n as f64;
    let a = area(model, &region.outer)?.value;
    let fh = integral_fh(model, &region.outer)?.value;
    let bulk = bulk_integral(model, region)?.value;
    Ok(a.powf(-(nf - 2.0) / (nf - 1.0)) * (fh - (nf - 1.0) * bulk + q_horizon_constant(model)?))
}

fn sample_state(model: &StaticModel, t: f64, surface: Hypersurface) -> Result<FlowState> {
    let q = if model.epsilon == -1 {
        Some(q_functional(model, &RegionSpec::new(InnerBoundary::Horizon(0), surface.clone()))?)
    } else {
        None
    };
    Ok(FlowState {
        t,
        area: area(model, &surface)?.value,
        min_h: min_mean_curvature(model, &surface)?,
        umbilicity_deficit: umbilicity_deficit(model, &surface)?.value,
        q,
        surface,
    })
}

fn sample_times(t_end: f64) -> impl Iterator<Item = f64> {
    (0..=TRACE_SAMPLES).map(move |i| t_end * i as f64 / TRACE_SAMPLES as f64)
}

/// Closed-form flow `s(t) = s0 e^{t/(n-1)}` of a coordinate sphere.
pub fn flow_sphere_analytic(model: &StaticModel, s0: f64, t_end: f64) -> Result<FlowTrace> {
    if !(t_end >= 0.0) {
        return Err(GeomError::InvalidInput(format!("flow time {t_end} must be non-negative")));
    }
    model.check_inside(s0)?;
    let rate = 1.0 / (model.n as f64 - 1.0);
    let (_, hi) = model.s_domain;
    let s_end = s0 * (rate * t_end).exp();
    if !model.contains(s_end) {
        return Err(GeomError::DomainExit { t: (hi / s0).ln() / rate });
    }
    let states = sample_times(t_end)
        .map(|t| sample_state(model, t, Hypersurface::sphere(s0 * (rate * t).exp())))
        .collect::<Result<Vec<_>>>()?;
    Ok(FlowTrace::new(states, t_end / TRACE_SAMPLES as f64, 0, None))
}

/// Method-of-lines IMCF for an axisymmetric graph.
struct GraphFlow<'a> {
    model: &'a StaticModel,
    m: usize,
    h: f64,
}

impl GraphFlow<'_> {
    /// Even reflection about both poles.
    fn at(u: &[f64], i: isize) -> f64 {
        let m = u.len() as isize - 1;
        let j = if i < 0 {
            -i
        } else if i > m {
            2 * m - i
        } else {
            i
        };
        u[j as usize]
    }

    /// `u_t` at every node and `min_i s_i^2 H_i^2`.
    fn velocity(&self, u: &[f64], t: f64) -> Result<(Vec<f64>, f64)> {
        let (lo, hi) = self.model.s_domain;
        let mut out = Vec::with_capacity(u.len());
        let mut scale = f64::INFINITY;
        for i in 0..=self.m {
            let k = i as isize;
            let (um2, um1, u0, up1, up2) =
                (Self::at(u, k - 2), Self::at(u, k - 1), u[i], Self::at(u, k + 1), Self::at(u, k + 2));
            // the flow is not continued within EXIT_GAP of a horizon
            if !(u0 > lo * (1.0 + EXIT_GAP) && u0 < hi * (1.0 - EXIT_GAP)) {
                return Err(GeomError::DomainExit { t });
            }
            let d1 = (um2 - 8.0 * um1 + 8.0 * up1 - up2) / (12.0 * self.h);
            let d2 = (-um2 + 16.0 * um1 - 30.0 * u0 + 16.0 * up1 - up2) / (12.0 * self.h * self.h);
            let theta = if i == self.m { PI } else { i as f64 * self.h };
            let p = graph_point(self.model, Jet { value: u0, d1, d2 }, theta)?;
            if !(p.mean_curvature > 0.0) {
                return Err(GeomError::MeanConvexityLost { t });
            }
            out.push(p.normal_to_radial / p.mean_curvature);
            scale = scale.min(u0 * u0 * p.mean_curvature * p.mean_curvature);
        }
        Ok((out, scale))
    }

    fn rk4(&self, u: &[f64], t: f64, dt: f64, k1: &[f64]) -> Result<Vec<f64>> {
        let shift = |base: &[f64], k: &[f64], c: f64| base.iter().zip(k).map(|(b, k)| b + c * k).collect::<Vec<_>>();
        let k2 = self.velocity(&shift(u, k1, dt / 2.0), t + dt / 2.0)?.0;
        let k3 = self.velocity(&shift(u, &k2, dt / 2.0), t + dt / 2.0)?.0;
        let k4 = self.velocity(&shift(u, &k3, dt), t + dt)?.0;
        Ok((0..u.len()).map(|i| u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect())
    }
}

/// Flows `initial` (a graph on `grid` intervals, or a sphere resampled onto
/// it) to time `t_end` with at least `steps` explicit RK4 steps.
///
/// Losing mean convexity or leaving the domain stops the flow; the trace up to
/// the last sample is returned with `stopped` set.
pub fn flow_axisym(
    model: &StaticModel,
    initial: &Hypersurface,
    t_end: f64,
    steps: usize,
    grid: usize,
) -> Result<FlowTrace> {
    if !(t_end >= 0.0) || steps == 0 || grid < 4 {
        return Err(GeomError::InvalidInput(format!(
            "flow needs T >= 0, steps > 0 and grid >= 4 (T = {t_end}, steps = {steps}, grid = {grid})"
        )));
    }
    initial.validate(model)?;
    let profile = match initial {
        Hypersurface::CoordinateSphere { s } => Profile::from_fn(grid, |_| *s)?,
        Hypersurface::AxisymGraph(p) if p.grid_size() == grid => p.clone(),
        Hypersurface::AxisymGraph(p) => Profile::from_fn(grid, |theta| p.jet(theta).value)?,
    };
    let nf = model.n as f64;
    let flow = GraphFlow { model, m: grid, h: PI / grid as f64 };
    let mut u = profile.samples().to_vec();
    let first = Hypersurface::graph(profile);
    if !(min_mean_curvature(model, &first)? > 0.0) {
        return Err(GeomError::NotMeanConvex("initial surface".into()));
    }
    let mut states = vec![sample_state(model, 0.0, first)?];
    let mut t = 0.0;
    let mut dt_max: f64 = 0.0;
    let cap = t_end / steps as f64;
    let mut taken = 0;
    for target in sample_times(t_end).skip(1) {
        while t < target {
            taken += 1;
            if taken > MAX_STEPS {
                return Err(GeomError::OdeFailure(format!("flow step budget exhausted at t = {t}")));
            }
            let step = match flow.velocity(&u, t) {
                Ok((k1, scale)) => {
                    let dt = (CFL * flow.h * flow.h * scale / (nf - 1.0)).min(cap);
                    let dt = if t + dt >= target * (1.0 - 1e-14) { target - t } else { dt };
                    flow.rk4(&u, t, dt, &k1).map(|next| (next, dt))
                }
                Err(e) => Err(e),
            };
            match step {
                Ok((next, dt)) => {
                    u = next;
                    t = if t + dt >= target { target } else { t + dt };
                    dt_max = dt_max.max(dt);
                }
                Err(e @ (GeomError::MeanConvexityLost { .. } | GeomError::DomainExit { .. })) => {
                    return Ok(FlowTrace::new(states, dt_max, grid, Some(e)));
                }
                Err(e) => return Err(e),
            }
        }
        let surface = Hypersurface::graph(Profile::from_samples(u.clone())?);
        states.push(sample_state(model, t, surface)?);
    }
    Ok(FlowTrace::new(states, dt_max, grid, None))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub q0: f64,
    /// Largest `Q(t_{k+1}) - Q(t_k)` (negative when strictly decreasing).
    pub max_increase: f64,
    pub tol: f64,
    pub violations: MonotoneViolations,
    pub passed: bool,
}

/// Default tolerance `1e-5 |Q(0)|`.
pub fn default_flow_tol(trace: &FlowTrace) -> f64 {
    1e-5 * trace.states[0].q.unwrap_or(0.0).abs()
}

pub fn q_monotonicity(trace: &FlowTrace, tol: f64) -> Result<MonotonicityReport> {
    let qs = trace
        .states
        .iter()
        .map(|s| s.q.ok_or_else(|| GeomError::InvalidInput("trace carries no Q values".into())))
        .collect::<Result<Vec<_>>>()?;
    let max_increase = qs.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    let max_increase = if qs.len() < 2 { 0.0 } else { max_increase };
    Ok(MonotonicityReport {
        q0: qs[0],
        max_increase,
        tol,
        violations: trace.monotone_violations,
        passed: max_increase <= tol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HEvolutionReport {
    pub times: Vec<f64>,
    /// `dH/dt` by differencing `H(s(t))` in `t`.
    pub dh_dt: Vec<f64>,
    /// `-(|A|^2 + Ric(nu, nu)) / H`.
    pub predicted: Vec<f64>,
    pub max_relative_error: f64,
    /// Largest `||A|^2 - H^2/(n-1)|` over the sampled times.
    pub umbilic_defect: f64,
    pub passed: bool,
}

/// Number of sampled times in `[0, 1]`.
pub const H_EVOLUTION_SAMPLES: usize = 10;

/// Checks the mean-curvature evolution along the analytic sphere flow from `s0`.
pub fn h_evolution_check(model: &StaticModel, s0: f64) -> Result<HEvolutionReport> {
    model.check_inside(s0)?;
    let nf = model.n as f64;
    let s_of = |t: f64| s0 * (t / (nf - 1.0)).exp();
    let h_of = |t: f64| -> Result<f64> {
        let s = s_of(t);
        model.check_inside(s)?;
        Ok((nf - 1.0) * model.potential(s) / s)
    };
    let step = 1e-3;
    let mut report = HEvolutionReport {
        times: vec![],
        dh_dt: vec![],
        predicted: vec![],
        max_relative_error: 0.0,
        umbilic_defect: 0.0,
        passed: false,
    };
    for i in 0..H_EVOLUTION_SAMPLES {
        let t = i as f64 / (H_EVOLUTION_SAMPLES - 1) as f64;
        let dh = (h_of(t - 2.0 * step)? - 8.0 * h_of(t - step)? + 8.0 * h_of(t + step)? - h_of(t + 2.0 * step)?)
            / (12.0 * step);
        let s = s_of(t);
        let h = h_of(t)?;
        // principal curvatures of a coordinate sphere are all f/s
        let kappa = model.potential(s) / s;
        let a2 = (nf - 1.0) * kappa * kappa;
        let predicted = -(a2 + model.ricci_radial(s)) / h;
        report.max_relative_error = report.max_relative_error.max((dh - predicted).abs() / predicted.abs());
        report.umbilic_defect = report.umbilic_defect.max((a2 - h * h / (nf - 1.0)).abs());
        report.times.push(t);
        report.dh_dt.push(dh);
        report.predicted.push(predicted);
    }
    report.passed = report.max_relative_error <= 1e-6;
    Ok(report)
}
