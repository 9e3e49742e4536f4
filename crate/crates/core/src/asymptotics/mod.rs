//! Conformal compactification of the hyperbolic-type models and extraction
//! of the boundary expansion.
//!
//! The defining function solves `d(ln rho)/ds = -1/f`. It is stored as
//! `psi = ln rho - ln rho0`, with `rho0 = 2/(sqrt(s^2 + k) + s)` the exact
//! massless solution, so that `psi = O(s^{-n})` keeps full relative precision.

use crate::error::{GeomError, Result};
use crate::hypersurfaces::{flux_integral, integral_f_over_h, Hypersurface};
use crate::models::StaticModel;
use crate::numerics::ode::dormand_prince;
use crate::numerics::quad::gauss12;
use crate::numerics::richardson::{extrapolate, LadderFit};
use crate::numerics::unit_sphere_volume;
use serde::Serialize;
use std::io::Write;

/// Mass ladder `rho_j = MASS_RHO0 / 2^j`, `j = 0..MASS_LEVELS`.
pub const MASS_RHO0: f64 = 1e-2;
pub const MASS_LEVELS: usize = 9;
/// Flux ladder.
pub const FLUX_RHO0: f64 = 0.1;
pub const FLUX_LEVELS: usize = 5;
/// Mean-curvature expansion ladder.
pub const H_RHO0: f64 = 0.1;
pub const H_LEVELS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct ConformalChart {
    n: usize,
    k: f64,
    mu: f64,
    s_min: f64,
    s_max: f64,
    /// Zero of `f` or `f0` below the chart (0 if none); below `2 floor` the
    /// table is in `sigma = sqrt(s - floor)`, where `psi` is smooth.
    floor: f64,
    /// Constant part of `psi`, kept apart so the decaying part keeps its relative precision.
    offset: f64,
    /// `(s, psi - offset)` ascending in `s`.
    nodes: Vec<(f64, f64)>,
}

/// `d psi/ds = -1/f + 1/f0`, written without cancellation.
fn psi_slope(model: &StaticModel, s: f64) -> f64 {
    let lapse = &model.lapse;
    let f = lapse.value(s).sqrt();
    let f0 = (s * s + lapse.k).sqrt();
    -lapse.mu * s.powi(2 - model.n as i32) / (f * f0 * (f + f0))
}

fn rho0(k: f64, s: f64) -> f64 {
    2.0 / ((s * s + k).sqrt() + s)
}

fn require_alh(model: &StaticModel) -> Result<()> {
    if model.epsilon == -1 {
        Ok(())
    } else {
        Err(GeomError::NotAlh)
    }
}

/// Builds the chart with the asymptotically matched initial value at `s_max`.
pub fn build_chart(model: &StaticModel) -> Result<ConformalChart> {
    build_chart_scaled(model, 1.0)
}

/// As [`build_chart`] with the initial `rho(s_max)` multiplied by `scale`
/// (used to check that renormalization removes the choice).
pub fn build_chart_scaled(model: &StaticModel, scale: f64) -> Result<ConformalChart> {
    require_alh(model)?;
    if !(scale > 0.0) {
        return Err(GeomError::InvalidInput(format!("chart scale {scale} must be positive")));
    }
    let lapse = &model.lapse;
    let n = model.n;
    let mut floor = if lapse.k < 0.0 { 1.0 } else { 0.0 };
    if let Some((_, h)) = model.inner_horizon() {
        floor = f64::max(floor, h.s_root);
    }
    let s_min = if floor > 0.0 { floor * (1.0 + 1e-4) } else { 1e-2 };
    let s_max = f64::max(1e4 * floor, 1e6);
    let psi_max = lapse.mu / 2.0 * s_max.powi(-(n as i32)) / n as f64;
    let s_mid = if floor > 0.0 { 2.0 * floor } else { s_min };
    // integrate in x = ln s: d psi/dx = s psi'(s)
    let outer = dormand_prince(
        |x, _| {
            let s = x.exp();
            s * psi_slope(model, s)
        },
        s_max.ln(),
        psi_max,
        s_mid.ln(),
        1e-12,
        1e-300,
    )?;
    let mut nodes: Vec<(f64, f64)> = outer.nodes.iter().map(|&(x, psi)| (x.exp(), psi)).collect();
    nodes.last_mut().expect("path has nodes").0 = s_mid;
    if floor > 0.0 {
        let psi_mid = nodes.last().expect("path has nodes").1;
        let inner = dormand_prince(
            |sigma, _| 2.0 * sigma * psi_slope(model, floor + sigma * sigma),
            floor.sqrt(),
            psi_mid,
            (s_min - floor).sqrt(),
            1e-12,
            1e-300,
        )?;
        nodes.extend(inner.nodes.iter().skip(1).map(|&(sigma, psi)| (floor + sigma * sigma, psi)));
        nodes.last_mut().expect("path has nodes").0 = s_min;
    }
    nodes.reverse();
    nodes.last_mut().expect("path has nodes").0 = s_max;
    Ok(ConformalChart { n, k: lapse.k, mu: lapse.mu, s_min, s_max, floor, offset: scale.ln(), nodes })
}

impl ConformalChart {
    pub fn s_range(&self) -> (f64, f64) {
        (self.s_min, self.s_max)
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    fn slope(&self, s: f64) -> f64 {
        let f = (self.k + s * s - self.mu * s.powi(2 - self.n as i32)).sqrt();
        let f0 = (s * s + self.k).sqrt();
        -self.mu * s.powi(2 - self.n as i32) / (f * f0 * (f + f0))
    }

    fn check(&self, s: f64) -> Result<()> {
        if s >= self.s_min && s <= self.s_max {
            Ok(())
        } else {
            Err(GeomError::OutsideDomain { s, lo: self.s_min, hi: self.s_max })
        }
    }

    /// `ln rho - ln rho0` at `s`.
    pub fn psi(&self, s: f64) -> Result<f64> {
        Ok(self.offset + self.decaying_psi(s)?)
    }

    /// Decaying part of `psi`: nearest table node plus a Gauss-Legendre panel.
    fn decaying_psi(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        let idx = self.nodes.partition_point(|&(x, _)| x < s);
        let (node_s, node_psi) = match (idx.checked_sub(1), self.nodes.get(idx)) {
            (Some(i), Some(&(hi_s, hi_psi))) => {
                let (lo_s, lo_psi) = self.nodes[i];
                if s - lo_s < hi_s - s {
                    (lo_s, lo_psi)
                } else {
                    (hi_s, hi_psi)
                }
            }
            (None, Some(&node)) => node,
            (Some(i), None) => self.nodes[i],
            (None, None) => unreachable!("chart has nodes"),
        };
        if node_s == s {
            return Ok(node_psi);
        }
        if self.floor > 0.0 && s.max(node_s) <= 2.0 * self.floor {
            let floor = self.floor;
            let mut slope = |sigma: f64| 2.0 * sigma * self.slope(floor + sigma * sigma);
            return Ok(node_psi + gauss12(&mut slope, (node_s - floor).sqrt(), (s - floor).sqrt()));
        }
        let mut slope = |x: f64| self.slope(x);
        Ok(node_psi + gauss12(&mut slope, node_s, s))
    }

    pub fn rho_of_s(&self, s: f64) -> Result<f64> {
        Ok(rho0(self.k, s) * self.psi(s)?.exp())
    }

    /// Inverse of [`Self::rho_of_s`] by Newton iteration on `ln rho`.
    pub fn s_of_rho(&self, rho: f64) -> Result<f64> {
        let (rho_lo, rho_hi) = (self.rho_of_s(self.s_max)?, self.rho_of_s(self.s_min)?);
        if !(rho >= rho_lo && rho <= rho_hi) {
            return Err(GeomError::OutsideDomain { s: rho, lo: rho_lo, hi: rho_hi });
        }
        let target = rho.ln();
        let mut s = (1.0 / rho - self.k * rho / 4.0).clamp(self.s_min, self.s_max);
        for _ in 0..100 {
            let f = (self.k + s * s - self.mu * s.powi(2 - self.n as i32)).sqrt();
            let gap = self.rho_of_s(s)?.ln() - target;
            let next = (s + f * gap).clamp(self.s_min, self.s_max);
            if (next - s).abs() <= 8.0 * f64::EPSILON * s || gap.abs() <= 4.0 * f64::EPSILON * target.abs().max(1.0) {
                return Ok(next);
            }
            s = next;
        }
        Err(GeomError::RootFindingFailed(format!("inverting rho(s) at rho = {rho}")))
    }

    /// Removes a constant from `psi`, fitted as `psi = c + A s^{-n}` at the
    /// two outermost table scales, so that `rho s -> 1`. Returns `c`.
    pub fn renormalize(&mut self) -> Result<f64> {
        let (s1, s2) = (self.s_max, self.s_max / 2.0);
        let (p1, p2) = (self.decaying_psi(s1)?, self.decaying_psi(s2)?);
        let n = self.n as i32;
        let a = (p1 - p2) / (s1.powi(-n) - s2.powi(-n));
        let table_constant = p1 - a * s1.powi(-n);
        let fitted = self.offset + table_constant;
        self.offset = 0.0;
        for node in &mut self.nodes {
            node.1 -= table_constant;
        }
        Ok(fitted)
    }

    /// Writes `# s,rho` and one row per table node.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| GeomError::InvalidInput(format!("writing chart: {e}"));
        writeln!(out, "# s,rho").map_err(io)?;
        for &(s, psi) in &self.nodes {
            writeln!(out, "{:.16e},{:.16e}", s, rho0(self.k, s) * (self.offset + psi).exp()).map_err(io)?;
        }
        Ok(())
    }

    /// `n(n-1) [(rho s)^2 - (1 - k rho^2/4)^2] / rho^n` at areal radius `s`.
    fn tau_estimate(&self, s: f64) -> Result<(f64, f64)> {
        let psi = self.psi(s)?;
        let r0 = rho0(self.k, s);
        let rho = r0 * psi.exp();
        let x = (2.0 * psi).exp_m1();
        let a = self.k * r0 * r0 / 4.0;
        let nf = self.n as f64;
        let value = nf * (nf - 1.0) * (x * (1.0 - a * a) - a * a * x * x) / rho.powi(self.n as i32);
        Ok((rho, value))
    }

    /// `2 (f - 1/rho - k rho/4) / rho^{n-1}` at areal radius `s`.
    fn alpha_estimate(&self, s: f64) -> Result<f64> {
        let psi = self.psi(s)?;
        let r0 = rho0(self.k, s);
        let rho = r0 * psi.exp();
        let f = (self.k + s * s - self.mu * s.powi(2 - self.n as i32)).sqrt();
        let f0 = (s * s + self.k).sqrt();
        let lapse_gap = -self.mu * s.powi(2 - self.n as i32) / (f + f0);
        let gap = lapse_gap - (-psi).exp_m1() / r0 - self.k / 4.0 * r0 * psi.exp_m1();
        Ok(2.0 * gap / rho.powi(self.n as i32 - 1))
    }
}

/// Fitted boundary expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionFit {
    pub alpha: f64,
    pub tr_tau: f64,
    /// `tr_tau vol(N, g0) / (2 (n-1) omega_{n-1})`.
    pub mass: f64,
    /// Spread of the last three extrapolants of `tr_tau`.
    pub fit_residual: f64,
    pub alpha_residual: f64,
    pub observed_order: Option<f64>,
    /// Factor applied to `tau` to fix its normalization (the mass then equals the family parameter).
    pub tau_normalization: f64,
    pub section_volume_ratio: f64,
    pub ladder_rho: Vec<f64>,
    pub ladder_tr_tau: Vec<f64>,
    pub ladder_alpha: Vec<f64>,
}

fn extrapolation_orders(n: usize) -> [f64; 2] {
    if n == 3 {
        [2.0, 3.0]
    } else {
        [2.0, 4.0]
    }
}

fn checked_fit(values: &[f64], orders: &[f64], what: &str) -> Result<LadderFit> {
    let fit = extrapolate(values, orders)?;
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if fit.residual > 0.1 * fit.estimate.abs() + 1e-12 * scale.max(1.0) {
        return Err(GeomError::ExtrapolationUnstable(format!(
            "{what}: ladder spread {} against estimate {}",
            fit.residual, fit.estimate
        )));
    }
    Ok(fit)
}

/// Extracts `tr tau` and `alpha` by Richardson extrapolation over the `rho` ladder.
pub fn extract_expansion(model: &StaticModel, chart: &ConformalChart) -> Result<ExpansionFit> {
    require_alh(model)?;
    let mut rhos = Vec::with_capacity(MASS_LEVELS);
    let mut taus = Vec::with_capacity(MASS_LEVELS);
    let mut alphas = Vec::with_capacity(MASS_LEVELS);
    for j in 0..MASS_LEVELS {
        let s = chart.s_of_rho(MASS_RHO0 / 2f64.powi(j as i32))?;
        let (rho, tau) = chart.tau_estimate(s)?;
        rhos.push(rho);
        taus.push(tau);
        alphas.push(chart.alpha_estimate(s)?);
    }
    let orders = extrapolation_orders(model.n);
    let tau_fit = checked_fit(&taus, &orders, "tr tau")?;
    let alpha_fit = checked_fit(&alphas, &orders, "alpha")?;
    let omega = unit_sphere_volume(model.n - 1);
    let nf = model.n as f64;
    Ok(ExpansionFit {
        alpha: alpha_fit.estimate,
        tr_tau: tau_fit.estimate,
        mass: tau_fit.estimate * model.section_volume / (2.0 * (nf - 1.0) * omega),
        fit_residual: tau_fit.residual,
        alpha_residual: alpha_fit.residual,
        observed_order: tau_fit.observed_order,
        tau_normalization: 1.0,
        section_volume_ratio: model.section_volume / omega,
        ladder_rho: rhos,
        ladder_tr_tau: taus,
        ladder_alpha: alphas,
    })
}

/// `(n-1) int f/H - int df(nu)` over the level set `{rho = const}`.
pub fn asymptotic_flux(model: &StaticModel, chart: &ConformalChart, rho: f64) -> Result<f64> {
    require_alh(model)?;
    let sphere = Hypersurface::sphere(chart.s_of_rho(rho)?);
    let nf = model.n as f64;
    let lhs = integral_f_over_h(model, &sphere)?.value;
    Ok((nf - 1.0) * lhs - flux_integral(model, &sphere)?.value)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxLimit {
    pub limit: f64,
    pub residual: f64,
    /// `(2-n) omega_{n-1} mass` with the parameter mass.
    pub expected: f64,
    pub ladder_rho: Vec<f64>,
    pub ladder_flux: Vec<f64>,
}

/// Extrapolates [`asymptotic_flux`] to `rho -> 0`.
pub fn flux_limit(model: &StaticModel, chart: &ConformalChart) -> Result<FluxLimit> {
    require_alh(model)?;
    let rhos: Vec<f64> = (0..FLUX_LEVELS).map(|j| FLUX_RHO0 / 2f64.powi(j as i32)).collect();
    let values = rhos.iter().map(|&r| asymptotic_flux(model, chart, r)).collect::<Result<Vec<_>>>()?;
    let fit = checked_fit(&values, &[2.0], "flux")?;
    let nf = model.n as f64;
    let mass = crate::inequality::kottler_mass(model)?;
    Ok(FluxLimit {
        limit: fit.estimate,
        residual: fit.residual,
        expected: (2.0 - nf) * unit_sphere_volume(model.n - 1) * mass,
        ladder_rho: rhos,
        ladder_flux: values,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HExpansionReport {
    pub ladder_rho: Vec<f64>,
    /// `(n-1) f / s` on the level sets.
    pub h_direct: Vec<f64>,
    /// `rho H_gamma + (n-1)` from the compactified metric.
    pub h_chart: Vec<f64>,
    pub max_relative_discrepancy: f64,
    /// Extrapolated coefficient of `rho^n` in `(n-1)/H`, from the chart path.
    pub coefficient: f64,
    pub coefficient_residual: f64,
    /// `tr tau / (2(n-1))`.
    pub expected: f64,
    pub relative_error: f64,
}

/// Compares the two evaluations of `H` on `{rho = const}` and fits the
/// `rho^n` correction of `(n-1)/H` against `tr_tau / (2(n-1))`.
pub fn sphere_h_expansion_check(model: &StaticModel, chart: &ConformalChart, tr_tau: f64) -> Result<HExpansionReport> {
    require_alh(model)?;
    let nf = model.n as f64;
    let k = chart.k;
    let mut report = HExpansionReport {
        ladder_rho: vec![],
        h_direct: vec![],
        h_chart: vec![],
        max_relative_discrepancy: 0.0,
        coefficient: 0.0,
        coefficient_residual: 0.0,
        expected: tr_tau / (2.0 * (nf - 1.0)),
        relative_error: 0.0,
    };
    let mut coefficients = Vec::with_capacity(H_LEVELS);
    for j in 0..H_LEVELS {
        let rho = H_RHO0 / 2f64.powi(j as i32);
        let s = chart.s_of_rho(rho)?;
        let h_direct = (nf - 1.0) * model.potential(s) / s;
        // d(rho s)/d rho by fourth-order central differences through the inverse chart
        let step = 0.05 * rho;
        let w = |r: f64| -> Result<f64> { Ok(r * chart.s_of_rho(r)?) };
        let d =
            (w(rho - 2.0 * step)? - 8.0 * w(rho - step)? + 8.0 * w(rho + step)? - w(rho + 2.0 * step)?) / (12.0 * step);
        let h_gamma = -(nf - 1.0) * d / (rho * s);
        let h_chart = rho * h_gamma + (nf - 1.0);
        let a = k * rho * rho / 4.0;
        coefficients.push(((nf - 1.0) / h_chart - (1.0 - a) / (1.0 + a)) / rho.powi(model.n as i32));
        report.max_relative_discrepancy = report.max_relative_discrepancy.max((h_direct - h_chart).abs() / h_direct);
        report.ladder_rho.push(rho);
        report.h_direct.push(h_direct);
        report.h_chart.push(h_chart);
    }
    let fit = checked_fit(&coefficients, &[2.0], "mean-curvature coefficient")?;
    report.coefficient = fit.estimate;
    report.coefficient_residual = fit.residual;
    report.relative_error = if report.expected == 0.0 {
        fit.estimate.abs()
    } else {
        (fit.estimate - report.expected).abs() / report.expected.abs()
    };
    Ok(report)
}
