//! Assembly of the inequalities and identities into verdict reports.

mod reference;

pub use reference::{chrusciel_simon_reference, ReferenceData, ReferenceInput};

use crate::error::{GeomError, Result};
use crate::hypersurfaces::{
    bulk_integral, flux_integral, horizon_proximity, integral_f_over_h, min_mean_curvature, umbilicity_deficit,
    InnerBoundary, RegionSpec,
};
use crate::models::{ricci_rr_at_horizon, BrendleChart, BrendleOrigin, Family, Horizon, StaticModel, WarpedChart};
use crate::numerics::quad::adaptive_gauss;
use crate::numerics::unit_sphere_volume;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Default tolerance for closed-form paths.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InequalityKind {
    BrendleNullHomologous,
    BrendleWarped,
    MainStatic,
    ReversePenrose,
    TwoHorizon,
    DssIdentity,
    GlobalDivergence,
    DivergenceIdentity,
}

impl InequalityKind {
    /// Identities hold with equality, so their verdict is two-sided.
    pub fn is_identity(&self) -> bool {
        matches!(
            self,
            InequalityKind::DssIdentity | InequalityKind::GlobalDivergence | InequalityKind::DivergenceIdentity
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: InequalityKind,
    pub lhs: f64,
    pub rhs_terms: BTreeMap<String, f64>,
    /// `lhs - sum(rhs_terms)`.
    pub slack: f64,
    /// `slack >= -tol`.
    pub satisfied: bool,
    pub tol: f64,
    pub quadrature_error: f64,
    pub diagnostics: BTreeMap<String, Value>,
}

impl InequalityReport {
    pub fn new(name: InequalityKind, lhs: f64, rhs_terms: &[(&str, f64)], tol: f64, quadrature_error: f64) -> Self {
        let rhs_terms: BTreeMap<String, f64> = rhs_terms.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let slack = lhs - rhs_terms.values().sum::<f64>();
        Self {
            name,
            lhs,
            rhs_terms,
            slack,
            satisfied: slack >= -tol,
            tol,
            quadrature_error,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn rhs(&self) -> f64 {
        self.rhs_terms.values().sum()
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.rhs_terms.get(name).copied()
    }

    /// `|slack| / max(|lhs|, |rhs|)`.
    pub fn relative_slack(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs().abs());
        if scale == 0.0 {
            self.slack.abs()
        } else {
            self.slack.abs() / scale
        }
    }

    /// Final verdict: `satisfied` for inequalities, `|slack| <= tol` for identities.
    /// Identities carrying a `max_deviation` diagnostic also need every pair within `tol`.
    pub fn holds(&self) -> bool {
        if self.name.is_identity() {
            let pairs = self.diagnostics.get("max_deviation").and_then(Value::as_f64).unwrap_or(0.0);
            self.slack.abs() <= self.tol && pairs <= self.tol
        } else {
            self.satisfied
        }
    }

    fn note(mut self, key: &str, value: Value) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }

    fn all_finite(&self) -> Result<Self> {
        let finite = self.lhs.is_finite() && self.slack.is_finite() && self.rhs_terms.values().all(|v| v.is_finite());
        if finite {
            Ok(self.clone())
        } else {
            Err(GeomError::QuadratureNotConverged(format!("{:?} produced non-finite terms", self.name)))
        }
    }
}

fn admissible_horizon(model: &StaticModel, index: usize) -> Result<Horizon> {
    let h = *model.horizon(index)?;
    if !h.admissible {
        return Err(GeomError::HorizonInadmissible {
            scalar_curvature: h.scalar_curvature,
            threshold: model.scalar_curvature(),
        });
    }
    Ok(h)
}

/// `(n-1) kappa vol(N) / max_N (-Ric(d_r, d_r))`, with the max over a horizon of constant `R^N`.
pub fn main_horizon_term(model: &StaticModel, horizon: &Horizon) -> f64 {
    let n = model.n as f64;
    (n - 1.0) * horizon.kappa * horizon.volume / (-ricci_rr_at_horizon(model, horizon))
}

fn surface_diagnostics<C: WarpedChart + ?Sized>(
    report: InequalityReport,
    chart: &C,
    region: &RegionSpec,
) -> Result<InequalityReport> {
    let deficit = umbilicity_deficit(chart, &region.outer)?;
    Ok(report
        .note("umbilicity_deficit", json!(deficit.value))
        .note("min_mean_curvature", json!(min_mean_curvature(chart, &region.outer)?))
        .note("horizon_proximity", json!(horizon_proximity(chart.model(), &region.outer))))
}

/// `(n-1) int f/H >= n int_Omega f` for `Sigma` bounding a ball.
pub fn verify_null_homologous<C: WarpedChart + ?Sized>(
    chart: &C,
    region: &RegionSpec,
    tol: f64,
) -> Result<InequalityReport> {
    if region.inner != InnerBoundary::Empty {
        return Err(GeomError::RegionInvalid("null-homologous check needs an empty inner boundary".into()));
    }
    let n = chart.n() as f64;
    let lhs = integral_f_over_h(chart, &region.outer)?;
    let bulk = bulk_integral(chart, region)?;
    let report = InequalityReport::new(
        InequalityKind::BrendleNullHomologous,
        (n - 1.0) * lhs.value,
        &[("bulk", bulk.value)],
        tol,
        (n - 1.0) * lhs.error + bulk.error,
    );
    surface_diagnostics(report, chart, region)?.all_finite()
}

/// `(n-1) int f/H >= n int_Omega f + (n-1) kappa vol(N) / max(-Ric(d_r, d_r))`.
pub fn verify_main(model: &StaticModel, region: &RegionSpec, tol: f64) -> Result<InequalityReport> {
    let index = match region.inner {
        InnerBoundary::Horizon(i) => i,
        InnerBoundary::Empty => {
            return Err(GeomError::RegionInvalid("main inequality needs a horizon as inner boundary".into()))
        }
    };
    let horizon = admissible_horizon(model, index)?;
    region.validate(model)?;
    let n = model.n as f64;
    let lhs = integral_f_over_h(model, &region.outer)?;
    let bulk = bulk_integral(model, region)?;
    let report = InequalityReport::new(
        InequalityKind::MainStatic,
        (n - 1.0) * lhs.value,
        &[("bulk", bulk.value), ("horizon", main_horizon_term(model, &horizon))],
        tol,
        (n - 1.0) * lhs.error + bulk.error,
    )
    .note("max_over_horizon_trivial", json!(true))
    .note("ricci_rr_at_horizon", json!(ricci_rr_at_horizon(model, &horizon)));
    surface_diagnostics(report, model, region)?.all_finite()
}

/// The same inequality assembled in the distance chart, with horizon term `h(0)^n vol(N, g0)`.
pub fn verify_brendle_warped(model: &StaticModel, region: &RegionSpec, tol: f64) -> Result<InequalityReport> {
    let (origin, main_term) = match region.inner {
        InnerBoundary::Horizon(i) => {
            let h = admissible_horizon(model, i)?;
            (BrendleOrigin::Horizon(i), main_horizon_term(model, &h))
        }
        InnerBoundary::Empty => (BrendleOrigin::Center, 0.0),
    };
    region.validate(model)?;
    let chart = BrendleChart::new(model, origin)?;
    let n = model.n as f64;
    let lhs = integral_f_over_h(&chart, &region.outer)?;
    let bulk = bulk_integral(&chart, region)?;
    let horizon = chart.warp_at_origin().powi(model.n as i32) * model.section_volume;
    let report = InequalityReport::new(
        InequalityKind::BrendleWarped,
        (n - 1.0) * lhs.value,
        &[("bulk", bulk.value), ("horizon", horizon)],
        tol,
        (n - 1.0) * lhs.error + bulk.error,
    )
    .note("main_static_horizon_term", json!(main_term))
    .note("horizon_term_difference", json!(horizon - main_term));
    surface_diagnostics(report, &chart, region)?.all_finite()
}

/// Mass normalized by the round sphere: `m vol(N, g0) / omega_{n-1}`.
pub fn kottler_mass(model: &StaticModel) -> Result<f64> {
    match model.family {
        Family::Kottler { m, .. } => Ok(m * model.section_volume / unit_sphere_volume(model.n - 1)),
        _ => Err(GeomError::NotAlh),
    }
}

/// `kappa / ((n-2) omega) (1 - (n-1) / max((R^N + n(n-1))/2)) vol(N) >= mass`.
///
/// `extracted_mass` (from the asymptotic expansion) is reported alongside the
/// parameter mass when supplied; the verdict uses the parameter mass.
pub fn reverse_penrose(model: &StaticModel, extracted_mass: Option<f64>, tol: f64) -> Result<InequalityReport> {
    let mass = kottler_mass(model)?;
    let (index, _) = model.inner_horizon().ok_or(GeomError::HorizonCountMismatch { expected: 1, found: 0 })?;
    let h = admissible_horizon(model, index)?;
    let n = model.n as f64;
    let omega = unit_sphere_volume(model.n - 1);
    let curvature_max = (h.scalar_curvature + n * (n - 1.0)) / 2.0;
    let bound = h.kappa / ((n - 2.0) * omega) * (1.0 - (n - 1.0) / curvature_max) * h.volume;
    let mut report = InequalityReport::new(InequalityKind::ReversePenrose, bound, &[("mass", mass)], tol, 0.0)
        .note("equality_deficit", json!((bound - mass).abs()))
        .note("section_volume_ratio", json!(model.section_volume / omega))
        .note("max_over_horizon_trivial", json!(true));
    if let Some(m) = extracted_mass {
        report = report.note("extracted_mass", json!(m)).note("extracted_mass_deficit", json!(bound - m));
    }
    report.all_finite()
}

fn two_horizons(model: &StaticModel) -> Result<(Horizon, Horizon)> {
    let hs = model.horizons();
    if hs.len() != 2 {
        return Err(GeomError::HorizonCountMismatch { expected: 2, found: hs.len() });
    }
    Ok((hs[0], hs[1]))
}

/// `(kappa_1 side, kappa_2 side, mass side)` of the two-horizon relation.
fn dss_sides(model: &StaticModel) -> Result<(f64, f64, f64)> {
    let (h1, h2) = two_horizons(model)?;
    let n = model.n as f64;
    let r0 = n * (n - 1.0);
    if !(h1.scalar_curvature > r0) {
        return Err(GeomError::HorizonInadmissible { scalar_curvature: h1.scalar_curvature, threshold: r0 });
    }
    if !(h2.scalar_curvature < r0) {
        return Err(GeomError::InvalidInput(format!(
            "outer horizon scalar curvature {} is not below {r0}",
            h2.scalar_curvature
        )));
    }
    let inner = h1.kappa * (2.0 * (n - 1.0) / (h1.scalar_curvature - r0) + 1.0) * h1.volume;
    let outer = h2.kappa * (2.0 * (n - 1.0) / (r0 - h2.scalar_curvature) - 1.0) * h2.volume;
    let m = match model.family {
        Family::DeSitterSchwarzschild { m } => m,
        _ => return Err(GeomError::InvalidInput("two-horizon relation needs de Sitter-Schwarzschild".into())),
    };
    let mass_side = (n - 2.0) * m / 2.0 * model.section_volume;
    Ok((inner, outer, mass_side))
}

/// `kappa_2 (2(n-1)/(n(n-1) - R^{N2}) - 1) vol(N2) >= kappa_1 (2(n-1)/(R^{N1} - n(n-1)) + 1) vol(N1)`.
pub fn two_horizon(model: &StaticModel, tol: f64) -> Result<InequalityReport> {
    let (inner, outer, _) = dss_sides(model)?;
    InequalityReport::new(InequalityKind::TwoHorizon, outer, &[("inner_horizon", inner)], tol, 0.0)
        .note("max_over_horizon_trivial", json!(true))
        .all_finite()
}

/// Three-way equality of the two horizon sides with `(n-2) m omega / 2`.
///
/// `tol` is relative to the mass side.
pub fn dss_identity(model: &StaticModel, tol: f64) -> Result<InequalityReport> {
    let (inner, outer, mass_side) = dss_sides(model)?;
    let rel = |a: f64, b: f64| if mass_side == 0.0 { (a - b).abs() } else { (a - b).abs() / mass_side.abs() };
    let deviations = [rel(inner, outer), rel(inner, mass_side), rel(outer, mass_side)];
    let worst = deviations.iter().cloned().fold(0.0, f64::max);
    InequalityReport::new(InequalityKind::DssIdentity, outer, &[("inner_horizon", inner)], tol * mass_side.abs(), 0.0)
        .note("mass_side", json!(mass_side))
        .note("inner_vs_outer", json!(deviations[0]))
        .note("inner_vs_mass", json!(deviations[1]))
        .note("outer_vs_mass", json!(deviations[2]))
        .note("max_relative_deviation", json!(worst))
        .note("max_deviation", json!(worst * mass_side.abs().max(f64::MIN_POSITIVE)))
        .all_finite()
}

/// `n int_M f dvol = kappa_1 vol(N1) + kappa_2 vol(N2)` on the whole of a two-horizon model.
///
/// `tol` is relative to the horizon side.
pub fn global_divergence_check(model: &StaticModel, tol: f64) -> Result<InequalityReport> {
    let (h1, h2) = two_horizons(model)?;
    let n = model.n as f64;
    let vol0 = model.section_volume;
    // sqrt(det g) = s^{n-1} / f per unit section volume, times f
    let integrand = |s: f64| {
        let f = model.potential(s);
        n * f * s.powf(n - 1.0) / f
    };
    let span = h2.s_root - h1.s_root;
    let bulk = vol0 * adaptive_gauss(integrand, h1.s_root, h2.s_root, 1e-15 * span.max(1e-300))?;
    let inner = h1.kappa * h1.volume;
    let outer = h2.kappa * h2.volume;
    let scale = (inner + outer).abs();
    InequalityReport::new(
        InequalityKind::GlobalDivergence,
        bulk,
        &[("inner_horizon", inner), ("outer_horizon", outer)],
        tol * scale,
        0.0,
    )
    .note("sign_convention", json!("n * int_M f dvol = +(kappa_1 vol(N_1) + kappa_2 vol(N_2)), outward normals of M"))
    .note("closed_form_bulk", json!(vol0 * (h2.s_root.powf(n) - h1.s_root.powf(n))))
    .all_finite()
}

/// `int_Sigma df(nu) = -eps n int_Omega f + kappa vol(N)` for `Omega` between a horizon (or center) and `Sigma`.
///
/// `tol` is relative to `|lhs| + sum |rhs|`.
pub fn divergence_identity(model: &StaticModel, region: &RegionSpec, tol: f64) -> Result<InequalityReport> {
    region.validate(model)?;
    let flux = flux_integral(model, &region.outer)?;
    let bulk = bulk_integral(model, region)?;
    let horizon = match region.inner {
        InnerBoundary::Horizon(i) => {
            let h = model.horizon(i)?;
            h.kappa * h.volume
        }
        InnerBoundary::Empty => 0.0,
    };
    let eps = model.epsilon as f64;
    let bulk_term = -eps * bulk.value;
    let scale = flux.value.abs() + bulk_term.abs() + horizon.abs();
    InequalityReport::new(
        InequalityKind::DivergenceIdentity,
        flux.value,
        &[("bulk", bulk_term), ("horizon", horizon)],
        tol * scale,
        flux.error + bulk.error,
    )
    .note("sign_convention", json!("int_Sigma df(nu) = -eps n int_Omega f dvol + kappa vol(N), nu outward from Omega"))
    .all_finite()
}
