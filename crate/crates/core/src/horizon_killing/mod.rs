//! Leading coefficient `a0` of the approximate conformal Killing field near a
//! horizon: `-Lap a0 - Ric(dr, dr) a0 = (n-1) kappa` on a round sphere of
//! radius `R`, for axisymmetric `Ric(dr, dr)`.
//!
//! Finite volumes on the nodes `theta_i = i pi / M` with half cells at the
//! poles; the zero pole flux is the regularity condition.

use crate::error::{GeomError, Result};
use crate::models::{ricci_rr_at_horizon, StaticModel};
use crate::numerics::quad::gauss12;
use crate::numerics::tridiag::solve_tridiagonal;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

#[derive(Debug, Clone, PartialEq)]
pub struct HorizonProblem {
    pub n: usize,
    pub kappa: f64,
    pub metric_radius: f64,
    /// `Ric(dr, dr)` at `theta_i = i pi / M`, `i = 0..=M`.
    pub ric_rr: Vec<f64>,
}

impl HorizonProblem {
    pub fn new(n: usize, kappa: f64, metric_radius: f64, ric_rr: Vec<f64>) -> Result<Self> {
        if n < 3 {
            return Err(GeomError::ParameterOutOfRange(format!("dimension n = {n} must be at least 3")));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(GeomError::ParameterOutOfRange(format!("surface gravity {kappa} must be non-negative")));
        }
        if !(metric_radius > 0.0 && metric_radius.is_finite()) {
            return Err(GeomError::ParameterOutOfRange(format!("horizon radius {metric_radius} must be positive")));
        }
        if ric_rr.len() < 3 {
            return Err(GeomError::InvalidInput("need at least 3 samples of Ric(dr, dr)".into()));
        }
        if let Some((i, r)) = ric_rr.iter().enumerate().find(|(_, r)| !(**r < 0.0)) {
            return Err(GeomError::NotNegativeDefinite(format!("Ric(dr, dr) = {r} at sample {i}")));
        }
        Ok(HorizonProblem { n, kappa, metric_radius, ric_rr })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(
        n: usize,
        kappa: f64,
        metric_radius: f64,
        grid: usize,
        ric_rr: F,
    ) -> Result<Self> {
        let samples = (0..=grid).map(|i| ric_rr(i as f64 * PI / grid as f64)).collect();
        Self::new(n, kappa, metric_radius, samples)
    }

    /// The horizon of a model, with its constant `Ric(dr, dr)`. A constant is
    /// the solution on any closed section, so only its radius enters.
    pub fn from_model_horizon(model: &StaticModel, index: usize, grid: usize) -> Result<Self> {
        let h = model.horizon(index)?;
        let ric = ricci_rr_at_horizon(model, h);
        Self::from_fn(model.n, h.kappa, h.s_root, grid, |_| ric)
    }

    pub fn grid_size(&self) -> usize {
        self.ric_rr.len() - 1
    }

    pub fn theta(&self, i: usize) -> f64 {
        i as f64 * PI / self.grid_size() as f64
    }

    /// `(n-1) kappa / max(-Ric(dr, dr))`.
    pub fn bound(&self) -> f64 {
        let q_max = self.ric_rr.iter().fold(f64::NEG_INFINITY, |a, r| a.max(-r));
        (self.n as f64 - 1.0) * self.kappa / q_max
    }
}

/// Algebraically determined companions of `a0` in the collar expansion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompanionRelations {
    pub a1: f64,
    /// `kappa / 2`.
    pub a2: f64,
    pub b0: f64,
    pub b2: f64,
    /// `b1 = grad a0`; its `theta` component at the nodes.
    pub b1_theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KillingPotential {
    pub a0: Vec<f64>,
    /// Max-norm of the discrete equation at the solution.
    pub residual: f64,
    pub min_value: f64,
    pub companions: CompanionRelations,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KillingSummary {
    pub kappa: f64,
    pub bound: f64,
    pub min_a0: f64,
    pub residual: f64,
}

/// Discrete operator `-Lap + q` as a tridiagonal system scaled by the cell volumes.
struct Discretization {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    volume: Vec<f64>,
}

fn discretize(n: usize, radius: f64, q: &[f64]) -> Discretization {
    let m = q.len() - 1;
    let h = PI / m as f64;
    let p = n as i32 - 2;
    let face = |j: usize| ((j as f64 + 0.5) * h).sin().powi(p) / (h * radius * radius);
    let mut weight = |x: f64| x.sin().powi(p);
    let volume: Vec<f64> = (0..=m)
        .map(|i| {
            let lo = (i as f64 - 0.5).max(0.0) * h;
            let hi = (i as f64 + 0.5).min(m as f64) * h;
            gauss12(&mut weight, lo, hi)
        })
        .collect();
    let mut lower = vec![0.0; m + 1];
    let mut upper = vec![0.0; m + 1];
    let mut diag = vec![0.0; m + 1];
    for i in 0..=m {
        let left = if i > 0 { face(i - 1) } else { 0.0 };
        let right = if i < m { face(i) } else { 0.0 };
        lower[i] = -left;
        upper[i] = -right;
        diag[i] = left + right + q[i] * volume[i];
    }
    Discretization { lower, diag, upper, volume }
}

/// Solves `-Lap a + q a = rhs` on the nodes of `q`; returns `a` and the
/// max-norm residual of the discrete equation.
pub fn solve_axisymmetric(n: usize, radius: f64, q: &[f64], rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    if q.len() != rhs.len() || q.len() < 3 {
        return Err(GeomError::InvalidInput("coefficient and source grids differ".into()));
    }
    let d = discretize(n, radius, q);
    let scaled: Vec<f64> = rhs.iter().zip(&d.volume).map(|(r, v)| r * v).collect();
    let a = solve_tridiagonal(&d.lower, &d.diag, &d.upper, &scaled)?;
    let m = a.len() - 1;
    let residual = (0..=m)
        .map(|i| {
            let mut lhs = d.diag[i] * a[i];
            if i > 0 {
                lhs += d.lower[i] * a[i - 1];
            }
            if i < m {
                lhs += d.upper[i] * a[i + 1];
            }
            ((lhs - scaled[i]) / d.volume[i]).abs()
        })
        .fold(0.0, f64::max);
    if a.iter().any(|x| !x.is_finite()) {
        return Err(GeomError::SolveFailed("non-finite solution".into()));
    }
    Ok((a, residual))
}

pub fn solve_a0(problem: &HorizonProblem) -> Result<KillingPotential> {
    let q: Vec<f64> = problem.ric_rr.iter().map(|r| -r).collect();
    let source = (problem.n as f64 - 1.0) * problem.kappa;
    let (a0, residual) = solve_axisymmetric(problem.n, problem.metric_radius, &q, &vec![source; q.len()])?;
    let m = problem.grid_size();
    let h = PI / m as f64;
    let b1_theta = (0..=m)
        .map(|i| match i {
            0 => 0.0,
            i if i == m => 0.0,
            i => (a0[i + 1] - a0[i - 1]) / (2.0 * h),
        })
        .collect();
    Ok(KillingPotential {
        min_value: a0.iter().copied().fold(f64::INFINITY, f64::min),
        a0,
        residual,
        companions: CompanionRelations { a1: 0.0, a2: problem.kappa / 2.0, b0: 0.0, b2: 0.0, b1_theta },
    })
}

/// `min a0 >= bound (1 - 1e-8)`.
pub fn check_bound(potential: &KillingPotential, problem: &HorizonProblem) -> bool {
    let bound = problem.bound();
    potential.min_value >= bound - 1e-8 * bound
}

/// `(min a0) vol(N)` for the horizon volume `vol(N)`.
pub fn horizon_term_from_a0(potential: &KillingPotential, horizon_volume: f64) -> f64 {
    potential.min_value * horizon_volume
}

pub fn summary(potential: &KillingPotential, problem: &HorizonProblem) -> KillingSummary {
    KillingSummary {
        kappa: problem.kappa,
        bound: problem.bound(),
        min_a0: potential.min_value,
        residual: potential.residual,
    }
}

/// Writes `# theta,ric_rr,a0` and one row per node.
pub fn write_csv<W: Write>(problem: &HorizonProblem, potential: &KillingPotential, mut out: W) -> Result<()> {
    let io = |e: std::io::Error| GeomError::InvalidInput(format!("writing solution: {e}"));
    writeln!(out, "# theta,ric_rr,a0").map_err(io)?;
    for (i, (r, a)) in problem.ric_rr.iter().zip(&potential.a0).enumerate() {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", problem.theta(i), r, a).map_err(io)?;
    }
    Ok(())
}
