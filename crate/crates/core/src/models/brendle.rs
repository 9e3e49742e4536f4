//! Geodesic-distance chart `g = dr^2 + h(r)^2 g0`, reached from the areal
//! chart by `ds = f dr` with `h(r) = s`.

use super::chart::{RadialFrame, WarpedChart};
use super::{HorizonSide, StaticModel};
use crate::error::{GeomError, Result};
use crate::numerics::cosine::Jet;
use crate::numerics::quad::adaptive_gauss;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BrendleOrigin {
    /// `r = 0` on the horizon with this index.
    Horizon(usize),
    /// `r = 0` at the center of a space form.
    Center,
}

#[derive(Debug, Clone)]
pub struct BrendleChart<'a> {
    model: &'a StaticModel,
    origin: BrendleOrigin,
    s_origin: f64,
}

const QUAD_TOL: f64 = 1e-15;

impl<'a> BrendleChart<'a> {
    pub fn new(model: &'a StaticModel, origin: BrendleOrigin) -> Result<Self> {
        let s_origin = match origin {
            BrendleOrigin::Horizon(index) => {
                let h = model.horizon(index)?;
                if h.side != HorizonSide::Inner {
                    return Err(GeomError::RegionInvalid(format!("horizon {index} bounds the domain from above")));
                }
                h.s_root
            }
            BrendleOrigin::Center => {
                if !model.has_center() {
                    return Err(GeomError::RegionInvalid("model has no smooth center".into()));
                }
                0.0
            }
        };
        Ok(Self { model, origin, s_origin })
    }

    pub fn origin(&self) -> BrendleOrigin {
        self.origin
    }

    /// `h(0)`.
    pub fn warp_at_origin(&self) -> f64 {
        self.s_origin
    }

    /// Geodesic distance from the origin to the sphere of areal radius `s`.
    pub fn r_of_s(&self, s: f64) -> Result<f64> {
        if s == self.s_origin {
            return Ok(0.0);
        }
        self.model.check_inside(s)?;
        let lapse = self.model.lapse;
        match self.origin {
            BrendleOrigin::Horizon(_) => {
                // s = s0 + t^2 removes the inverse square-root singularity
                let s0 = self.s_origin;
                let slope = lapse.d1(s0);
                let integrand = |t: f64| {
                    if t == 0.0 {
                        return 2.0 / slope.sqrt();
                    }
                    2.0 * t / lapse.increment(s0, t * t).sqrt()
                };
                adaptive_gauss(integrand, 0.0, (s - s0).sqrt(), QUAD_TOL)
            }
            BrendleOrigin::Center => adaptive_gauss(|x| 1.0 / lapse.value(x).sqrt(), 0.0, s, QUAD_TOL),
        }
    }

    /// Inverse of [`Self::r_of_s`]: bracketing followed by safeguarded Newton steps.
    pub fn s_of_r(&self, r: f64) -> Result<f64> {
        if r == 0.0 {
            return Ok(self.s_origin);
        }
        if !(r > 0.0) {
            return Err(GeomError::OutsideDomain { s: r, lo: 0.0, hi: f64::INFINITY });
        }
        let (lo_dom, hi_dom) = self.model.s_domain;
        let mut a = self.s_origin;
        let mut width = if self.s_origin > 0.0 { self.s_origin } else { 1.0 };
        let mut b = loop {
            let candidate = self.s_origin + width;
            if candidate >= hi_dom {
                break hi_dom;
            }
            if self.r_of_s(candidate)? >= r {
                break candidate;
            }
            a = candidate;
            width *= 2.0;
        };
        let mut s = if b.is_finite() { 0.5 * (a.max(lo_dom) + b) } else { 2.0 * a.max(1.0) };
        for _ in 0..200 {
            let gap = r - self.r_of_s(s)?;
            if gap > 0.0 {
                a = s;
            } else {
                b = s;
            }
            let mut next = s + self.model.potential(s) * gap;
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            if (next - s).abs() <= 4.0 * f64::EPSILON * s {
                return Ok(next);
            }
            s = next;
        }
        Err(GeomError::RootFindingFailed(format!("inverting r(s) at r = {r}")))
    }
}

impl WarpedChart for BrendleChart<'_> {
    fn model(&self) -> &StaticModel {
        self.model
    }

    fn radial_of_areal(&self, s: f64) -> Result<f64> {
        self.r_of_s(s)
    }

    fn frame(&self, r: f64) -> Result<RadialFrame> {
        let s = self.s_of_r(r)?;
        self.model.check_inside(s)?;
        let f = self.model.potential(s);
        Ok(RadialFrame { a: 1.0, da: 0.0, b: s, db: f, f, df: 0.5 * self.model.lapse.d1(s) })
    }

    fn jet_from_areal(&self, jet: Jet) -> Result<Jet> {
        let s = jet.value;
        let f = self.model.potential(s);
        let fs = self.model.potential_d1(s);
        Ok(Jet { value: self.r_of_s(s)?, d1: jet.d1 / f, d2: jet.d2 / f - jet.d1 * jet.d1 * fs / (f * f) })
    }

    fn radial_bulk(&self, lo: f64, hi: f64) -> Result<f64> {
        let n = self.model.n as i32;
        Ok(self.s_of_r(hi)?.powi(n) - self.s_of_r(lo)?.powi(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_model, Family};

    #[test]
    fn hyperbolic_distance_is_asinh() {
        let model = build_model(Family::SpaceForm { epsilon: -1 }, 3, None).unwrap();
        let chart = BrendleChart::new(&model, BrendleOrigin::Center).unwrap();
        for s in [0.1, 1.0, 5.0] {
            assert!((chart.r_of_s(s).unwrap() - f64::asinh(s)).abs() < 1e-13);
        }
        assert!((chart.s_of_r(1.0).unwrap() - 1f64.sinh()).abs() < 1e-13);
    }

    #[test]
    fn near_horizon_distance_is_square_root() {
        let model = build_model(Family::Schwarzschild { m: 1.0 }, 3, None).unwrap();
        let chart = BrendleChart::new(&model, BrendleOrigin::Horizon(0)).unwrap();
        // closed form for n = 3: r = sqrt(s(s-2)) + 2 ln((sqrt s + sqrt(s-2)) / sqrt 2)
        let exact = |s: f64| (s * (s - 2.0)).sqrt() + 2.0 * ((s.sqrt() + (s - 2.0).sqrt()) / 2f64.sqrt()).ln();
        for s in [2.0 + 1e-8, 2.01, 3.0, 40.0] {
            let r = chart.r_of_s(s).unwrap();
            assert!((r - exact(s)).abs() < 1e-12 * exact(s).max(1e-4), "s={s}: {r} vs {}", exact(s));
            assert!((chart.s_of_r(r).unwrap() - s).abs() < 1e-13 * s);
        }
    }

    #[test]
    fn outer_horizon_is_not_an_origin() {
        let model = build_model(Family::DeSitterSchwarzschild { m: 0.375 }, 3, None).unwrap();
        assert!(BrendleChart::new(&model, BrendleOrigin::Horizon(1)).is_err());
        let chart = BrendleChart::new(&model, BrendleOrigin::Horizon(0)).unwrap();
        assert_eq!(chart.warp_at_origin(), model.horizons()[0].s_root);
        let r = chart.r_of_s(0.6).unwrap();
        assert!((chart.s_of_r(r).unwrap() - 0.6).abs() < 1e-14);
    }
}
