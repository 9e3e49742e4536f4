use super::StaticModel;
use crate::error::Result;
use crate::numerics::cosine::Jet;

/// Metric data `g = A(x) dx^2 + B(x)^2 g0` and potential `f(x)` at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialFrame {
    pub a: f64,
    pub da: f64,
    pub b: f64,
    pub db: f64,
    pub f: f64,
    pub df: f64,
}

/// A radial chart on a warped-product static model.
///
/// Surfaces are stored by their areal radius `s`; a chart transcodes them to
/// its own radial coordinate `x` and supplies the metric in that coordinate.
pub trait WarpedChart {
    fn model(&self) -> &StaticModel;

    fn radial_of_areal(&self, s: f64) -> Result<f64>;

    fn frame(&self, x: f64) -> Result<RadialFrame>;

    /// Re-expresses `(s, ds/dtheta, d2s/dtheta2)` in the chart coordinate.
    fn jet_from_areal(&self, jet: Jet) -> Result<Jet>;

    /// `n * integral_{lo}^{hi} f sqrt(A) B^{n-1} dx` per unit section volume.
    fn radial_bulk(&self, lo: f64, hi: f64) -> Result<f64>;

    fn n(&self) -> usize {
        self.model().n
    }
}

impl WarpedChart for StaticModel {
    fn model(&self) -> &StaticModel {
        self
    }

    fn radial_of_areal(&self, s: f64) -> Result<f64> {
        Ok(s)
    }

    fn frame(&self, s: f64) -> Result<RadialFrame> {
        self.check_inside(s)?;
        let v = self.lapse.value(s);
        let dv = self.lapse.d1(s);
        let f = v.sqrt();
        Ok(RadialFrame { a: 1.0 / v, da: -dv / (v * v), b: s, db: 1.0, f, df: dv / (2.0 * f) })
    }

    fn jet_from_areal(&self, jet: Jet) -> Result<Jet> {
        Ok(jet)
    }

    fn radial_bulk(&self, lo: f64, hi: f64) -> Result<f64> {
        let n = self.n as i32;
        Ok(hi.powi(n) - lo.powi(n))
    }
}
