//! Even trigonometric interpolation of samples on a uniform polar grid.
//!
//! An axisymmetric smooth function on a round sphere is a smooth function of
//! `cos(theta)`, so its even 2π-periodic extension is smooth and the
//! cosine interpolant through `theta_i = i*pi/M` converges spectrally.

use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct CosineSeries {
    coeffs: Vec<f64>,
    grid_intervals: usize,
    tail_fraction: f64,
}

/// Value and first two `theta` derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl CosineSeries {
    /// Builds the interpolant through `samples[i] = u(i*pi/M)`, `M = samples.len() - 1`.
    pub fn interpolate(samples: &[f64]) -> Self {
        let m = samples.len().saturating_sub(1);
        if m == 0 {
            return Self {
                coeffs: vec![samples.first().copied().unwrap_or(0.0)],
                grid_intervals: 0,
                tail_fraction: 0.0,
            };
        }
        let table: Vec<f64> = (0..2 * m).map(|k| (PI * k as f64 / m as f64).cos()).collect();
        let mut coeffs = vec![0.0; m + 1];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.5 * (samples[0] + if j % 2 == 0 { samples[m] } else { -samples[m] });
            for (i, u) in samples.iter().enumerate().take(m).skip(1) {
                acc += u * table[(i * j) % (2 * m)];
            }
            *c = 2.0 * acc / m as f64;
        }
        coeffs[0] *= 0.5;
        coeffs[m] *= 0.5;

        let total: f64 = coeffs.iter().map(|c| c.abs()).sum();
        let tail: f64 = coeffs.iter().skip(3 * m / 4 + 1).map(|c| c.abs()).sum();
        let tail_fraction = if total > 0.0 { tail / total } else { 0.0 };

        let largest = coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        let keep = coeffs.iter().rposition(|c| c.abs() > 1e-15 * largest).map_or(1, |p| p + 1);
        coeffs.truncate(keep);
        Self { coeffs, grid_intervals: m, tail_fraction }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Number of grid intervals the series was built from.
    pub fn grid_intervals(&self) -> usize {
        self.grid_intervals
    }

    /// Share of the absolute coefficient mass carried by the top quarter of
    /// the spectrum. Large values mean the grid does not resolve the profile.
    pub fn tail_fraction(&self) -> f64 {
        self.tail_fraction
    }

    pub fn value(&self, theta: f64) -> f64 {
        self.jet(theta).value
    }

    pub fn jet(&self, theta: f64) -> Jet {
        let (s1, c1) = theta.sin_cos();
        let (mut s, mut c) = (0.0, 1.0);
        let mut jet = Jet { value: 0.0, d1: 0.0, d2: 0.0 };
        for (j, a) in self.coeffs.iter().enumerate() {
            let jf = j as f64;
            jet.value += a * c;
            jet.d1 -= a * jf * s;
            jet.d2 -= a * jf * jf * c;
            let next_c = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = next_c;
        }
        jet
    }
}
