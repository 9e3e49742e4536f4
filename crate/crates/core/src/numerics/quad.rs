//! One-dimensional quadrature: Romberg on step-doubled trapezoid sums and
//! adaptive Gauss-Legendre.

use crate::error::{GeomError, Result};
use std::sync::OnceLock;

/// Value of an integral together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// Romberg integration of `f` over `[a, b]`.
///
/// Trapezoid sums are doubled starting from `initial` intervals; Richardson
/// extrapolation runs across the table until the diagonal changes by at most
/// `max(rel_tol * |value|, abs_tol)`. Two consecutive converged diagonals are
/// required so that an accidental early agreement does not stop the ladder.
pub fn romberg<F>(mut f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<f64>,
{
    const INITIAL: usize = 16;
    const MAX_LEVEL: usize = 16;

    let width = b - a;
    if width == 0.0 {
        return Ok(Quadrature { value: 0.0, error: 0.0, intervals: 0 });
    }
    let mut n = INITIAL;
    let mut h = width / n as f64;
    let mut sum = 0.5 * (f(a)? + f(b)?);
    for i in 1..n {
        sum += f(a + i as f64 * h)?;
    }
    let mut prev_row = vec![sum * h];
    let mut converged_once = false;
    for level in 1..=MAX_LEVEL {
        // refine: add midpoints
        let mut mid = 0.0;
        for i in 0..n {
            mid += f(a + (i as f64 + 0.5) * h)?;
        }
        sum += mid;
        n *= 2;
        h *= 0.5;
        let mut row = Vec::with_capacity(level + 1);
        row.push(sum * h);
        let mut factor = 1.0;
        for j in 1..=level {
            factor *= 4.0;
            let r = row[j - 1] + (row[j - 1] - prev_row[j - 1]) / (factor - 1.0);
            row.push(r);
        }
        let value = row[level];
        let err = (value - prev_row[level - 1]).abs();
        if !value.is_finite() {
            return Err(GeomError::QuadratureNotConverged(format!("non-finite integrand sum at {n} intervals")));
        }
        if err <= (rel_tol * value.abs()).max(abs_tol) {
            if converged_once {
                return Ok(Quadrature { value, error: err, intervals: n });
            }
            converged_once = true;
        } else {
            converged_once = false;
        }
        prev_row = row;
    }
    Err(GeomError::QuadratureNotConverged(format!("Romberg table did not settle after {n} intervals")))
}

fn legendre_nodes(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let m = order.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = order as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn gauss_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| legendre_nodes(12))
}

/// Fixed 12-point Gauss-Legendre rule on `[a, b]`.
pub fn gauss12<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let (x, w) = gauss_rule();
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    x.iter().zip(w).map(|(xi, wi)| wi * f(c + r * xi)).sum::<f64>() * r
}

/// Globally adaptive 12-point Gauss-Legendre: the panel with the largest
/// error estimate is bisected until the summed estimate is below `tol`
/// (absolute) or below round-off of the total.
pub fn adaptive_gauss<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    const MAX_PANELS: usize = 20_000;

    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
    }
    impl PartialEq for Panel {
        fn eq(&self, other: &Self) -> bool {
            self.error == other.error
        }
    }
    impl Eq for Panel {}
    impl PartialOrd for Panel {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Panel {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.error.total_cmp(&other.error)
        }
    }

    let panel = |f: &mut F, a: f64, b: f64, whole: f64| {
        let m = 0.5 * (a + b);
        let (left, right) = (gauss12(f, a, m), gauss12(f, m, b));
        (left, right, (left + right - whole).abs())
    };
    let whole = gauss12(&mut f, a, b);
    let (l, r, error) = panel(&mut f, a, b, whole);
    let mut heap = std::collections::BinaryHeap::new();
    let mut total_error = error;
    let mut total = l + r;
    heap.push(Panel { a, b, value: l + r, error });
    loop {
        if !total.is_finite() {
            return Err(GeomError::QuadratureNotConverged(format!("non-finite integrand on [{a}, {b}]")));
        }
        if total_error <= tol || total_error <= 8.0 * f64::EPSILON * total.abs() {
            return Ok(heap.iter().map(|p| p.value).sum());
        }
        if heap.len() >= MAX_PANELS {
            return Err(GeomError::QuadratureNotConverged(format!(
                "adaptive Gauss-Legendre: error {total_error:e} above {tol:e} after {MAX_PANELS} panels"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // panel cannot be split further in floating point
            return Ok(heap.iter().map(|p| p.value).sum::<f64>() + worst.value);
        }
        let left_whole = gauss12(&mut f, worst.a, m);
        let right_whole = gauss12(&mut f, m, worst.b);
        let (ll, lr, le) = panel(&mut f, worst.a, m, left_whole);
        let (rl, rr, re) = panel(&mut f, m, worst.b, right_whole);
        total_error += le + re - worst.error;
        total += ll + lr + rl + rr - worst.value;
        heap.push(Panel { a: worst.a, b: m, value: ll + lr, error: le });
        heap.push(Panel { a: m, b: worst.b, value: rl + rr, error: re });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn romberg_integrates_sine() {
        let q = romberg(|x| Ok(x.sin()), 0.0, std::f64::consts::PI, 1e-12, 0.0).unwrap();
        assert!((q.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn romberg_handles_kinked_periodic_weight() {
        // |sin| weight: smooth on [0, pi], non-smooth periodic extension
        let q = romberg(|t: f64| Ok(t.sin() * (1.0 + 0.3 * t.cos()).powi(3)), 0.0, std::f64::consts::PI, 1e-12, 0.0)
            .unwrap();
        // int_{-1}^{1} (1 + 0.3 x)^3 dx
        let exact = ((1.3f64).powi(4) - (0.7f64).powi(4)) / (4.0 * 0.3);
        assert!((q.value - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn romberg_propagates_integrand_errors() {
        let r = romberg(
            |x| if x > 1.0 { Err(GeomError::NotMeanConvex("test".into())) } else { Ok(x) },
            0.0,
            2.0,
            1e-10,
            0.0,
        );
        assert!(matches!(r, Err(GeomError::NotMeanConvex(_))));
    }

    #[test]
    fn gauss_rule_is_exact_for_polynomials() {
        let mut f = |x: f64| x.powi(23) + 3.0 * x.powi(4);
        let v = gauss12(&mut f, 0.0, 1.0);
        assert!((v - (1.0 / 24.0 + 3.0 / 5.0)).abs() < 1e-14);
    }

    #[test]
    fn adaptive_gauss_handles_sqrt_singularity() {
        let v = adaptive_gauss(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-9).unwrap();
        assert!((v - 2.0).abs() < 1e-7);
    }
}
