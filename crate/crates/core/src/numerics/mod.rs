//! Numerical building blocks shared by the geometry modules.

pub mod cosine;
pub mod ode;
pub mod quad;
pub mod richardson;
pub mod roots;
pub mod tridiag;

/// Volume of the unit `k`-sphere in R^{k+1}: ω_0 = 2, ω_1 = 2π, ω_k = 2π ω_{k-2} / (k-1).
pub fn unit_sphere_volume(k: usize) -> f64 {
    match k {
        0 => 2.0,
        1 => 2.0 * std::f64::consts::PI,
        _ => 2.0 * std::f64::consts::PI * unit_sphere_volume(k - 2) / (k as f64 - 1.0),
    }
}

/// Fourth-order central first and second derivatives of `f` at `x` with step `h`.
pub fn central_derivatives<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> (f64, f64) {
    let (fm2, fm1, f0, fp1, fp2) = (f(x - 2.0 * h), f(x - h), f(x), f(x + h), f(x + 2.0 * h));
    let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
    (d1, d2)
}
