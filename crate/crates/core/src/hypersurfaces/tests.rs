use super::*;
use crate::models::{build_model, BrendleChart, BrendleOrigin, Family};
use proptest::prelude::*;

fn dss3() -> StaticModel {
    build_model(Family::DeSitterSchwarzschild { m: 0.375 }, 3, None).unwrap()
}

fn kottler3() -> StaticModel {
    build_model(Family::Kottler { k: 1, m: 1.0 }, 3, None).unwrap()
}

fn space_form(epsilon: i32, n: usize) -> StaticModel {
    build_model(Family::SpaceForm { epsilon }, n, None).unwrap()
}

/// Mean curvature from the first variation of area of `s = u(theta)` in the
/// areal chart, by nested central differences of the area Lagrangian
/// `L = sqrt(u'^2 / f^2 + u^2) (u sin theta)^{n-2}`.
fn area_variation_h(model: &StaticModel, profile: &Profile, theta: f64) -> f64 {
    let n = model.n as i32;
    let v = |u: f64| model.lapse.value(u);
    let lag = |t: f64, u: f64, p: f64| (p * p / v(u) + u * u).sqrt() * (u * t.sin()).powi(n - 2);
    let lag_p = |t: f64| {
        let j = profile.jet(t);
        let dp = 1e-5;
        (lag(t, j.value, j.d1 + dp) - lag(t, j.value, j.d1 - dp)) / (2.0 * dp)
    };
    let j = profile.jet(theta);
    let du = 1e-5 * j.value;
    let lag_u = (lag(theta, j.value + du, j.d1) - lag(theta, j.value - du, j.d1)) / (2.0 * du);
    let dt = 1e-4;
    let d_lag_p = (lag_p(theta + dt) - lag_p(theta - dt)) / (2.0 * dt);
    let weight = (v(j.value) + j.d1 * j.d1 / (j.value * j.value)).sqrt();
    weight * (lag_u - d_lag_p) / lag(theta, j.value, j.d1)
}

fn legendre_profile(s0: f64, coeffs: &[f64], grid: usize) -> Profile {
    Profile::from_fn(grid, |t| {
        let x = t.cos();
        s0 * (1.0 + coeffs.iter().enumerate().map(|(l, c)| c * legendre(l + 1, x)).sum::<f64>())
    })
    .unwrap()
}

#[test]
fn sphere_area_in_dss() {
    let a = area(&dss3(), &Hypersurface::sphere(0.6)).unwrap();
    assert!((a.value - 4.0 * PI * 0.36).abs() < 1e-14);
}

#[test]
fn hyperbolic_geodesic_sphere_in_distance_chart() {
    let model = space_form(-1, 3);
    let chart = BrendleChart::new(&model, BrendleOrigin::Center).unwrap();
    let sphere = Hypersurface::sphere(1f64.sinh());
    let a = area(&chart, &sphere).unwrap().value;
    assert!((a - 4.0 * PI * 1f64.sinh().powi(2)).abs() < 1e-12);
    let h = mean_curvature(&chart, &sphere, 0.3).unwrap();
    assert!((h - 2.0 / 1f64.tanh()).abs() < 1e-12);
}

#[test]
fn constant_graph_matches_sphere() {
    let model = dss3();
    let graph = Hypersurface::graph(Profile::from_fn(64, |_| 0.6).unwrap());
    let sphere = Hypersurface::sphere(0.6);
    let (ag, asph) = (area(&model, &graph).unwrap().value, area(&model, &sphere).unwrap().value);
    assert!((ag - asph).abs() <= 1e-9 * asph);
    for theta in [0.0, 0.4, PI / 2.0, PI] {
        let hg = mean_curvature(&model, &graph, theta).unwrap();
        let hs = mean_curvature(&model, &sphere, theta).unwrap();
        assert!((hg - hs).abs() < 1e-12, "{theta}: {hg} vs {hs}");
    }
}

#[test]
fn dss_sphere_mean_curvature_against_area_variation() {
    let model = dss3();
    let s = 0.6;
    let f = (1.0 - 0.36 - 0.625f64).sqrt();
    let h = mean_curvature(&model, &Hypersurface::sphere(s), 1.0).unwrap();
    assert!((h - 2.0 * f / s).abs() < 1e-14);
    // push the sphere a unit normal distance delta: ds = f delta
    let delta = 1e-5;
    let area_at = |d: f64| area(&model, &Hypersurface::sphere(s + f * d)).unwrap().value;
    let oracle = (area_at(delta) - area_at(-delta)) / (2.0 * delta) / area_at(0.0);
    assert!((h - oracle).abs() < 1e-7 * h, "{h} vs {oracle}");
}

#[test]
fn euclidean_unit_sphere() {
    for n in [3, 4, 5] {
        let model = space_form(0, n);
        let sphere = Hypersurface::sphere(1.0);
        assert!((mean_curvature(&model, &sphere, 0.0).unwrap() - (n as f64 - 1.0)).abs() < 1e-15);
        let lhs = (n as f64 - 1.0) * integral_f_over_h(&model, &sphere).unwrap().value;
        assert!((lhs - unit_sphere_volume(n - 1)).abs() < 1e-13);
        let ball = bulk_integral(&model, &RegionSpec::new(InnerBoundary::Empty, sphere)).unwrap();
        assert!((ball.value - unit_sphere_volume(n - 1)).abs() < 1e-13);
    }
}

#[test]
fn hyperbolic_mean_curvature_against_area_variation() {
    let model = space_form(-1, 4);
    let chart = BrendleChart::new(&model, BrendleOrigin::Center).unwrap();
    let r = 0.8f64;
    let h = mean_curvature(&chart, &Hypersurface::sphere(r.sinh()), 0.0).unwrap();
    assert!((h - 3.0 / r.tanh()).abs() < 1e-12);
    let d = 1e-5;
    let area_at = |x: f64| area(&chart, &Hypersurface::sphere(x.sinh())).unwrap().value;
    let oracle = (area_at(r + d) - area_at(r - d)) / (2.0 * d) / area_at(r);
    assert!((h - oracle).abs() < 1e-7 * h);
}

#[test]
fn dss_sphere_potential_integral() {
    let model = dss3();
    for s in [0.52, 0.6, 0.64] {
        let v = 2.0 * integral_f_over_h(&model, &Hypersurface::sphere(s)).unwrap().value;
        assert!((v - 4.0 * PI * s.powi(3)).abs() < 1e-13);
    }
}

#[test]
fn kottler_flux_against_finite_difference() {
    let model = kottler3();
    let s = 2.0;
    let flux = flux_integral(&model, &Hypersurface::sphere(s)).unwrap().value;
    let f = |x: f64| (x * x + 1.0 - 2.0 / x).sqrt();
    let h = 1e-4;
    // unit normal f d_s, so df(nu) = f df/ds
    let dfds = (f(s - 2.0 * h) - 8.0 * f(s - h) + 8.0 * f(s + h) - f(s + 2.0 * h)) / (12.0 * h);
    let oracle = 4.0 * PI * s * s * f(s) * dfds;
    assert!((flux - oracle).abs() < 1e-9 * oracle.abs());
}

#[test]
fn dss_bulk_over_inner_horizon() {
    let model = dss3();
    let s1 = model.horizons()[0].s_root;
    for s in [0.55, 0.6] {
        let region = RegionSpec::new(InnerBoundary::Horizon(0), Hypersurface::sphere(s));
        let b = bulk_integral(&model, &region).unwrap().value;
        assert!((b - 4.0 * PI * (s.powi(3) - s1.powi(3))).abs() < 1e-13);
    }
    let thin = RegionSpec::new(InnerBoundary::Horizon(0), Hypersurface::sphere(s1 * (1.0 + 1e-12)));
    assert!(bulk_integral(&model, &thin).unwrap().value.abs() < 1e-10);
}

#[test]
fn region_validation() {
    let model = dss3();
    let outer_horizon = RegionSpec::new(InnerBoundary::Horizon(1), Hypersurface::sphere(0.6));
    assert!(matches!(bulk_integral(&model, &outer_horizon), Err(GeomError::RegionInvalid(_))));
    let ball = RegionSpec::new(InnerBoundary::Empty, Hypersurface::sphere(0.6));
    assert!(matches!(bulk_integral(&model, &ball), Err(GeomError::RegionInvalid(_))));
    let inside = RegionSpec::new(InnerBoundary::Horizon(0), Hypersurface::sphere(0.7));
    assert!(matches!(bulk_integral(&model, &inside), Err(GeomError::RegionInvalid(_))));
}

#[test]
fn graphs_need_round_sections() {
    let model = build_model(Family::Kottler { k: 0, m: 1.0 }, 3, Some(1.0)).unwrap();
    let g = Hypersurface::graph(Profile::from_fn(16, |_| 3.0).unwrap());
    assert!(matches!(area(&model, &g), Err(GeomError::UnsupportedSection(_))));
    let a = area(&model, &Hypersurface::sphere(3.0)).unwrap().value;
    assert!((a - 9.0).abs() < 1e-14);
}

#[test]
fn spheres_are_umbilic() {
    for model in [dss3(), kottler3()] {
        let s = model.horizons()[0].s_root * 1.1;
        assert!(umbilicity_deficit(&model, &Hypersurface::sphere(s)).unwrap().value <= 1e-12);
        let g = Hypersurface::graph(Profile::from_fn(32, |_| s).unwrap());
        assert!(umbilicity_deficit(&model, &g).unwrap().value <= 1e-12);
    }
}

#[test]
fn umbilicity_against_dimension_split_oracle() {
    // kappa_theta and kappa_rot do not depend on n in hyperbolic space, so
    // kappa_rot = H_4 - H_3 and kappa_theta = 2 H_3 - H_4 from area variation.
    let (m3, m4) = (space_form(-1, 3), space_form(-1, 4));
    let profile = legendre_profile(1.2, &[0.0, 0.25, 0.05], 512);
    let surface = Hypersurface::graph(profile.clone());
    for theta in [0.3, 0.9, 1.6, 2.5] {
        let (h3, h4) = (area_variation_h(&m3, &profile, theta), area_variation_h(&m4, &profile, theta));
        let (k_rot, k_theta) = (h4 - h3, 2.0 * h3 - h4);
        for (model, n) in [(&m3, 3.0), (&m4, 4.0)] {
            let oracle = (n - 2.0) / (n - 1.0) * (k_theta - k_rot).powi(2);
            let p = point_geometry(model, &surface, theta).unwrap();
            assert!((p.kappa_theta - k_theta).abs() <= 1e-6 * k_theta.abs(), "n={n} theta={theta}");
            assert!((p.kappa_rot - k_rot).abs() <= 1e-6 * k_rot.abs(), "n={n} theta={theta}");
            // the deficit is a squared difference of nearby curvatures: compare on the H^2 scale
            let scale = p.mean_curvature * p.mean_curvature;
            assert!((p.umbilicity - oracle).abs() <= 1e-6 * scale, "n={n} theta={theta}");
        }
    }
}

#[test]
fn perturbed_deficit_is_positive_and_quadratic() {
    let model = kottler3();
    let deficit = |amp: f64| {
        let s = perturb_sphere(&model, 2.0, amp, 2, 256).unwrap();
        umbilicity_deficit(&model, &s).unwrap().value
    };
    assert!(deficit(0.05) > 0.0);
    let (d1, d2, d4) = (deficit(0.01), deficit(0.02), deficit(0.04));
    assert!((d2 / d1 - 4.0).abs() < 0.2, "{}", d2 / d1);
    assert!((d4 / d2 - 4.0).abs() < 0.2, "{}", d4 / d2);
}

#[test]
fn perturb_sphere_cases() {
    let model = dss3();
    assert_eq!(perturb_sphere(&model, 0.58, 0.0, 2, 64).unwrap(), Hypersurface::sphere(0.58));
    let s = perturb_sphere(&model, 0.58, 0.01, 2, 256).unwrap();
    assert!(is_mean_convex(&model, &s).unwrap());
    // f(0.58) is small here, so the radial direction is stretched and a 5%
    // quadrupole already bends the equator inward
    let r = perturb_sphere(&model, 0.58, 0.05, 2, 256);
    assert!(matches!(r, Err(GeomError::NotMeanConvex(_))), "{r:?}");
    assert!(perturb_sphere(&model, 0.58, 0.9, 2, 256).is_err());
    assert!(perturb_sphere(&kottler3(), 2.0, 0.05, 2, 256).is_ok());
    // strongly dimpled but in-domain profile loses mean convexity
    let euclid = space_form(0, 3);
    let r = perturb_sphere(&euclid, 1.0, 0.9, 6, 256);
    assert!(matches!(r, Err(GeomError::NotMeanConvex(_))), "{r:?}");
}

#[test]
fn quadratures_are_grid_independent() {
    let model = kottler3();
    let coeffs = [0.02, 0.04, -0.01];
    let coarse = Hypersurface::graph(legendre_profile(2.0, &coeffs, 256));
    let fine = Hypersurface::graph(legendre_profile(2.0, &coeffs, 512));
    type Op = fn(&StaticModel, &Hypersurface) -> Result<Quadrature>;
    let ops: [Op; 5] = [area, integral_f_over_h, integral_fh, flux_integral, umbilicity_deficit];
    for op in ops {
        let (a, b) = (op(&model, &coarse).unwrap().value, op(&model, &fine).unwrap().value);
        assert!((a - b).abs() <= 1e-8 * b.abs(), "{a} vs {b}");
    }
}

#[test]
fn charts_agree_on_graph_geometry() {
    let model = dss3();
    let chart = BrendleChart::new(&model, BrendleOrigin::Horizon(0)).unwrap();
    let surface = perturb_sphere(&model, 0.58, 0.008, 2, 128).unwrap();
    for theta in [0.0, 0.7, 2.0, PI] {
        let (a, b) =
            (point_geometry(&model, &surface, theta).unwrap(), point_geometry(&chart, &surface, theta).unwrap());
        assert!((a.mean_curvature - b.mean_curvature).abs() < 1e-10 * a.mean_curvature.abs());
        assert!((a.area_density - b.area_density).abs() < 1e-10 * a.area_density.abs().max(1e-3));
        assert!((a.normal_derivative - b.normal_derivative).abs() < 1e-10);
    }
}

#[test]
fn under_resolved_profile_is_flagged() {
    let model = kottler3();
    let jagged: Vec<f64> = (0..=16).map(|i| 2.0 + if i % 2 == 0 { 0.01 } else { -0.01 }).collect();
    let g = Hypersurface::graph(Profile::from_samples(jagged).unwrap());
    assert!(matches!(mean_curvature(&model, &g, 0.5), Err(GeomError::PoleSingularity(_))));
}

#[test]
fn profile_csv_round_trip() {
    let profile = legendre_profile(2.0, &[0.0, 0.05], 32);
    let mut buf = Vec::new();
    write_profile_csv(&profile, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("# theta,u\n"));
    let back = read_profile_csv(buf.as_slice()).unwrap();
    assert_eq!(back.samples(), profile.samples());
    assert!(read_profile_csv("# theta,u\n0,1\n1,1\n3,1\n".as_bytes()).is_err());
}

#[test]
fn legendre_values() {
    assert_eq!(legendre(0, 0.3), 1.0);
    assert!((legendre(2, 0.3) - 0.5 * (3.0 * 0.09 - 1.0)).abs() < 1e-15);
    assert!((legendre(3, 0.3) - 0.5 * (5.0 * 0.027 - 0.9)).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn graph_mean_curvature_matches_area_variation(
        s0 in 1.5f64..3.0,
        c1 in -0.04f64..0.04,
        c2 in -0.05f64..0.05,
        c3 in -0.03f64..0.03,
        c4 in -0.02f64..0.02,
        theta in 0.05f64..3.09,
    ) {
        let model = kottler3();
        let profile = legendre_profile(s0, &[c1, c2, c3, c4], 512);
        let surface = Hypersurface::graph(profile.clone());
        let h = mean_curvature(&model, &surface, theta).unwrap();
        let oracle = area_variation_h(&model, &profile, theta);
        prop_assert!((h - oracle).abs() <= 1e-5 * oracle.abs(), "{} vs {}", h, oracle);
    }

    #[test]
    fn dss_graph_mean_curvature_matches_area_variation(
        c2 in -0.01f64..0.01,
        c3 in -0.01f64..0.01,
        theta in 0.05f64..3.09,
    ) {
        let model = dss3();
        let profile = legendre_profile(0.58, &[0.0, c2, c3], 512);
        let h = mean_curvature(&model, &Hypersurface::graph(profile.clone()), theta).unwrap();
        let oracle = area_variation_h(&model, &profile, theta);
        prop_assert!((h - oracle).abs() <= 1e-5 * oracle.abs());
    }
}
