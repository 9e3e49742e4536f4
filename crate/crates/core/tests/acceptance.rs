//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the verdict lines always reach the terminal.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use staticgeom::asymptotics::{build_chart, extract_expansion, flux_limit};
use staticgeom::cli::run_with;
use staticgeom::horizon_killing::{check_bound, horizon_term_from_a0, solve_a0, solve_axisymmetric, HorizonProblem};
use staticgeom::hypersurfaces::{perturb_sphere, Hypersurface, InnerBoundary, RegionSpec};
use staticgeom::imcf::{flow_axisym, flow_sphere_analytic, h_evolution_check, q_monotonicity, FlowTrace};
use staticgeom::inequality::{
    dss_identity, global_divergence_check, kottler_mass, main_horizon_term, reverse_penrose, verify_main,
    verify_null_homologous, DEFAULT_TOL,
};
use staticgeom::models::{
    build_model, dss_critical_mass, sample_radii, static_residual, BrendleChart, BrendleOrigin, Family, StaticModel,
};
use staticgeom::numerics::unit_sphere_volume;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn model(family: Family, n: usize) -> StaticModel {
    build_model(family, n, None).unwrap_or_else(|e| panic!("{family:?} n={n}: {e}"))
}

fn kottler(n: usize, k: i32, m: f64) -> StaticModel {
    model(Family::Kottler { k, m }, n)
}

fn dss(n: usize, m: f64) -> StaticModel {
    model(Family::DeSitterSchwarzschild { m }, n)
}

fn over_horizon(surface: Hypersurface) -> RegionSpec {
    RegionSpec::new(InnerBoundary::Horizon(0), surface)
}

fn static_suite() -> Check {
    let mut models = vec![
        model(Family::SpaceForm { epsilon: 1 }, 3),
        model(Family::SpaceForm { epsilon: 0 }, 3),
        model(Family::SpaceForm { epsilon: -1 }, 3),
        model(Family::Schwarzschild { m: 1.0 }, 3),
        model(Family::Schwarzschild { m: 1.0 }, 4),
    ];
    for n in [3, 4, 5] {
        for frac in [0.2, 0.5, 0.9] {
            models.push(dss(n, frac * dss_critical_mass(n)));
        }
    }
    for n in [3, 4] {
        for k in [-1, 0, 1] {
            models.push(kottler(n, k, 1.0));
        }
    }
    let mut worst = (0.0f64, 0.0f64);
    for m in &models {
        let nf = m.n as f64;
        ensure!((m.scalar_curvature() - m.epsilon as f64 * nf * (nf - 1.0)).abs() == 0.0, "R constant mismatch");
        for s in sample_radii(m, 20) {
            let r = static_residual(m, s, 8).map_err(|e| format!("{} n={} s={s}: {e}", m.family.name(), m.n))?;
            worst = (worst.0.max(r.max_residual()), worst.1.max(r.max_scalar_error()));
        }
    }
    ensure!(worst.0 <= 1e-6 && worst.1 <= 1e-6, "residual {:.3e}, scalar error {:.3e}", worst.0, worst.1);
    Ok(format!("{} models x 20 radii, residual {:.2e}, R error {:.2e}", models.len(), worst.0, worst.1))
}

fn umbilic_equality() -> Check {
    let mut worst = 0.0f64;
    let dss_model = dss(3, 0.375);
    let (s1, s2) = (dss_model.horizons()[0].s_root, dss_model.horizons()[1].s_root);
    let kot = kottler(3, 1, 1.0);
    let s_h = kot.horizons()[0].s_root;
    for i in 1..=10 {
        let x = i as f64 / 11.0;
        for (m, s) in [(&dss_model, s1 + x * (s2 - s1)), (&kot, s_h * (1.0 + 10.0 * x))] {
            let r = verify_main(m, &over_horizon(Hypersurface::sphere(s)), DEFAULT_TOL).map_err(|e| e.to_string())?;
            ensure!(r.slack.abs() <= 1e-8 * r.lhs, "{} s={s}: slack {:.3e}", m.family.name(), r.slack);
            worst = worst.max(r.slack.abs() / r.lhs);
        }
    }
    let ball = |s| RegionSpec::new(InnerBoundary::Empty, Hypersurface::sphere(s));
    let euclid = model(Family::SpaceForm { epsilon: 0 }, 3);
    let hyp = model(Family::SpaceForm { epsilon: -1 }, 3);
    let chart = BrendleChart::new(&hyp, BrendleOrigin::Center).map_err(|e| e.to_string())?;
    let mut worst_null = 0.0f64;
    for r in [0.25, 0.5, 1.0, 2.0, 3.0] {
        let e = verify_null_homologous(&euclid, &ball(r), DEFAULT_TOL).map_err(|e| e.to_string())?;
        let h = verify_null_homologous(&chart, &ball(f64::sinh(r)), DEFAULT_TOL).map_err(|e| e.to_string())?;
        worst_null = worst_null.max(e.slack.abs()).max(h.slack.abs());
    }
    ensure!(worst_null <= 1e-8, "null-homologous slack {worst_null:.3e}");
    Ok(format!("main |slack|/lhs {worst:.2e}, null-homologous |slack| {worst_null:.2e}"))
}

fn strictness() -> Check {
    let amps = [0.01, 0.02, 0.05];
    let dss_model = dss(3, 0.1);
    let s_max = dss_model.lapse.stationary_point().ok_or("no lapse maximum")?;
    let mut lines = Vec::new();
    for (m, s0) in [(kottler(3, 1, 1.0), 2.0), (dss_model, s_max)] {
        let mut slacks = Vec::new();
        for a in amps {
            let surface = perturb_sphere(&m, s0, a, 2, 256).map_err(|e| format!("amp {a}: {e}"))?;
            slacks.push(verify_main(&m, &over_horizon(surface), DEFAULT_TOL).map_err(|e| e.to_string())?.slack);
        }
        ensure!(slacks.iter().all(|s| *s > 0.0), "{}: slacks {slacks:?}", m.family.name());
        ensure!(slacks.windows(2).all(|w| w[1] > w[0]), "{}: not increasing {slacks:?}", m.family.name());
        let ratios: Vec<f64> = slacks.iter().zip(amps).map(|(s, a)| s / (a * a)).collect();
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(*r), hi.max(*r)));
        ensure!(hi <= 2.0 * lo, "{}: slack/amp^2 {ratios:?}", m.family.name());
        lines.push(format!("{} slack/amp^2 in [{lo:.3}, {hi:.3}]", m.family.name()));
    }
    Ok(lines.join("; "))
}

fn reverse_penrose_equality() -> Check {
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in [3, 4, 5] {
        for k in [-1, 0, 1] {
            for m in [0.3, 1.0, 4.0] {
                let model = kottler(n, k, m);
                let r = reverse_penrose(&model, None, DEFAULT_TOL).map_err(|e| format!("n={n} k={k} m={m}: {e}"))?;
                let mass = kottler_mass(&model).map_err(|e| e.to_string())?;
                ensure!((r.lhs - mass).abs() <= 1e-8 * mass, "n={n} k={k} m={m}: bound {} mass {mass}", r.lhs);
                worst = worst.max((r.lhs - mass).abs() / mass);
                count += 1;
            }
        }
    }
    let unit = kottler(3, 1, 1.0);
    ensure!((unit.horizons()[0].s_root - 1.0).abs() < 1e-14, "unit horizon at {}", unit.horizons()[0].s_root);
    let r = reverse_penrose(&unit, None, DEFAULT_TOL).map_err(|e| e.to_string())?;
    ensure!((r.lhs - 1.0).abs() <= 1e-8, "unit-radius bound {}", r.lhs);
    Ok(format!("{count} models, max relative gap {worst:.2e}; unit horizon bound {:.15}", r.lhs))
}

fn two_horizon_identity() -> Check {
    let mut worst = 0.0f64;
    for n in [3, 4, 5] {
        for frac in [0.1, 0.5, 0.9] {
            let model = dss(n, frac * dss_critical_mass(n));
            let id = dss_identity(&model, 1e-9).map_err(|e| e.to_string())?;
            let dev = id.diagnostics["max_relative_deviation"].as_f64().unwrap_or(f64::NAN);
            ensure!(id.holds() && dev <= 1e-9, "n={n} m={frac} m_crit: deviation {dev:.3e}");
            let g = global_divergence_check(&model, 1e-8).map_err(|e| e.to_string())?;
            ensure!(g.holds(), "n={n} m={frac} m_crit: divergence slack {:.3e}", g.slack);
            worst = worst.max(dev);
        }
    }
    Ok(format!("max three-way deviation {worst:.2e}"))
}

fn mass_extraction() -> Check {
    let mut worst = (0.0f64, 0.0f64);
    for m in [0.5, 1.0, 2.0] {
        let model = kottler(3, 1, m);
        let fit =
            extract_expansion(&model, &build_chart(&model).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let mass_err = (fit.mass - m).abs() / m;
        let alpha_err = (fit.alpha + fit.tr_tau / 3.0).abs() / (fit.tr_tau / 3.0).abs();
        ensure!(
            mass_err <= 1e-3 && alpha_err <= 1e-3,
            "m={m}: mass {} alpha {} trtau {}",
            fit.mass,
            fit.alpha,
            fit.tr_tau
        );
        worst = (worst.0.max(mass_err), worst.1.max(alpha_err));
    }
    let zero = kottler(3, 1, 0.0);
    let chart = build_chart(&zero).map_err(|e| e.to_string())?;
    let mut zero_err = 0.0f64;
    for s in [1.5f64, 3.0, 10.0, 1e3, 1e5] {
        let exact = 2.0 / ((s * s + 1.0).sqrt() + s);
        zero_err = zero_err.max((chart.rho_of_s(s).map_err(|e| e.to_string())? - exact).abs() / exact);
    }
    ensure!(zero_err <= 1e-10, "zero-mass chart error {zero_err:.3e}");
    Ok(format!("mass rel err {:.2e}, alpha rel err {:.2e}, zero-mass chart {zero_err:.2e}", worst.0, worst.1))
}

fn asymptotic_flux() -> Check {
    let mut worst = 0.0f64;
    for m in [0.5, 1.0, 2.0] {
        let model = kottler(3, 1, m);
        let limit = flux_limit(&model, &build_chart(&model).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let expected = -unit_sphere_volume(2) * m;
        let err = (limit.limit - expected).abs() / expected.abs();
        ensure!(err <= 1e-3, "m={m}: limit {} expected {expected}", limit.limit);
        worst = worst.max(err);
    }
    Ok(format!("max relative error {worst:.2e}"))
}

fn imcf_area_law() -> Check {
    let model = kottler(3, 1, 1.0);
    let analytic = flow_sphere_analytic(&model, 2.0, 1.0).map_err(|e| e.to_string())?;
    let mut analytic_err = 0.0f64;
    for st in &analytic.states {
        let Hypersurface::CoordinateSphere { s } = st.surface else { return Err("analytic flow left spheres".into()) };
        analytic_err = analytic_err.max((s - 2.0 * (st.t / 2.0).exp()).abs() / s);
        analytic_err = analytic_err.max((st.area - 16.0 * PI * st.t.exp()).abs() / st.area);
    }
    ensure!(analytic_err <= 1e-14, "analytic flow error {analytic_err:.3e}");

    let start = Instant::now();
    let initial = perturb_sphere(&model, 2.0, 0.05, 2, 512).map_err(|e| e.to_string())?;
    let trace = flow_axisym(&model, &initial, 1.0, 64, 512).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure!(trace.stopped.is_none(), "flow stopped: {:?}", trace.stopped);
    ensure!(trace.area_law_error() <= 1e-4, "area law error {:.3e}", trace.area_law_error());
    ensure!(secs <= 300.0, "grid 512 flow took {secs:.0} s");

    let sphere = flow_axisym(&model, &Hypersurface::sphere(2.0), 1.0, 64, 64).map_err(|e| e.to_string())?;
    let mut sphere_err = 0.0f64;
    for st in &sphere.states {
        let Hypersurface::AxisymGraph(p) = &st.surface else { return Err("PDE flow returned a sphere".into()) };
        let exact = 2.0 * (st.t / 2.0).exp();
        sphere_err = sphere_err.max((p.max() - exact).abs().max((p.min() - exact).abs()) / exact);
    }
    ensure!(sphere_err <= 1e-6, "sphere PDE flow error {sphere_err:.3e}");
    Ok(format!(
        "analytic {analytic_err:.1e}, grid 512 area law {:.2e} in {secs:.1} s, sphere PDE vs analytic {sphere_err:.2e}",
        trace.area_law_error()
    ))
}

/// `max |Q - Q0|` relative to `max(|Q0|, (n-1) vol0^{1/(n-1)})`; Q vanishes on flat sections.
fn q_spread(model: &StaticModel, trace: &FlowTrace) -> std::result::Result<f64, String> {
    let q0 = trace.states[0].q.ok_or("Q undefined")?;
    let nf = model.n as f64;
    let scale = q0.abs().max((nf - 1.0) * model.section_volume.powf(1.0 / (nf - 1.0)));
    let spread = trace.states.iter().map(|s| s.q.map_or(f64::INFINITY, |q| (q - q0).abs())).fold(0.0, f64::max);
    Ok(spread / scale)
}

fn q_monotone() -> Check {
    let mut const_err = 0.0f64;
    for (n, k, m) in [(3, 1, 1.0), (4, 0, 0.5), (3, -1, 2.0), (5, 1, 0.3)] {
        let model = kottler(n, k, m);
        let s0 = 1.5 * model.horizons()[0].s_root;
        const_err =
            const_err.max(q_spread(&model, &flow_sphere_analytic(&model, s0, 1.0).map_err(|e| e.to_string())?)?);
    }
    let model = kottler(3, 1, 1.0);
    let pde_sphere = flow_axisym(&model, &Hypersurface::sphere(2.0), 1.0, 64, 64).map_err(|e| e.to_string())?;
    const_err = const_err.max(q_spread(&model, &pde_sphere)?);
    ensure!(const_err <= 1e-6, "Q spread on sphere flows {const_err:.3e}");

    let mut worst_increase = f64::NEG_INFINITY;
    for (n, amp, mode) in [(3, 0.05, 2), (3, 0.03, 4), (4, 0.04, 2)] {
        let model = kottler(n, 1, 1.0);
        let initial = perturb_sphere(&model, 2.0, amp, mode, 128).map_err(|e| e.to_string())?;
        let trace = flow_axisym(&model, &initial, 1.0, 64, 128).map_err(|e| e.to_string())?;
        let q0 = trace.states[0].q.ok_or("Q undefined")?;
        let mono = q_monotonicity(&trace, 1e-5 * q0.abs()).map_err(|e| e.to_string())?;
        ensure!(mono.passed, "n={n} amp={amp} l={mode}: increase {:.3e}", mono.max_increase);
        worst_increase = worst_increase.max(mono.max_increase / q0.abs());
    }
    let mut h_err = 0.0f64;
    for (n, k, m, s0) in [(3, 1, 1.0, 2.0), (4, -1, 0.5, 3.0)] {
        let r = h_evolution_check(&kottler(n, k, m), s0).map_err(|e| e.to_string())?;
        ensure!(r.passed && r.times.len() == 10, "H evolution n={n}: {:.3e}", r.max_relative_error);
        h_err = h_err.max(r.max_relative_error);
    }
    Ok(format!(
        "sphere Q spread {const_err:.2e}, worst step increase {worst_increase:.2e} |Q0|, H evolution {h_err:.2e}"
    ))
}

fn manufactured_error(n: usize, grid: usize) -> std::result::Result<f64, String> {
    let radius = 0.8;
    // a = 2 + cos t, so Lap a = -(cos t + (n-2) cos t) / R^2 on the round sphere
    let exact = |t: f64| 2.0 + t.cos();
    let q = |t: f64| 0.5 + t.sin().powi(2);
    let lap = |t: f64| -((n as f64 - 1.0) * t.cos()) / (radius * radius);
    let thetas: Vec<f64> = (0..=grid).map(|i| i as f64 * PI / grid as f64).collect();
    let qs: Vec<f64> = thetas.iter().map(|&t| q(t)).collect();
    let rhs: Vec<f64> = thetas.iter().map(|&t| -lap(t) + q(t) * exact(t)).collect();
    let (a, _) = solve_axisymmetric(n, radius, &qs, &rhs).map_err(|e| e.to_string())?;
    Ok(thetas.iter().zip(&a).map(|(&t, a)| (a - exact(t)).abs()).fold(0.0, f64::max))
}

fn horizon_bvp() -> Check {
    let mut const_err = 0.0f64;
    for (n, c, kappa) in [(3, 1.0, 1.0), (4, 2.5, 0.4), (5, 0.3, 3.0)] {
        let p = HorizonProblem::from_fn(n, kappa, 1.2, 128, |_| -c).map_err(|e| e.to_string())?;
        let a = solve_a0(&p).map_err(|e| e.to_string())?;
        let exact = (n as f64 - 1.0) * kappa / c;
        const_err = a.a0.iter().map(|v| (v - exact).abs() / exact).fold(const_err, f64::max);
    }
    ensure!(const_err <= 1e-12, "constant-coefficient error {const_err:.3e}");

    let p = HorizonProblem::from_fn(3, 1.0, 1.0, 256, |t| -1.0 - 0.5 * t.cos().powi(2) - 0.2 * t.cos())
        .map_err(|e| e.to_string())?;
    let a = solve_a0(&p).map_err(|e| e.to_string())?;
    ensure!(check_bound(&a, &p) && a.min_value > p.bound(), "min a0 {} bound {}", a.min_value, p.bound());

    let mut min_order = f64::INFINITY;
    for n in [3, 4, 5] {
        let errs = [64, 128, 256].map(|g| manufactured_error(n, g));
        let errs: Vec<f64> = errs.into_iter().collect::<std::result::Result<_, _>>()?;
        for w in errs.windows(2) {
            min_order = min_order.min((w[0] / w[1]).log2());
        }
    }
    ensure!(min_order >= 1.9, "observed order {min_order:.3}");

    let mut term_err = 0.0f64;
    for m in [kottler(3, 1, 1.0), kottler(4, -1, 0.5), kottler(5, 0, 2.0), dss(3, 0.375), dss(4, 0.1)] {
        let h = m.horizons()[0];
        let a = solve_a0(&HorizonProblem::from_model_horizon(&m, 0, 32).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let main = main_horizon_term(&m, &h);
        term_err = term_err.max((horizon_term_from_a0(&a, h.volume) - main).abs() / main);
    }
    ensure!(term_err <= 1e-10, "horizon term mismatch {term_err:.3e}");
    Ok(format!(
        "constant {const_err:.1e}, strict margin {:.3e}, order {min_order:.3}, horizon term {term_err:.1e}",
        a.min_value - p.bound()
    ))
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("staticgeom").chain(args.iter().copied());
    (run_with(argv, &mut out, &mut err), out)
}

fn cli_contract() -> Check {
    let kot = r#"{"family":"kottler","n":3,"params":{"k":1,"m":1.0}}"#;
    let dss_json = r#"{"family":"dss","n":3,"params":{"m":0.375}}"#;
    let runs = [
        vec!["verify", "main", "--model", dss_json, "--sphere", "0.6", "--no-timestamp"],
        vec!["verify", "penrose", "--model", kot, "--no-timestamp"],
        vec!["mass", "extract", "--model", kot, "--no-timestamp"],
        vec!["killing", "solve", "--n", "3", "--kappa", "1", "--ric=-1,0,-0.3", "--no-timestamp"],
    ];
    for args in &runs {
        let (code, a) = cli(args);
        let (_, b) = cli(args);
        ensure!(code == 0, "{args:?} exited {code}");
        ensure!(a == b, "{args:?} not byte-identical");
    }
    let fail = cli(&["verify", "main", "--model", kot, "--sphere", "3", "--tol=-1e-3", "--no-timestamp"]).0;
    let usage = cli(&["verify", "main", "--model", r#"{"family":"kottler"}"#, "--sphere", "3"]).0;
    let numeric =
        cli(&["flow", "imcf", "--model", dss_json, "--analytic", "--sphere", "0.6", "--T", "5", "--csv", "/dev/null"])
            .0;
    ensure!((fail, usage, numeric) == (1, 2, 3), "exit codes fail/usage/numeric = {fail}/{usage}/{numeric}");
    Ok(format!("{} byte-identical reruns, exit codes 0/1/2/3", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("static solutions", static_suite),
        ("umbilic equality", umbilic_equality),
        ("strictness under perturbation", strictness),
        ("reverse Penrose equality", reverse_penrose_equality),
        ("two-horizon identity", two_horizon_identity),
        ("mass extraction", mass_extraction),
        ("asymptotic flux", asymptotic_flux),
        ("IMCF area law", imcf_area_law),
        ("Q monotonicity", q_monotone),
        ("horizon boundary value problem", horizon_bvp),
        ("CLI determinism and exit codes", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1} s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
