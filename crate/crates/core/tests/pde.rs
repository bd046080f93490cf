mod common;

use common::{constant, kpp_scenario, max_abs_diff, simulate, validated};
use frontlab_core::linearized::{EnvelopeFields, LinearizedSolution};
use frontlab_core::pde::{self, front_position, front_width, Grid, SimulationConfig, Stepper, TimeStep};
use frontlab_core::pipeline::simulation_config;
use frontlab_core::profile::{transforms_for, ProfileSettings};
use frontlab_core::reaction::{ReactionSpec, ValidatedSpec};
use frontlab_core::scenario::Scenario;
use frontlab_core::spectral::{eigenfunction, sup_spectrum, EigenSettings};
use frontlab_core::verify::{check_sandwich, InteriorRegion};
use frontlab_core::Real;

fn kpp_fields(spec: &ValidatedSpec, lambda: Real, window: Real) -> EnvelopeFields {
    let b = sup_spectrum(spec, 100.0, 0.05).unwrap();
    let settings = EigenSettings {
        window: Some(window),
        ..EigenSettings::default()
    };
    let pair = eigenfunction(spec, lambda, &b, &settings).unwrap();
    let (_, _, tr) = transforms_for(&spec.g0, &spec.g1, pair.alpha, spec.bounds().nu, &ProfileSettings::default()).unwrap();
    EnvelopeFields::new(LinearizedSolution::single(pair).unwrap(), tr)
}

#[test]
fn constants_are_preserved() {
    let spec = validated(ReactionSpec::kpp(constant(1.0)));
    let grid = Grid::new(-5.0, 5.0, 0.05).unwrap();
    let mut heat = Stepper::new(&spec, grid, 0.01, 0.0).unwrap();
    let mut half = vec![0.5; grid.n];
    for _ in 0..100 {
        heat.step(&spec, &mut half, 0.5, 0.5).unwrap();
    }
    // Exact up to rounding in the tridiagonal solve.
    assert!(half.iter().all(|&u| (u - 0.5).abs() <= 1e-12), "{half:?}");

    let mut s = Stepper::new(&spec, grid, 0.01, 1.0).unwrap();
    for c in [0.0, 1.0] {
        let mut u = vec![c; grid.n];
        for _ in 0..100 {
            s.step(&spec, &mut u, c, c).unwrap();
        }
        assert!(u.iter().all(|&x| x == c), "u = {c} moved");
    }
}

#[test]
fn states_in_the_unit_interval_stay_there_without_clamping() {
    let spec = validated(ReactionSpec::cubic(constant(1.0), 1.0));
    let grid = Grid::new(-10.0, 10.0, 0.02).unwrap();
    let mut s = Stepper::new(&spec, grid, 0.2, 1.0).unwrap();
    let mut u: Vec<Real> = grid.xs().iter().map(|x| 0.5 + 0.5 * (3.0 * x).sin()).collect();
    for _ in 0..200 {
        s.step(&spec, &mut u, 1.0, 0.0).unwrap();
        assert!(u.iter().all(|v| (0.0..=1.0).contains(v)));
    }
    assert_eq!(s.significant_clamps, 0);
}

#[test]
fn steps_are_translation_equivariant() {
    let spec = validated(ReactionSpec::kpp(constant(1.0)));
    let grid = Grid::new(-30.0, 30.0, 0.05).unwrap();
    let shift = 37;
    let seed = |x: Real| 1.0 / (1.0 + (2.0 * (x + 10.0)).exp());
    let positions: Vec<Real> = [0, shift]
        .iter()
        .map(|&m| {
            let mut s = Stepper::new(&spec, grid, 5e-3, 1.0).unwrap();
            let mut u: Vec<Real> = grid.xs().iter().map(|&x| seed(x - m as Real * grid.dx)).collect();
            let (l, r) = (u[0], u[grid.n - 1]);
            for _ in 0..1600 {
                s.step(&spec, &mut u, l, r).unwrap();
            }
            front_position(&grid.xs(), &u, 0.5).unwrap()
        })
        .collect();
    let moved = positions[1] - positions[0];
    assert!((moved - shift as Real * grid.dx).abs() <= grid.dx, "{positions:?}");
}

#[test]
fn scheme_converges_at_second_order() {
    let spec = validated(ReactionSpec::kpp(constant(1.0)));
    let fields = kpp_fields(&spec, 1.5, 20.0);
    let (t0, t1) = pde::default_time_window(&fields, -15.0, 15.0).unwrap();
    let solve = |dx: Real, dt: Real| {
        let config = SimulationConfig {
            x_left: -15.0,
            x_right: 15.0,
            dx,
            t0,
            t1,
            dt: TimeStep::Fixed { dt },
            snapshots: 5,
            reaction_scale: 1.0,
            exhaust_margin: 0.05,
        };
        pde::run(&spec, &fields, &config).unwrap()
    };
    let levels: Vec<_> = [(0.2, 1.6e-2), (0.1, 4e-3), (0.05, 1e-3)]
        .iter()
        .map(|&(dx, dt)| solve(dx, dt))
        .collect();
    // Differences on the coarse nodes at the last output time.
    let err = |a: usize, b: usize| {
        let (ca, cb) = (&levels[a], &levels[b]);
        let ratio = (ca.grid.dx / cb.grid.dx).round() as usize;
        let ua = &ca.snapshots.last().unwrap().u;
        let ub = &cb.snapshots.last().unwrap().u;
        max_abs_diff(ua.iter().copied(), ub.iter().step_by(ratio).copied())
    };
    let (e0, e1) = (err(0, 1), err(1, 2));
    let order = (e0 / e1).log2();
    assert!(order > 1.6, "differences {e0:.3e}, {e1:.3e}: observed order {order:.2}");
    let c = e1 / 0.1f64.powi(2);
    assert!(c < 1.0, "C = {c}");
}

#[test]
fn kpp_solution_stays_between_the_envelopes() {
    let st = simulate(kpp_scenario(0.01, 5e-5));
    let sol = st.simulation.as_ref().unwrap();
    let r = check_sandwich(sol, &InteriorRegion::default(), 1e-4);
    assert!(r.passed(), "{}", r.detail);
    let sp = st.speed.unwrap();
    let exact = 1.5 / 0.5f64.sqrt();
    assert!((sp.speed - exact).abs() <= 0.02 * exact, "{sp:?}");
}

#[test]
fn without_reaction_no_front_propagates() {
    let spec = validated(ReactionSpec::kpp(constant(1.0)));
    let fields = kpp_fields(&spec, 1.5, 25.0);
    let scenario = kpp_scenario(0.05, 1e-3);
    let base = simulation_config(&scenario, &fields).unwrap();
    let reacting = pde::run(&spec, &fields, &base).unwrap();
    let inert = pde::run(&spec, &fields, &SimulationConfig { reaction_scale: 0.0, ..base }).unwrap();
    let xs = reacting.grid.xs();
    let end = |s: &pde::FrontSolution| front_position(&xs, &s.snapshots.last().unwrap().u, 0.5).unwrap();
    assert!(end(&inert) < end(&reacting) - 5.0, "{} vs {}", end(&inert), end(&reacting));
    // Maximum principle: the pure heat flow stays below the largest boundary value seen.
    let cap = inert.snapshots.iter().map(|s| s.u[0]).fold(0.0, Real::max);
    for s in &inert.snapshots {
        assert!(s.u.iter().all(|&u| u <= cap + 1e-12));
    }
}

#[test]
fn periodic_medium_speed_is_stable_across_the_window() {
    // alpha is close to 1 for this medium, so the approach to the asymptotic speed is slow
    // and needs a long window.
    let scenario = Scenario::from_toml_str(
        r#"
[reaction]
model = "kpp"
a = { kind = "sine", base = 1.0, amplitude = 0.3, wavenumber = 1.0 }

[domain]
x_left = -400.0
x_right = 400.0
dx = 0.1

[scheme]
dt = { rule = "fixed", dt = 4e-3 }

[output]
snapshots = 201
"#,
    )
    .unwrap();
    let st = simulate(scenario);
    let sp = st.speed.unwrap();
    assert!(sp.drift <= 0.02, "{sp:?}");
}

#[test]
fn rightmost_crossing_and_widths() {
    let xs: Vec<Real> = (0..=8000).map(|i| -20.0 + 5e-3 * i as Real).collect();
    let u: Vec<Real> = xs.iter().map(|x| (-x / 2f64.sqrt()).exp().min(1.0)).collect();
    let x = front_position(&xs, &u, 0.5).unwrap();
    assert!((x - 2f64.sqrt() * std::f64::consts::LN_2).abs() < 1e-5, "{x}");

    let exp = |k: Real| -> Vec<Real> { xs.iter().map(|x| (-k * x).exp().min(1.0)).collect() };
    let w1 = front_width(&xs, &exp(1.0), 0.1).width;
    let w2 = front_width(&xs, &exp(2.0), 0.1).width;
    assert!((w1 - 9f64.ln()).abs() < 1e-4, "{w1}");
    assert!((w2 - 0.5 * w1).abs() < 1e-4, "{w2}");

    // A decreasing profile: the crossing agrees with bisection on the interpolant.
    let tanh: Vec<Real> = xs.iter().map(|x| 0.5 - 0.5 * (x - 1.234).tanh()).collect();
    let x = front_position(&xs, &tanh, 0.3).unwrap();
    let (mut lo, mut hi): (Real, Real) = (-20.0, 20.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let i = ((mid + 20.0) / 5e-3).floor() as usize;
        let f = tanh[i] + (tanh[i + 1] - tanh[i]) * (mid - xs[i]) / 5e-3;
        if f > 0.3 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((x - lo).abs() < 1e-9, "{x} vs {lo}");
}
