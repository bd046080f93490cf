mod common;

use std::sync::OnceLock;

use common::{kpp_scenario, simulate};
use frontlab_core::pde::{FrontSolution, Grid, SchemeMeta, Snapshot};
use frontlab_core::pipeline::PipelineState;
use frontlab_core::verify::{
    certify, check_front_limits, check_monotone_time, check_ratio_limit, check_sandwich, width_bound, InteriorRegion,
    Provenance, Status, VerifySettings, WidthForm,
};
use frontlab_core::Real;

fn kpp_run() -> &'static PipelineState {
    static RUN: OnceLock<PipelineState> = OnceLock::new();
    RUN.get_or_init(|| simulate(kpp_scenario(0.02, 2e-4)))
}

fn solution() -> FrontSolution {
    kpp_run().simulation.clone().expect("simulated")
}

fn provenance() -> Provenance {
    Provenance {
        config_hash: "test".into(),
        dx: 0.0,
        dt: 0.0,
        t0: 0.0,
    }
}

fn synthetic(grid: Grid, times: &[Real], u: impl Fn(Real, Real) -> Real) -> FrontSolution {
    let snapshots = times
        .iter()
        .map(|&t| {
            let field: Vec<Real> = grid.xs().iter().map(|&x| u(t, x)).collect();
            Snapshot {
                t,
                log_v: vec![0.0; grid.n],
                w_tilde: field.clone(),
                w_clamped: field.clone(),
                u: field,
            }
        })
        .collect();
    FrontSolution {
        grid,
        snapshots,
        meta: SchemeMeta {
            dx: grid.dx,
            dt: 1e-3,
            steps: 0,
            lipschitz: 1.0,
            clamps: 0,
            significant_clamps: 0,
            upwind_nodes: 0,
        },
    }
}

#[test]
fn kpp_run_passes_sandwich_monotonicity_ratio_and_limits() {
    let sol = solution();
    let tr = kpp_run().transforms.as_ref().unwrap();
    let r = InteriorRegion::default();
    for rec in [
        check_sandwich(&sol, &r, 1e-3),
        check_monotone_time(&sol, &r, 1e-8),
        check_ratio_limit(&sol, tr, &r, 1e-3, 5e-3),
        check_front_limits(&sol, &r, 1e-3),
    ] {
        assert!(rec.passed(), "{}: {}", rec.name, rec.detail);
    }
}

#[test]
fn initial_slice_sits_on_the_lower_envelope() {
    let sol = solution();
    let first = &sol.snapshots[0];
    assert_eq!(first.u, first.w_tilde);
}

#[test]
fn reversed_envelopes_fail_the_sandwich() {
    let mut sol = solution();
    for s in &mut sol.snapshots {
        std::mem::swap(&mut s.w_tilde, &mut s.w_clamped);
    }
    let rec = check_sandwich(&sol, &InteriorRegion::default(), 1e-3);
    assert_eq!(rec.status, Status::Fail);
    assert!(rec.worst_margin < -1e-3, "{}", rec.worst_margin);
    assert!(rec.location.is_some());
}

#[test]
fn decreasing_field_fails_monotonicity() {
    let mut sol = solution();
    let fields: Vec<Vec<Real>> = sol.snapshots.iter().rev().map(|s| s.u.clone()).collect();
    for (s, u) in sol.snapshots.iter_mut().zip(fields) {
        s.u = u;
    }
    let rec = check_monotone_time(&sol, &InteriorRegion::default(), 1e-8);
    assert_eq!(rec.status, Status::Fail);
    assert!(rec.worst_margin < 0.0);
}

#[test]
fn stationary_state_is_not_strictly_increasing() {
    let grid = Grid::new(0.0, 10.0, 0.1).unwrap();
    let times: Vec<Real> = (0..20).map(|j| j as Real).collect();
    let sol = synthetic(grid, &times, |_, _| 1.0);
    let rec = check_monotone_time(&sol, &InteriorRegion::default(), 1e-8);
    assert_eq!(rec.worst_margin, 0.0);
    assert_eq!(rec.values["strict"], 0.0);
    assert_eq!(rec.status, Status::Fail);
}

#[test]
fn front_at_the_edge_fails_the_limits() {
    let grid = Grid::new(0.0, 10.0, 0.1).unwrap();
    let times: Vec<Real> = (0..20).map(|j| 0.1 * j as Real).collect();
    let sol = synthetic(grid, &times, |t, x| 1.0 / (1.0 + (4.0 * (x - 9.8 - t)).exp()));
    let rec = check_front_limits(&sol, &InteriorRegion::default(), 1e-3);
    assert_eq!(rec.status, Status::Fail, "{}", rec.detail);
}

#[test]
fn passing_sandwich_implies_passing_limits() {
    let base = solution();
    let variants: Vec<Box<dyn Fn(Real) -> Real>> = vec![
        Box::new(|u| u),
        Box::new(|u| 0.999 * u),
        Box::new(|u| (u + 2e-3).min(1.0)),
        Box::new(|u| u * u),
    ];
    let r = InteriorRegion::default();
    let mut implications = 0;
    for f in &variants {
        let mut sol = base.clone();
        for s in &mut sol.snapshots {
            s.u.iter_mut().for_each(|u| *u = f(*u));
        }
        for tol in [1e-4, 1e-3, 1e-2, 1e-1] {
            if check_sandwich(&sol, &r, tol).passed() {
                implications += 1;
                let limits = check_front_limits(&sol, &r, tol);
                assert!(limits.passed(), "tol {tol}: {}", limits.detail);
            }
        }
    }
    assert!(implications >= 4);
}

#[test]
fn doubling_every_tolerance_keeps_passing_checks() {
    let sol = solution();
    let run = kpp_run();
    let tr = run.transforms.as_ref().unwrap();
    let l = run.linear.as_ref().unwrap().doubling_length;
    let base = VerifySettings {
        sandwich_tol: 1e-4,
        width_form: WidthForm::Ratio,
        ratio_tol: 1e-3,
        limits_tol: 1e-4,
        ..VerifySettings::default()
    };
    let doubled = VerifySettings {
        sandwich_tol: 2.0 * base.sandwich_tol,
        monotone_tol: 2.0 * base.monotone_tol,
        ratio_tol: 2.0 * base.ratio_tol,
        limits_tol: 2.0 * base.limits_tol,
        ..base
    };
    let a = certify(&sol, tr, l, &base, provenance()).unwrap();
    let b = certify(&sol, tr, l, &doubled, provenance()).unwrap();
    for (x, y) in a.records.iter().zip(&b.records) {
        assert_eq!(x.name, y.name);
        if x.passed() {
            assert!(y.passed(), "{} passes at tol but not at 2 tol", x.name);
        }
    }
    let names: Vec<&str> = a.records.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(names, ["sandwich", "monotone_time", "width", "ratio_limit", "front_limits"]);
}

#[test]
fn width_bound_shrinks_as_epsilon_grows() {
    let run = kpp_run();
    let tr = run.transforms.as_ref().unwrap();
    let l = run.linear.as_ref().unwrap().doubling_length;
    let mut last = (Real::INFINITY, Real::INFINITY);
    for k in 1..=9 {
        let eps = 0.05 * k as Real - 1e-3;
        let b = width_bound(l, eps, tr).unwrap();
        assert!(b.stated <= last.0 && b.ratio_form <= last.1, "eps {eps}: {b:?}");
        last = (b.stated, b.ratio_form);
    }
    assert!(width_bound(l, 0.5, tr).is_err());
}
