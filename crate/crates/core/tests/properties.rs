mod common;

use std::sync::OnceLock;

use common::{constant, validated};
use frontlab_core::pde::{front_width, Grid, Stepper};
use frontlab_core::profile::{transforms_for, wave_speed, ProfileSettings, ProfileTransforms};
use frontlab_core::reaction::{nu_penalty, threshold_from_bounds, CoefficientField, ReactionSpec, ValidatedSpec};
use frontlab_core::Real;
use proptest::prelude::*;

fn cubic_spec() -> &'static ValidatedSpec {
    static SPEC: OnceLock<ValidatedSpec> = OnceLock::new();
    SPEC.get_or_init(|| {
        validated(ReactionSpec::cubic(
            CoefficientField::Sine {
                base: 1.0,
                amplitude: 0.3,
                wavenumber: 1.0,
            },
            1.0,
        ))
    })
}

fn transforms() -> &'static ProfileTransforms {
    static TR: OnceLock<ProfileTransforms> = OnceLock::new();
    TR.get_or_init(|| {
        let spec = ReactionSpec::cubic(constant(1.0), 1.0);
        transforms_for(&spec.g0, &spec.g1, 0.15, 2.0, &ProfileSettings::default())
            .unwrap()
            .2
    })
}

const NODES: usize = 64;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn steps_preserve_order_and_range(
        lower in prop::collection::vec(0.0..=1.0f64, NODES),
        gap in prop::collection::vec(0.0..=1.0f64, NODES),
        dt_fraction in 0.05..1.0f64,
    ) {
        let spec = cubic_spec();
        let grid = Grid::new(-3.0, 3.0, 6.0 / (NODES - 1) as Real).unwrap();
        let upper: Vec<Real> = lower.iter().zip(&gap).map(|(l, g)| l + g * (1.0 - l)).collect();
        let lip = frontlab_core::pde::lipschitz_estimate(spec, &grid);
        let mut s = Stepper::new(spec, grid, dt_fraction / lip, 1.0).unwrap();
        let (mut a, mut b) = (lower.clone(), upper.clone());
        for _ in 0..5 {
            s.step(spec, &mut a, lower[0], lower[NODES - 1]).unwrap();
            s.step(spec, &mut b, upper[0], upper[NODES - 1]).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!(x <= y);
                prop_assert!((0.0..=1.0).contains(x) && (0.0..=1.0).contains(y));
            }
        }
        prop_assert_eq!(s.significant_clamps, 0);
    }

    #[test]
    fn exponential_width_scales_inversely_with_rate(k in 0.2..5.0f64, eps in 0.01..0.45f64) {
        let xs: Vec<Real> = (0..=20_000).map(|i| -5.0 / k + 1e-3 * i as Real / k).collect();
        let u: Vec<Real> = xs.iter().map(|x| (-k * x).exp().min(1.0)).collect();
        let w = front_width(&xs, &u, eps);
        let exact = ((1.0 - eps) / eps).ln() / k;
        prop_assert!((w.width - exact).abs() <= 1e-5 / k, "{} vs {}", w.width, exact);
    }

    #[test]
    fn penalty_is_increasing_and_below_one(nu in 1.0..50.0f64, step in 1e-3..5.0f64) {
        let (p, q) = (nu_penalty(nu).unwrap(), nu_penalty(nu + step).unwrap());
        prop_assert!((0.0..1.0).contains(&p) && p < q);
        prop_assert_eq!(threshold_from_bounds(2.0, 1.5, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn admissible_speeds_reach_two_sqrt_nu(nu in 1.0..10.0f64, frac in 0.01..1.0f64) {
        let cap = (nu.sqrt() - (nu - 1.0).sqrt()).powi(2);
        let c = wave_speed(frac * cap, nu).unwrap();
        prop_assert!(c >= 2.0 * nu.sqrt() * (1.0 - 1e-12));
    }

    #[test]
    fn transform_inverses_round_trip(u in 1e-6..0.999f64) {
        let tr = transforms();
        let v = tr.h_inv(u).unwrap();
        prop_assert!((tr.h(v) - u).abs() <= 1e-10 * u.max(1e-3), "h");
        let w = tr.h_tilde_inv(u).unwrap();
        prop_assert!((tr.h_tilde(w) - u).abs() <= 1e-10 * u.max(1e-3), "h~");
        prop_assert!(w >= v);
    }

    #[test]
    fn envelopes_are_ordered(ln_v in -30.0..8.0f64) {
        let tr = transforms();
        prop_assert!(tr.h_tilde_log(ln_v) <= tr.h_log(ln_v).min(1.0) + 1e-12);
    }
}
