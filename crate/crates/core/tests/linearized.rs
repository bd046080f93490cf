mod common;

use common::{constant, gaussian, validated};
use frontlab_core::error::FrontError;
use frontlab_core::linearized::{evaluate_envelopes, gradient_certificate, EnvelopeFields, LinearizedSolution};
use frontlab_core::profile::{transforms_for, ProfileSettings};
use frontlab_core::reaction::{ReactionSpec, ValidatedSpec};
use frontlab_core::spectral::{eigenfunction, sup_spectrum, EigenSettings, Eigenpair};
use frontlab_core::Real;

fn pair(spec: &ValidatedSpec, lambda: Real, window: Real) -> Eigenpair {
    let b = sup_spectrum(spec, 100.0, 0.05).unwrap();
    let settings = EigenSettings {
        window: Some(window),
        ..EigenSettings::default()
    };
    eigenfunction(spec, lambda, &b, &settings).unwrap()
}

fn fields(spec: &ValidatedSpec, lambda: Real, window: Real) -> EnvelopeFields {
    let p = pair(spec, lambda, window);
    let (_, _, tr) = transforms_for(&spec.g0, &spec.g1, p.alpha, spec.bounds().nu, &ProfileSettings::default()).unwrap();
    EnvelopeFields::new(LinearizedSolution::single(p).unwrap(), tr)
}

fn grid(lo: Real, hi: Real, n: usize) -> Vec<Real> {
    (0..n).map(|i| lo + (hi - lo) * i as Real / (n - 1) as Real).collect()
}

#[test]
fn kpp_upper_envelope_is_the_clamped_exponential() {
    let spec = validated(ReactionSpec::kpp(constant(1.0)));
    let f = fields(&spec, 1.5, 12.0);
    for x in grid(-10.0, 10.0, 401) {
        let want = (-x / 2f64.sqrt()).exp().min(1.0);
        assert!((f.w_clamped(0.0, x).unwrap() - want).abs() < 1e-8, "x = {x}");
    }
}

#[test]
fn cubic_envelopes_are_ordered_on_a_slab() {
    let spec = validated(ReactionSpec::cubic(constant(1.0), 1.0));
    let f = fields(&spec, 1.15, 30.0);
    let slab = evaluate_envelopes(&f, &grid(-10.0, 20.0, 100), &grid(-25.0, 25.0, 200)).unwrap();
    for (lo, hi) in slab.w_tilde.iter().zip(&slab.w_clamped) {
        for (&a, &b) in lo.iter().zip(hi) {
            assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
            assert!(a <= b, "{a} > {b}");
        }
    }
    // w~ is non-decreasing in t.
    for j in 1..slab.t.len() {
        for i in 0..slab.x.len() {
            assert!(slab.w_tilde[j][i] >= slab.w_tilde[j - 1][i]);
        }
    }
}

#[test]
fn lower_envelope_tends_to_one_on_the_left() {
    let spec = validated(ReactionSpec::cubic(constant(1.0), 1.0));
    let f = fields(&spec, 1.15, 60.0);
    let far = f.w_tilde(0.0, -59.0).unwrap();
    assert!(far > 1.0 - 1e-3, "{far}");
    assert!(f.w_tilde(0.0, -59.0).unwrap() > f.w_tilde(0.0, -30.0).unwrap());
}

#[test]
fn slab_outside_the_window_is_an_error() {
    let spec = validated(ReactionSpec::kpp(constant(1.0)));
    let f = fields(&spec, 1.5, 5.0);
    let err = evaluate_envelopes(&f, &[0.0], &[0.0, 6.0]).unwrap_err();
    assert!(matches!(err, FrontError::Window(_)), "{err}");
}

#[test]
fn single_mode_gradient_margin_does_not_depend_on_time() {
    let spec = validated(ReactionSpec::kpp(gaussian()));
    let v = LinearizedSolution::single(pair(&spec, 1.8, 20.0)).unwrap();
    let xs = grid(-15.0, 15.0, 301);
    let at = |t: Real| gradient_certificate(&spec, &v, &[t], &xs, 1e-10).unwrap();
    let (a, b) = (at(0.0), at(7.5));
    assert!(a.passed && b.passed, "{a:?}");
    assert_eq!(a.worst_margin, b.worst_margin);
}

#[test]
fn constant_coefficient_mode_attains_the_bound() {
    let spec = validated(ReactionSpec::kpp(constant(1.0)));
    let v = LinearizedSolution::single(pair(&spec, 1.5, 10.0)).unwrap();
    let r = gradient_certificate(&spec, &v, &[0.0, 1.0], &grid(-8.0, 8.0, 161), 1e-10).unwrap();
    assert!(r.worst_margin.abs() <= 1e-12, "{r:?}");
}

#[test]
fn superposition_satisfies_the_bound_of_its_largest_rate() {
    let spec = validated(ReactionSpec::kpp(constant(1.0)));
    let v = LinearizedSolution::new(vec![(pair(&spec, 1.3, 12.0), 0.5), (pair(&spec, 1.4, 12.0), 0.5)]).unwrap();
    assert!((v.v(0.0, 0.0).unwrap() - 1.0).abs() < 1e-12);
    let r = gradient_certificate(&spec, &v, &grid(-5.0, 5.0, 11), &grid(-10.0, 10.0, 201), 1e-10).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(r.worst_margin < 0.0);
}

#[test]
fn single_mode_solves_the_linearized_equation() {
    let spec = validated(ReactionSpec::kpp(gaussian()));
    let v = LinearizedSolution::single(pair(&spec, 1.8, 20.0)).unwrap();
    for t in [0.0, 2.0] {
        let r = v.pde_residual(&spec, t);
        assert!(r <= 1e-6, "t = {t}: {r:.3e}");
    }
}

#[test]
fn envelope_ratios_tend_to_one_at_the_leading_edge() {
    let spec = validated(ReactionSpec::cubic(constant(1.0), 1.0));
    let f = fields(&spec, 1.15, 60.0);
    let tr = &f.transforms;
    let kappa = (1..=400)
        .map(|i| {
            let lv = (1e-3 as Real).ln() - 0.05 * i as Real;
            tr.h_jet_log(lv).d2.abs().max(tr.h_tilde_jet_log(lv).d2.abs())
        })
        .fold(0.0, Real::max);
    let mut checked = 0;
    for x in grid(0.0, 59.0, 600) {
        let s = f.sample(0.0, x).unwrap();
        let v = s.log_v.exp();
        if v >= 1e-3 {
            continue;
        }
        checked += 1;
        let slack = 2.0 * kappa * v + 1e-6;
        assert!((s.w_tilde / v - 1.0).abs() <= slack, "x = {x}");
        assert!((f.w(0.0, x).unwrap() / v - 1.0).abs() <= slack, "x = {x}");
    }
    assert!(checked > 100);
}
