mod common;

use common::{constant, gaussian, validated};
use frontlab_core::error::FrontError;
use frontlab_core::reaction::{CoefficientField, ReactionSpec};
use frontlab_core::spectral::{
    doubling_length, eigenfunction, sup_spectrum, superpose, truncated_top_eigenvalue, EigenSettings, Eigenpair,
};
use frontlab_core::Real;

const LN_2: Real = std::f64::consts::LN_2;

/// Largest eigenvalue of `ψ'' + a ψ` on `[-window, window]` with Dirichlet ends, by
/// bisection on the Sturm count of the symmetric tridiagonal matrix.
fn sturm_oracle(a: impl Fn(Real) -> Real, window: Real, h: Real) -> Real {
    let m = (2.0 * window / h).round() as usize - 1;
    let diag: Vec<Real> = (1..=m).map(|k| a(-window + k as Real * h) - 2.0 / (h * h)).collect();
    let off2 = 1.0 / (h * h * h * h);
    // Eigenvalues above `shift`: sign changes of the LDL^T pivots of (M - shift).
    let above = |shift: Real| {
        let mut d = 1.0;
        let mut count = 0;
        for (k, &dk) in diag.iter().enumerate() {
            d = dk - shift - if k == 0 { 0.0 } else { off2 / d };
            if d == 0.0 {
                d = 1e-300;
            }
            if d > 0.0 {
                count += 1;
            }
        }
        count
    };
    let (mut lo, mut hi) = (0.0, 2.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if above(mid) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Even ground state of `1 + depth` on `|x| < 1`: `k tan k = κ`.
fn well_oracle(depth: Real) -> Real {
    let g = |l: Real| {
        let k = (1.0 + depth - l).sqrt();
        k * k.tan() - (l - 1.0).sqrt()
    };
    let (mut lo, mut hi) = (1.0 + 1e-12, 1.0 + depth - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn gaussian_bump_matches_the_sturm_oracle() {
    let spec = validated(ReactionSpec::kpp(gaussian()));
    let oracle = sturm_oracle(|x| gaussian().value(x), 40.0, 2e-3);
    let b = sup_spectrum(&spec, 40.0, 0.05).unwrap();
    assert!(oracle > 1.0 && oracle < 1.5, "{oracle}");
    assert!((b.lambda0 - oracle).abs() < 1e-5, "{} vs {oracle}", b.lambda0);
}

#[test]
fn square_well_matches_the_dispersion_relation() {
    let well = CoefficientField::Well {
        base: 1.0,
        amplitude: 0.5,
        half_width: 1.0,
    };
    let spec = validated(ReactionSpec::kpp(well));
    let exact = well_oracle(0.5);
    let b = sup_spectrum(&spec, 60.0, 0.05).unwrap();
    assert!((b.lambda0 - exact).abs() < 1e-4, "{} vs {exact}", b.lambda0);
}

#[test]
fn larger_windows_never_lower_the_estimate() {
    let spec = validated(ReactionSpec::kpp(gaussian()));
    let mut last = Real::NEG_INFINITY;
    for w in [2.0, 4.0, 8.0, 16.0, 32.0] {
        let v = truncated_top_eigenvalue(&spec, w, 0.05).unwrap();
        assert!(v >= last - 1e-12, "window {w}: {v} < {last}");
        last = v;
    }
}

#[test]
fn estimate_lies_between_a_minus_and_a_plus() {
    for amp in [0.1, 0.5, 2.0] {
        let spec = validated(ReactionSpec::kpp(CoefficientField::Sine {
            base: 3.0,
            amplitude: amp,
            wavenumber: 1.0,
        }));
        let b = sup_spectrum(&spec, 60.0, 0.05).unwrap();
        assert!(b.lambda0 >= 3.0 - amp && b.lambda0 <= 3.0 + amp, "{amp}: {}", b.lambda0);
    }
}

fn kpp_pair(lambda: Real, window: Real, dx: Real) -> Eigenpair {
    let spec = validated(ReactionSpec::kpp(constant(1.0)));
    let b = sup_spectrum(&spec, 100.0, 0.05).unwrap();
    let settings = EigenSettings {
        window: Some(window),
        dx,
        ..EigenSettings::default()
    };
    eigenfunction(&spec, lambda, &b, &settings).unwrap()
}

#[test]
fn constant_coefficient_value_at_one() {
    let pair = kpp_pair(1.5, 10.0, 1e-2);
    let i = pair.index_of_origin() + 100;
    assert!((pair.x(i) - 1.0).abs() < 1e-12);
    assert!((pair.phi()[i] - 0.49307).abs() < 1e-5, "{}", pair.phi()[i]);
    assert!((pair.phi()[i] - (-(0.5f64.sqrt())).exp()).abs() < 1e-6);
}

#[test]
fn constant_coefficient_is_exponential_for_several_lambdas() {
    let spec = validated(ReactionSpec::kpp(constant(2.0)));
    let b = sup_spectrum(&spec, 100.0, 0.05).unwrap();
    for lambda in [2.2, 3.0, 4.5] {
        let settings = EigenSettings {
            window: Some(10.0),
            ..EigenSettings::default()
        };
        let pair = eigenfunction(&spec, lambda, &b, &settings).unwrap();
        let rate = (lambda - 2.0).sqrt();
        let worst = pair
            .xs()
            .iter()
            .zip(pair.phi())
            .filter(|(x, _)| x.abs() <= 8.0)
            .map(|(x, p)| (p * (rate * x).exp() - 1.0).abs())
            .fold(0.0, Real::max);
        assert!(worst <= 1e-6, "lambda {lambda}: {worst:.3e}");
    }
}

#[test]
fn doubling_length_of_pure_exponentials() {
    for (lambda, exact) in [(1.5, 2f64.sqrt() * LN_2), (1.25, 2.0 * LN_2)] {
        let pair = kpp_pair(lambda, 10.0, 1e-2);
        assert!(
            (pair.doubling_length - exact).abs() <= pair.dx,
            "lambda {lambda}: {} vs {exact}",
            pair.doubling_length
        );
    }
}

#[test]
fn doubling_length_agrees_with_a_scan_over_all_grid_pairs() {
    let spec = validated(ReactionSpec::kpp(gaussian()));
    let b = sup_spectrum(&spec, 60.0, 0.05).unwrap();
    let settings = EigenSettings {
        window: Some(25.0),
        dx: 0.02,
        ..EigenSettings::default()
    };
    let pair = eigenfunction(&spec, 1.8, &b, &settings).unwrap();
    let l = &pair.log_phi;
    // Every pair (i, j) with φ_i < 2 φ_j forces L > (j - i) dx.
    let mut widest = 0;
    for i in 0..l.len() {
        for j in i..l.len() {
            if l[i] - l[j] < LN_2 - 1e-12 {
                widest = widest.max(j - i);
            }
        }
    }
    let oracle = (widest + 1) as Real * pair.dx;
    assert!((pair.doubling_length - oracle).abs() < 1e-12, "{} vs {oracle}", pair.doubling_length);
    assert_eq!(doubling_length(&pair).unwrap(), pair.doubling_length);
}

#[test]
fn gaussian_pair_is_stable_under_mesh_halving() {
    let spec = validated(ReactionSpec::kpp(gaussian()));
    let b = sup_spectrum(&spec, 60.0, 0.05).unwrap();
    let solve = |dx: Real| {
        let settings = EigenSettings {
            window: Some(30.0),
            dx,
            ..EigenSettings::default()
        };
        eigenfunction(&spec, 1.8, &b, &settings).unwrap()
    };
    let coarse = solve(1e-2);
    let fine = solve(5e-3);
    assert!(coarse.residual.max_relative <= 1e-6, "{:?}", coarse.residual);
    assert!(coarse.gradient.passed, "{:?}", coarse.gradient);
    let phi_f = fine.phi();
    let worst = coarse
        .xs()
        .iter()
        .zip(coarse.phi())
        .enumerate()
        .filter(|(_, (x, _))| x.abs() <= 0.8 * 30.0)
        .map(|(i, (_, p))| (p / phi_f[2 * i] - 1.0).abs())
        .fold(0.0, Real::max);
    assert!(worst <= 1e-6, "{worst:.3e}");
}

#[test]
fn gradient_bound_is_an_equality_for_constant_a() {
    let pair = kpp_pair(1.5, 10.0, 1e-2);
    assert!((pair.alpha - 0.5).abs() < 1e-15);
    assert!(pair.gradient.global_margin.abs() <= 1e-10, "{:?}", pair.gradient);
}

#[test]
fn superposition_normalization_and_gradient_bound() {
    let (a, b) = (kpp_pair(1.3, 12.0, 1e-2), kpp_pair(1.4, 12.0, 1e-2));
    let v = superpose(vec![(a, 0.5), (b, 0.5)]).unwrap();
    assert!((v.v(0.0, 0.0).unwrap() - 1.0).abs() < 1e-12);
    assert!((v.alpha - 0.4).abs() < 1e-12);
    for t in [-2.0, 0.0, 3.0] {
        for k in 0..=200 {
            let x = -10.0 + 0.1 * k as Real;
            let (lv, r, _) = v.log_jet(t, x).unwrap();
            assert!(r * r <= v.alpha * (1.0 + 1e-10), "(t, x) = ({t}, {x}): {r} with ln v = {lv}");
        }
    }
}

#[test]
fn all_zero_weights_are_degenerate() {
    let (a, b) = (kpp_pair(1.3, 6.0, 1e-2), kpp_pair(1.4, 6.0, 1e-2));
    let err = superpose(vec![(a, 0.0), (b, 0.0)]).unwrap_err();
    assert!(matches!(err, FrontError::DegenerateMeasure(_)), "{err}");
    assert!(superpose(Vec::new()).is_err());
}

#[test]
fn single_pair_is_the_eigenmode() {
    let pair = kpp_pair(1.5, 10.0, 1e-2);
    let phi = pair.phi();
    let xs = pair.xs();
    let v = superpose(vec![(pair, 1.0)]).unwrap();
    for i in (0..xs.len()).step_by(97) {
        let want = 1.5 * 0.7 + phi[i].ln();
        assert!((v.log_v(0.7, xs[i]).unwrap() - want).abs() < 1e-12);
    }
}
