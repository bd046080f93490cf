//! Top of the spectrum of `∂xx + a(x)` and generalized eigenfunctions above it.
//!
//! `lambda0` comes from Dirichlet truncations on nested uniform grids, each solved by
//! Sturm bisection and combined by Richardson extrapolation in the mesh size.
//!
//! For `lambda > lambda0` the decaying solution of `φ'' + a φ = λ φ` is obtained by
//! integrating backward from beyond the right end of the window, where the decaying
//! mode dominates. The unknowns are the log-derivative `ρ = A φ'/φ` and `ln φ`, which
//! keeps exponentially large and small values representable and turns a zero of `φ`
//! into a blow-up of `ρ`.

use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::linearized::LinearizedSolution;
use crate::numerics::eigen::largest_eigenvalue;
use crate::numerics::ode::{integrate, Dopri5Options, Flow};
use crate::numerics::CubicHermite;
use crate::reaction::ValidatedSpec;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralSample {
    pub window: Real,
    pub dx: Real,
    pub value: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralBound {
    /// Extrapolated estimate clamped to `[a-, a+]`.
    pub lambda0: Real,
    /// Extrapolated estimate before clamping.
    pub raw: Real,
    pub window: Real,
    pub dx: Real,
    pub history: Vec<SpectralSample>,
}

/// Largest eigenvalue of the Dirichlet truncation on `[-window, window]` with mesh `dx`.
///
/// Nodes are `-window + i dx`; the symmetric form of `(A ψ')' + q ψ' + a ψ` induced by
/// its quadratic form is used, so the drift enters only through `-(q'/2)`.
pub fn truncated_top_eigenvalue(spec: &ValidatedSpec, window: Real, dx: Real) -> Result<Real> {
    let n_int = (2.0 * window / dx).round() as usize;
    if n_int < 3 {
        return Err(FrontError::WindowTooSmall(format!("window {window} with dx {dx}")));
    }
    let x0 = -window;
    let m = n_int - 1;
    let inv_h2 = 1.0 / (dx * dx);
    let node = |i: usize| x0 + i as Real * dx;
    let div_form = spec.has_divergence_form();
    let face = |xl: Real, xr: Real| -> Real {
        if div_form {
            let (l, r) = (spec.diffusion_at(xl), spec.diffusion_at(xr));
            2.0 * l * r / (l + r)
        } else {
            1.0
        }
    };
    let mut diag = Vec::with_capacity(m);
    let mut off = Vec::with_capacity(m.saturating_sub(1));
    for k in 1..=m {
        let x = node(k);
        let left = face(node(k - 1), x);
        let right = face(x, node(k + 1));
        diag.push(spec.a_at(x) - (left + right) * inv_h2);
        if k < m {
            let drift = if div_form {
                (spec.drift_at(x) - spec.drift_at(node(k + 1))) / (4.0 * dx)
            } else {
                0.0
            };
            off.push(right * inv_h2 + drift);
        }
    }
    let (value, _) = largest_eigenvalue(&diag, &off, 1e-14, 400)?;
    Ok(value)
}

/// Estimates `lambda0 = sup σ(∂xx + a)` with two mesh refinements.
pub fn sup_spectrum(spec: &ValidatedSpec, window: Real, dx: Real) -> Result<SpectralBound> {
    let window = (window / dx).round() * dx;
    let mut history = Vec::new();
    for level in 0..3 {
        let h = dx / (1 << level) as Real;
        history.push(SpectralSample {
            window,
            dx: h,
            value: truncated_top_eigenvalue(spec, window, h)?,
        });
    }
    // Romberg table over the three meshes (error expansion in even powers of h).
    let r1 = (4.0 * history[1].value - history[0].value) / 3.0;
    let r2 = (4.0 * history[2].value - history[1].value) / 3.0;
    let raw = (16.0 * r2 - r1) / 15.0;
    let b = spec.bounds();
    Ok(SpectralBound {
        lambda0: raw.clamp(b.a_minus, b.a_plus),
        raw,
        window,
        dx,
        history,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenSettings {
    /// Half-width of the sampling window; default `30/sqrt(λ-λ0)` capped at 200.
    pub window: Option<Real>,
    pub dx: Real,
    /// Relative gap required above `lambda0`.
    pub margin: Real,
    pub rtol: Real,
    pub atol: Real,
    /// Reject `λ` at or above `2a-` (or `lambda1`).
    pub enforce_threshold: bool,
}

impl Default for EigenSettings {
    fn default() -> Self {
        Self {
            window: None,
            dx: 1e-2,
            margin: 1e-6,
            rtol: 1e-12,
            atol: 1e-12,
            enforce_threshold: false,
        }
    }
}

/// Default window half-width for a given spectral gap.
pub fn default_window(gap: Real) -> Real {
    (30.0 / gap.max(1e-300).sqrt()).min(200.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenResidual {
    /// `max |φ'' + aφ - λφ| / (λ max_loc |φ|)` with a five-point second difference.
    pub max_relative: Real,
    pub at_x: Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientBound {
    /// `max_i [A φ'^2 - α a φ^2] / max_i a φ^2`.
    pub global_margin: Real,
    /// `max_i (A r^2 - α a) / (α a)` where `r = φ'/φ`.
    pub pointwise_margin: Real,
    pub at_x: Real,
    pub passed: bool,
}

/// Generalized eigenfunction on a uniform grid with its certificates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Eigenpair {
    pub lambda: Real,
    pub lambda0: Real,
    pub x0: Real,
    pub dx: Real,
    /// `ln φ(x_i)`, normalized so that `ln φ(0) = 0`.
    pub log_phi: Vec<Real>,
    /// `φ'(x_i)/φ(x_i)`.
    pub log_slope: Vec<Real>,
    pub alpha: Real,
    pub doubling_length: Real,
    pub window: Real,
    pub residual: EigenResidual,
    pub gradient: GradientBound,
}

impl Eigenpair {
    pub fn len(&self) -> usize {
        self.log_phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_phi.is_empty()
    }

    pub fn x(&self, i: usize) -> Real {
        self.x0 + i as Real * self.dx
    }

    pub fn xs(&self) -> Vec<Real> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    pub fn phi(&self) -> Vec<Real> {
        self.log_phi.iter().map(|l| l.exp()).collect()
    }

    pub fn dphi(&self) -> Vec<Real> {
        self.log_phi
            .iter()
            .zip(&self.log_slope)
            .map(|(l, r)| r * l.exp())
            .collect()
    }

    pub fn index_of_origin(&self) -> usize {
        (-self.x0 / self.dx).round() as usize
    }

    /// Cubic Hermite interpolant of `ln φ` with slopes `φ'/φ`.
    pub fn log_interpolant(&self) -> Result<CubicHermite<Real>> {
        Ok(CubicHermite::new(self.xs(), self.log_phi.clone(), self.log_slope.clone())?)
    }
}

/// `1 - (lead - λ)/a+` where `lead` is `2a-` or `lambda1`.
pub fn gradient_alpha(spec: &ValidatedSpec, lambda: Real) -> Real {
    let b = spec.bounds();
    let lead = if spec.has_divergence_form() { b.lambda1 } else { 2.0 * b.a_minus };
    1.0 - (lead - lambda) / b.a_plus
}

/// Builds `φ_λ` with `φ(0) = 1` on a window around the origin.
pub fn eigenfunction(
    spec: &ValidatedSpec,
    lambda: Real,
    spectrum: &SpectralBound,
    settings: &EigenSettings,
) -> Result<Eigenpair> {
    let lambda0 = spectrum.lambda0;
    if !(lambda > lambda0 + settings.margin * lambda0.abs()) {
        return Err(FrontError::NoDecayingSolution {
            lambda,
            lambda0,
            detail: format!("lambda must exceed lambda0 by the relative margin {}", settings.margin),
        });
    }
    let b = spec.bounds();
    let lead = if spec.has_divergence_form() { b.lambda1 } else { 2.0 * b.a_minus };
    if settings.enforce_threshold && lambda >= lead {
        let rhs = crate::reaction::threshold_rhs(spec)?;
        return Err(FrontError::Threshold {
            detail: format!("lambda = {lambda} must lie below {lead} (2a- or lambda1)"),
            lambda0,
            nu: b.nu,
            rhs,
        });
    }
    let gap = lambda - lambda0;
    let dx = settings.dx;
    let window = (settings.window.unwrap_or_else(|| default_window(gap)) / dx).round() * dx;
    if window < 4.0 * dx {
        return Err(FrontError::WindowTooSmall(format!("window {window} for dx {dx}")));
    }
    let n = (2.0 * window / dx).round() as usize + 1;
    let x0 = -window;

    // Start far enough right that the seed error has decayed by ~e^-40 at the window.
    let pad = (20.0 / gap.sqrt()).clamp(5.0, 400.0);
    let x_seed = window + pad;
    let div_form = spec.has_divergence_form();
    let big_a = |x: Real| spec.diffusion_at(x);
    let q = |x: Real| spec.drift_at(x);
    let seed_slope = {
        let (aa, qq, av) = (big_a(x_seed), q(x_seed), spec.a_at(x_seed));
        let disc = (qq * qq - 4.0 * aa * (av - lambda)).max(4.0 * aa * gap);
        (-qq - disc.sqrt()) / (2.0 * aa)
    };
    let rho_seed = big_a(x_seed) * seed_slope;
    let rho_cap = 1e4 * (1.0 + (lambda.abs() + b.a_plus).sqrt()) / dx.min(1.0);

    let rhs = |x: Real, y: &[Real; 2]| -> [Real; 2] {
        let rho = y[0];
        if div_form {
            let aa = big_a(x);
            [lambda - spec.a_at(x) - q(x) * rho / aa - rho * rho / aa, rho / aa]
        } else {
            [lambda - spec.a_at(x) - rho * rho, rho]
        }
    };
    let opts = Dopri5Options {
        rtol: settings.rtol,
        atol: settings.atol,
        first_step: Some(dx),
        max_step: 0.5,
        max_steps: 10_000_000,
    };
    let mut log_phi = vec![0.0; n];
    let mut rho = vec![0.0; n];
    // Grid indices are filled from the right end downward.
    let mut next: isize = n as isize - 1;
    let mut blowup: Option<Real> = None;
    let result = integrate(rhs, x_seed, [rho_seed, 0.0], x0, &opts, |step| {
        if !(step.y1[0] < rho_cap) || !step.y1[0].is_finite() {
            blowup = Some(step.t1());
            return Flow::Stop;
        }
        while next >= 0 {
            let xi = x0 + next as Real * dx;
            if !step.contains(xi) {
                break;
            }
            let y = step.eval(xi);
            rho[next as usize] = y[0];
            log_phi[next as usize] = y[1];
            next -= 1;
        }
        Flow::Continue
    });
    match result {
        Err(e) => {
            return Err(FrontError::NoDecayingSolution {
                lambda,
                lambda0,
                detail: format!("integration failed: {e}"),
            })
        }
        Ok(_) if blowup.is_some() => {
            return Err(FrontError::NoDecayingSolution {
                lambda,
                lambda0,
                detail: format!(
                    "phi reaches zero near x = {:.4} (log-derivative blow-up)",
                    blowup.unwrap_or(Real::NAN)
                ),
            })
        }
        Ok(_) => {}
    }
    if next >= 0 {
        // The final node sits exactly at the integration end point.
        return Err(FrontError::Construction(format!("{} grid nodes left unsampled", next + 1)));
    }
    let i0 = (-x0 / dx).round() as usize;
    let shift = log_phi[i0];
    for l in log_phi.iter_mut() {
        *l -= shift;
    }
    let log_slope: Vec<Real> = if div_form {
        (0..n).map(|i| rho[i] / big_a(x0 + i as Real * dx)).collect()
    } else {
        rho
    };
    if log_slope[n - 1] >= 0.0 || log_slope[0] >= 0.0 {
        return Err(FrontError::NoDecayingSolution {
            lambda,
            lambda0,
            detail: format!(
                "log-slopes at window ends ({}, {}) must both be negative",
                log_slope[0],
                log_slope[n - 1]
            ),
        });
    }

    let alpha = gradient_alpha(spec, lambda);
    let mut pair = Eigenpair {
        lambda,
        lambda0,
        x0,
        dx,
        log_phi,
        log_slope,
        alpha,
        doubling_length: Real::NAN,
        window,
        residual: EigenResidual {
            max_relative: Real::NAN,
            at_x: Real::NAN,
        },
        gradient: GradientBound {
            global_margin: Real::NAN,
            pointwise_margin: Real::NAN,
            at_x: Real::NAN,
            passed: false,
        },
    };
    pair.residual = eigen_residual(spec, &pair);
    pair.gradient = gradient_bound(spec, &pair);
    pair.doubling_length = doubling_length(&pair)?;
    Ok(pair)
}

/// Discrete residual of the eigenfunction equation, scaled by `λ` and the local sup of `φ`.
pub fn eigen_residual(spec: &ValidatedSpec, pair: &Eigenpair) -> EigenResidual {
    let n = pair.len();
    let h = pair.dx;
    let l = &pair.log_phi;
    let mut worst = 0.0;
    let mut at = Real::NAN;
    for i in 2..n.saturating_sub(2) {
        let x = pair.x(i);
        // All values relative to φ_i.
        let rel = |k: usize| (l[k] - l[i]).exp();
        let local_max = (i - 2..=i + 2).map(rel).fold(0.0, Real::max);
        let lhs = if spec.has_divergence_form() {
            // Flux form: (A φ')' + q φ' with fourth-order central differences of the flux.
            let flux = |k: usize| spec.diffusion_at(pair.x(k)) * pair.log_slope[k] * rel(k);
            let dflux = (flux(i - 2) - 8.0 * flux(i - 1) + 8.0 * flux(i + 1) - flux(i + 2)) / (12.0 * h);
            dflux + spec.drift_at(x) * pair.log_slope[i]
        } else {
            (-rel(i - 2) + 16.0 * rel(i - 1) - 30.0 + 16.0 * rel(i + 1) - rel(i + 2)) / (12.0 * h * h)
        };
        let r = (lhs + spec.a_at(x) - pair.lambda).abs() / (pair.lambda.abs() * local_max);
        if r > worst {
            worst = r;
            at = x;
        }
    }
    EigenResidual {
        max_relative: worst,
        at_x: at,
    }
}

/// Checks `A φ'^2 <= α a φ^2` on the grid.
pub fn gradient_bound(spec: &ValidatedSpec, pair: &Eigenpair) -> GradientBound {
    let mut max_scale: Real = Real::NEG_INFINITY;
    let mut worst_pointwise = Real::NEG_INFINITY;
    let mut at = Real::NAN;
    // Global form evaluated in log space: terms are φ_i^2 (A r_i^2 - α a_i).
    let mut terms = Vec::with_capacity(pair.len());
    for i in 0..pair.len() {
        let x = pair.x(i);
        let a = spec.a_at(x);
        let r = pair.log_slope[i];
        let excess = spec.diffusion_at(x) * r * r - pair.alpha * a;
        let rel = excess / (pair.alpha * a);
        if rel > worst_pointwise {
            worst_pointwise = rel;
            at = x;
        }
        let log_w = 2.0 * pair.log_phi[i];
        max_scale = max_scale.max(log_w + a.ln());
        terms.push((log_w, excess));
    }
    let global = terms
        .iter()
        .map(|&(lw, e)| e * (lw - max_scale).exp())
        .fold(Real::NEG_INFINITY, Real::max);
    GradientBound {
        global_margin: global,
        pointwise_margin: worst_pointwise,
        at_x: at,
        passed: global <= 1e-10,
    }
}

/// Least grid length `L` with `φ(x) >= 2 φ(y)` whenever `y - x >= L` inside the window.
pub fn doubling_length(pair: &Eigenpair) -> Result<Real> {
    let l = &pair.log_phi;
    let n = l.len();
    let ln2 = std::f64::consts::LN_2;
    // suffix[j] = max_{k >= j} ln φ_k
    let mut suffix = vec![Real::NEG_INFINITY; n + 1];
    for j in (0..n).rev() {
        suffix[j] = suffix[j + 1].max(l[j]);
    }
    let holds = |k: usize| (0..n - k).all(|i| l[i] - suffix[i + k] >= ln2 - 1e-12);
    if n < 2 || !holds(n - 1) {
        return Err(FrontError::WindowTooSmall(format!(
            "phi does not halve across the window of half-width {}",
            pair.window
        )));
    }
    let (mut lo, mut hi) = (0usize, n - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let k = if holds(lo) && lo > 0 { lo } else { hi };
    Ok(k as Real * pair.dx)
}

/// Non-negative combination `Σ w_k e^{λ_k t} φ_k(x)` of eigenpairs on a common grid.
pub fn superpose(pairs: Vec<(Eigenpair, Real)>) -> Result<LinearizedSolution> {
    LinearizedSolution::new(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reaction::{validate_spec, CoefficientField, ReactionSpec, SampleGrid};

    pub(crate) fn validated(a: CoefficientField) -> ValidatedSpec {
        let spec = ReactionSpec::kpp(a);
        let r = validate_spec(
            &spec,
            &SampleGrid {
                x_min: -40.0,
                x_max: 40.0,
                nx: 801,
                nu: 101,
            },
        )
        .unwrap();
        ValidatedSpec::new(spec, &r).unwrap()
    }

    fn constant_spectrum(v: Real) -> SpectralBound {
        SpectralBound {
            lambda0: v,
            raw: v,
            window: 0.0,
            dx: 0.0,
            history: vec![],
        }
    }

    #[test]
    fn constant_coefficient_closed_form() {
        let spec = validated(CoefficientField::Constant { value: 1.0 });
        let pair = eigenfunction(
            &spec,
            1.5,
            &constant_spectrum(1.0),
            &EigenSettings {
                window: Some(20.0),
                ..Default::default()
            },
        )
        .unwrap();
        let k = 0.5f64.sqrt();
        for (i, &l) in pair.log_phi.iter().enumerate() {
            let x = pair.x(i);
            assert!((l + k * x).abs() < 1e-9, "x = {x}");
        }
        let i1 = pair.index_of_origin() + 100;
        assert!((pair.log_phi[i1].exp() - 0.49307).abs() < 1e-5);
        assert!((pair.alpha - 0.5).abs() < 1e-15);
        assert!(pair.gradient.global_margin.abs() <= 1e-10);
        assert!((pair.doubling_length - 2f64.sqrt() * 2f64.ln()).abs() <= pair.dx);
        assert!(pair.residual.max_relative < 1e-6);
    }

    #[test]
    fn lambda_below_spectrum_is_rejected() {
        let spec = validated(CoefficientField::Constant { value: 1.0 });
        let r = eigenfunction(&spec, 1.0, &constant_spectrum(1.0), &EigenSettings::default());
        assert!(matches!(r, Err(FrontError::NoDecayingSolution { .. })));
    }

    #[test]
    fn threshold_enforced_on_request() {
        let spec = validated(CoefficientField::Constant { value: 1.0 });
        let settings = EigenSettings {
            enforce_threshold: true,
            window: Some(10.0),
            ..Default::default()
        };
        let r = eigenfunction(&spec, 2.5, &constant_spectrum(1.0), &settings);
        assert!(matches!(r, Err(FrontError::Threshold { .. })));
    }

    #[test]
    fn below_bound_state_has_zero_crossing() {
        // Well with a bound state near 1.3: λ = 1.1 is below lambda0, force past the gate.
        let spec = validated(CoefficientField::Well {
            base: 1.0,
            amplitude: 0.5,
            half_width: 1.0,
        });
        let fake = constant_spectrum(1.0);
        let r = eigenfunction(
            &spec,
            1.1,
            &fake,
            &EigenSettings {
                window: Some(15.0),
                ..Default::default()
            },
        );
        assert!(matches!(r, Err(FrontError::NoDecayingSolution { .. })), "{r:?}");
    }

    #[test]
    fn constant_spectrum_within_tolerance() {
        let spec = validated(CoefficientField::Constant { value: 1.0 });
        let b = sup_spectrum(&spec, 100.0, 0.02).unwrap();
        assert!((b.lambda0 - 1.0).abs() < 1e-3);
        assert!(b.raw <= 1.0 + 1e-9);
    }
}
