//! Traveling-wave profiles `U'' + c U' + g(U) = 0` and the transforms `h`, `h̃`.
//!
//! The super profile starts at `(U, U') = (1, -sqrt(α) g1(1))` and is followed to the
//! origin; the sub profile leaves `(1, 0)` along its unstable manifold. Both are
//! translated so that `U(s) e^{sqrt(α) s} -> 1`, which makes `h(v) = U(-ln v / sqrt(α))`
//! tangent to the identity at `v = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::numerics::interp::Jet;
use crate::numerics::ode::{integrate, Dopri5Options, Flow};
use crate::numerics::stats::fit_line;
use crate::numerics::CubicHermite;
use crate::reaction::{EnvelopeFunction, EnvelopeTag};
use crate::Real;

const TRIANGLE_SLACK: Real = 1e-10;

/// `c = sqrt(α) + 1/sqrt(α)`, admissible when `α <= (sqrt(ν) - sqrt(ν-1))^2`.
pub fn wave_speed(alpha: Real, nu: Real) -> Result<Real> {
    let cap = if nu > 1.0 {
        (nu.sqrt() - (nu - 1.0).sqrt()).powi(2)
    } else {
        1.0
    };
    let tol = 1e-12;
    if !(alpha > 0.0 && alpha < 1.0 + tol) || alpha > cap * (1.0 + tol) {
        return Err(FrontError::Threshold {
            detail: format!("alpha = {alpha} must lie in (0, {cap}] so that c >= 2 sqrt(nu)"),
            lambda0: Real::NAN,
            nu,
            rhs: Real::NAN,
        });
    }
    let g = alpha.sqrt();
    Ok(g + 1.0 / g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileSettings {
    /// Sampling step in `s`.
    pub ds: Real,
    pub rtol: Real,
    pub atol: Real,
    /// Integration stops once `U` falls below this level.
    pub u_stop: Real,
    /// Largest `U` admitted to the tail regression.
    pub tail_threshold: Real,
    /// Distance `δ` from `U = 1` of the sub-profile launch point.
    pub launch_offset: Real,
    /// Starting abscissa of the raw integration.
    pub start: Real,
    /// Longest raw integration interval.
    pub max_length: Real,
}

impl Default for ProfileSettings {
    fn default() -> Self {
        Self {
            ds: 5e-4,
            rtol: 1e-13,
            atol: 1e-24,
            u_stop: 1e-10,
            tail_threshold: 1e-4,
            launch_offset: 1e-6,
            start: 0.0,
            max_length: 1e5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    /// `ln A_tail` in the raw coordinate.
    pub log_amplitude: Real,
    /// Coefficient `b` of `ln[(V + U/sqrt(α))/(1/sqrt(α) - sqrt(α))] + sqrt(α) s = ln A + b U`.
    pub slope: Real,
    pub max_residual: Real,
    /// Upper `U` of the regression window actually used.
    pub window: Real,
    pub points: usize,
    /// `|b| * window`.
    pub nonlinearity: Real,
    /// `-U'/U` at the last sample.
    pub end_rate: Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubLaunch {
    pub delta: Real,
    /// Unstable eigenvalue at `(1, 0)`; zero for the degenerate slow-manifold launch.
    pub rate: Real,
    pub degenerate: bool,
    pub halvings: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileCertificates {
    /// `min(-V, 1 - U, V + c U / 2)` over the samples.
    pub triangle_margin: Real,
    /// Super: `min(-V - sqrt(α) g1(U))`. Sub: `min(sqrt(α) g0(U) + V)`.
    pub convexity_margin: Real,
    /// `max |U'' + c U' + g(U)|` with `U''` from the continuous extension.
    pub ode_residual: Real,
    pub strictly_decreasing: bool,
    /// Boundary flux `(c/2) V + (-c V - g(U))` on `V = -(c/2) U`, minimized over `U` in `[0,1]`.
    pub boundary_flux_margin: Real,
}

/// Sampled heteroclinic, uniformly spaced in the normalized coordinate.
#[derive(Debug, Clone)]
pub struct WaveProfile {
    pub envelope: EnvelopeFunction,
    pub alpha: Real,
    pub gamma: Real,
    pub c: Real,
    /// Normalized coordinate of the first sample.
    pub s_first: Real,
    pub ds: Real,
    pub u: Vec<Real>,
    pub v: Vec<Real>,
    /// `lim U e^{sqrt(α) s}` of the raw solution.
    pub a_tail: Real,
    /// Normalized coordinate where the super profile equals 1 (start of the sub samples).
    pub s0: Real,
    pub tail: TailFit,
    pub launch: Option<SubLaunch>,
    pub certificates: ProfileCertificates,
}

impl WaveProfile {
    pub fn s(&self, k: usize) -> Real {
        self.s_first + k as Real * self.ds
    }

    pub fn s_last(&self) -> Real {
        self.s(self.u.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn is_super(&self) -> bool {
        self.envelope.tag == EnvelopeTag::Upper
    }
}

struct RawTrajectory {
    start: Real,
    u: Vec<Real>,
    v: Vec<Real>,
    residual: Real,
}

fn integrate_profile(
    g: &EnvelopeFunction,
    c: Real,
    start: Real,
    y0: [Real; 2],
    settings: &ProfileSettings,
) -> Result<RawTrajectory> {
    let ds = settings.ds;
    let rhs = |_s: Real, y: &[Real; 2]| [y[1], -c * y[1] - g.value(y[0])];
    // Short steps keep the curvature of the continuous extension accurate; `h''` is read from it.
    let opts = Dopri5Options {
        rtol: settings.rtol,
        atol: settings.atol,
        first_step: Some(ds),
        max_step: 8.0 * ds,
        max_steps: 50_000_000,
    };
    let mut u = Vec::new();
    let mut v = Vec::new();
    let mut residual: Real = 0.0;
    let mut reached = false;
    let mut bad: Option<String> = None;
    integrate(rhs, start, y0, start + settings.max_length, &opts, |step| {
        loop {
            let s = start + u.len() as Real * ds;
            if !step.contains(s) {
                break;
            }
            let y = step.eval(s);
            let dy = step.eval_derivative(s);
            residual = residual.max((dy[1] + c * y[1] + g.value(y[0])).abs());
            u.push(y[0]);
            v.push(y[1]);
        }
        let y = step.y1;
        if y[0] <= 0.0 || y[1] > TRIANGLE_SLACK {
            bad = Some(format!("trajectory left the strip at s = {}: U = {}, V = {}", step.t1(), y[0], y[1]));
            return Flow::Stop;
        }
        if y[0] < settings.u_stop {
            reached = true;
            return Flow::Stop;
        }
        Flow::Continue
    })?;
    if let Some(msg) = bad {
        return Err(FrontError::HypothesisViolation(msg));
    }
    if !reached {
        return Err(FrontError::Resolution(format!(
            "U did not fall below {} within s-length {}",
            settings.u_stop, settings.max_length
        )));
    }
    // Keep the samples up to the first one below the stopping level.
    if let Some(k) = u.iter().position(|&x| x < settings.u_stop) {
        u.truncate(k + 1);
        v.truncate(k + 1);
    }
    Ok(RawTrajectory { start, u, v, residual })
}

fn fit_tail(raw: &RawTrajectory, ds: Real, gamma: Real, threshold: Real) -> Result<TailFit> {
    let n = raw.u.len();
    let end_rate = -raw.v[n - 1] / raw.u[n - 1];
    let mut window = threshold;
    let mut last_err = String::new();
    while window >= 1e-8 {
        // The linear tail is A e^{-γs} + B e^{-s/γ}; the combination V + U/γ removes
        // the fast mode, which otherwise decays slower than U for α > 1/2.
        let fast_free = |k: usize| (raw.v[k] + raw.u[k] / gamma) / (1.0 / gamma - gamma);
        let idx: Vec<usize> = (0..n)
            .filter(|&k| raw.u[k] < window && raw.u[k] > 0.0 && fast_free(k) > 0.0)
            .collect();
        if idx.len() < 10 {
            last_err = format!("only {} tail samples below {window}", idx.len());
            window /= 10.0;
            continue;
        }
        let xs: Vec<Real> = idx.iter().map(|&k| raw.u[k]).collect();
        let ys: Vec<Real> = idx
            .iter()
            .map(|&k| fast_free(k).ln() + gamma * (raw.start + k as Real * ds))
            .collect();
        let Some(fit) = fit_line(&xs, &ys) else {
            last_err = "degenerate tail regression".into();
            window /= 10.0;
            continue;
        };
        if fit.max_abs_residual < 1e-6 {
            let nonlinearity = fit.slope.abs() * window;
            if nonlinearity >= 1e-2 {
                return Err(FrontError::Resolution(format!(
                    "tail fit nonlinearity {nonlinearity:.3e} exceeds 1%"
                )));
            }
            return Ok(TailFit {
                log_amplitude: fit.intercept,
                slope: fit.slope,
                max_residual: fit.max_abs_residual,
                window,
                points: idx.len(),
                nonlinearity,
                end_rate,
            });
        }
        last_err = format!("tail fit residual {:.3e} on U < {window}", fit.max_abs_residual);
        window /= 10.0;
    }
    Err(FrontError::Resolution(format!("no tail window fits: {last_err}")))
}

fn check_slow_tail(fit: &TailFit, gamma: Real) -> Result<()> {
    let fast = 1.0 / gamma;
    if (fit.end_rate - fast).abs() < (fit.end_rate - gamma).abs() {
        return Err(FrontError::Normalization(format!(
            "tail decays at rate {:.6}, closer to the fast rate {fast:.6} than to {gamma:.6}",
            fit.end_rate
        )));
    }
    Ok(())
}

fn certify(g: &EnvelopeFunction, gamma: Real, c: Real, u: &[Real], v: &[Real], residual: Real) -> ProfileCertificates {
    let mut triangle = Real::INFINITY;
    let mut convexity = Real::INFINITY;
    let upper = g.tag == EnvelopeTag::Upper;
    for (&uu, &vv) in u.iter().zip(v) {
        triangle = triangle.min(-vv).min(1.0 - uu).min(vv + 0.5 * c * uu);
        let m = if upper {
            -vv - gamma * g.value(uu)
        } else {
            gamma * g.value(uu) + vv
        };
        convexity = convexity.min(m);
    }
    let strictly_decreasing = u.windows(2).all(|w| w[1] < w[0]);
    let flux = (0..=1000)
        .map(|i| {
            let uu = i as Real / 1000.0;
            let vv = -0.5 * c * uu;
            0.5 * c * vv + (-c * vv - g.value(uu))
        })
        .fold(Real::INFINITY, Real::min);
    ProfileCertificates {
        triangle_margin: triangle,
        convexity_margin: convexity,
        ode_residual: residual,
        strictly_decreasing,
        boundary_flux_margin: flux,
    }
}

fn speed_for(alpha: Real) -> Result<Real> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(FrontError::Threshold {
            detail: format!("alpha = {alpha} must lie in (0, 1)"),
            lambda0: Real::NAN,
            nu: Real::NAN,
            rhs: Real::NAN,
        });
    }
    Ok(alpha.sqrt() + 1.0 / alpha.sqrt())
}

/// Super profile `U'' + c U' + g1(U) = 0` from `(1, -sqrt(α) g1(1))`.
pub fn solve_super_profile(g1: &EnvelopeFunction, alpha: Real, settings: &ProfileSettings) -> Result<WaveProfile> {
    if g1.tag != EnvelopeTag::Upper {
        return Err(FrontError::Envelope("super profile requires the upper envelope g1".into()));
    }
    let c = speed_for(alpha)?;
    let gamma = alpha.sqrt();
    let raw = integrate_profile(g1, c, settings.start, [1.0, -gamma * g1.value(1.0)], settings)?;
    let certificates = certify(g1, gamma, c, &raw.u, &raw.v, raw.residual);
    if certificates.triangle_margin < -TRIANGLE_SLACK {
        return Err(FrontError::HypothesisViolation(format!(
            "super profile leaves the triangle V >= -(c/2) U by {:.3e}; alpha and nu are inconsistent",
            -certificates.triangle_margin
        )));
    }
    let tail = fit_tail(&raw, settings.ds, gamma, settings.tail_threshold)?;
    check_slow_tail(&tail, gamma)?;
    let shift = -tail.log_amplitude / gamma;
    Ok(WaveProfile {
        envelope: g1.clone(),
        alpha,
        gamma,
        c,
        s_first: raw.start + shift,
        ds: settings.ds,
        u: raw.u,
        v: raw.v,
        a_tail: tail.log_amplitude.exp(),
        s0: raw.start + shift,
        tail,
        launch: None,
        certificates,
    })
}

fn launch_sub(
    g0: &EnvelopeFunction,
    c: Real,
    delta: Real,
    rate: Option<Real>,
    settings: &ProfileSettings,
) -> Result<RawTrajectory> {
    let u0 = 1.0 - delta;
    let v0 = match rate {
        Some(r) => -r * delta,
        // Slow manifold of the degenerate equilibrium: c V ≈ -g0(U).
        None => -g0.value(u0) / c,
    };
    integrate_profile(g0, c, settings.start, [u0, v0], settings)
}

/// Sub profile `U0'' + c U0' + g0(U0) = 0` along the unstable manifold of `(1, 0)`.
pub fn solve_sub_profile(g0: &EnvelopeFunction, alpha: Real, settings: &ProfileSettings) -> Result<WaveProfile> {
    if g0.tag != EnvelopeTag::Lower {
        return Err(FrontError::Envelope("sub profile requires the lower envelope g0".into()));
    }
    let c = speed_for(alpha)?;
    let gamma = alpha.sqrt();
    let slope_at_one = g0.derivative(1.0);
    let degenerate = slope_at_one.abs() < 1e-9;

    let (raw, tail, launch) = if !degenerate {
        let r_plus = 0.5 * (-c + (c * c - 4.0 * slope_at_one).sqrt());
        let raw = launch_sub(g0, c, settings.launch_offset, Some(r_plus), settings)?;
        let tail = fit_tail(&raw, settings.ds, gamma, settings.tail_threshold)?;
        let launch = SubLaunch {
            delta: settings.launch_offset,
            rate: r_plus,
            degenerate: false,
            halvings: 0,
        };
        (raw, tail, launch)
    } else {
        // δ-continuation: halve until the normalized positions of a few levels settle.
        let levels = [0.9, 0.5, 0.1];
        let positions = |raw: &RawTrajectory, tail: &TailFit| -> Vec<Real> {
            let shift = -tail.log_amplitude / gamma;
            levels
                .iter()
                .map(|&lv| {
                    let k = raw.u.iter().position(|&x| x <= lv).unwrap_or(raw.u.len() - 1);
                    raw.start + k as Real * settings.ds + shift
                })
                .collect()
        };
        let mut delta = 1e-3;
        let mut raw = launch_sub(g0, c, delta, None, settings)?;
        let mut tail = fit_tail(&raw, settings.ds, gamma, settings.tail_threshold)?;
        let mut prev = positions(&raw, &tail);
        let mut halvings = 0;
        loop {
            if halvings >= 24 {
                return Err(FrontError::Resolution(
                    "degenerate g0'(1) = 0: launch offset continuation did not converge".into(),
                ));
            }
            delta *= 0.5;
            halvings += 1;
            let r2 = launch_sub(g0, c, delta, None, settings)?;
            let t2 = fit_tail(&r2, settings.ds, gamma, settings.tail_threshold)?;
            let p2 = positions(&r2, &t2);
            let change = prev.iter().zip(&p2).map(|(a, b)| (a - b).abs()).fold(0.0, Real::max);
            raw = r2;
            tail = t2;
            prev = p2;
            if change <= 2.0 * settings.ds {
                break;
            }
        }
        let launch = SubLaunch {
            delta,
            rate: 0.0,
            degenerate: true,
            halvings,
        };
        (raw, tail, launch)
    };
    check_slow_tail(&tail, gamma)?;
    let certificates = certify(g0, gamma, c, &raw.u, &raw.v, raw.residual);
    let shift = -tail.log_amplitude / gamma;
    Ok(WaveProfile {
        envelope: g0.clone(),
        alpha,
        gamma,
        c,
        s_first: raw.start + shift,
        ds: settings.ds,
        u: raw.u,
        v: raw.v,
        a_tail: tail.log_amplitude.exp(),
        s0: shift,
        tail,
        launch: Some(launch),
        certificates,
    })
}

/// One transform branch `s -> U(s)` with analytic continuations past the samples.
#[derive(Debug, Clone)]
struct Branch {
    interp: CubicHermite<Real>,
    gamma: Real,
    s_lo: Real,
    s_hi: Real,
    u_lo: Real,
    /// Exponential rate of `1 - U` at the first sample.
    head_rate: Real,
    /// Slow amplitude `A` of the linear tail `A e^{-γ s} + F e^{-(s - s_hi)/γ}`.
    tail_ratio: Real,
    /// Fast-mode part `F` of `U(s_hi)`.
    tail_fast: Real,
    u: Vec<Real>,
}

impl Branch {
    fn new(p: &WaveProfile) -> Result<Self> {
        let n = p.len();
        if n < 4 {
            return Err(FrontError::Construction(format!("profile has only {n} samples")));
        }
        let s: Vec<Real> = (0..n).map(|k| p.s(k)).collect();
        if let Some(k) = p.u.windows(2).position(|w| !(w[1] < w[0])) {
            return Err(FrontError::Construction(format!(
                "sampled profile not strictly decreasing at s = {}",
                s[k]
            )));
        }
        let mut interp = CubicHermite::new(s, p.u.clone(), p.v.clone())?;
        interp
            .limit_monotone()
            .map_err(|e| FrontError::Construction(format!("monotone limiter: {e}")))?;
        let s_lo = p.s(0);
        let s_hi = p.s_last();
        let u_lo = p.u[0];
        let head_rate = if u_lo < 1.0 { -p.v[0] / (1.0 - u_lo) } else { 0.0 };
        // Split the last sample into slow and fast linear modes so that the continuation
        // matches U and U' there.
        let g = p.gamma;
        let slow = (p.v[n - 1] + p.u[n - 1] / g) / (1.0 / g - g);
        Ok(Self {
            interp,
            gamma: p.gamma,
            s_lo,
            s_hi,
            u_lo,
            head_rate,
            tail_ratio: slow * (g * s_hi).exp(),
            tail_fast: p.u[n - 1] - slow,
            u: p.u.clone(),
        })
    }

    /// `(U, U_s, U_ss)` at `s`.
    fn jet(&self, s: Real) -> Jet<Real> {
        if s > self.s_hi {
            let g = self.gamma;
            let slow = self.tail_ratio * (-g * s).exp();
            let fast = self.tail_fast * (-(s - self.s_hi) / g).exp();
            Jet {
                value: slow + fast,
                d1: -g * slow - fast / g,
                d2: g * g * slow + fast / (g * g),
            }
        } else if s < self.s_lo {
            let gap = (1.0 - self.u_lo) * (self.head_rate * (s - self.s_lo)).exp();
            Jet {
                value: 1.0 - gap,
                d1: -self.head_rate * gap,
                d2: -self.head_rate * self.head_rate * gap,
            }
        } else {
            self.interp.jet(s)
        }
    }

    /// `s` with `U(s) = level`, for levels inside the sampled range or its continuations.
    fn solve(&self, level: Real) -> Option<Real> {
        let n = self.u.len();
        if !(level > 0.0 && level < 1.0) {
            return None;
        }
        if level > self.u_lo {
            if self.head_rate <= 0.0 {
                return None;
            }
            return Some(self.s_lo + ((1.0 - level) / (1.0 - self.u_lo)).ln() / self.head_rate);
        }
        if level < self.u[n - 1] {
            // Newton from the slow-mode guess; the continuation is decreasing.
            let mut s = ((self.tail_ratio / level).ln() / self.gamma).max(self.s_hi);
            for _ in 0..100 {
                let j = self.jet(s);
                let step = (j.value - level) / j.d1;
                s = (s - step).max(self.s_hi);
                if step.abs() <= 1e-14 * s.abs().max(1.0) {
                    break;
                }
            }
            return Some(s);
        }
        // Samples are decreasing: find k with u[k] >= level > u[k+1].
        let k = self.u.partition_point(|&x| x >= level).saturating_sub(1).min(n - 2);
        let nodes = self.interp.nodes();
        let (mut a, mut b) = (nodes[k], nodes[k + 1]);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if self.interp.eval(m) >= level {
                a = m;
            } else {
                b = m;
            }
        }
        Some(0.5 * (a + b))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformCertificates {
    /// `max |α v^2 h'' - v h' + g1(h)|` over `(0, v_max]`.
    pub super_residual: Real,
    /// `min α v^2 h''` over `(0, v_max)`.
    pub super_convexity: Real,
    /// `max α v^2 h̃''` over the sampled range.
    pub sub_concavity: Real,
    /// `max (v h̃' - α v^2 h̃'' - g0(h̃))`.
    pub sub_inequality: Real,
    /// `max (h̃(v) - v)` over the sampled range.
    pub sub_below_identity: Real,
    /// `max (v - h(v))` over `[0, v_max]`.
    pub super_above_identity: Real,
    pub h_slope_at_zero: Real,
    pub h_tilde_slope_at_zero: Real,
    pub h_at_v_max: Real,
    /// `h̃(e^10)`.
    pub h_tilde_far: Real,
}

/// Monotone transforms `h` (from `g1`) and `h̃` (from `g0`).
#[derive(Debug, Clone)]
pub struct ProfileTransforms {
    pub alpha: Real,
    pub gamma: Real,
    pub c: Real,
    pub v_max: Real,
    pub s0: Real,
    upper: Branch,
    lower: Branch,
    g0: EnvelopeFunction,
    g1: EnvelopeFunction,
    /// `h'(v_max^-)`, slope of the linear continuation.
    slope_at_v_max: Real,
}

/// Converts an `s`-jet to a `v`-jet at `v = e^{ln_v}`.
fn to_v(j: Jet<Real>, ln_v: Real, gamma: Real) -> Jet<Real> {
    let v = ln_v.exp();
    Jet {
        value: j.value,
        d1: -j.d1 / (gamma * v),
        d2: (j.d2 + gamma * j.d1) / (gamma * gamma * v * v),
    }
}

pub fn build_transforms(sup: &WaveProfile, sub: &WaveProfile) -> Result<ProfileTransforms> {
    if !sup.is_super() || sub.is_super() {
        return Err(FrontError::Construction("expected a super profile and a sub profile".into()));
    }
    if (sup.alpha - sub.alpha).abs() > 1e-15 * sup.alpha {
        return Err(FrontError::Construction(format!(
            "profiles built for different alpha: {} vs {}",
            sup.alpha, sub.alpha
        )));
    }
    let upper = Branch::new(sup)?;
    let lower = Branch::new(sub)?;
    let gamma = sup.gamma;
    let v_max = (-gamma * sup.s0).exp();
    let j = upper.jet(sup.s0);
    let slope_at_v_max = -j.d1 / (gamma * v_max);
    Ok(ProfileTransforms {
        alpha: sup.alpha,
        gamma,
        c: sup.c,
        v_max,
        s0: sup.s0,
        upper,
        lower,
        g0: sub.envelope.clone(),
        g1: sup.envelope.clone(),
        slope_at_v_max,
    })
}

impl ProfileTransforms {
    /// `(h, h', h'')` at `v = e^{ln_v}`.
    pub fn h_jet_log(&self, ln_v: Real) -> Jet<Real> {
        let ln_vmax = self.v_max.ln();
        if ln_v >= ln_vmax {
            let v = ln_v.min(700.0).exp();
            return Jet {
                value: 1.0 + self.slope_at_v_max * (v - self.v_max),
                d1: self.slope_at_v_max,
                d2: 0.0,
            };
        }
        to_v(self.upper.jet(-ln_v / self.gamma), ln_v, self.gamma)
    }

    /// `(h̃, h̃', h̃'')` at `v = e^{ln_v}`.
    pub fn h_tilde_jet_log(&self, ln_v: Real) -> Jet<Real> {
        to_v(self.lower.jet(-ln_v / self.gamma), ln_v, self.gamma)
    }

    pub fn h_log(&self, ln_v: Real) -> Real {
        if ln_v == Real::NEG_INFINITY {
            return 0.0;
        }
        self.h_jet_log(ln_v).value
    }

    pub fn h_tilde_log(&self, ln_v: Real) -> Real {
        if ln_v == Real::NEG_INFINITY {
            return 0.0;
        }
        self.lower.jet(-ln_v / self.gamma).value
    }

    pub fn h(&self, v: Real) -> Real {
        if v <= 0.0 {
            0.0
        } else {
            self.h_log(v.ln())
        }
    }

    pub fn h_tilde(&self, v: Real) -> Real {
        if v <= 0.0 {
            0.0
        } else {
            self.h_tilde_log(v.ln())
        }
    }

    /// `ln v` with `h(v) = u` for `u` in `(0, 1]`.
    pub fn h_inv_log(&self, u: Real) -> Result<Real> {
        if u == 1.0 {
            return Ok(self.v_max.ln());
        }
        if u > 1.0 {
            return Ok((self.v_max + (u - 1.0) / self.slope_at_v_max).ln());
        }
        let s = self
            .upper
            .solve(u)
            .ok_or_else(|| FrontError::TransformDomain(format!("h^-1({u}) outside (0, 1]")))?;
        Ok(-self.gamma * s)
    }

    /// `ln v` with `h̃(v) = u` for `u` in `(0, 1)`.
    pub fn h_tilde_inv_log(&self, u: Real) -> Result<Real> {
        let s = self
            .lower
            .solve(u)
            .ok_or_else(|| FrontError::TransformDomain(format!("h̃^-1({u}) outside (0, 1)")))?;
        Ok(-self.gamma * s)
    }

    pub fn h_inv(&self, u: Real) -> Result<Real> {
        self.h_inv_log(u).map(Real::exp)
    }

    pub fn h_tilde_inv(&self, u: Real) -> Result<Real> {
        self.h_tilde_inv_log(u).map(Real::exp)
    }

    /// `(h'(0), h̃'(0))`, the slopes of the linear tails.
    pub fn slopes_at_zero(&self) -> (Real, Real) {
        (self.upper.tail_ratio, self.lower.tail_ratio)
    }

    /// Smallest sampled `v` of each branch (`h`, `h̃`); below it both follow their linear
    /// tails `A v + F (v / v_min)^(1/α)`.
    pub fn v_min(&self) -> (Real, Real) {
        (
            (-self.gamma * self.upper.s_hi).exp(),
            (-self.gamma * self.lower.s_hi).exp(),
        )
    }

    /// Largest sampled `v` of `h̃`.
    pub fn v_tilde_max(&self) -> Real {
        (-self.gamma * self.lower.s_lo).exp()
    }

    pub fn g0(&self) -> &EnvelopeFunction {
        &self.g0
    }

    pub fn g1(&self) -> &EnvelopeFunction {
        &self.g1
    }

    /// Scans geometric `v` grids with `n` points per branch.
    pub fn certificates(&self, n: usize) -> TransformCertificates {
        let (vmin_h, vmin_ht) = self.v_min();
        let a = self.alpha;
        let mut super_residual: Real = 0.0;
        let mut super_convexity = Real::INFINITY;
        let mut super_above: Real = Real::NEG_INFINITY;
        let (lo, hi) = (vmin_h.ln(), self.v_max.ln());
        for i in 0..n {
            let lv = lo + (hi - lo) * i as Real / (n - 1) as Real;
            let v = lv.exp();
            let j = self.h_jet_log(lv);
            let curv = a * v * v * j.d2;
            super_residual = super_residual.max((curv - v * j.d1 + self.g1.value(j.value)).abs());
            if i + 1 < n {
                super_convexity = super_convexity.min(curv);
            }
            super_above = super_above.max(v - j.value);
        }
        let mut sub_concavity = Real::NEG_INFINITY;
        let mut sub_inequality = Real::NEG_INFINITY;
        let mut sub_below = Real::NEG_INFINITY;
        let (lo, hi) = (vmin_ht.ln(), self.v_tilde_max().ln());
        for i in 0..n {
            let lv = lo + (hi - lo) * i as Real / (n - 1) as Real;
            let v = lv.exp();
            let j = self.h_tilde_jet_log(lv);
            let curv = a * v * v * j.d2;
            sub_concavity = sub_concavity.max(curv);
            sub_inequality = sub_inequality.max(v * j.d1 - curv - self.g0.value(j.value));
            sub_below = sub_below.max(j.value - v);
        }
        TransformCertificates {
            super_residual,
            super_convexity,
            sub_concavity,
            sub_inequality,
            sub_below_identity: sub_below,
            super_above_identity: super_above,
            h_slope_at_zero: self.upper.tail_ratio,
            h_tilde_slope_at_zero: self.lower.tail_ratio,
            h_at_v_max: self.h(self.v_max),
            h_tilde_far: self.h_tilde_log(10.0),
        }
    }
}

/// Builds both profiles and the transforms for envelopes `g0`, `g1` and `α`.
pub fn transforms_for(
    g0: &EnvelopeFunction,
    g1: &EnvelopeFunction,
    alpha: Real,
    nu: Real,
    settings: &ProfileSettings,
) -> Result<(WaveProfile, WaveProfile, ProfileTransforms)> {
    wave_speed(alpha, nu)?;
    let sup = solve_super_profile(g1, alpha, settings)?;
    let sub = solve_sub_profile(g0, alpha, settings)?;
    let t = build_transforms(&sup, &sub)?;
    Ok((sup, sub, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reaction::EnvelopeRule;

    fn kpp_g1() -> EnvelopeFunction {
        EnvelopeFunction::upper(EnvelopeRule::Linear)
    }

    fn logistic() -> EnvelopeFunction {
        EnvelopeFunction::lower(EnvelopeRule::Logistic)
    }

    #[test]
    fn speed_examples() {
        assert!((wave_speed(0.25, 1.0).unwrap() - 2.5).abs() < 1e-15);
        assert!(wave_speed(0.99, 1.0).unwrap() >= 2.0);
        let a = (2f64.sqrt() - 1.0).powi(2);
        assert!((wave_speed(a, 2.0).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(matches!(wave_speed(0.2, 2.0), Err(FrontError::Threshold { .. })));
        assert!(wave_speed(0.0, 1.0).is_err());
    }

    #[test]
    fn kpp_super_profile_is_pure_exponential() {
        let p = solve_super_profile(&kpp_g1(), 0.25, &ProfileSettings::default()).unwrap();
        assert!(p.s0.abs() < 1e-9, "s0 = {}", p.s0);
        assert!((p.a_tail - 1.0).abs() < 1e-9);
        for k in (0..p.len()).step_by(997) {
            assert!((p.u[k] - (-0.5 * p.s(k)).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn sub_profile_tail_is_slow() {
        let p = solve_sub_profile(&logistic(), 0.25, &ProfileSettings::default()).unwrap();
        assert!((p.tail.end_rate - 0.5).abs() < 1e-3, "{}", p.tail.end_rate);
        assert!(p.certificates.strictly_decreasing);
        assert!(p.certificates.convexity_margin >= -1e-10);
        assert!(p.certificates.ode_residual <= 1e-8);
    }

    #[test]
    fn lower_envelope_rejected_for_super() {
        assert!(solve_super_profile(&logistic(), 0.25, &ProfileSettings::default()).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let g1 = EnvelopeFunction::upper(EnvelopeRule::Quadratic { beta: 1.0 });
        let a = (2f64.sqrt() - 1.0).powi(2);
        let (_, _, t) = transforms_for(&logistic(), &g1, a, 2.0, &ProfileSettings::default()).unwrap();
        for &u in &[1e-6, 0.1, 0.5, 0.9, 0.999] {
            let lv = t.h_inv_log(u).unwrap();
            assert!((t.h_log(lv) - u).abs() < 1e-10);
            let lt = t.h_tilde_inv_log(u).unwrap();
            assert!((t.h_tilde_log(lt) - u).abs() < 1e-10);
        }
        assert!(t.h_tilde_inv_log(1.0).is_err());
    }
}
