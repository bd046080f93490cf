//! Front-like solutions `v = Σ w_k e^{λ_k t} φ_k` of `v_t = v_xx + a v` and the
//! envelope fields `w̃ = h̃(v)`, `w = h(v)` built on them.
//!
//! Everything is evaluated through `ln v` so that the far left of a long window,
//! where `v` is astronomically large, stays representable.

use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::numerics::CubicHermite;
use crate::profile::ProfileTransforms;
use crate::reaction::ValidatedSpec;
use crate::spectral::Eigenpair;
use crate::Real;

#[derive(Debug, Clone)]
struct Mode {
    pair: Eigenpair,
    log_weight: Real,
    log_phi: CubicHermite<Real>,
}

/// Non-negative finite combination of generalized eigenfunctions.
#[derive(Debug, Clone)]
pub struct LinearizedSolution {
    modes: Vec<Mode>,
    /// `α` of the largest `λ`.
    pub alpha: Real,
    /// Largest doubling length among the modes.
    pub doubling_length: Real,
    pub x_lo: Real,
    pub x_hi: Real,
}

impl LinearizedSolution {
    /// All pairs must share one grid; zero weights are dropped.
    pub fn new(pairs: Vec<(Eigenpair, Real)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(FrontError::Construction("no eigenpairs to superpose".into()));
        }
        let (x0, dx, n) = (pairs[0].0.x0, pairs[0].0.dx, pairs[0].0.len());
        let mut modes = Vec::new();
        for (pair, w) in pairs {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(FrontError::Construction(format!("weight {w} must be finite and non-negative")));
            }
            if pair.x0 != x0 || pair.dx != dx || pair.len() != n {
                return Err(FrontError::Construction(format!(
                    "eigenpair for lambda = {} is on a different grid",
                    pair.lambda
                )));
            }
            if w == 0.0 {
                continue;
            }
            let log_phi = pair.log_interpolant()?;
            modes.push(Mode {
                pair,
                log_weight: w.ln(),
                log_phi,
            });
        }
        if modes.is_empty() {
            return Err(FrontError::DegenerateMeasure("all weights are zero".into()));
        }
        let top = modes
            .iter()
            .max_by(|a, b| a.pair.lambda.total_cmp(&b.pair.lambda))
            .expect("non-empty");
        let alpha = top.pair.alpha;
        let doubling_length = modes.iter().map(|m| m.pair.doubling_length).fold(0.0, Real::max);
        Ok(Self {
            modes,
            alpha,
            doubling_length,
            x_lo: x0,
            x_hi: x0 + (n - 1) as Real * dx,
        })
    }

    pub fn single(pair: Eigenpair) -> Result<Self> {
        Self::new(vec![(pair, 1.0)])
    }

    pub fn lambdas(&self) -> Vec<Real> {
        self.modes.iter().map(|m| m.pair.lambda).collect()
    }

    pub fn lambda_max(&self) -> Real {
        self.modes.iter().map(|m| m.pair.lambda).fold(Real::NEG_INFINITY, Real::max)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Eigenpair, Real)> {
        self.modes.iter().map(|m| (&m.pair, m.log_weight.exp()))
    }

    fn check_window(&self, x: Real) -> Result<()> {
        if x < self.x_lo - 1e-12 || x > self.x_hi + 1e-12 {
            return Err(FrontError::Window(format!(
                "x = {x} outside the eigenfunction window [{}, {}]",
                self.x_lo, self.x_hi
            )));
        }
        Ok(())
    }

    /// `(ln v, v_x / v, v_t / v)` at `(t, x)`.
    pub fn log_jet(&self, t: Real, x: Real) -> Result<(Real, Real, Real)> {
        self.check_window(x)?;
        if let [m] = self.modes.as_slice() {
            let j = m.log_phi.jet(x);
            return Ok((m.log_weight + m.pair.lambda * t + j.value, j.d1, m.pair.lambda));
        }
        let jets: Vec<_> = self.modes.iter().map(|m| m.log_phi.jet(x)).collect();
        let logs: Vec<Real> = self
            .modes
            .iter()
            .zip(&jets)
            .map(|(m, j)| m.log_weight + m.pair.lambda * t + j.value)
            .collect();
        let top = logs.iter().copied().fold(Real::NEG_INFINITY, Real::max);
        let (mut sum, mut sx, mut st) = (0.0, 0.0, 0.0);
        for ((m, j), l) in self.modes.iter().zip(&jets).zip(&logs) {
            let e = (l - top).exp();
            sum += e;
            sx += e * j.d1;
            st += e * m.pair.lambda;
        }
        Ok((top + sum.ln(), sx / sum, st / sum))
    }

    pub fn log_v(&self, t: Real, x: Real) -> Result<Real> {
        self.log_jet(t, x).map(|j| j.0)
    }

    pub fn v(&self, t: Real, x: Real) -> Result<Real> {
        self.log_v(t, x).map(Real::exp)
    }

    /// `max |v_t - v_xx - a v| / (λ_max * local max v)` over the interior grid nodes at time `t`.
    pub fn pde_residual(&self, spec: &ValidatedSpec, t: Real) -> Real {
        let first = &self.modes[0].pair;
        let n = first.len();
        let h = first.dx;
        let log_v: Vec<Real> = (0..n)
            .map(|i| {
                let mut top = Real::NEG_INFINITY;
                for m in &self.modes {
                    top = top.max(m.log_weight + m.pair.lambda * t + m.pair.log_phi[i]);
                }
                let s: Real = self
                    .modes
                    .iter()
                    .map(|m| (m.log_weight + m.pair.lambda * t + m.pair.log_phi[i] - top).exp())
                    .sum();
                top + s.ln()
            })
            .collect();
        let mut worst: Real = 0.0;
        for i in 2..n.saturating_sub(2) {
            let rel = |k: usize| (log_v[k] - log_v[i]).exp();
            let vxx = (-rel(i - 2) + 16.0 * rel(i - 1) - 30.0 + 16.0 * rel(i + 1) - rel(i + 2)) / (12.0 * h * h);
            let vt: Real = self
                .modes
                .iter()
                .map(|m| m.pair.lambda * (m.log_weight + m.pair.lambda * t + m.pair.log_phi[i] - log_v[i]).exp())
                .sum();
            let local = (i - 2..=i + 2).map(rel).fold(0.0, Real::max);
            let r = (vt - vxx - spec.a_at(first.x(i))).abs() / (self.lambda_max().abs() * local);
            worst = worst.max(r);
        }
        worst
    }
}

/// Sub- and super-solution fields `h̃(v)` and `h(v)`.
#[derive(Debug, Clone)]
pub struct EnvelopeFields {
    pub linear: LinearizedSolution,
    pub transforms: ProfileTransforms,
}

impl EnvelopeFields {
    pub fn new(linear: LinearizedSolution, transforms: ProfileTransforms) -> Self {
        Self { linear, transforms }
    }

    pub fn w_tilde(&self, t: Real, x: Real) -> Result<Real> {
        Ok(self.transforms.h_tilde_log(self.linear.log_v(t, x)?))
    }

    pub fn w(&self, t: Real, x: Real) -> Result<Real> {
        Ok(self.transforms.h_log(self.linear.log_v(t, x)?))
    }

    pub fn w_clamped(&self, t: Real, x: Real) -> Result<Real> {
        Ok(self.w(t, x)?.min(1.0))
    }

    /// `(v, w̃, min{w, 1})` at one point.
    pub fn sample(&self, t: Real, x: Real) -> Result<EnvelopeSample> {
        let lv = self.linear.log_v(t, x)?;
        Ok(EnvelopeSample {
            log_v: lv,
            w_tilde: self.transforms.h_tilde_log(lv),
            w_clamped: self.transforms.h_log(lv).min(1.0),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSample {
    pub log_v: Real,
    pub w_tilde: Real,
    pub w_clamped: Real,
}

/// `w̃` and `min{w, 1}` on a tensor slab, row-major in time.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSlab {
    pub t: Vec<Real>,
    pub x: Vec<Real>,
    pub w_tilde: Vec<Vec<Real>>,
    pub w_clamped: Vec<Vec<Real>>,
}

pub fn evaluate_envelopes(fields: &EnvelopeFields, t: &[Real], x: &[Real]) -> Result<EnvelopeSlab> {
    let mut w_tilde = Vec::with_capacity(t.len());
    let mut w_clamped = Vec::with_capacity(t.len());
    for &tj in t {
        let mut lo = Vec::with_capacity(x.len());
        let mut hi = Vec::with_capacity(x.len());
        for &xi in x {
            let s = fields.sample(tj, xi)?;
            lo.push(s.w_tilde);
            hi.push(s.w_clamped);
        }
        w_tilde.push(lo);
        w_clamped.push(hi);
    }
    Ok(EnvelopeSlab {
        t: t.to_vec(),
        x: x.to_vec(),
        w_tilde,
        w_clamped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientReport {
    /// `max (A v_x^2 - α a v^2) / (α a v^2)`.
    pub worst_margin: Real,
    pub at_t: Real,
    pub at_x: Real,
    pub slack: Real,
    pub passed: bool,
}

impl GradientReport {
    pub fn into_result(self) -> Result<Self> {
        if self.passed {
            Ok(self)
        } else {
            Err(FrontError::HypothesisViolation(format!(
                "gradient bound A v_x^2 <= alpha a v^2 fails at (t, x) = ({}, {}) by relative margin {:.3e}",
                self.at_t, self.at_x, self.worst_margin
            )))
        }
    }
}

/// Checks `A v_x^2 <= α a v^2` on the slab with relative slack.
pub fn gradient_certificate(
    spec: &ValidatedSpec,
    v: &LinearizedSolution,
    t: &[Real],
    x: &[Real],
    slack: Real,
) -> Result<GradientReport> {
    let mut worst = Real::NEG_INFINITY;
    let (mut at_t, mut at_x) = (Real::NAN, Real::NAN);
    for &tj in t {
        for &xi in x {
            let (_, r, _) = v.log_jet(tj, xi)?;
            let a = spec.a_at(xi);
            let m = (spec.diffusion_at(xi) * r * r - v.alpha * a) / (v.alpha * a);
            if m > worst {
                worst = m;
                at_t = tj;
                at_x = xi;
            }
        }
    }
    Ok(GradientReport {
        worst_margin: worst,
        at_t,
        at_x,
        slack,
        passed: worst <= slack,
    })
}
