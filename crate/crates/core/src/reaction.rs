//! Reaction terms `f(x, u)`, their linearization `a(x) = f_u(x, 0)`, and the monostable
//! envelope pair `a(x) g0(u) <= f(x, u) <= a(x) g1(u)`.
//!
//! Hypotheses are checked on a finite sample grid; coefficient fields that settle to
//! constants outside the grid contribute their asymptotic values to `a-` and `a+`.

use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::numerics::optimize::{golden_min, scan_then_refine_max};
use crate::numerics::quad;
use crate::numerics::CubicHermite;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeTag {
    Lower,
    Upper,
}

#[derive(Debug, Clone)]
pub enum EnvelopeRule {
    /// `u`
    Linear,
    /// `u (1 + beta u)`
    Quadratic { beta: Real },
    /// `u (1 - u)`
    Logistic,
    /// `u (1 - u)^2`; degenerate at `u = 1` (`g'(1) = 0`).
    LogisticSquared,
    Tabulated(CubicHermite<Real>),
}

/// One of the two envelope functions `g: [0, 1] -> R` with its derivative.
#[derive(Debug, Clone)]
pub struct EnvelopeFunction {
    pub rule: EnvelopeRule,
    pub tag: EnvelopeTag,
}

impl EnvelopeFunction {
    pub fn new(rule: EnvelopeRule, tag: EnvelopeTag) -> Self {
        Self { rule, tag }
    }

    pub fn lower(rule: EnvelopeRule) -> Self {
        Self::new(rule, EnvelopeTag::Lower)
    }

    pub fn upper(rule: EnvelopeRule) -> Self {
        Self::new(rule, EnvelopeTag::Upper)
    }

    #[inline]
    pub fn value(&self, u: Real) -> Real {
        match &self.rule {
            EnvelopeRule::Linear => u,
            EnvelopeRule::Quadratic { beta } => u * (1.0 + beta * u),
            EnvelopeRule::Logistic => u * (1.0 - u),
            EnvelopeRule::LogisticSquared => u * (1.0 - u) * (1.0 - u),
            EnvelopeRule::Tabulated(t) => t.eval(u),
        }
    }

    #[inline]
    pub fn derivative(&self, u: Real) -> Real {
        match &self.rule {
            EnvelopeRule::Linear => 1.0,
            EnvelopeRule::Quadratic { beta } => 1.0 + 2.0 * beta * u,
            EnvelopeRule::Logistic => 1.0 - 2.0 * u,
            EnvelopeRule::LogisticSquared => (1.0 - u) * (1.0 - 3.0 * u),
            EnvelopeRule::Tabulated(t) => t.jet(u).d1,
        }
    }

    /// Worst violation of the shape constraints for this tag on `n` samples of `[0, 1]`.
    pub fn shape_violation(&self, n: usize) -> (Real, String) {
        let mut worst = 0.0;
        let mut what = String::from("none");
        let mut note = |v: Real, msg: String| {
            if v > worst {
                worst = v;
                what = msg;
            }
        };
        note(self.value(0.0).abs(), "g(0) != 0".into());
        note((self.derivative(0.0) - 1.0).abs(), "g'(0) != 1".into());
        let n = n.max(3);
        for i in 0..n {
            let u = i as Real / (n - 1) as Real;
            let g = self.value(u);
            let dg = self.derivative(u);
            match self.tag {
                EnvelopeTag::Lower => {
                    if i > 0 && i + 1 < n && g <= 0.0 {
                        note(-g + Real::MIN_POSITIVE, format!("g0({u}) = {g} <= 0"));
                    }
                    if i > 0 && i + 1 < n {
                        note(dg - 1.0 - 1e-12, format!("g0'({u}) = {dg} > 1"));
                    }
                }
                EnvelopeTag::Upper => {
                    note(1.0 - dg - 1e-12, format!("g1'({u}) = {dg} < 1"));
                }
            }
        }
        if self.tag == EnvelopeTag::Lower {
            note(self.value(1.0).abs(), "g0(1) != 0".into());
        }
        (worst, what)
    }
}

/// Spatially varying positive coefficient (reaction rate, diffusivity) or drift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientField {
    Constant { value: Real },
    /// `base + amplitude * exp(-(x / width)^2)`
    Gaussian { base: Real, amplitude: Real, width: Real },
    /// `base + amplitude * sin(wavenumber * x)`
    Sine { base: Real, amplitude: Real, wavenumber: Real },
    /// `base + amplitude` on `|x| < half_width`, `base` outside, midpoint on the jump.
    Well { base: Real, amplitude: Real, half_width: Real },
}

impl CoefficientField {
    #[inline]
    pub fn value(&self, x: Real) -> Real {
        match *self {
            Self::Constant { value } => value,
            Self::Gaussian { base, amplitude, width } => base + amplitude * (-(x / width).powi(2)).exp(),
            Self::Sine { base, amplitude, wavenumber } => base + amplitude * (wavenumber * x).sin(),
            Self::Well { base, amplitude, half_width } => {
                let d = x.abs() - half_width;
                if d < 0.0 {
                    base + amplitude
                } else if d == 0.0 {
                    base + 0.5 * amplitude
                } else {
                    base
                }
            }
        }
    }

    /// Limits as `|x| -> infinity` for fields that settle to a constant.
    pub fn asymptote(&self) -> Option<Real> {
        match *self {
            Self::Constant { value } => Some(value),
            Self::Gaussian { base, .. } | Self::Well { base, .. } => Some(base),
            Self::Sine { .. } => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant { .. })
            || matches!(self, Self::Gaussian { amplitude, .. } | Self::Sine { amplitude, .. } | Self::Well { amplitude, .. } if *amplitude == 0.0)
    }

    /// Copy with the perturbation amplitude replaced (constant fields are unchanged).
    pub fn with_amplitude(&self, amp: Real) -> Self {
        let mut out = self.clone();
        match &mut out {
            Self::Constant { .. } => {}
            Self::Gaussian { amplitude, .. } | Self::Sine { amplitude, .. } | Self::Well { amplitude, .. } => {
                *amplitude = amp
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub enum ReactionKind {
    /// `a(x) u (1 - u)`
    Kpp,
    /// `a(x) u (1 - u) (1 + beta u)`
    Cubic { beta: Real },
    /// `a(x) u (1 - u) (1 + beta m(x) u)` with `m(x) = (1 + cos(k x)) / 2`.
    ModulatedCubic { beta: Real, wavenumber: Real },
    /// `a(x) G(u)` with `G` interpolated monotone-cubically from samples.
    Tabulated(CubicHermite<Real>),
}

#[derive(Debug, Clone)]
pub struct ReactionSpec {
    pub a: CoefficientField,
    pub kind: ReactionKind,
    pub g0: EnvelopeFunction,
    pub g1: EnvelopeFunction,
    /// `A(x)` of the divergence-form variant.
    pub diffusion: Option<CoefficientField>,
    /// `q(x)` of the divergence-form variant.
    pub drift: Option<CoefficientField>,
}

impl ReactionSpec {
    /// Homogeneous-envelope KPP reaction `a(x) u (1 - u)` with `g0 = u(1-u)`, `g1 = u`.
    pub fn kpp(a: CoefficientField) -> Self {
        Self {
            a,
            kind: ReactionKind::Kpp,
            g0: EnvelopeFunction::lower(EnvelopeRule::Logistic),
            g1: EnvelopeFunction::upper(EnvelopeRule::Linear),
            diffusion: None,
            drift: None,
        }
    }

    /// `a(x) u (1 - u)(1 + beta u)` with `g0 = u(1-u)`, `g1 = u(1 + beta u)`.
    pub fn cubic(a: CoefficientField, beta: Real) -> Self {
        Self {
            a,
            kind: ReactionKind::Cubic { beta },
            g0: EnvelopeFunction::lower(EnvelopeRule::Logistic),
            g1: EnvelopeFunction::upper(if beta == 0.0 {
                EnvelopeRule::Linear
            } else {
                EnvelopeRule::Quadratic { beta }
            }),
            diffusion: None,
            drift: None,
        }
    }

    pub fn has_divergence_form(&self) -> bool {
        self.diffusion.is_some() || self.drift.is_some()
    }

    #[inline]
    pub fn a_at(&self, x: Real) -> Real {
        self.a.value(x)
    }

    #[inline]
    pub fn diffusion_at(&self, x: Real) -> Real {
        self.diffusion.as_ref().map_or(1.0, |d| d.value(x))
    }

    #[inline]
    pub fn drift_at(&self, x: Real) -> Real {
        self.drift.as_ref().map_or(0.0, |q| q.value(x))
    }

    #[inline]
    pub fn f(&self, x: Real, u: Real) -> Real {
        let a = self.a.value(x);
        match &self.kind {
            ReactionKind::Kpp => a * u * (1.0 - u),
            ReactionKind::Cubic { beta } => a * u * (1.0 - u) * (1.0 + beta * u),
            ReactionKind::ModulatedCubic { beta, wavenumber } => {
                let m = 0.5 * (1.0 + (wavenumber * x).cos());
                a * u * (1.0 - u) * (1.0 + beta * m * u)
            }
            ReactionKind::Tabulated(g) => a * g.eval(u),
        }
    }

    /// `∂f/∂u`.
    #[inline]
    pub fn f_u(&self, x: Real, u: Real) -> Real {
        let a = self.a.value(x);
        match &self.kind {
            ReactionKind::Kpp => a * (1.0 - 2.0 * u),
            ReactionKind::Cubic { beta } => a * (1.0 - 2.0 * u + beta * (2.0 * u - 3.0 * u * u)),
            ReactionKind::ModulatedCubic { beta, wavenumber } => {
                let b = beta * 0.5 * (1.0 + (wavenumber * x).cos());
                a * (1.0 - 2.0 * u + b * (2.0 * u - 3.0 * u * u))
            }
            ReactionKind::Tabulated(g) => a * g.jet(u).d1,
        }
    }

    /// Copy with the cubic coefficient `beta` replaced in both `f` and `g1`.
    pub fn with_beta(&self, beta: Real) -> Result<Self> {
        let mut out = self.clone();
        match &mut out.kind {
            ReactionKind::Cubic { beta: b } | ReactionKind::ModulatedCubic { beta: b, .. } => *b = beta,
            ReactionKind::Kpp if beta == 0.0 => {}
            ReactionKind::Kpp => out.kind = ReactionKind::Cubic { beta },
            ReactionKind::Tabulated(_) => {
                return Err(FrontError::Config("beta is not a parameter of a tabulated reaction".into()))
            }
        }
        out.g1 = EnvelopeFunction::upper(if beta == 0.0 {
            EnvelopeRule::Linear
        } else {
            EnvelopeRule::Quadratic { beta }
        });
        Ok(out)
    }
}

/// Sample grid used by [`validate_spec`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub x_min: Real,
    pub x_max: Real,
    pub nx: usize,
    pub nu: usize,
}

impl SampleGrid {
    pub fn new(x_min: Real, x_max: Real) -> Self {
        Self {
            x_min,
            x_max,
            nx: 2001,
            nu: 1001,
        }
    }

    fn xs(&self) -> impl Iterator<Item = Real> + '_ {
        let n = self.nx.max(2);
        (0..n).map(move |i| self.x_min + (self.x_max - self.x_min) * i as Real / (n - 1) as Real)
    }

    fn us(&self) -> impl Iterator<Item = Real> + '_ {
        let n = self.nu.max(2);
        (0..n).map(move |j| j as Real / (n - 1) as Real)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisRecord {
    pub name: String,
    pub passed: bool,
    /// Largest violation magnitude found (0 when satisfied everywhere).
    pub worst_violation: Real,
    pub detail: String,
}

/// Cached scalar bounds of a validated spec.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReactionBounds {
    pub a_minus: Real,
    pub a_plus: Real,
    pub nu: Real,
    pub envelope_gap_integral: Real,
    /// `inf_x (a A)(x)`; equals `a_minus` without a diffusion field.
    pub aa_minus: Real,
    /// `sup_x |q(x)|`.
    pub q_plus: Real,
    /// Replacement for `2 a_minus` in the threshold when `A`, `q` are present.
    pub lambda1: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub grid: SampleGrid,
    pub hypotheses: Vec<HypothesisRecord>,
    pub bounds: ReactionBounds,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.hypotheses.iter().all(|h| h.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &HypothesisRecord> {
        self.hypotheses.iter().filter(|h| !h.passed)
    }
}

/// A spec whose hypotheses all passed, with its cached bounds.
#[derive(Debug, Clone)]
pub struct ValidatedSpec {
    spec: ReactionSpec,
    bounds: ReactionBounds,
}

impl ValidatedSpec {
    pub fn new(spec: ReactionSpec, report: &ValidationReport) -> Result<Self> {
        if let Some(bad) = report.failures().next() {
            return Err(FrontError::HypothesisViolation(format!(
                "{} failed (worst violation {:.3e}): {}",
                bad.name, bad.worst_violation, bad.detail
            )));
        }
        Ok(Self {
            spec,
            bounds: report.bounds,
        })
    }

    pub fn spec(&self) -> &ReactionSpec {
        &self.spec
    }

    pub fn bounds(&self) -> &ReactionBounds {
        &self.bounds
    }
}

impl std::ops::Deref for ValidatedSpec {
    type Target = ReactionSpec;
    fn deref(&self) -> &ReactionSpec {
        &self.spec
    }
}

fn record(name: &str, worst: Real, tol: Real, detail: String) -> HypothesisRecord {
    HypothesisRecord {
        name: name.to_string(),
        passed: worst <= tol,
        worst_violation: worst.max(0.0),
        detail,
    }
}

fn extreme_of_field(field: &CoefficientField, grid: &SampleGrid, maximize: bool) -> Real {
    let sign = if maximize { 1.0 } else { -1.0 };
    let (_, v) = scan_then_refine_max(|x| sign * field.value(x), grid.x_min, grid.x_max, grid.nx, 1e-12);
    let mut best = sign * v;
    if let Some(asym) = field.asymptote() {
        best = if maximize { best.max(asym) } else { best.min(asym) };
    }
    best
}

/// `sup_{u in (0,1]} g1(u)/u`, with the removable singularity at 0 valued `g1'(0)`.
pub fn envelope_nu(g1: &EnvelopeFunction) -> Result<Real> {
    let probes = [1e-6, 1e-7, 1e-8];
    let ratios: Vec<Real> = probes.iter().map(|&u| g1.value(u) / u).collect();
    if ratios.iter().any(|r| !r.is_finite()) || ratios[2] > 10.0 * ratios[0].abs() + 1.0 {
        return Err(FrontError::Envelope(format!(
            "g1(u)/u unbounded near 0 (ratios {ratios:?} at u = {probes:?})"
        )));
    }
    let (_, sampled) = scan_then_refine_max(|u| g1.value(u) / u, 1e-6, 1.0, 10_001, 1e-9);
    Ok(sampled.max(g1.derivative(0.0)))
}

/// `∫_0^1 (g1 - g0)/u^2 du`, the piece on `[0, δ]` from the integrand's limit at 0.
pub fn envelope_gap_integral(g0: &EnvelopeFunction, g1: &EnvelopeFunction) -> Real {
    let delta = 1e-8;
    let gap = |u: Real| g1.value(u) - g0.value(u);
    let eta = 1e-3;
    // Integrand limit at 0 is gap''(0)/2, from a one-sided second difference.
    let limit = (gap(2.0 * eta) - 2.0 * gap(eta) + gap(0.0)) / (2.0 * eta * eta);
    let r = quad::integrate(|u| gap(u) / (u * u), delta, 1.0, 1e-10, 1e-10, 4000);
    if !r.converged || !r.value.is_finite() {
        return Real::INFINITY;
    }
    r.value + delta * limit
}

/// Checks every hypothesis on the sample grid and computes `a-`, `a+`, `nu`.
pub fn validate_spec(spec: &ReactionSpec, grid: &SampleGrid) -> Result<ValidationReport> {
    let mut hyps = Vec::new();
    let xs: Vec<Real> = grid.xs().collect();
    let us: Vec<Real> = grid.us().collect();

    for &x in &xs {
        let a = spec.a_at(x);
        if !a.is_finite() {
            return Err(FrontError::InvalidSpec {
                location: format!("x = {x}"),
                reason: format!("a(x) = {a}"),
            });
        }
        for &u in &us {
            let f = spec.f(x, u);
            if !f.is_finite() {
                return Err(FrontError::InvalidSpec {
                    location: format!("(x, u) = ({x}, {u})"),
                    reason: format!("f = {f}"),
                });
            }
        }
    }

    let nu = envelope_nu(&spec.g1)?;

    // f(x,0) = f(x,1) = 0
    let mut worst_eq = 0.0;
    let mut at_eq = 0.0;
    for &x in &xs {
        let v = spec.f(x, 0.0).abs().max(spec.f(x, 1.0).abs());
        if v > worst_eq {
            worst_eq = v;
            at_eq = x;
        }
    }
    hyps.push(record("equilibria", worst_eq, 1e-12, format!("max |f(x,0)|,|f(x,1)| at x = {at_eq}")));

    // a(x) g0(u) <= f(x,u) <= a(x) g1(u), slack 1e-12 a(x).
    let mut worst_lo = (Real::NEG_INFINITY, 0.0, 0.0);
    let mut worst_hi = (Real::NEG_INFINITY, 0.0, 0.0);
    for &x in &xs {
        let a = spec.a_at(x);
        for &u in &us {
            let f = spec.f(x, u);
            let lo = (a * spec.g0.value(u) - f) / a;
            let hi = (f - a * spec.g1.value(u)) / a;
            if lo > worst_lo.0 {
                worst_lo = (lo, x, u);
            }
            if hi > worst_hi.0 {
                worst_hi = (hi, x, u);
            }
        }
    }
    // Refine around the worst rows in u; violations between samples show up here.
    let du = 1.0 / (grid.nu.max(2) - 1) as Real;
    for (worst, lower) in [(&mut worst_lo, true), (&mut worst_hi, false)] {
        let (_, x, u) = *worst;
        let a = spec.a_at(x);
        let excess = |uu: Real| {
            let f = spec.f(x, uu);
            if lower {
                (a * spec.g0.value(uu) - f) / a
            } else {
                (f - a * spec.g1.value(uu)) / a
            }
        };
        let (u_star, neg) = golden_min(|uu| -excess(uu), (u - du).max(0.0), (u + du).min(1.0), 1e-12, 200);
        if -neg > worst.0 {
            *worst = (-neg, x, u_star);
        }
    }
    hyps.push(record(
        "envelope_lower",
        worst_lo.0,
        1e-12,
        format!("max (a g0 - f)/a = {:.3e} at (x, u) = ({}, {})", worst_lo.0, worst_lo.1, worst_lo.2),
    ));
    hyps.push(record(
        "envelope_upper",
        worst_hi.0,
        1e-12,
        format!("max (f - a g1)/a = {:.3e} at (x, u) = ({}, {})", worst_hi.0, worst_hi.1, worst_hi.2),
    ));

    // a(x) = f_u(x, 0)
    let eta = 1e-7;
    let mut worst_lin = 0.0;
    let mut at_lin = 0.0;
    for &x in &xs {
        let a = spec.a_at(x);
        let fd = spec.f(x, eta) / eta;
        let rel = ((fd - a) / a).abs();
        if rel > worst_lin {
            worst_lin = rel;
            at_lin = x;
        }
    }
    hyps.push(record("linearization", worst_lin, 1e-5, format!("|f(x,eta)/eta - a(x)|/a at x = {at_lin}")));

    let a_minus = extreme_of_field(&spec.a, grid, false);
    let a_plus = extreme_of_field(&spec.a, grid, true);
    hyps.push(record(
        "coefficient_bounds",
        if a_minus > 0.0 && a_minus <= a_plus { 0.0 } else { (-a_minus).max(1e-300) },
        0.0,
        format!("a- = {a_minus}, a+ = {a_plus}"),
    ));

    let (g0_bad, g0_what) = spec.g0.shape_violation(grid.nu);
    hyps.push(record("g0_shape", g0_bad, 1e-9, g0_what));
    let (g1_bad, g1_what) = spec.g1.shape_violation(grid.nu);
    hyps.push(record("g1_shape", g1_bad, 1e-9, g1_what));
    if spec.g0.tag != EnvelopeTag::Lower || spec.g1.tag != EnvelopeTag::Upper {
        hyps.push(record("envelope_tags", 1.0, 0.0, "g0 must be lower-tagged and g1 upper-tagged".into()));
    }

    hyps.push(record(
        "nu",
        if nu.is_finite() { (1.0 - nu).max(0.0) } else { Real::INFINITY },
        1e-12,
        format!("nu = {nu}"),
    ));

    let integral = envelope_gap_integral(&spec.g0, &spec.g1);
    hyps.push(record(
        "gap_integral_finite",
        if integral.is_finite() { 0.0 } else { Real::INFINITY },
        0.0,
        format!("integral = {integral}"),
    ));

    // Divergence-form coefficients.
    let mut aa_minus = a_minus;
    let mut q_plus = 0.0;
    let mut lambda1 = 2.0 * a_minus;
    if spec.has_divergence_form() {
        let mut a_diff_min = Real::INFINITY;
        aa_minus = Real::INFINITY;
        for &x in &xs {
            let big_a = spec.diffusion_at(x);
            a_diff_min = a_diff_min.min(big_a);
            aa_minus = aa_minus.min(spec.a_at(x) * big_a);
            q_plus = Real::max(q_plus, spec.drift_at(x).abs());
        }
        if let (Some(da), Some(aa)) = (spec.diffusion.as_ref().and_then(|d| d.asymptote()), spec.a.asymptote()) {
            aa_minus = aa_minus.min(da * aa);
        }
        if let Some(qa) = spec.drift.as_ref().and_then(|q| q.asymptote()) {
            q_plus = q_plus.max(qa.abs());
        }
        hyps.push(record(
            "diffusion_positive",
            if a_diff_min > 0.0 { 0.0 } else { -a_diff_min + 1e-300 },
            0.0,
            format!("A- = {a_diff_min}"),
        ));
        let gate = q_plus - 2.0 * aa_minus.sqrt();
        hyps.push(record(
            "drift_gate",
            gate,
            1e-12,
            format!("q+ = {q_plus}, 2 sqrt((aA)-) = {} (provided that q+ <= 2 sqrt((aA)-))", 2.0 * aa_minus.sqrt()),
        ));
        let s = aa_minus.max(0.0).sqrt();
        lambda1 = xs
            .iter()
            .map(|&x| spec.a_at(x) + s * (s - spec.drift_at(x).abs()) / spec.diffusion_at(x))
            .fold(Real::INFINITY, Real::min);
    }

    Ok(ValidationReport {
        grid: *grid,
        hypotheses: hyps,
        bounds: ReactionBounds {
            a_minus,
            a_plus,
            nu,
            envelope_gap_integral: integral,
            aa_minus,
            q_plus,
            lambda1,
        },
    })
}

/// `2 sqrt(nu - 1) / (sqrt(nu) + sqrt(nu - 1))`, equal to `1 - (sqrt(nu) - sqrt(nu - 1))^2`.
pub fn nu_penalty(nu: Real) -> Result<Real> {
    if !(nu >= 1.0 - 1e-12) || !nu.is_finite() {
        return Err(FrontError::Envelope(format!("nu = {nu} < 1")));
    }
    let nu = nu.max(1.0);
    let s = (nu - 1.0).sqrt();
    Ok(2.0 * s / (nu.sqrt() + s))
}

/// Right-hand side of the admissibility condition for `lambda`.
///
/// `2 a- - nu_penalty(nu) a+`, with `2 a-` replaced by `lambda1` for divergence-form specs.
pub fn threshold_rhs(spec: &ValidatedSpec) -> Result<Real> {
    let b = spec.bounds();
    let lead = if spec.has_divergence_form() { b.lambda1 } else { 2.0 * b.a_minus };
    threshold_from_bounds(lead, b.a_plus, b.nu)
}

/// [`threshold_rhs`] from raw numbers.
pub fn threshold_from_bounds(lead: Real, a_plus: Real, nu: Real) -> Result<Real> {
    Ok(lead - nu_penalty(nu)? * a_plus)
}
