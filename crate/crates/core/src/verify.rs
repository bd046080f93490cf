//! Certificates evaluated on simulation output: sandwich between the envelopes,
//! monotonicity in time, bounded width, the ratio limit at the leading edge and the
//! limits at both ends of the domain.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::numerics::stats::median;
use crate::pde::{front_width, FrontSolution};
use crate::profile::ProfileTransforms;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub name: String,
    pub region: String,
    /// Smallest slack found; negative beyond the tolerance means failure.
    pub worst_margin: Real,
    pub tolerance: Real,
    pub status: Status,
    /// `(t, x)` of the worst margin.
    pub location: Option<(Real, Real)>,
    pub values: BTreeMap<String, Real>,
    pub detail: String,
}

impl CertificateRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub dx: Real,
    pub dt: Real,
    pub t0: Real,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub records: Vec<CertificateRecord>,
    pub provenance: Provenance,
}

impl CertificateReport {
    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed())
    }

    pub fn get(&self, name: &str) -> Option<&CertificateRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

/// Nodes and output times examined by the checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteriorRegion {
    /// Nodes excluded at each boundary.
    pub boundary_nodes: usize,
    /// Fraction of the time window dropped at the end (sandwich, limits, ratio).
    pub tail_fraction: Real,
    /// Fraction dropped at the start for the strict-monotonicity statistic.
    pub initial_fraction: Real,
}

impl Default for InteriorRegion {
    fn default() -> Self {
        Self {
            boundary_nodes: 10,
            tail_fraction: 0.05,
            initial_fraction: 0.05,
        }
    }
}

impl InteriorRegion {
    fn nodes(&self, sol: &FrontSolution) -> std::ops::Range<usize> {
        let n = sol.grid.n;
        let b = self.boundary_nodes.min(n / 2);
        b..n - b
    }

    fn times_before_tail(&self, sol: &FrontSolution) -> Vec<usize> {
        let (t0, t1) = time_range(sol);
        let cut = t1 - self.tail_fraction * (t1 - t0);
        (0..sol.snapshots.len())
            .filter(|&j| sol.snapshots[j].t <= cut + 1e-12 * (t1 - t0))
            .collect()
    }

    fn describe(&self, sol: &FrontSolution, skip_tail: bool) -> String {
        let r = self.nodes(sol);
        let (t0, t1) = time_range(sol);
        let t_end = if skip_tail {
            t1 - self.tail_fraction * (t1 - t0)
        } else {
            t1
        };
        format!(
            "x in [{:.4}, {:.4}], t in [{:.4}, {:.4}]",
            sol.grid.x(r.start),
            sol.grid.x(r.end - 1),
            t0,
            t_end
        )
    }
}

fn time_range(sol: &FrontSolution) -> (Real, Real) {
    let first = sol.snapshots.first().map_or(0.0, |s| s.t);
    let last = sol.snapshots.last().map_or(0.0, |s| s.t);
    (first, last)
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// `w̃ - tol <= u <= min{w,1} + tol` on the interior.
pub fn check_sandwich(sol: &FrontSolution, region: &InteriorRegion, tol: Real) -> CertificateRecord {
    let mut lower = (Real::INFINITY, None);
    let mut upper = (Real::INFINITY, None);
    for j in region.times_before_tail(sol) {
        let s = &sol.snapshots[j];
        for i in region.nodes(sol) {
            let lo = s.u[i] - s.w_tilde[i];
            let hi = s.w_clamped[i] - s.u[i];
            if lo < lower.0 {
                lower = (lo, Some((s.t, sol.grid.x(i))));
            }
            if hi < upper.0 {
                upper = (hi, Some((s.t, sol.grid.x(i))));
            }
        }
    }
    let (worst, location) = if lower.0 <= upper.0 { lower } else { upper };
    let mut values = BTreeMap::new();
    values.insert("lower_margin".into(), lower.0);
    values.insert("upper_margin".into(), upper.0);
    CertificateRecord {
        name: "sandwich".into(),
        region: region.describe(sol, true),
        worst_margin: worst,
        tolerance: tol,
        status: status(worst >= -tol),
        location,
        values,
        detail: format!("min(u - w_tilde) = {:.3e}, min(min(w,1) - u) = {:.3e}", lower.0, upper.0),
    }
}

/// Nodewise `u(t_{j+1}) - u(t_j) >= -tol` and a positive median increment.
pub fn check_monotone_time(sol: &FrontSolution, region: &InteriorRegion, tol: Real) -> CertificateRecord {
    let nodes = region.nodes(sol);
    let (t0, t1) = time_range(sol);
    let start = t0 + region.initial_fraction * (t1 - t0);
    let mut worst = (Real::INFINITY, None);
    let mut late = Vec::new();
    for j in 1..sol.snapshots.len() {
        let (a, b) = (&sol.snapshots[j - 1], &sol.snapshots[j]);
        for i in nodes.clone() {
            let d = b.u[i] - a.u[i];
            if d < worst.0 {
                worst = (d, Some((b.t, sol.grid.x(i))));
            }
            if a.t >= start {
                late.push(d);
            }
        }
    }
    let med = median(&late).unwrap_or(0.0);
    let strict = med > 0.0;
    let mut values = BTreeMap::new();
    values.insert("median_increment".into(), med);
    values.insert("strict".into(), if strict { 1.0 } else { 0.0 });
    CertificateRecord {
        name: "monotone_time".into(),
        region: region.describe(sol, false),
        worst_margin: worst.0,
        tolerance: tol,
        status: status(worst.0 >= -tol && strict),
        location: worst.1,
        values,
        detail: format!("min increment {:.3e}, median increment {:.3e}", worst.0, med),
    }
}

/// `L ⌈log2(h̃⁻¹(1-ε) - h⁻¹(ε))⌉`.
pub fn width_bound(l: Real, eps: Real, transforms: &ProfileTransforms) -> Result<WidthBound> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(FrontError::TransformDomain(format!("epsilon = {eps} must lie in (0, 1/2)")));
    }
    let upper = transforms.h_tilde_inv(1.0 - eps)?;
    let lower = transforms.h_inv(eps)?;
    let gap = upper - lower;
    let stated = l * gap.log2().ceil();
    // Doubling every L: v drops from `upper` to `lower` within (floor(log2 ratio) + 1) L.
    let ratio = l * ((upper / lower).log2().floor() + 1.0);
    Ok(WidthBound {
        epsilon: eps,
        doubling_length: l,
        v_upper: upper,
        v_lower: lower,
        stated,
        ratio_form: ratio,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthBound {
    pub epsilon: Real,
    pub doubling_length: Real,
    /// `h̃⁻¹(1-ε)`.
    pub v_upper: Real,
    /// `h⁻¹(ε)`.
    pub v_lower: Real,
    /// The bound with the difference inside the logarithm.
    pub stated: Real,
    /// The bound obtained from the ratio `h̃⁻¹(1-ε) / h⁻¹(ε)`.
    pub ratio_form: Real,
}

/// Measured `ε`-width against the stated bound at every output time.
pub fn check_width(
    sol: &FrontSolution,
    eps: Real,
    l: Real,
    transforms: &ProfileTransforms,
    region: &InteriorRegion,
    form: WidthForm,
) -> Result<CertificateRecord> {
    let bound = width_bound(l, eps, transforms)?;
    let enforced = match form {
        WidthForm::Stated => bound.stated,
        WidthForm::Ratio => bound.ratio_form,
    };
    let nodes = region.nodes(sol);
    let xs = sol.grid.xs();
    let mut max_width = (Real::NEG_INFINITY, None);
    let mut empty = 0;
    for s in &sol.snapshots {
        let w = front_width(&xs[nodes.clone()], &s.u[nodes.clone()], eps);
        if w.empty {
            empty += 1;
            continue;
        }
        if w.width > max_width.0 {
            max_width = (w.width, Some((s.t, w.left)));
        }
    }
    let margin = enforced - max_width.0;
    let mut values = BTreeMap::new();
    values.insert("max_width".into(), max_width.0);
    values.insert("bound".into(), enforced);
    values.insert("stated_bound".into(), bound.stated);
    values.insert("ratio_bound".into(), bound.ratio_form);
    values.insert("ratio_margin".into(), bound.ratio_form - max_width.0);
    values.insert("v_upper".into(), bound.v_upper);
    values.insert("v_lower".into(), bound.v_lower);
    values.insert("doubling_length".into(), l);
    values.insert("empty_times".into(), empty as Real);
    Ok(CertificateRecord {
        name: "width".into(),
        region: region.describe(sol, false),
        worst_margin: margin,
        tolerance: 0.0,
        status: status(margin >= 0.0 && empty == 0),
        location: max_width.1,
        values,
        detail: format!(
            "max width {:.4} vs {form:?} bound {enforced:.4} (stated {:.4}, ratio form {:.4}), eps = {eps}",
            max_width.0, bound.stated, bound.ratio_form
        ),
    })
}

/// `sup |h''|, |h̃''|` over `(0, v_threshold]`, sampled geometrically down to the smallest
/// sampled `v` of either branch.
pub fn envelope_curvature(transforms: &ProfileTransforms, v_threshold: Real) -> Real {
    let (a, b) = transforms.v_min();
    let hi = v_threshold.ln();
    let lo = a.min(b).ln().min(hi);
    let n = 4000;
    (0..=n)
        .map(|i| {
            let lv = lo + (hi - lo) * i as Real / n as Real;
            transforms
                .h_jet_log(lv)
                .d2
                .abs()
                .max(transforms.h_tilde_jet_log(lv).d2.abs())
        })
        .fold(0.0, Real::max)
}

/// At interior nodes with `v <= v_threshold`: `h̃(v)/v - tol <= u/v <= h(v)/v + tol`, and
/// both envelope ratios within `κ v` of their slopes at 0, which the profile stage
/// certifies to be 1. `h(v) - v` behaves like `v^(1/α)`, so `κ` grows without bound
/// as the sampling reaches 0 when `α > 1/2`.
pub fn check_ratio_limit(
    sol: &FrontSolution,
    transforms: &ProfileTransforms,
    region: &InteriorRegion,
    v_threshold: Real,
    tol: Real,
) -> CertificateRecord {
    let ln_thr = v_threshold.ln();
    let kappa = envelope_curvature(transforms, v_threshold);
    let (h0, ht0) = transforms.slopes_at_zero();
    let mut worst = (Real::INFINITY, None);
    let mut count = 0usize;
    let mut envelope_slope: Real = 0.0;
    for j in region.times_before_tail(sol) {
        let s = &sol.snapshots[j];
        for i in region.nodes(sol) {
            let lv = s.log_v[i];
            if lv > ln_thr {
                continue;
            }
            count += 1;
            let v = lv.exp();
            let ratio = s.u[i] / v;
            let lo = transforms.h_tilde_log(lv) / v;
            let hi = transforms.h_log(lv) / v;
            let m = (ratio - (lo - tol)).min(hi + tol - ratio);
            if m < worst.0 {
                worst = (m, Some((s.t, sol.grid.x(i))));
            }
            envelope_slope = envelope_slope.max((hi - h0).abs().max((lo - ht0).abs()) / v);
        }
    }
    let mut values = BTreeMap::new();
    values.insert("nodes".into(), count as Real);
    values.insert("kappa".into(), kappa);
    // max |ratio - slope at 0| / v over both envelopes; Taylor gives at most kappa / 2.
    values.insert("envelope_slope".into(), envelope_slope);
    values.insert("h_slope_at_zero".into(), h0);
    values.insert("h_tilde_slope_at_zero".into(), ht0);
    if count == 0 {
        return CertificateRecord {
            name: "ratio_limit".into(),
            region: region.describe(sol, true),
            worst_margin: Real::NAN,
            tolerance: tol,
            status: Status::Inconclusive,
            location: None,
            values,
            detail: format!("no interior node with v <= {v_threshold}; enlarge the domain to the right"),
        };
    }
    let envelopes_ok = envelope_slope <= kappa;
    CertificateRecord {
        name: "ratio_limit".into(),
        region: region.describe(sol, true),
        worst_margin: worst.0,
        tolerance: tol,
        status: status(worst.0 >= 0.0 && envelopes_ok),
        location: worst.1,
        values,
        detail: format!(
            "{count} nodes with v <= {v_threshold}; kappa = {kappa:.3e}, envelope slope {envelope_slope:.3e}"
        ),
    }
}

/// Limits `u -> 1` on the left and `u -> 0` on the right, certified through the envelopes
/// at the interior edges, which must bracket the 1/2-level.
pub fn check_front_limits(sol: &FrontSolution, region: &InteriorRegion, tol: Real) -> CertificateRecord {
    let nodes = region.nodes(sol);
    let (il, ir) = (nodes.start, nodes.end - 1);
    let mut worst = (Real::INFINITY, None);
    let mut unbracketed = 0usize;
    for j in region.times_before_tail(sol) {
        let s = &sol.snapshots[j];
        let left = s.u[il] - (1.0 - tol - (1.0 - s.w_tilde[il]));
        let right = tol + s.w_clamped[ir] - s.u[ir];
        if left < worst.0 {
            worst = (left, Some((s.t, sol.grid.x(il))));
        }
        if right < worst.0 {
            worst = (right, Some((s.t, sol.grid.x(ir))));
        }
        if !(s.w_tilde[il] > 0.5 && s.w_clamped[ir] < 0.5) {
            unbracketed += 1;
        }
    }
    let mut values = BTreeMap::new();
    values.insert("unbracketed_times".into(), unbracketed as Real);
    CertificateRecord {
        name: "front_limits".into(),
        region: region.describe(sol, true),
        worst_margin: worst.0,
        tolerance: tol,
        status: status(worst.0 >= 0.0 && unbracketed == 0),
        location: worst.1,
        values,
        detail: if unbracketed > 0 {
            format!("{unbracketed} output times where the envelopes do not place the front inside the interior")
        } else {
            format!("worst squeeze margin {:.3e}", worst.0)
        },
    }
}

/// Which form of the width constant the width certificate enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthForm {
    /// `L ⌈log2(h̃⁻¹(1-ε) - h⁻¹(ε))⌉`.
    #[default]
    Stated,
    /// `L (⌊log2(h̃⁻¹(1-ε) / h⁻¹(ε))⌋ + 1)`, what the doubling argument yields.
    Ratio,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifySettings {
    pub sandwich_tol: Real,
    pub monotone_tol: Real,
    pub width_eps: Real,
    pub width_form: WidthForm,
    pub ratio_threshold: Real,
    pub ratio_tol: Real,
    pub limits_tol: Real,
    pub region: InteriorRegion,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            sandwich_tol: 1e-3,
            monotone_tol: 1e-8,
            width_eps: 0.1,
            width_form: WidthForm::Stated,
            ratio_threshold: 1e-3,
            ratio_tol: 5e-3,
            limits_tol: 1e-3,
            region: InteriorRegion::default(),
        }
    }
}

/// Runs every check once.
pub fn certify(
    sol: &FrontSolution,
    transforms: &ProfileTransforms,
    doubling_length: Real,
    settings: &VerifySettings,
    provenance: Provenance,
) -> Result<CertificateReport> {
    let r = &settings.region;
    Ok(CertificateReport {
        records: vec![
            check_sandwich(sol, r, settings.sandwich_tol),
            check_monotone_time(sol, r, settings.monotone_tol),
            check_width(sol, settings.width_eps, doubling_length, transforms, r, settings.width_form)?,
            check_ratio_limit(sol, transforms, r, settings.ratio_threshold, settings.ratio_tol),
            check_front_limits(sol, r, settings.limits_tol),
        ],
        provenance,
    })
}
