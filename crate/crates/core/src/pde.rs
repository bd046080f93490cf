//! Monotone IMEX simulation of `u_t = (A u_x)_x + q u_x + f(x, u)` on a bounded slab.
//!
//! Diffusion (and drift) are implicit through one tridiagonal M-matrix factored once
//! per run; the reaction is an explicit Euler step written so that every rounding
//! step is monotone in `u`. Together with the monotone Thomas sweep this makes the
//! discrete comparison principle hold exactly in floating point.

use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::linearized::EnvelopeFields;
use crate::numerics::optimize::bisect;
use crate::numerics::stats::fit_line;
use crate::numerics::{MonotoneFactor, Tridiagonal};
use crate::reaction::{ReactionKind, ValidatedSpec};
use crate::Real;

/// Values this far outside `[0, 1]` count as significant clamps.
const CLAMP_NOISE: Real = 1e-12;

/// Below this the reaction update is pinned between two bounds that differ by `k u SMALL_U`.
const SMALL_U: Real = 1.0 / 67_108_864.0;

/// Solver output within `ONE_SNAP * ε * max diag` of 1 is snapped to 1. The Thomas sweep
/// reproduces the constant 0 exactly but the constant 1 only up to rounding that grows
/// with `dt / dx²`; snapping upward is a monotone map, so the comparison principle
/// survives and `u = 1` stays a fixed point.
const ONE_SNAP: Real = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x0: Real,
    pub dx: Real,
    pub n: usize,
}

impl Grid {
    /// Uniform grid on `[x_left, x_right]`; `dx` is adjusted to divide the interval.
    pub fn new(x_left: Real, x_right: Real, dx: Real) -> Result<Self> {
        if !(x_right > x_left) || !(dx > 0.0) {
            return Err(FrontError::Config(format!(
                "invalid domain [{x_left}, {x_right}] with dx = {dx}"
            )));
        }
        let cells = ((x_right - x_left) / dx).round().max(2.0) as usize;
        Ok(Self {
            x0: x_left,
            dx: (x_right - x_left) / cells as Real,
            n: cells + 1,
        })
    }

    #[inline]
    pub fn x(&self, i: usize) -> Real {
        self.x0 + i as Real * self.dx
    }

    pub fn xs(&self) -> Vec<Real> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn x_right(&self) -> Real {
        self.x(self.n - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum TimeStep {
    Fixed { dt: Real },
    /// `fraction / Lip_u(f)`.
    Auto { fraction: Real },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub x_left: Real,
    pub x_right: Real,
    pub dx: Real,
    pub t0: Real,
    pub t1: Real,
    pub dt: TimeStep,
    /// Number of evenly spaced output times including both ends.
    pub snapshots: usize,
    /// Multiplies `f`; 0 gives the pure diffusion control run.
    pub reaction_scale: Real,
    /// Fraction of the domain at the right end that the 1/2-level may not enter.
    pub exhaust_margin: Real,
}

/// Per-node explicit reaction update.
#[derive(Debug, Clone, Copy)]
enum NodeReaction {
    /// `f = a u (1 - u)(1 + b u)` with `k = dt a`; every rounding step is monotone in `u`.
    Factored { k: Real, b: Real },
    Generic { x: Real },
}

/// One-step map of the scheme with a fixed `dt`.
#[derive(Debug, Clone)]
pub struct Stepper {
    pub grid: Grid,
    pub dt: Real,
    factor: MonotoneFactor<Real>,
    left_coupling: Real,
    right_coupling: Real,
    nodes: Vec<NodeReaction>,
    scale: Real,
    snap: Real,
    /// Number of nodes where the drift is upwinded.
    pub upwind_nodes: usize,
    pub clamps: usize,
    pub significant_clamps: usize,
    rhs: Vec<Real>,
}

/// `max |f_u|` sampled on the grid nodes, times 1.2.
pub fn lipschitz_estimate(spec: &ValidatedSpec, grid: &Grid) -> Real {
    let mut lip: Real = 0.0;
    for i in 0..grid.n {
        let x = grid.x(i);
        for j in 0..=100 {
            lip = lip.max(spec.f_u(x, j as Real / 100.0).abs());
        }
    }
    1.2 * lip
}

impl Stepper {
    pub fn new(spec: &ValidatedSpec, grid: Grid, dt: Real, reaction_scale: Real) -> Result<Self> {
        if grid.n < 3 {
            return Err(FrontError::Config("grid needs at least one interior node".into()));
        }
        let h = grid.dx;
        let m = grid.n - 2;
        let (mut sub, mut diag, mut sup) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        let div_form = spec.has_divergence_form();
        let face = |xl: Real, xr: Real| -> Real {
            if div_form {
                let (l, r) = (spec.diffusion_at(xl), spec.diffusion_at(xr));
                2.0 * l * r / (l + r)
            } else {
                1.0
            }
        };
        let mut upwind_nodes = 0;
        let (mut left_coupling, mut right_coupling) = (0.0, 0.0);
        for k in 0..m {
            let i = k + 1;
            let x = grid.x(i);
            let a_lo = face(grid.x(i - 1), x);
            let a_hi = face(x, grid.x(i + 1));
            let q = spec.drift_at(x);
            let (lo, hi) = if q.abs() * h / (2.0 * a_lo.min(a_hi)) > 1.0 {
                upwind_nodes += 1;
                if q > 0.0 {
                    (a_lo / (h * h), a_hi / (h * h) + q / h)
                } else {
                    (a_lo / (h * h) - q / h, a_hi / (h * h))
                }
            } else {
                (a_lo / (h * h) - q / (2.0 * h), a_hi / (h * h) + q / (2.0 * h))
            };
            sub[k] = -dt * lo;
            sup[k] = -dt * hi;
            diag[k] = 1.0 + dt * (lo + hi);
            if k == 0 {
                left_coupling = dt * lo;
            }
            if k == m - 1 {
                right_coupling = dt * hi;
            }
        }
        let snap = ONE_SNAP * Real::EPSILON * diag.iter().copied().fold(1.0, Real::max);
        let factor = Tridiagonal::new(sub, diag, sup)?.factor_monotone()?;

        let mut nodes = Vec::with_capacity(grid.n);
        for i in 0..grid.n {
            let x = grid.x(i);
            let k = reaction_scale * dt * spec.a_at(x);
            let node = match spec.kind {
                ReactionKind::Kpp => NodeReaction::Factored { k, b: 0.0 },
                ReactionKind::Cubic { beta } if beta >= 0.0 => NodeReaction::Factored { k, b: beta },
                ReactionKind::ModulatedCubic { beta, wavenumber } if beta >= 0.0 => NodeReaction::Factored {
                    k,
                    b: beta * 0.5 * (1.0 + (wavenumber * x).cos()),
                },
                _ => NodeReaction::Generic { x },
            };
            if let NodeReaction::Factored { k, b } = node {
                if k * (1.0 + b) > 1.0 {
                    return Err(FrontError::Config(format!(
                        "dt = {dt} exceeds the monotonicity bound of the reaction step at x = {x}"
                    )));
                }
            }
            nodes.push(node);
        }
        Ok(Self {
            grid,
            dt,
            factor,
            left_coupling,
            right_coupling,
            nodes,
            scale: reaction_scale,
            snap,
            upwind_nodes,
            clamps: 0,
            significant_clamps: 0,
            rhs: vec![0.0; m],
        })
    }

    #[inline]
    fn react(&mut self, spec: &ValidatedSpec, i: usize, u: Real) -> Real {
        let raw = match self.nodes[i] {
            NodeReaction::Factored { k, b } => {
                // Accurate near 1 but loses u against 1 - u when u is tiny.
                let near_one = 1.0 - (1.0 - u) * (1.0 - k * u * (1.0 + b * u));
                // Monotone bounds of the exact update that stay accurate near 0.
                let below = u.min(SMALL_U) * (1.0 + k * (1.0 - SMALL_U));
                let above = u * (1.0 + k * (1.0 + b * u));
                near_one.max(below).min(above)
            }
            NodeReaction::Generic { x } => u + self.scale * self.dt * spec.f(x, u),
        };
        self.clamp(raw)
    }

    #[inline]
    fn clamp(&mut self, v: Real) -> Real {
        if v < 0.0 || v > 1.0 {
            self.clamps += 1;
            if v < -CLAMP_NOISE || v > 1.0 + CLAMP_NOISE {
                self.significant_clamps += 1;
            }
            v.clamp(0.0, 1.0)
        } else {
            v
        }
    }

    /// Advances `state` by one step; `left`, `right` are the new boundary values.
    pub fn step(&mut self, spec: &ValidatedSpec, state: &mut [Real], left: Real, right: Real) -> Result<()> {
        let n = self.grid.n;
        debug_assert_eq!(state.len(), n);
        let m = n - 2;
        let mut rhs = std::mem::take(&mut self.rhs);
        for k in 0..m {
            rhs[k] = self.react(spec, k + 1, state[k + 1]);
        }
        rhs[0] += self.left_coupling * left;
        rhs[m - 1] += self.right_coupling * right;
        self.factor.solve_in_place(&mut rhs);
        for k in 0..m {
            let v = rhs[k];
            if !v.is_finite() {
                self.rhs = rhs;
                return Err(FrontError::Blowup(format!("non-finite value at x = {}", self.grid.x(k + 1))));
            }
            let v = self.clamp(v);
            state[k + 1] = if v >= 1.0 - self.snap { 1.0 } else { v };
        }
        state[0] = left;
        state[n - 1] = right;
        self.rhs = rhs;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: Real,
    pub u: Vec<Real>,
    pub log_v: Vec<Real>,
    pub w_tilde: Vec<Real>,
    pub w_clamped: Vec<Real>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeMeta {
    pub dx: Real,
    pub dt: Real,
    pub steps: usize,
    pub lipschitz: Real,
    pub clamps: usize,
    pub significant_clamps: usize,
    pub upwind_nodes: usize,
}

#[derive(Debug, Clone)]
pub struct FrontSolution {
    pub grid: Grid,
    pub snapshots: Vec<Snapshot>,
    pub meta: SchemeMeta,
}

impl FrontSolution {
    pub fn times(&self) -> Vec<Real> {
        self.snapshots.iter().map(|s| s.t).collect()
    }
}

/// Envelope samples of one output time on the grid.
pub fn envelope_snapshot(fields: &EnvelopeFields, grid: &Grid, t: Real, u: Vec<Real>) -> Result<Snapshot> {
    let mut log_v = Vec::with_capacity(grid.n);
    let mut w_tilde = Vec::with_capacity(grid.n);
    let mut w_clamped = Vec::with_capacity(grid.n);
    for i in 0..grid.n {
        let s = fields.sample(t, grid.x(i))?;
        log_v.push(s.log_v);
        w_tilde.push(s.w_tilde);
        w_clamped.push(s.w_clamped);
    }
    Ok(Snapshot {
        t,
        u,
        log_v,
        w_tilde,
        w_clamped,
    })
}

/// Time at which the 1/2-level of `w̃` passes `x`.
pub fn level_time(fields: &EnvelopeFields, x: Real) -> Result<Real> {
    let target = fields.transforms.h_tilde_inv_log(0.5)?;
    let g = |t: Real| fields.linear.log_v(t, x).map(|l| l - target);
    let rate = fields.linear.lambda_max().max(1e-6);
    // log v is increasing in t with slope between min and max lambda.
    let mut lo = -g(0.0)? / rate;
    let mut hi = lo;
    let mut tries = 0;
    while g(lo)? > 0.0 {
        lo -= 10.0 / rate + lo.abs();
        tries += 1;
        if tries > 200 {
            return Err(FrontError::FrontAbsent(format!("no time where w̃ = 1/2 at x = {x}")));
        }
    }
    while g(hi)? < 0.0 {
        hi += 10.0 / rate + hi.abs();
        tries += 1;
        if tries > 400 {
            return Err(FrontError::FrontAbsent(format!("no time where w̃ = 1/2 at x = {x}")));
        }
    }
    bisect(|t| g(t).unwrap_or(Real::NAN), lo, hi, 1e-12, 200)
        .ok_or_else(|| FrontError::FrontAbsent(format!("bisection for the 1/2-level time at x = {x} failed")))
}

/// Default window: the 1/2-level of `w̃` at 25% and 75% of the domain.
pub fn default_time_window(fields: &EnvelopeFields, x_left: Real, x_right: Real) -> Result<(Real, Real)> {
    let len = x_right - x_left;
    Ok((
        level_time(fields, x_left + 0.25 * len)?,
        level_time(fields, x_left + 0.75 * len)?,
    ))
}

/// Simulates from `u(t0) = w̃(t0)` with boundary traces `w̃(t, x_L)`, `w̃(t, x_R)`.
pub fn run(spec: &ValidatedSpec, fields: &EnvelopeFields, config: &SimulationConfig) -> Result<FrontSolution> {
    let grid = Grid::new(config.x_left, config.x_right, config.dx)?;
    if config.snapshots < 2 || !(config.t1 > config.t0) {
        return Err(FrontError::Config(format!(
            "need t1 > t0 and at least two snapshots (got [{}, {}], {})",
            config.t0, config.t1, config.snapshots
        )));
    }
    let lip = lipschitz_estimate(spec, &grid) * config.reaction_scale.abs();
    let dt_bound = if lip > 0.0 { 1.0 / lip } else { Real::INFINITY };
    let dt_req = match config.dt {
        TimeStep::Fixed { dt } => {
            if dt > dt_bound {
                return Err(FrontError::Config(format!(
                    "dt = {dt} exceeds the monotonicity bound 1/Lip = {dt_bound}"
                )));
            }
            dt
        }
        TimeStep::Auto { fraction } => fraction.min(1.0) * dt_bound.min(config.t1 - config.t0),
    };
    if !(dt_req > 0.0) {
        return Err(FrontError::Config(format!("time step {dt_req} must be positive")));
    }
    let interval = (config.t1 - config.t0) / (config.snapshots - 1) as Real;
    let per = (interval / dt_req).ceil().max(1.0) as usize;
    let dt = interval / per as Real;
    let mut stepper = Stepper::new(spec, grid, dt, config.reaction_scale)?;

    let mut u: Vec<Real> = (0..grid.n)
        .map(|i| fields.w_tilde(config.t0, grid.x(i)))
        .collect::<Result<_>>()?;
    let mut snapshots = vec![envelope_snapshot(fields, &grid, config.t0, u.clone())?];
    let limit = grid.x_right() - config.exhaust_margin * (grid.x_right() - grid.x0);
    let xs = grid.xs();
    for j in 1..config.snapshots {
        let t_start = config.t0 + (j - 1) as Real * interval;
        for s in 1..=per {
            let t = t_start + s as Real * dt;
            let left = fields.w_tilde(t, grid.x0)?;
            let right = fields.w_tilde(t, grid.x_right())?;
            stepper.step(spec, &mut u, left, right)?;
        }
        let t = config.t0 + j as Real * interval;
        if let Ok(pos) = front_position(&xs, &u, 0.5) {
            if j + 1 < config.snapshots && pos > limit {
                return Err(FrontError::DomainExhausted(format!(
                    "front at x = {pos:.3} enters the right margin (x > {limit:.3}) at t = {t:.4}; enlarge the domain"
                )));
            }
        }
        snapshots.push(envelope_snapshot(fields, &grid, t, u.clone())?);
    }
    Ok(FrontSolution {
        grid,
        snapshots,
        meta: SchemeMeta {
            dx: grid.dx,
            dt,
            steps: per * (config.snapshots - 1),
            lipschitz: lip,
            clamps: stepper.clamps,
            significant_clamps: stepper.significant_clamps,
            upwind_nodes: stepper.upwind_nodes,
        },
    })
}

/// Rightmost linearly interpolated crossing of `level`.
pub fn front_position(x: &[Real], u: &[Real], level: Real) -> Result<Real> {
    let n = x.len().min(u.len());
    for i in (0..n.saturating_sub(1)).rev() {
        let (a, b) = (u[i] - level, u[i + 1] - level);
        if b == 0.0 {
            return Ok(x[i + 1]);
        }
        if a == 0.0 {
            return Ok(x[i]);
        }
        if (a < 0.0) != (b < 0.0) {
            return Ok(x[i] + (x[i + 1] - x[i]) * a / (a - b));
        }
    }
    Err(FrontError::FrontAbsent(format!("u never crosses {level}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthMeasurement {
    pub width: Real,
    pub left: Real,
    pub right: Real,
    /// The set `{ε <= u <= 1-ε}` contains no node.
    pub empty: bool,
}

/// Diameter of `{ε <= u <= 1-ε}` with interpolated end points.
pub fn front_width(x: &[Real], u: &[Real], eps: Real) -> WidthMeasurement {
    let n = x.len().min(u.len());
    let inside = |v: Real| v >= eps && v <= 1.0 - eps;
    let (Some(first), Some(last)) = ((0..n).find(|&i| inside(u[i])), (0..n).rev().find(|&i| inside(u[i]))) else {
        return WidthMeasurement {
            width: 0.0,
            left: Real::NAN,
            right: Real::NAN,
            empty: true,
        };
    };
    // Interpolate to the level crossed between an outside node and its inside neighbour.
    let edge = |inner: usize, outer: usize| -> Real {
        let (ui, uo) = (u[inner], u[outer]);
        let level = if uo < eps { eps } else { 1.0 - eps };
        x[inner] + (x[outer] - x[inner]) * (ui - level) / (ui - uo)
    };
    let left = if first > 0 { edge(first, first - 1) } else { x[first] };
    let right = if last + 1 < n { edge(last, last + 1) } else { x[last] };
    WidthMeasurement {
        width: right - left,
        left,
        right,
        empty: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedEstimate {
    /// Least-squares slope of `X(t)` over the second half of the window.
    pub speed: Real,
    pub first_half: Real,
    pub second_half: Real,
    /// `|second_half - first_half| / |speed|`.
    pub drift: Real,
}

pub fn speed_from_positions(t: &[Real], x: &[Real]) -> Result<SpeedEstimate> {
    let n = t.len().min(x.len());
    if n < 10 {
        return Err(FrontError::FrontAbsent(format!(
            "speed needs at least 10 front positions, got {n}"
        )));
    }
    let mid = n / 2;
    let slope = |a: usize, b: usize| -> Result<Real> {
        fit_line(&t[a..b], &x[a..b])
            .map(|f| f.slope)
            .ok_or_else(|| FrontError::FrontAbsent("degenerate time samples".into()))
    };
    let first_half = slope(0, mid)?;
    let second_half = slope(mid, n)?;
    Ok(SpeedEstimate {
        speed: second_half,
        first_half,
        second_half,
        drift: (second_half - first_half).abs() / second_half.abs(),
    })
}

pub fn speed_estimate(sol: &FrontSolution) -> Result<SpeedEstimate> {
    let xs = sol.grid.xs();
    let mut t = Vec::new();
    let mut x = Vec::new();
    for s in &sol.snapshots {
        x.push(front_position(&xs, &s.u, 0.5)?);
        t.push(s.t);
    }
    speed_from_positions(&t, &x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    pub t: Real,
    pub position: Real,
    pub width: Real,
    /// Centered difference quotient of the position.
    pub speed: Real,
}

pub fn diagnostics(sol: &FrontSolution, eps: Real) -> Vec<DiagnosticRow> {
    let xs = sol.grid.xs();
    let pos: Vec<Real> = sol
        .snapshots
        .iter()
        .map(|s| front_position(&xs, &s.u, 0.5).unwrap_or(Real::NAN))
        .collect();
    let n = pos.len();
    (0..n)
        .map(|j| {
            let (a, b) = (j.saturating_sub(1), (j + 1).min(n - 1));
            let speed = if b > a {
                (pos[b] - pos[a]) / (sol.snapshots[b].t - sol.snapshots[a].t)
            } else {
                Real::NAN
            };
            DiagnosticRow {
                t: sol.snapshots[j].t,
                position: pos[j],
                width: front_width(&xs, &sol.snapshots[j].u, eps).width,
                speed,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reaction::{validate_spec, CoefficientField, ReactionSpec, SampleGrid};

    fn kpp() -> ValidatedSpec {
        let spec = ReactionSpec::kpp(CoefficientField::Constant { value: 1.0 });
        let r = validate_spec(
            &spec,
            &SampleGrid {
                x_min: -10.0,
                x_max: 10.0,
                nx: 21,
                nu: 51,
            },
        )
        .unwrap();
        ValidatedSpec::new(spec, &r).unwrap()
    }

    #[test]
    fn constants_are_fixed_points() {
        let spec = kpp();
        for (dx, dt) in [(0.1, 0.05), (0.005, 1e-3), (0.0025, 0.5f64)] {
            let grid = Grid::new(-60.0, 60.0, dx).unwrap();
            let mut st = Stepper::new(&spec, grid, dt.min(0.5), 1.0).unwrap();
            for c in [0.0, 1.0] {
                let mut u = vec![c; grid.n];
                for _ in 0..20 {
                    st.step(&spec, &mut u, c, c).unwrap();
                }
                let dev = u.iter().map(|&v| (v - c).abs()).fold(0.0, Real::max);
                assert!(dev == 0.0, "u = {c} drifted by {dev:e} at dx = {dx}, dt = {dt}");
            }
            assert_eq!(st.significant_clamps, 0);
        }
        let grid = Grid::new(-5.0, 5.0, 0.1).unwrap();
        let mut heat = Stepper::new(&spec, grid, 0.05, 0.0).unwrap();
        let mut u = vec![0.5; grid.n];
        heat.step(&spec, &mut u, 0.5, 0.5).unwrap();
        assert!(u.iter().all(|&v| (v - 0.5).abs() <= 1e-15));
    }

    #[test]
    fn position_examples() {
        let x: Vec<Real> = (0..=400).map(|i| -5.0 + i as Real * 0.025).collect();
        let u: Vec<Real> = x.iter().map(|&x| (-x / 2f64.sqrt()).exp().min(1.0)).collect();
        let p = front_position(&x, &u, 0.5).unwrap();
        assert!((p - 2f64.sqrt() * 2f64.ln()).abs() < 1e-3);
        let bumps: Vec<Real> = x
            .iter()
            .map(|&x| if (x - 1.0).abs() < 1e-9 || (x - 3.0).abs() < 1e-9 { 0.5 } else if x < 1.0 || (x > 2.0 && x < 3.0) { 1.0 } else { 0.0 })
            .collect();
        assert!((front_position(&x, &bumps, 0.5).unwrap() - 3.0).abs() < 1e-9);
        assert!(matches!(front_position(&x, &vec![0.2; x.len()], 0.5), Err(FrontError::FrontAbsent(_))));
    }

    #[test]
    fn width_examples() {
        let x: Vec<Real> = (0..=2000).map(|i| -5.0 + i as Real * 0.01).collect();
        let u1: Vec<Real> = x.iter().map(|&x| (-x).exp().min(1.0)).collect();
        let w1 = front_width(&x, &u1, 0.1);
        assert!((w1.width - 9f64.ln()).abs() < 1e-3);
        let u2: Vec<Real> = x.iter().map(|&x| (-2.0 * x).exp().min(1.0)).collect();
        assert!((front_width(&x, &u2, 0.1).width - 0.5 * 9f64.ln()).abs() < 1e-3);
        assert!(front_width(&x, &vec![0.0; x.len()], 0.1).empty);
    }

    #[test]
    fn speed_needs_ten_points() {
        assert!(speed_from_positions(&[0.0; 5], &[0.0; 5]).is_err());
        let t: Vec<Real> = (0..20).map(|i| i as Real).collect();
        let x: Vec<Real> = t.iter().map(|t| 2.0 * t + 1.0).collect();
        let s = speed_from_positions(&t, &x).unwrap();
        assert!((s.speed - 2.0).abs() < 1e-12 && s.drift < 1e-12);
    }
}
