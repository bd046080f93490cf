//! Dormand–Prince 5(4) integrator with continuous output.
//!
//! The state is a fixed-size array; the systems solved in this crate are planar.
//! Integration runs forward or backward depending on the sign of `t_end - t0`.
//! Every accepted step is handed to an observer together with its dense-output
//! polynomial, so callers can sample onto their own grids or stop early.

use super::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("maximum number of steps ({max_steps}) exceeded at t = {t}")]
    MaxSteps { max_steps: usize, t: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct Dopri5Options<T> {
    pub rtol: T,
    pub atol: T,
    /// Initial step magnitude; estimated when `None`.
    pub first_step: Option<T>,
    pub max_step: T,
    pub max_steps: usize,
}

impl<T: Scalar> Default for Dopri5Options<T> {
    fn default() -> Self {
        Self {
            rtol: T::lit(1e-10),
            atol: T::lit(1e-12),
            first_step: None,
            max_step: T::infinity(),
            max_steps: 1_000_000,
        }
    }
}

/// Observer verdict after each accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

/// One accepted step with its continuous extension.
#[derive(Debug, Clone)]
pub struct DenseStep<T, const N: usize> {
    pub t0: T,
    pub h: T,
    pub y0: [T; N],
    pub y1: [T; N],
    rcont: [[T; N]; 5],
}

impl<T: Scalar, const N: usize> DenseStep<T, N> {
    pub fn t1(&self) -> T {
        self.t0 + self.h
    }

    /// True when `t` lies in the closed step interval (either direction).
    pub fn contains(&self, t: T) -> bool {
        let (lo, hi) = if self.h >= T::zero() {
            (self.t0, self.t1())
        } else {
            (self.t1(), self.t0)
        };
        t >= lo && t <= hi
    }

    pub fn eval(&self, t: T) -> [T; N] {
        let theta = (t - self.t0) / self.h;
        let s = T::one() - theta;
        let r = &self.rcont;
        let mut y = [T::zero(); N];
        for i in 0..N {
            y[i] = r[0][i] + theta * (r[1][i] + s * (r[2][i] + theta * (r[3][i] + s * r[4][i])));
        }
        y
    }

    /// Time derivative of the continuous extension.
    pub fn eval_derivative(&self, t: T) -> [T; N] {
        let theta = (t - self.t0) / self.h;
        let s = T::one() - theta;
        let r = &self.rcont;
        let mut dy = [T::zero(); N];
        for i in 0..N {
            let q = r[3][i] + s * r[4][i];
            let dq = -r[4][i];
            let m = r[2][i] + theta * q;
            let dm = q + theta * dq;
            let n = r[1][i] + s * m;
            let dn = -m + s * dm;
            dy[i] = (n + theta * dn) / self.h;
        }
        dy
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSummary<T> {
    pub t_final: T,
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
    pub stopped_early: bool,
}

struct Tableau<T> {
    c: [T; 7],
    a: [[T; 6]; 7],
    e: [T; 7],
    d: [T; 7],
}

impl<T: Scalar> Tableau<T> {
    fn new() -> Self {
        let l = T::lit;
        let z = T::zero();
        Self {
            c: [z, l(0.2), l(0.3), l(0.8), l(8.0 / 9.0), T::one(), T::one()],
            a: [
                [z; 6],
                [l(0.2), z, z, z, z, z],
                [l(3.0 / 40.0), l(9.0 / 40.0), z, z, z, z],
                [l(44.0 / 45.0), l(-56.0 / 15.0), l(32.0 / 9.0), z, z, z],
                [
                    l(19372.0 / 6561.0),
                    l(-25360.0 / 2187.0),
                    l(64448.0 / 6561.0),
                    l(-212.0 / 729.0),
                    z,
                    z,
                ],
                [
                    l(9017.0 / 3168.0),
                    l(-355.0 / 33.0),
                    l(46732.0 / 5247.0),
                    l(49.0 / 176.0),
                    l(-5103.0 / 18656.0),
                    z,
                ],
                [
                    l(35.0 / 384.0),
                    z,
                    l(500.0 / 1113.0),
                    l(125.0 / 192.0),
                    l(-2187.0 / 6784.0),
                    l(11.0 / 84.0),
                ],
            ],
            e: [
                l(71.0 / 57600.0),
                z,
                l(-71.0 / 16695.0),
                l(71.0 / 1920.0),
                l(-17253.0 / 339200.0),
                l(22.0 / 525.0),
                l(-1.0 / 40.0),
            ],
            d: [
                l(-12715105075.0 / 11282082432.0),
                z,
                l(87487479700.0 / 32700410799.0),
                l(-10690763975.0 / 1880347072.0),
                l(701980252875.0 / 199316789632.0),
                l(-1453857185.0 / 822651844.0),
                l(69997945.0 / 29380423.0),
            ],
        }
    }
}

fn error_norm<T: Scalar, const N: usize>(
    err: &[T; N],
    y0: &[T; N],
    y1: &[T; N],
    opts: &Dopri5Options<T>,
) -> T {
    let mut acc = T::zero();
    for i in 0..N {
        let sc = opts.atol + opts.rtol * y0[i].abs().max(y1[i].abs());
        let q = err[i] / sc;
        acc += q * q;
    }
    (acc / T::from_usize_lossy(N)).sqrt()
}

/// Integrates `y' = rhs(t, y)` from `t0` towards `t_end`.
///
/// The observer is called after each accepted step and may stop the integration.
pub fn integrate<T, const N: usize, F, O>(
    rhs: F,
    t0: T,
    y0: [T; N],
    t_end: T,
    opts: &Dopri5Options<T>,
    mut observer: O,
) -> Result<OdeSummary<T>, OdeError>
where
    T: Scalar,
    F: Fn(T, &[T; N]) -> [T; N],
    O: FnMut(&DenseStep<T, N>) -> Flow,
{
    let tab = Tableau::<T>::new();
    let dir = if t_end >= t0 { T::one() } else { -T::one() };
    let span = (t_end - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut k = [[T::zero(); N]; 7];
    k[0] = rhs(t, &y);
    let mut evals = 1usize;

    let mut h_abs = match opts.first_step {
        Some(h) => h.abs(),
        None => {
            // Hairer's starting step heuristic, first part only.
            let mut d0 = T::zero();
            let mut d1 = T::zero();
            for i in 0..N {
                let sc = opts.atol + opts.rtol * y[i].abs();
                d0 += (y[i] / sc).powi(2);
                d1 += (k[0][i] / sc).powi(2);
            }
            let d0 = (d0 / T::from_usize_lossy(N)).sqrt();
            let d1 = (d1 / T::from_usize_lossy(N)).sqrt();
            if d0 < T::lit(1e-5) || d1 < T::lit(1e-5) {
                T::lit(1e-6)
            } else {
                T::lit(0.01) * d0 / d1
            }
        }
    };
    h_abs = h_abs.min(opts.max_step).min(span);

    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let safety = T::lit(0.9);
    let fac_min = T::lit(0.2);
    let fac_max = T::lit(10.0);
    let fifth = T::lit(0.2);
    let tiny = T::epsilon() * T::lit(16.0);

    while (t_end - t) * dir > T::zero() {
        if accepted + rejected >= opts.max_steps {
            return Err(OdeError::MaxSteps {
                max_steps: opts.max_steps,
                t: t.to_f64().unwrap_or(f64::NAN),
            });
        }
        let remaining = (t_end - t).abs();
        let mut last = false;
        if h_abs >= remaining {
            h_abs = remaining;
            last = true;
        }
        if h_abs <= tiny * t.abs().max(T::one()) {
            return Err(OdeError::StepUnderflow {
                t: t.to_f64().unwrap_or(f64::NAN),
                h: h_abs.to_f64().unwrap_or(f64::NAN),
            });
        }
        let h = h_abs * dir;

        for s in 1..7 {
            let mut ys = y;
            for (i, yi) in ys.iter_mut().enumerate() {
                let mut acc = T::zero();
                for j in 0..s {
                    acc += tab.a[s][j] * k[j][i];
                }
                *yi += h * acc;
            }
            k[s] = rhs(t + tab.c[s] * h, &ys);
        }
        evals += 6;
        // Stage 7 evaluates at the 5th-order solution (FSAL).
        let mut y1 = y;
        for (i, yi) in y1.iter_mut().enumerate() {
            let mut acc = T::zero();
            for j in 0..6 {
                acc += tab.a[6][j] * k[j][i];
            }
            *yi += h * acc;
        }
        let mut err = [T::zero(); N];
        for (i, ei) in err.iter_mut().enumerate() {
            let mut acc = T::zero();
            for j in 0..7 {
                acc += tab.e[j] * k[j][i];
            }
            *ei = h * acc;
        }
        let finite = y1.iter().all(|v| v.is_finite()) && err.iter().all(|v| v.is_finite());
        let en = if finite {
            error_norm(&err, &y, &y1, opts)
        } else {
            T::infinity()
        };

        if en <= T::one() {
            let mut rcont = [[T::zero(); N]; 5];
            for i in 0..N {
                let ydiff = y1[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                rcont[0][i] = y[i];
                rcont[1][i] = ydiff;
                rcont[2][i] = bspl;
                rcont[3][i] = ydiff - h * k[6][i] - bspl;
                let mut acc = T::zero();
                for j in 0..7 {
                    acc += tab.d[j] * k[j][i];
                }
                rcont[4][i] = h * acc;
            }
            let t_next = if last { t_end } else { t + h };
            let step = DenseStep {
                t0: t,
                h: t_next - t,
                y0: y,
                y1,
                rcont,
            };
            accepted += 1;
            t = t_next;
            y = y1;
            k[0] = k[6];
            let flow = observer(&step);
            if flow == Flow::Stop {
                return Ok(OdeSummary {
                    t_final: t,
                    accepted,
                    rejected,
                    rhs_evals: evals,
                    stopped_early: true,
                });
            }
            let fac = if en == T::zero() {
                fac_max
            } else {
                (safety * en.powf(-fifth)).max(fac_min).min(fac_max)
            };
            h_abs = (h_abs * fac).min(opts.max_step);
        } else {
            if !finite && h_abs <= tiny * t.abs().max(T::one()) * T::lit(1e3) {
                return Err(OdeError::NonFinite {
                    t: t.to_f64().unwrap_or(f64::NAN),
                });
            }
            rejected += 1;
            let fac = if en.is_finite() {
                (safety * en.powf(-fifth)).max(fac_min)
            } else {
                fac_min
            };
            h_abs = h_abs * fac;
        }
    }
    Ok(OdeSummary {
        t_final: t,
        accepted,
        rejected,
        rhs_evals: evals,
        stopped_early: false,
    })
}
