//! Piecewise cubic Hermite interpolation with optional shape-preserving limiting.

use super::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InterpError {
    #[error("need at least two nodes, got {0}")]
    TooFewNodes(usize),
    #[error("length mismatch: {0} nodes, {1} values, {2} slopes")]
    Length(usize, usize, usize),
    #[error("nodes not strictly increasing at index {0}")]
    NotIncreasing(usize),
    #[error("data not monotone at interval {0}")]
    NotMonotone(usize),
}

/// Value and first two derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
}

#[derive(Debug, Clone)]
pub struct CubicHermite<T> {
    x: Vec<T>,
    y: Vec<T>,
    dy: Vec<T>,
    /// `(x0, 1/dx)` when the nodes are uniformly spaced.
    uniform: Option<(T, T)>,
}

impl<T: Scalar> CubicHermite<T> {
    /// Interpolant through `(x, y)` with prescribed nodal slopes.
    pub fn new(x: Vec<T>, y: Vec<T>, dy: Vec<T>) -> Result<Self, InterpError> {
        if x.len() != y.len() || x.len() != dy.len() {
            return Err(InterpError::Length(x.len(), y.len(), dy.len()));
        }
        if x.len() < 2 {
            return Err(InterpError::TooFewNodes(x.len()));
        }
        if let Some(i) = (1..x.len()).find(|&i| !(x[i] > x[i - 1])) {
            return Err(InterpError::NotIncreasing(i));
        }
        let n = x.len();
        let dx = (x[n - 1] - x[0]) / T::from_usize_lossy(n - 1);
        let tol = dx * T::lit(1e-9);
        let is_uniform = x
            .iter()
            .enumerate()
            .all(|(i, &xi)| (xi - (x[0] + dx * T::from_usize_lossy(i))).abs() <= tol);
        let uniform = is_uniform.then(|| (x[0], T::one() / dx));
        Ok(Self { x, y, dy, uniform })
    }

    /// Shape-preserving interpolant of monotone data (Fritsch–Carlson slopes).
    pub fn pchip(x: Vec<T>, y: Vec<T>) -> Result<Self, InterpError> {
        if x.len() != y.len() {
            return Err(InterpError::Length(x.len(), y.len(), y.len()));
        }
        if x.len() < 2 {
            return Err(InterpError::TooFewNodes(x.len()));
        }
        let n = x.len();
        let secant: Vec<T> = (0..n - 1)
            .map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k]))
            .collect();
        let mut dy = vec![T::zero(); n];
        dy[0] = secant[0];
        dy[n - 1] = secant[n - 2];
        for k in 1..n - 1 {
            let (a, b) = (secant[k - 1], secant[k]);
            if a * b <= T::zero() {
                dy[k] = T::zero();
            } else {
                // Weighted harmonic mean (Fritsch–Butland).
                let h0 = x[k] - x[k - 1];
                let h1 = x[k + 1] - x[k];
                let w1 = T::two() * h1 + h0;
                let w2 = h1 + T::two() * h0;
                dy[k] = (w1 + w2) / (w1 / a + w2 / b);
            }
        }
        let mut out = Self::new(x, y, dy)?;
        out.limit_monotone()?;
        Ok(out)
    }

    /// Applies the Fritsch–Carlson limiter in place. Returns the number of slopes modified.
    ///
    /// The data must be monotone (non-decreasing or non-increasing) overall.
    pub fn limit_monotone(&mut self) -> Result<usize, InterpError> {
        let n = self.x.len();
        let increasing = self.y[n - 1] >= self.y[0];
        let mut modified = 0;
        let three = T::lit(3.0);
        for k in 0..n - 1 {
            let delta = (self.y[k + 1] - self.y[k]) / (self.x[k + 1] - self.x[k]);
            if (increasing && delta < T::zero()) || (!increasing && delta > T::zero()) {
                return Err(InterpError::NotMonotone(k));
            }
            if delta == T::zero() {
                if self.dy[k] != T::zero() || self.dy[k + 1] != T::zero() {
                    modified += 1;
                }
                self.dy[k] = T::zero();
                self.dy[k + 1] = T::zero();
                continue;
            }
            let mut a = self.dy[k] / delta;
            let mut b = self.dy[k + 1] / delta;
            if a < T::zero() {
                self.dy[k] = T::zero();
                a = T::zero();
                modified += 1;
            }
            if b < T::zero() {
                self.dy[k + 1] = T::zero();
                b = T::zero();
                modified += 1;
            }
            let r2 = a * a + b * b;
            if r2 > three * three {
                let tau = three / r2.sqrt();
                self.dy[k] = tau * a * delta;
                self.dy[k + 1] = tau * b * delta;
                modified += 1;
            }
        }
        Ok(modified)
    }

    pub fn nodes(&self) -> &[T] {
        &self.x
    }

    pub fn values(&self) -> &[T] {
        &self.y
    }

    pub fn slopes(&self) -> &[T] {
        &self.dy
    }

    pub fn domain(&self) -> (T, T) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    fn segment(&self, t: T) -> usize {
        let n = self.x.len();
        if let Some((x0, inv_dx)) = self.uniform {
            let raw = ((t - x0) * inv_dx).floor();
            if raw <= T::zero() {
                return 0;
            }
            let k = raw.to_usize().unwrap_or(n - 2);
            return k.min(n - 2);
        }
        match self
            .x
            .binary_search_by(|p| p.partial_cmp(&t).unwrap_or(std::cmp::Ordering::Less))
        {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Value, slope and curvature; extrapolates with the end cubic outside the nodes.
    pub fn jet(&self, t: T) -> Jet<T> {
        let k = self.segment(t);
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (y0, y1) = (self.y[k], self.y[k + 1]);
        let (m0, m1) = (self.dy[k] * h, self.dy[k + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let two = T::two();
        let three = T::lit(3.0);
        let six = T::lit(6.0);
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = -two * s3 + three * s2;
        let h11 = s3 - s2;
        let value = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
        let d00 = six * s2 - six * s;
        let d10 = three * s2 - T::lit(4.0) * s + T::one();
        let d01 = -six * s2 + six * s;
        let d11 = three * s2 - two * s;
        let d1 = (d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1) / h;
        let e00 = T::lit(12.0) * s - six;
        let e10 = six * s - T::lit(4.0);
        let e01 = -T::lit(12.0) * s + six;
        let e11 = six * s - two;
        let d2 = (e00 * y0 + e10 * m0 + e01 * y1 + e11 * m1) / (h * h);
        Jet { value, d1, d2 }
    }

    pub fn eval(&self, t: T) -> T {
        self.jet(t).value
    }
}
