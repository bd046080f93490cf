//! Extreme eigenvalues of symmetric tridiagonal matrices by Sturm-sequence bisection.

use super::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EigenError {
    #[error("bisection did not reach tolerance after {iterations} iterations (bracket width {width})")]
    IterationLimit { iterations: usize, width: f64 },
    #[error("empty matrix")]
    Empty,
}

/// Number of eigenvalues strictly less than `shift`.
pub fn count_below<T: Scalar>(diag: &[T], off: &[T], shift: T) -> usize {
    let tiny = T::min_positive_value().sqrt();
    let mut count = 0;
    let mut q = diag[0] - shift;
    if q < T::zero() {
        count += 1;
    }
    for i in 1..diag.len() {
        let denom = if q.abs() >= tiny {
            q
        } else if q < T::zero() {
            -tiny
        } else {
            tiny
        };
        q = diag[i] - shift - off[i - 1] * off[i - 1] / denom;
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with `diag` and `off`
/// (`off[i]` couples rows `i` and `i+1`). Returns `(value, iterations)`.
pub fn largest_eigenvalue<T: Scalar>(diag: &[T], off: &[T], tol: T, max_iter: usize) -> Result<(T, usize), EigenError> {
    let n = diag.len();
    if n == 0 {
        return Err(EigenError::Empty);
    }
    assert_eq!(off.len() + 1, n, "off-diagonal length");
    // Gershgorin bracket.
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..n {
        let mut r = T::zero();
        if i > 0 {
            r += off[i - 1].abs();
        }
        if i + 1 < n {
            r += off[i].abs();
        }
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    for it in 0..max_iter {
        let width = hi - lo;
        let scale = lo.abs().max(hi.abs()).max(T::one());
        if width <= tol * scale {
            return Ok((T::half() * (lo + hi), it));
        }
        let mid = T::half() * (lo + hi);
        if mid == lo || mid == hi {
            return Ok((mid, it));
        }
        if count_below(diag, off, mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(EigenError::IterationLimit {
        iterations: max_iter,
        width: (hi - lo).to_f64().unwrap_or(f64::NAN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_laplacian_top_eigenvalue() {
        // -2 on the diagonal, 1 off: eigenvalues -4 sin^2(k pi / (2(n+1))).
        let n = 50;
        let diag = vec![-2.0f64; n];
        let off = vec![1.0f64; n - 1];
        let (top, _) = largest_eigenvalue(&diag, &off, 1e-15, 200).unwrap();
        let exact = -4.0 * (std::f64::consts::PI / (2.0 * (n as f64 + 1.0))).sin().powi(2);
        assert!((top - exact).abs() < 1e-13);
    }

    #[test]
    fn diagonal_matrix() {
        let (top, _) = largest_eigenvalue(&[1.0f64, 3.0, 2.0], &[0.0, 0.0], 1e-14, 200).unwrap();
        assert!((top - 3.0).abs() < 1e-13);
    }

    #[test]
    fn iteration_limit_is_reported() {
        let r = largest_eigenvalue(&[1.0f64, 3.0, 2.0], &[0.5, 0.5], 1e-15, 3);
        assert!(matches!(r, Err(EigenError::IterationLimit { iterations: 3, .. })));
    }
}
