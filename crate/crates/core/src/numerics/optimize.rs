//! One-dimensional bracketing: bisection roots and golden-section extrema.

use super::Scalar;

/// Root of a continuous `f` on `[lo, hi]` with `f(lo)` and `f(hi)` of opposite sign.
///
/// Returns `None` when the bracket does not change sign.
pub fn bisect<T: Scalar, F: Fn(T) -> T>(f: F, mut lo: T, mut hi: T, tol: T, max_iter: usize) -> Option<T> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Some(lo);
    }
    if fhi == T::zero() {
        return Some(hi);
    }
    if (flo > T::zero()) == (fhi > T::zero()) {
        return None;
    }
    for _ in 0..max_iter {
        let mid = T::half() * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            return Some(mid);
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Some(mid);
        }
        if (fm > T::zero()) == (flo > T::zero()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(T::half() * (lo + hi))
}

/// Minimizer of a unimodal `f` on `[lo, hi]`; returns `(argmin, min)`.
pub fn golden_min<T: Scalar, F: Fn(T) -> T>(f: F, mut lo: T, mut hi: T, tol: T, max_iter: usize) -> (T, T) {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::half();
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if (hi - lo).abs() <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let (fl, fh) = (f(lo), f(hi));
    [(x1, f1), (x2, f2), (lo, fl), (hi, fh)]
        .into_iter()
        .fold((x1, f1), |best, c| if c.1 < best.1 { c } else { best })
}

/// Maximizer counterpart of [`golden_min`].
pub fn golden_max<T: Scalar, F: Fn(T) -> T>(f: F, lo: T, hi: T, tol: T, max_iter: usize) -> (T, T) {
    let (x, v) = golden_min(|t| -f(t), lo, hi, tol, max_iter);
    (x, -v)
}

/// Grid scan followed by golden refinement in the neighbouring cells.
pub fn scan_then_refine_max<T: Scalar, F: Fn(T) -> T>(f: F, lo: T, hi: T, samples: usize, tol: T) -> (T, T) {
    let n = samples.max(3);
    let step = (hi - lo) / T::from_usize_lossy(n - 1);
    let mut best = (lo, f(lo));
    let mut best_i = 0;
    for i in 1..n {
        let x = if i == n - 1 { hi } else { lo + step * T::from_usize_lossy(i) };
        let v = f(x);
        if v > best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let a = if best_i == 0 { lo } else { lo + step * T::from_usize_lossy(best_i - 1) };
    let b = if best_i + 1 >= n { hi } else { lo + step * T::from_usize_lossy(best_i + 1) };
    let refined = golden_max(&f, a, b, tol, 200);
    if refined.1 > best.1 {
        refined
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-10, 100).is_none());
    }

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, v) = golden_min(|x: f64| (x - 0.3).powi(2) + 1.0, -2.0, 2.0, 1e-10, 200);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn scan_refine_handles_endpoint_max() {
        let (x, v) = scan_then_refine_max(|u: f64| 1.0 + u, 0.0, 1.0, 11, 1e-12);
        assert_eq!(x, 1.0);
        assert_eq!(v, 2.0);
    }
}
