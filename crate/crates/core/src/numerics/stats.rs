use super::Scalar;

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit<T> {
    pub intercept: T,
    pub slope: T,
    pub max_abs_residual: T,
}

/// Returns `None` for fewer than two points or degenerate abscissae.
pub fn fit_line<T: Scalar>(x: &[T], y: &[T]) -> Option<LineFit<T>> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let nf = T::from_usize_lossy(n);
    let mx = x[..n].iter().fold(T::zero(), |s, &v| s + v) / nf;
    let my = y[..n].iter().fold(T::zero(), |s, &v| s + v) / nf;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for i in 0..n {
        let dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    if sxx <= T::zero() {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_abs_residual = (0..n).fold(T::zero(), |m, i| m.max((y[i] - intercept - slope * x[i]).abs()));
    Some(LineFit {
        intercept,
        slope,
        max_abs_residual,
    })
}

/// Median of a slice (NaNs sort last); `None` if empty.
pub fn median<T: Scalar>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Greater));
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        T::half() * (v[n / 2 - 1] + v[n / 2])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [0.0f64, 1.0, 2.0, 3.0];
        let y = [1.0f64, 3.0, 5.0, 7.0];
        let f = fit_line(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14);
        assert!((f.intercept - 1.0).abs() < 1e-14);
        assert!(f.max_abs_residual < 1e-14);
        assert!(fit_line(&[1.0f64, 1.0], &[0.0, 1.0]).is_none());
    }

    #[test]
    fn median_even_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median::<f64>(&[]), None);
    }
}
