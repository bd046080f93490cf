//! Thomas algorithm for tridiagonal M-matrices.
//!
//! The factorization is stored so that repeated solves with the same matrix (fixed
//! time step) cost one forward and one backward sweep. Every floating point
//! operation in the sweeps either adds two non-negative-weighted terms or scales by a
//! positive constant, so the computed solution is a monotone function of the
//! right-hand side even after rounding: `b <= b'` nodewise implies `x <= x'`
//! nodewise. The PDE scheme relies on this for its exact comparison principle.

use super::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TridiagError {
    #[error("dimension mismatch: diag has {diag} entries, {what} has {got}")]
    Dimension {
        what: &'static str,
        diag: usize,
        got: usize,
    },
    #[error("not an M-matrix at row {row}: {reason}")]
    NotMMatrix { row: usize, reason: &'static str },
    #[error("zero or negative pivot {pivot} at row {row}")]
    Pivot { row: usize, pivot: f64 },
}

/// Tridiagonal matrix in row form `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1]`.
///
/// `sub[0]` and `sup[n-1]` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal<T> {
    pub sub: Vec<T>,
    pub diag: Vec<T>,
    pub sup: Vec<T>,
}

impl<T: Scalar> Tridiagonal<T> {
    pub fn new(sub: Vec<T>, diag: Vec<T>, sup: Vec<T>) -> Result<Self, TridiagError> {
        let n = diag.len();
        if sub.len() != n {
            return Err(TridiagError::Dimension {
                what: "sub",
                diag: n,
                got: sub.len(),
            });
        }
        if sup.len() != n {
            return Err(TridiagError::Dimension {
                what: "sup",
                diag: n,
                got: sup.len(),
            });
        }
        Ok(Self { sub, diag, sup })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Computes `A x`.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.sub[i] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.sup[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Factorizes a matrix with non-positive off-diagonals and positive pivots.
    pub fn factor_monotone(&self) -> Result<MonotoneFactor<T>, TridiagError> {
        let n = self.len();
        let mut lower = vec![T::zero(); n];
        let mut ratio = vec![T::zero(); n];
        let mut inv_pivot = vec![T::zero(); n];
        for i in 0..n {
            let l = if i > 0 { -self.sub[i] } else { T::zero() };
            let u = if i + 1 < n { -self.sup[i] } else { T::zero() };
            if l < T::zero() || u < T::zero() {
                return Err(TridiagError::NotMMatrix {
                    row: i,
                    reason: "positive off-diagonal entry",
                });
            }
            let pivot = if i > 0 {
                self.diag[i] - l * ratio[i - 1]
            } else {
                self.diag[i]
            };
            if !(pivot > T::zero()) {
                return Err(TridiagError::Pivot {
                    row: i,
                    pivot: pivot.to_f64().unwrap_or(f64::NAN),
                });
            }
            lower[i] = l;
            inv_pivot[i] = T::one() / pivot;
            ratio[i] = u * inv_pivot[i];
        }
        Ok(MonotoneFactor {
            lower,
            ratio,
            inv_pivot,
        })
    }
}

/// LU factors of a tridiagonal M-matrix with all coefficients stored non-negative.
#[derive(Debug, Clone)]
pub struct MonotoneFactor<T> {
    lower: Vec<T>,
    ratio: Vec<T>,
    inv_pivot: Vec<T>,
}

impl<T: Scalar> MonotoneFactor<T> {
    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    /// Solves in place; `rhs` is overwritten with the solution.
    pub fn solve_in_place(&self, rhs: &mut [T]) {
        let n = self.len();
        assert_eq!(rhs.len(), n, "right-hand side length");
        if n == 0 {
            return;
        }
        rhs[0] = rhs[0] * self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] + self.lower[i] * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] = rhs[i] + self.ratio[i] * rhs[i + 1];
        }
    }

    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize, r: f64) -> Tridiagonal<f64> {
        Tridiagonal::new(vec![-r; n], vec![1.0 + 2.0 * r; n], vec![-r; n]).unwrap()
    }

    #[test]
    fn solves_against_apply() {
        let a = laplacian(7, 0.8);
        let x: Vec<f64> = (0..7).map(|i| (i as f64 * 0.7).sin()).collect();
        let b = a.apply(&x);
        let sol = a.factor_monotone().unwrap().solve(&b);
        for (s, e) in sol.iter().zip(&x) {
            assert!((s - e).abs() < 1e-14);
        }
    }

    #[test]
    fn generic_over_f32() {
        let a: Tridiagonal<f32> =
            Tridiagonal::new(vec![-1.0; 4], vec![3.0; 4], vec![-1.0; 4]).unwrap();
        let x = a.factor_monotone().unwrap().solve(&[1.0, 1.0, 1.0, 1.0]);
        let back = a.apply(&x);
        for v in back {
            assert!((v - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn rejects_positive_off_diagonal() {
        let a = Tridiagonal::new(vec![0.0, 1.0], vec![2.0, 2.0], vec![-1.0, 0.0]).unwrap();
        assert!(matches!(
            a.factor_monotone(),
            Err(TridiagError::NotMMatrix { row: 1, .. })
        ));
    }

    #[test]
    fn rejects_bad_pivot() {
        let a = Tridiagonal::new(vec![0.0, -2.0], vec![1.0, 1.0], vec![-1.0, 0.0]).unwrap();
        assert!(matches!(a.factor_monotone(), Err(TridiagError::Pivot { row: 1, .. })));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(Tridiagonal::new(vec![0.0], vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn constant_vector_is_fixed_by_row_sum_one() {
        // Rows of I - r*D2 with Dirichlet rows sum to 1, so ones map to ones exactly.
        let n = 401;
        let r = 3.7;
        let mut a = laplacian(n, r);
        a.diag[0] = 1.0;
        a.sup[0] = 0.0;
        a.diag[n - 1] = 1.0;
        a.sub[n - 1] = 0.0;
        let f = a.factor_monotone().unwrap();
        let x = f.solve(&vec![1.0; n]);
        let worst = x.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-13, "{worst}");
    }
}
