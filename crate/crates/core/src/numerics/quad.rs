//! Adaptive Gauss–Kronrod (7/15) quadrature.

use super::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: T,
    pub error_estimate: T,
    pub intervals: usize,
    pub converged: bool,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T) {
    let center = T::half() * (a + b);
    let half = T::half() * (b - a);
    let fc = f(center);
    let mut kron = T::lit(WGK[7]) * fc;
    let mut gauss = T::lit(WG[3]) * fc;
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let fsum = f(center - dx) + f(center + dx);
        kron += T::lit(WGK[j]) * fsum;
        if j % 2 == 1 {
            gauss += T::lit(WG[j / 2]) * fsum;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` by bisecting the interval with the largest error.
pub fn integrate<T: Scalar, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_intervals: usize,
) -> QuadResult<T> {
    let (v, e) = kronrod(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total: T = pieces.iter().fold(T::zero(), |s, p| s + p.2);
        let err: T = pieces.iter().fold(T::zero(), |s, p| s + p.3);
        let target = abs_tol.max(rel_tol * total.abs());
        if err <= target || pieces.len() >= max_intervals {
            return QuadResult {
                value: total,
                error_estimate: err,
                intervals: pieces.len(),
                converged: err <= target,
            };
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(wi, we), (i, p)| {
                if p.3 > we {
                    (i, p.3)
                } else {
                    (wi, we)
                }
            });
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = T::half() * (lo + hi);
        let (v1, e1) = kronrod(&f, lo, mid);
        let (v2, e2) = kronrod(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}
