//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands.

use super::ComplexValue;

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

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: ComplexValue,
    pub error: f64,
    pub evaluations: usize,
}

fn kronrod<F: Fn(f64) -> ComplexValue>(f: &F, a: f64, b: f64) -> (ComplexValue, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kron * half;
    let err = ((kron - gauss) * half).norm();
    (value, err)
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by recursive
/// bisection. Subinterval results are summed in left-to-right order so the
/// result is deterministic.
pub fn integrate<F: Fn(f64) -> ComplexValue>(f: F, a: f64, b: f64, tol: f64) -> QuadResult {
    let mut evaluations = 0;
    let mut value = ComplexValue::new(0.0, 0.0);
    let mut error = 0.0;
    // explicit stack of (a, b, tolerance, depth), processed left first
    let mut stack = vec![(a, b, tol, 0u32)];
    while let Some((lo, hi, tl, depth)) = stack.pop() {
        let (v, e) = kronrod(&f, lo, hi);
        evaluations += 15;
        if e <= tl || depth >= 48 || (hi - lo).abs() < 1e-14 * (1.0 + lo.abs()) {
            value += v;
            error += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, 0.5 * tl, depth + 1));
            stack.push((lo, mid, 0.5 * tl, depth + 1));
        }
    }
    QuadResult {
        value,
        error,
        evaluations,
    }
}
