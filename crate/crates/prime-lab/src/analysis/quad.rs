//! Adaptive Gauss-Kronrod quadrature for the budget integral.

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (positive half) with the embedded 7-point Gauss
// rule; standard QUADPACK constants.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// One Gauss-Kronrod 15(7) panel: returns (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut result_gauss = WG[3] * fc;
    let mut result_kronrod = WGK[7] * fc;
    for j in 0..3 {
        let idx = 2 * j + 1;
        let x = half * XGK[idx];
        let fsum = f(center - x) + f(center + x);
        result_gauss += WG[j] * fsum;
        result_kronrod += WGK[idx] * fsum;
    }
    for j in 0..4 {
        let idx = 2 * j;
        let x = half * XGK[idx];
        let fsum = f(center - x) + f(center + x);
        result_kronrod += WGK[idx] * fsum;
    }
    (
        result_kronrod * half,
        ((result_kronrod - result_gauss) * half).abs(),
    )
}

/// Recursive bisection to a per-panel relative tolerance. For positive
/// integrands the per-panel bound gives a global relative bound.
fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    if err <= rel_tol * value.abs() || depth == 0 || (b - a) < 1e-14 * a.abs().max(1.0) {
        return value;
    }
    let mid = 0.5 * (a + b);
    adaptive(f, a, mid, rel_tol, depth - 1) + adaptive(f, mid, b, rel_tol, depth - 1)
}

/// `∫_2^P u^{-2x} / ln(u) du` to better than 1e-8 relative.
pub fn budget_integral_approx(upper: f64, exponent: f64) -> Result<f64> {
    if !(exponent > 0.0) {
        return Err(Error::NonPositiveExponent { exponent });
    }
    if !(upper > 2.0) {
        return Err(Error::IntegralDomain { upper });
    }
    let integrand = move |u: f64| (-2.0 * exponent * u.ln()).exp() / u.ln();
    let value = adaptive(&integrand, 2.0, upper, 1e-10, 48);
    // At the balance exponent the antiderivative is ln(ln(u)); keep the
    // quadrature honest against it.
    if (exponent - 0.5).abs() <= 1e-12 {
        let analytic = log_log_antiderivative(upper);
        debug_assert!(
            (value - analytic).abs() <= 1e-8 * analytic.abs().max(1.0),
            "quadrature {value} drifted from analytic {analytic}"
        );
    }
    Ok(value)
}

/// Closed form of the x = 1/2 budget integral: ln(ln P) − ln(ln 2).
pub fn log_log_antiderivative(upper: f64) -> f64 {
    upper.ln().ln() - 2.0f64.ln().ln()
}
