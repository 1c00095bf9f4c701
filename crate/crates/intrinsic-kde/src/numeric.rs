//! Shared numerical routines: gamma function, sphere/ball constants, adaptive
//! Gauss–Kronrod quadrature, inverse normal CDF, modified Bessel function.

use std::f64::consts::PI;

/// Lanczos coefficients (g = 7, n = 9), the standard set circulated via the GSL.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function via the Lanczos approximation, with reflection for x < 0.5.
///
/// Relative accuracy is better than 1e-13 on [0.5, 10], which covers every
/// half-integer argument the sphere-area formulas need.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1-x) = π / sin(πx)
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_P[0];
        for (i, &p) in LANCZOS_P.iter().enumerate().skip(1) {
            acc += p / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// Surface area of the unit sphere S^{d-1} in R^d: 2 π^{d/2} / Γ(d/2).
pub fn sphere_surface_area(d: usize) -> f64 {
    assert!(d >= 1, "dimension must be positive");
    let d = d as f64;
    2.0 * PI.powf(d / 2.0) / gamma(d / 2.0)
}

/// Volume of the unit ball in R^d: π^{d/2} / Γ(d/2 + 1).
pub fn ball_volume(d: usize) -> f64 {
    assert!(d >= 1, "dimension must be positive");
    let d = d as f64;
    PI.powf(d / 2.0) / gamma(d / 2.0 + 1.0)
}

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule,
// positive half of the symmetric rule (node 0 last).
const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One G7-K15 panel on [a, b]: returns (kronrod estimate, |kronrod - gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (j, (&x, &wk)) in KRONROD_NODES.iter().zip(&KRONROD_WEIGHTS).enumerate() {
        let (f1, f2) = if x == 0.0 {
            let fc = f(center);
            (fc, 0.0)
        } else {
            (f(center - half * x), f(center + half * x))
        };
        let fsum = if x == 0.0 { f1 } else { f1 + f2 };
        kronrod += wk * fsum;
        // Odd Kronrod indices are the embedded Gauss nodes.
        if j % 2 == 1 {
            gauss += GAUSS_WEIGHTS[j / 2] * fsum;
        } else if x == 0.0 {
            gauss += GAUSS_WEIGHTS[3] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

/// Adaptive Gauss–Kronrod quadrature of `f` over [a, b] to absolute tolerance `tol`.
///
/// Panels are bisected until the local error estimate fits within the panel's
/// share of the tolerance. Intended for the smooth 1-D radial integrands used
/// by kernel normalization; panics if subdivision runs away.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    assert!(a.is_finite() && b.is_finite() && b >= a);
    let mut total = 0.0;
    let mut stack = vec![(a, b)];
    let mut panels = 0usize;
    while let Some((lo, hi)) = stack.pop() {
        panels += 1;
        assert!(
            panels < 100_000,
            "quadrature failed to converge on [{a}, {b}]"
        );
        let (est, err) = gk15(&f, lo, hi);
        if err <= tol * (hi - lo) / (b - a).max(f64::MIN_POSITIVE) || hi - lo < 1e-14 {
            total += est;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
    }
    total
}

/// Inverse standard normal CDF (Acklam's rational approximation, ~1.15e-9 relative).
///
/// Used to turn stratified uniforms into Gaussian coordinates; panics outside (0, 1).
pub fn inverse_normal_cdf(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "inverse_normal_cdf needs p in (0,1), got {p}");
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_690e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -inverse_normal_cdf(1.0 - p)
    }
}

/// Modified Bessel function of the first kind I_ν(x) by its power series,
/// for ν ≥ 0 and x ≥ 0. Converges fast for the moderate arguments the
/// von Mises–Fisher normalization uses.
pub fn bessel_i(nu: f64, x: f64) -> f64 {
    assert!(nu >= 0.0 && x >= 0.0 && x.is_finite());
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half_x = x / 2.0;
    // term_k = (x/2)^{2k+ν} / (k! Γ(k+ν+1)), accumulated by recurrence.
    let mut term = half_x.powf(nu) / gamma(nu + 1.0);
    let mut sum = term;
    for k in 1..500 {
        term *= half_x * half_x / (k as f64 * (k as f64 + nu));
        sum += term;
        if term < sum.abs() * 1e-16 {
            return sum;
        }
    }
    panic!("bessel_i series did not converge for nu={nu}, x={x}");
}

/// Binomial coefficient C(n, k) as u64; panics on overflow.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

/// The `rank`-th k-subset of {0,..,n-1} in lexicographic order (combinatorial unranking).
pub fn unrank_combination(n: usize, k: usize, mut rank: u64, out: &mut Vec<usize>) {
    debug_assert!(rank < binomial(n, k));
    out.clear();
    let mut next = 0usize;
    let mut remaining = k;
    while remaining > 0 {
        let with_next = binomial(n - next - 1, remaining - 1);
        if rank < with_next {
            out.push(next);
            remaining -= 1;
        } else {
            rank -= with_next;
        }
        next += 1;
    }
}

/// Ordinary least squares of y on x; returns (slope, intercept, slope standard error).
///
/// The slope SE uses the residual variance with n-2 degrees of freedom and is 0
/// for an exact linear relation.
pub fn ols(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert!(x.len() == y.len() && x.len() >= 2);
    let n = x.len() as f64;
    let xbar = x.iter().sum::<f64>() / n;
    let ybar = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - xbar).powi(2)).sum();
    assert!(sxx > 0.0, "degenerate regressor");
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - xbar) * (v - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let se = if x.len() > 2 {
        let rss: f64 = x
            .iter()
            .zip(y)
            .map(|(u, v)| (v - (intercept + slope * u)).powi(2))
            .sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (slope, intercept, se)
}

/// Mean and standard error of the mean.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    assert!(!values.is_empty());
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
