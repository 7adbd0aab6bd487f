//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol * |I|)` or the subdivision budget runs
//! out. Error estimates follow the QUADPACK `qk15` scaling.

use alloc::format;
use alloc::vec::Vec;

use crate::config::EvalConfig;
use crate::error::{Error, Result};

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
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Value and error estimate of a converged integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<f64> {
        let y = f(x)?;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::DivergentIntegral(format!("integrand is not finite at x = {x}")))
        }
    };

    let fc = eval(center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = (fc * WGK[7]).abs();
    let mut f1 = [0.0; 7];
    let mut f2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let lo = eval(center - dx)?;
        let hi = eval(center + dx)?;
        f1[j] = lo;
        f2[j] = hi;
        res_k += WGK[j] * (lo + hi);
        res_abs += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (lo + hi);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }

    let scale = half.abs();
    let value = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        let ratio = 200.0 * error / res_asc;
        error = res_asc * if ratio < 1.0 { ratio * libm::sqrt(ratio) } else { 1.0 };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment { a, b, value, error })
}

/// Integrate `f` over `[a, b]` with the tolerances and budget in `cfg`.
///
/// Evaluation errors from `f` are propagated unchanged; a non-finite
/// integrand value or an exhausted subdivision budget yields
/// [`Error::DivergentIntegral`].
pub fn integrate<F>(mut f: F, a: f64, b: f64, cfg: &EvalConfig) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("integration limits [{a}, {b}] must be finite")));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            abs_error: 0.0,
            intervals: 0,
        });
    }
    if a > b {
        let q = integrate(f, b, a, cfg)?;
        return Ok(Quadrature { value: -q.value, ..q });
    }

    let mut segments: Vec<Segment> = Vec::with_capacity(cfg.max_subdivisions + 1);
    segments.push(kronrod15(&mut f, a, b)?);

    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let target = cfg.quad_abs_tol.max(cfg.quad_rel_tol * total.abs());
        if error <= target {
            return Ok(Quadrature {
                value: total,
                abs_error: error,
                intervals: segments.len(),
            });
        }
        if segments.len() >= cfg.max_subdivisions {
            return Err(Error::DivergentIntegral(format!(
                "no convergence on [{a}, {b}] after {} subdivisions (value ~ {total}, error ~ {error})",
                segments.len()
            )));
        }

        let (worst, _) =
            segments.iter().enumerate().fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, s)| if s.error > acc.1 { (i, s.error) } else { acc },
            );
        let seg = segments[worst];
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval is at the resolution of f64; nothing left to refine.
            return Ok(Quadrature {
                value: total,
                abs_error: error,
                intervals: segments.len(),
            });
        }
        let left = kronrod15(&mut f, seg.a, mid)?;
        let right = kronrod15(&mut f, mid, seg.b)?;
        segments[worst] = left;
        segments.push(right);
    }
}
