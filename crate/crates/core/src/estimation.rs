//! Spacing-based plug-in estimators built on the Parzen quantile estimator.
//!
//! An [`OrderedSample`] holds order statistics `Z₍₁₎ < … < Z₍ₙ₎` of a sample
//! from `Q3`, with the convention `Z₍₀₎ = 0`. The quantile estimate is the
//! piecewise-linear interpolant through `(r/n, Z₍ᵣ₎)`, its slope on cell `r`
//! is `n(Z₍ᵣ₎ - Z₍ᵣ₋₁₎)`, and every functional is integrated exactly over that
//! piecewise-constant slope.

use alloc::format;
use alloc::vec::Vec;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::composed::ComposedModel;
use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::igf::AlphaValue;
use crate::math::{ln, powf};

/// Gap enforced between tied order statistics.
pub const TIE_GAP: f64 = 1e-12;

/// Where the order statistics came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSource {
    ModelSampled,
    RawSamplesEmpirical,
    FileSample,
}

/// Sorted sample on `[0, 1]` with strictly increasing values.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedSample {
    z: Vec<f64>,
    source: SampleSource,
    seed: Option<u64>,
}

impl OrderedSample {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// `Z₍₁₎, …, Z₍ₙ₎`.
    pub fn values(&self) -> &[f64] {
        &self.z
    }

    /// `Z₍ᵣ₎` for `r` in `0..=n`, with `Z₍₀₎ = 0`.
    pub fn order_stat(&self, r: usize) -> f64 {
        if r == 0 {
            0.0
        } else {
            self.z[r - 1]
        }
    }

    pub fn source(&self) -> SampleSource {
        self.source
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn with_provenance(mut self, source: SampleSource, seed: Option<u64>) -> Self {
        self.source = source;
        self.seed = seed;
        self
    }

    // n(Z₍ⱼ₎ - Z₍ⱼ₋₁₎), j in 1..=n
    fn cell(&self, j: usize) -> f64 {
        self.len() as f64 * (self.order_stat(j) - self.order_stat(j - 1))
    }

    fn n_f64(&self) -> f64 {
        self.len() as f64
    }

    /// `(t, r)` with `t = nu` and `r = ⌈t⌉`; `t` is snapped to an integer when
    /// it is within rounding of one, so that `u = r/n` lands on the knot.
    fn locate(&self, u: f64) -> (f64, usize) {
        let mut t = self.n_f64() * u;
        let rounded = libm::round(t);
        if (t - rounded).abs() <= 4.0 * f64::EPSILON * t {
            t = rounded;
        }
        (t, libm::ceil(t) as usize)
    }
}

/// Sort `raw` and separate ties.
///
/// Values within `1e-12` outside `[0, 1]` are clamped; tied or nearly tied
/// values are pushed apart to a gap of [`TIE_GAP`], starting from `Z₍₀₎ = 0`.
pub fn order_sample(raw: &[f64]) -> Result<OrderedSample> {
    if raw.len() < 2 {
        return Err(Error::TooSmall {
            needed: 2,
            got: raw.len(),
        });
    }
    let mut z = Vec::with_capacity(raw.len());
    for &v in raw {
        if !(-1e-12..=1.0 + 1e-12).contains(&v) {
            return Err(Error::Domain(format!("sample value {v} is outside [0, 1]")));
        }
        z.push(v.clamp(0.0, 1.0));
    }
    z.sort_by(f64::total_cmp);
    let mut prev = 0.0;
    for v in z.iter_mut() {
        if *v < prev + TIE_GAP {
            *v = prev + TIE_GAP;
        }
        prev = *v;
    }
    if prev > 1.0 {
        let mut next = 1.0 + TIE_GAP;
        for v in z.iter_mut().rev() {
            if *v > next - TIE_GAP {
                *v = next - TIE_GAP;
            }
            next = *v;
        }
    }
    Ok(OrderedSample {
        z,
        source: SampleSource::FileSample,
        seed: None,
    })
}

/// Parzen estimator `Q̂3(u) = n(r/n - u) Z₍ᵣ₋₁₎ + n(u - (r-1)/n) Z₍ᵣ₎`, `r = ⌈nu⌉`.
pub fn parzen_quantile(s: &OrderedSample, u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("probability {u} is outside [0, 1]")));
    }
    let (t, r) = s.locate(u);
    let r = r.max(1);
    if t == r as f64 {
        return Ok(s.order_stat(r));
    }
    Ok((r as f64 - t) * s.order_stat(r - 1) + (t - (r - 1) as f64) * s.order_stat(r))
}

/// Quantile-density estimator `q̂3(u) = n(Z₍ᵣ₎ - Z₍ᵣ₋₁₎)` on `((r-1)/n, r/n]`.
pub fn parzen_q3(s: &OrderedSample, u: f64) -> Result<f64> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::Domain(format!("probability {u} is outside (0, 1]")));
    }
    let (_, r) = s.locate(u);
    Ok(s.cell(r.clamp(1, s.len())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateKind {
    Igf,
    Residual,
    Past,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub alpha: f64,
    pub u: Option<f64>,
    pub estimate: f64,
    pub kind: EstimateKind,
    pub n: usize,
    pub seed: Option<u64>,
    pub source: SampleSource,
}

fn report(s: &OrderedSample, alpha: AlphaValue, u: Option<f64>, kind: EstimateKind, estimate: f64) -> EstimateReport {
    EstimateReport {
        alpha: alpha.get(),
        u,
        estimate,
        kind,
        n: s.len(),
        seed: s.seed,
        source: s.source,
    }
}

// (n(Z₍ⱼ₎ - Z₍ⱼ₋₁₎))^(1-α), refusing zero spacings when α > 1.
fn cell_power(s: &OrderedSample, j: usize, alpha: f64) -> Result<f64> {
    let c = s.cell(j);
    if c <= 0.0 && alpha > 1.0 {
        return Err(Error::ZeroSpacing { index: j });
    }
    Ok(powf(c, 1.0 - alpha))
}

fn full_sum(s: &OrderedSample, alpha: f64, cells: core::ops::Range<usize>) -> Result<f64> {
    let mut sum = 0.0;
    for j in cells {
        sum += cell_power(s, j, alpha)?;
    }
    Ok(sum)
}

fn checked(value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::DivergentIntegral(format!("estimate evaluated to {value}")))
    }
}

/// `Î*(α) = (1/n) Σⱼ [n(Z₍ⱼ₎ - Z₍ⱼ₋₁₎)]^(1-α)`.
pub fn estimate_igf(s: &OrderedSample, alpha: AlphaValue) -> Result<EstimateReport> {
    if alpha.is_one() {
        return Ok(report(s, alpha, None, EstimateKind::Igf, 1.0));
    }
    let v = full_sum(s, alpha.get(), 1..s.len() + 1)? / s.n_f64();
    Ok(report(s, alpha, None, EstimateKind::Igf, checked(v)?))
}

/// `R̂*(α, u)`: the Parzen prefactor times `∫ᵤ¹ q̂3^(1-α)`, where the cell
/// containing `u` contributes only its part above `u`.
pub fn estimate_residual(s: &OrderedSample, alpha: AlphaValue, u: f64) -> Result<EstimateReport> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::Domain(format!("residual age u = {u} must lie in [0, 1)")));
    }
    if alpha.is_one() {
        return Ok(report(s, alpha, Some(u), EstimateKind::Residual, 1.0));
    }
    if u == 0.0 {
        let r = estimate_igf(s, alpha)?;
        return Ok(EstimateReport {
            u: Some(0.0),
            kind: EstimateKind::Residual,
            ..r
        });
    }
    let a = alpha.get();
    let (t, r) = s.locate(u);
    let partial = r as f64 - t;
    let mut sum = if partial > 0.0 {
        partial * cell_power(s, r, a)?
    } else {
        0.0
    };
    sum += full_sum(s, a, r + 1..s.len() + 1)?;
    let q = parzen_quantile(s, u)?;
    let pre = powf(1.0 - q, a - 1.0) / powf(1.0 - u, a);
    Ok(report(
        s,
        alpha,
        Some(u),
        EstimateKind::Residual,
        checked(pre * (sum / s.n_f64()))?,
    ))
}

/// `Ĵ*(α, u)`: the Parzen prefactor times `∫₀ᵘ q̂3^(1-α)`, where the cell
/// containing `u` contributes only its part below `u`.
pub fn estimate_past(s: &OrderedSample, alpha: AlphaValue, u: f64) -> Result<EstimateReport> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::Domain(format!("past age u = {u} must lie in (0, 1]")));
    }
    if alpha.is_one() {
        return Ok(report(s, alpha, Some(u), EstimateKind::Past, 1.0));
    }
    if u == 1.0 {
        let r = estimate_igf(s, alpha)?;
        return Ok(EstimateReport {
            u: Some(1.0),
            kind: EstimateKind::Past,
            ..r
        });
    }
    let a = alpha.get();
    let (t, r) = s.locate(u);
    let mut sum = full_sum(s, a, 1..r)?;
    let partial = t - (r - 1) as f64;
    if partial > 0.0 {
        sum += partial * cell_power(s, r, a)?;
    }
    let q = parzen_quantile(s, u)?;
    let pre = powf(q, a - 1.0) / powf(u, a);
    Ok(report(
        s,
        alpha,
        Some(u),
        EstimateKind::Past,
        checked(pre * (sum / s.n_f64()))?,
    ))
}

/// Plug-in K-L divergence `-(1/n) Σⱼ log[n(Z₍ⱼ₎ - Z₍ⱼ₋₁₎)]`, the α-derivative
/// of `Î*` at `α = 1`.
pub fn estimate_kl(s: &OrderedSample) -> Result<f64> {
    let mut sum = 0.0;
    for j in 1..=s.len() {
        let c = s.cell(j);
        if c <= 0.0 {
            return Err(Error::ZeroSpacing { index: j });
        }
        sum += ln(c);
    }
    Ok(-sum / s.n_f64())
}

/// The first `n` uniforms of the stream used by [`sample_from_q3`].
///
/// The stream is ChaCha8 seeded through `seed_from_u64`, mapped to the open
/// interval `(0, 1)`.
pub fn uniform_stream(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.sample::<f64, _>(Open01)).collect()
}

/// Draw `Zᵢ = Q3(Uᵢ)` by inverse transform and order the result.
pub fn sample_from_q3(m: &ComposedModel, n: usize, seed: u64, cfg: &EvalConfig) -> Result<OrderedSample> {
    if n < 2 {
        return Err(Error::TooSmall { needed: 2, got: n });
    }
    let mut z = uniform_stream(seed, n);
    for v in z.iter_mut() {
        *v = m.quantile(*v, cfg)?;
    }
    Ok(order_sample(&z)?.with_provenance(SampleSource::ModelSampled, Some(seed)))
}

/// `Zᵢ = F̂2(x1ᵢ)` with `F̂2(x) = rank/(n₂+1)`, the rank clamped to
/// `1..=n₂` so that `Z` stays strictly inside `(0, 1)`.
pub fn empirical_q3_sample(x1: &[f64], x2: &[f64]) -> Result<OrderedSample> {
    if x1.len() < 2 {
        return Err(Error::TooSmall {
            needed: 2,
            got: x1.len(),
        });
    }
    if x2.is_empty() {
        return Err(Error::TooSmall { needed: 1, got: 0 });
    }
    if let Some(v) = x1.iter().chain(x2).find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite observation {v}")));
    }
    let mut sorted = x2.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n2 = sorted.len();
    let denom = (n2 + 1) as f64;
    let z: Vec<f64> = x1
        .iter()
        .map(|&x| sorted.partition_point(|&v| v <= x).clamp(1, n2) as f64 / denom)
        .collect();
    Ok(order_sample(&z)?.with_provenance(SampleSource::RawSamplesEmpirical, None))
}
