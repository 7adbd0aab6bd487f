//! Distortions given directly by a semiparametric relationship, and
//! generating functions of monotone transformations of both variables.

use alloc::format;
use alloc::vec::Vec;

use crate::composed::{ClosedForm, ComposedModel};
use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::igf::{igf_past, igf_residual, AlphaValue, IgfValue, Method};
use crate::math::{exp, ln, powf};
use crate::quadrature::integrate;
use crate::quantile::QuantileModel;

/// A distribution on `[0, 1]` used as the link `G` of a transformation model.
#[derive(Debug, Clone, PartialEq)]
pub enum UnitDistribution {
    /// `G(x) = x^θ`.
    Power { theta: f64 },
    /// `G(x) = x / (θ + x(1-θ))`.
    OddsKernel { theta: f64 },
    /// Monotone cubic (Fritsch–Carlson) interpolation through user knots.
    Table(MonotoneTable),
}

/// Knots `(x_k, G(x_k))` with `x` running from 0 to 1 and `G` from 0 to 1,
/// plus the shape-preserving Hermite slopes at each knot.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneTable {
    pub fn new(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Param("a G table needs at least two knots".into()));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = knots.iter().copied().unzip();
        let n = xs.len();
        if xs[0] != 0.0 || xs[n - 1] != 1.0 || ys[0] != 0.0 || ys[n - 1] != 1.0 {
            return Err(Error::Param("a G table must run from (0, 0) to (1, 1)".into()));
        }
        for k in 1..n {
            if !(xs[k] > xs[k - 1]) {
                return Err(Error::Param(format!(
                    "G table abscissae must increase strictly at knot {k}"
                )));
            }
            if !(ys[k] >= ys[k - 1]) {
                return Err(Error::Param(format!(
                    "G table values must be nondecreasing at knot {k}"
                )));
            }
        }
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
        let mut slopes = alloc::vec![0.0; n];
        if n == 2 {
            slopes[0] = d[0];
            slopes[1] = d[0];
        } else {
            for k in 1..n - 1 {
                if d[k - 1] > 0.0 && d[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    slopes[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
                }
            }
            slopes[0] = end_slope(h[0], h[1], d[0], d[1]);
            slopes[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
        }
        Ok(MonotoneTable { xs, ys, slopes })
    }

    fn cell(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&v| v <= x);
        k.clamp(1, self.xs.len() - 1) - 1
    }

    fn cdf(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let k = self.cell(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * self.ys[k]
            + (t3 - 2.0 * t2 + t) * h * self.slopes[k]
            + (-2.0 * t3 + 3.0 * t2) * self.ys[k + 1]
            + (t3 - t2) * h * self.slopes[k + 1];
        v.clamp(0.0, 1.0)
    }

    fn density(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let k = self.cell(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let v = (6.0 * t2 - 6.0 * t) * (self.ys[k] - self.ys[k + 1]) / h
            + (3.0 * t2 - 4.0 * t + 1.0) * self.slopes[k]
            + (3.0 * t2 - 2.0 * t) * self.slopes[k + 1];
        v.max(0.0)
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m <= 0.0 || d0 == 0.0 {
        0.0
    } else if d1 == 0.0 && m > 3.0 * d0 {
        3.0 * d0
    } else {
        m
    }
}

impl UnitDistribution {
    pub fn power(theta: f64) -> Result<Self> {
        positive("theta", theta)?;
        Ok(UnitDistribution::Power { theta })
    }

    pub fn odds_kernel(theta: f64) -> Result<Self> {
        positive("theta", theta)?;
        Ok(UnitDistribution::OddsKernel { theta })
    }

    pub fn table(knots: &[(f64, f64)]) -> Result<Self> {
        Ok(UnitDistribution::Table(MonotoneTable::new(knots)?))
    }

    fn validate(&self) -> Result<()> {
        match *self {
            UnitDistribution::Power { theta } | UnitDistribution::OddsKernel { theta } => positive("theta", theta),
            UnitDistribution::Table(_) => Ok(()),
        }
    }

    /// `G(x)` for `x` in `[0, 1]`.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            UnitDistribution::Power { theta } => powf(x, *theta),
            UnitDistribution::OddsKernel { theta } => x / (theta + x * (1.0 - theta)),
            UnitDistribution::Table(t) => t.cdf(x),
        }
    }

    /// `g(x) = G'(x)`.
    pub fn density(&self, x: f64) -> f64 {
        match self {
            UnitDistribution::Power { theta } => theta * powf(x, theta - 1.0),
            UnitDistribution::OddsKernel { theta } => {
                let w = theta + x * (1.0 - theta);
                theta / (w * w)
            }
            UnitDistribution::Table(t) => t.density(x),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Param(format!("{name} must be positive and finite, got {v}")))
    }
}

/// A semiparametric relationship between the two lifetimes.
#[derive(Debug, Clone, PartialEq)]
pub enum DistortionSpec {
    /// `F̄2 = F̄1^θ`.
    ProportionalHazards { theta: f64 },
    /// Proportional odds on the survival scale, `0 < r < 1`.
    ProportionalOddsSurvival { r: f64 },
    /// Proportional odds on the distribution scale.
    ProportionalOddsCdf { theta: f64 },
    /// `F2 = F1^c`.
    ReversedProportionalHazards { c: f64 },
    /// `F̄2 = G(F̄1)`.
    GTransformSurvival(UnitDistribution),
    /// `F2 = G(F1)`.
    GTransformCdf(UnitDistribution),
}

/// Build the distortion implied by `spec`.
pub fn distortion_to_composed(spec: &DistortionSpec) -> Result<ComposedModel> {
    let cf = match spec {
        DistortionSpec::ProportionalHazards { theta } => {
            positive("theta", *theta)?;
            if *theta == 1.0 {
                ClosedForm::Identity
            } else {
                ClosedForm::ProportionalHazards { theta: *theta }
            }
        }
        DistortionSpec::ProportionalOddsSurvival { r } => {
            if !(*r > 0.0 && *r < 1.0) {
                return Err(Error::Param(format!("proportional-odds r must lie in (0, 1), got {r}")));
            }
            ClosedForm::ProportionalOddsSurvival { r: *r }
        }
        DistortionSpec::ProportionalOddsCdf { theta } => {
            positive("theta", *theta)?;
            if *theta == 1.0 {
                ClosedForm::Identity
            } else {
                ClosedForm::ProportionalOddsCdf { theta: *theta }
            }
        }
        DistortionSpec::ReversedProportionalHazards { c } => {
            positive("c", *c)?;
            if *c == 1.0 {
                ClosedForm::Identity
            } else {
                ClosedForm::ReversedProportionalHazards { c: *c }
            }
        }
        DistortionSpec::GTransformSurvival(g) => {
            g.validate()?;
            ClosedForm::GTransformSurvival(g.clone())
        }
        DistortionSpec::GTransformCdf(g) => {
            g.validate()?;
            ClosedForm::GTransformCdf(g.clone())
        }
    };
    Ok(ComposedModel::from_closed_form(cf))
}

/// A continuous, nondecreasing, invertible map of the real line (or a part
/// of it).
pub trait MonotoneMap {
    fn forward(&self, x: f64) -> f64;
    fn inverse(&self, y: f64) -> f64;
}

/// The closed catalog of transforms accepted at the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonotoneTransform {
    Identity,
    /// `log x`, for `x > 0`.
    Log,
    Exp,
    /// `scale · x + shift`, `scale > 0`.
    Affine {
        scale: f64,
        shift: f64,
    },
    /// `x^exponent` on `x ≥ 0`, `exponent > 0`.
    Power {
        exponent: f64,
    },
}

impl MonotoneTransform {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MonotoneTransform::Affine { scale, shift } => {
                positive("affine scale", scale)?;
                if !shift.is_finite() {
                    return Err(Error::Param("affine shift must be finite".into()));
                }
                Ok(())
            }
            MonotoneTransform::Power { exponent } => positive("power exponent", exponent),
            _ => Ok(()),
        }
    }
}

impl MonotoneMap for MonotoneTransform {
    fn forward(&self, x: f64) -> f64 {
        match *self {
            MonotoneTransform::Identity => x,
            MonotoneTransform::Log => ln(x),
            MonotoneTransform::Exp => exp(x),
            MonotoneTransform::Affine { scale, shift } => scale * x + shift,
            MonotoneTransform::Power { exponent } => powf(x, exponent),
        }
    }

    fn inverse(&self, y: f64) -> f64 {
        match *self {
            MonotoneTransform::Identity => y,
            MonotoneTransform::Log => exp(y),
            MonotoneTransform::Exp => ln(y),
            MonotoneTransform::Affine { scale, shift } => (y - shift) / scale,
            MonotoneTransform::Power { exponent } => powf(y, 1.0 / exponent),
        }
    }
}

/// `I*(α)` for the laws of `T1(X1)` and `T2(X2)`:
/// `∫₀¹ [d/dp Q2⁻¹(T2⁻¹(T1(Q1(p))))]^(1-α) dp`.
///
/// The derivative is a central difference with step
/// `min(fd_step, p, 1-p) / 2`.
pub fn transformed_igf<T1, T2>(
    q1: &QuantileModel,
    q2: &QuantileModel,
    t1: &T1,
    t2: &T2,
    alpha: AlphaValue,
    cfg: &EvalConfig,
) -> Result<IgfValue>
where
    T1: MonotoneMap + ?Sized,
    T2: MonotoneMap + ?Sized,
{
    cfg.validate()?;
    let (lo, hi) = cfg.unit_limits();
    let (s_lo, s_hi) = q2.support();
    let inner = |p: f64| -> Result<f64> { Ok(t2.inverse(t1.forward(q1.quantile(p)?))) };
    for p in [lo, hi] {
        let y = inner(p)?;
        if !(y >= s_lo && y <= s_hi) {
            return Err(Error::SupportMismatch(format!(
                "T2⁻¹(T1(Q1({p}))) = {y} is outside [{s_lo}, {s_hi}]"
            )));
        }
    }
    if alpha.is_one() {
        return Ok(IgfValue {
            value: 1.0,
            method: Method::ClosedForm,
            est_abs_error: 0.0,
        });
    }
    let map = |p: f64| -> Result<f64> { q2.cdf(inner(p)?, cfg) };
    let a = alpha.get();
    let q = integrate(
        |p| {
            let h = cfg.fd_step.min(p).min(1.0 - p) / 2.0;
            let d = (map(p + h)? - map(p - h)?) / (2.0 * h);
            if d < 0.0 {
                return Err(Error::Domain(format!("transformed distortion decreases near p = {p}")));
            }
            Ok(powf(d, 1.0 - a))
        },
        lo,
        hi,
        cfg,
    )?;
    Ok(IgfValue {
        value: q.value,
        method: Method::Quadrature,
        est_abs_error: q.abs_error,
    })
}

/// Outcome of a constancy diagnostic over a grid of ages.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstancyReport {
    pub is_constant: bool,
    /// `max |F(u) - F(grid₀)|` over the grid.
    pub max_dev: f64,
    /// `F(grid₀)`.
    pub reference: f64,
    pub values: Vec<(f64, f64)>,
}

fn constancy<F: FnMut(f64) -> Result<f64>>(grid: &[f64], mut f: F) -> Result<ConstancyReport> {
    if grid.is_empty() {
        return Err(Error::Param("constancy grid is empty".into()));
    }
    if let Some(u) = grid.iter().find(|u| !(**u > 0.0 && **u < 1.0)) {
        return Err(Error::Domain(format!("constancy grid point {u} is outside (0, 1)")));
    }
    let mut values = Vec::with_capacity(grid.len());
    for &u in grid {
        values.push((u, f(u)?));
    }
    let reference = values[0].1;
    let max_dev = values.iter().map(|(_, v)| (v - reference).abs()).fold(0.0, f64::max);
    Ok(ConstancyReport {
        is_constant: max_dev <= 1e-6 * reference.abs(),
        max_dev,
        reference,
        values,
    })
}

/// Checks whether `R*(α, u)` is constant over `grid`, as it is for pairs with
/// proportional hazards.
pub fn residual_constancy_check(
    m: &ComposedModel,
    alpha: AlphaValue,
    grid: &[f64],
    cfg: &EvalConfig,
) -> Result<ConstancyReport> {
    constancy(grid, |u| Ok(igf_residual(m, alpha, u, cfg)?.value))
}

/// Checks whether `J*(α, u)` is constant over `grid`, as it is for pairs with
/// proportional reversed hazards.
pub fn past_constancy_check(
    m: &ComposedModel,
    alpha: AlphaValue,
    grid: &[f64],
    cfg: &EvalConfig,
) -> Result<ConstancyReport> {
    constancy(grid, |u| Ok(igf_past(m, alpha, u, cfg)?.value))
}
