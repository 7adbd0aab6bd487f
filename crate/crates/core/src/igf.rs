//! Evaluation of `I*`, `R*(u)`, `J*(u)` and the log-moment functionals.
//!
//! Closed forms are used whenever the model carries a recognised
//! [`ClosedForm`]; everything else is adaptive quadrature of `q3^(1-α)` on the
//! clipped interval `[ε, 1 - ε]`.

use alloc::format;

use crate::composed::{ClosedForm, ComposedModel};
use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::math::{exp_m1, ln, ln_1p, one_minus_pow_one_minus, powf};
use crate::quadrature::integrate;

/// Order `α > 0` of the generating function.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AlphaValue(f64);

impl AlphaValue {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha.is_finite() {
            Ok(AlphaValue(alpha))
        } else {
            Err(Error::Param(format!("alpha must be positive and finite, got {alpha}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for AlphaValue {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        AlphaValue::new(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

/// A functional value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IgfValue {
    pub value: f64,
    pub method: Method,
    /// Quadrature error estimate; zero for closed forms.
    pub est_abs_error: f64,
}

impl IgfValue {
    fn exact(value: f64) -> Self {
        IgfValue {
            value,
            method: Method::ClosedForm,
            est_abs_error: 0.0,
        }
    }

    fn closed(value: f64) -> Result<Self> {
        if value.is_finite() && value >= 0.0 {
            Ok(IgfValue::exact(value))
        } else {
            Err(Error::DivergentIntegral(format!("closed form evaluated to {value}")))
        }
    }
}

fn divergent_denominator(what: &str, m: f64) -> Error {
    Error::DivergentIntegral(format!("{what}: closed-form denominator {m} is not positive"))
}

/// `∫ₐᵇ q3(p)^(1-α) dp` by quadrature.
pub(crate) fn power_integral(m: &ComposedModel, alpha: f64, a: f64, b: f64, cfg: &EvalConfig) -> Result<(f64, f64)> {
    let q = integrate(|p| Ok(powf(m.quantile_density(p, cfg)?, 1.0 - alpha)), a, b, cfg)?;
    Ok((q.value, q.abs_error))
}

/// Closed-form proportional-odds residual function, survival scale.
///
/// Valid for `α > 1/2`, where the substitution `v = 1 - (1-r)(1-p)` gives
/// `v₀^(1-α) (1 - v₀^(2α-1)) / ((1-u)(1-r)(2α-1))` with `v₀ = 1 - (1-r)(1-u)`.
pub fn po_survival_residual_closed_form(r: f64, alpha: f64, u: f64) -> Result<f64> {
    if !(alpha > 0.5) {
        return Err(Error::DivergentIntegral(format!(
            "proportional-odds residual closed form requires alpha > 1/2, got {alpha}"
        )));
    }
    if alpha == 1.0 {
        return Ok(1.0);
    }
    let v0 = 1.0 - (1.0 - r) * (1.0 - u);
    let k = 2.0 * alpha - 1.0;
    Ok(powf(v0, 1.0 - alpha) * (1.0 - powf(v0, k)) / ((1.0 - u) * (1.0 - r) * k))
}

/// Closed-form proportional-odds past function, distribution scale.
///
/// Valid for `α > 1/2`: with `w = θ + u(1-θ)`,
/// `J*(u) = (wθ)^(1-α) (w^(2α-1) - θ^(2α-1)) / (u(1-θ)(2α-1))`.
pub fn po_cdf_past_closed_form(theta: f64, alpha: f64, u: f64) -> Result<f64> {
    if !(alpha > 0.5) {
        return Err(Error::DivergentIntegral(format!(
            "proportional-odds past closed form requires alpha > 1/2, got {alpha}"
        )));
    }
    if alpha == 1.0 || theta == 1.0 {
        return Ok(1.0);
    }
    let w = theta + u * (1.0 - theta);
    let k = 2.0 * alpha - 1.0;
    Ok(powf(w * theta, 1.0 - alpha) * (powf(w, k) - powf(theta, k)) / (u * (1.0 - theta) * k))
}

fn closed_igf(cf: &ClosedForm, alpha: f64) -> Option<Result<f64>> {
    match *cf {
        ClosedForm::Identity => Some(Ok(1.0)),
        ClosedForm::ReversedProportionalHazards { c } => Some(ph_full(c, alpha)),
        ClosedForm::ProportionalOddsSurvival { r } if alpha > 0.5 => {
            Some(po_survival_residual_closed_form(r, alpha, 0.0))
        }
        ClosedForm::ProportionalOddsCdf { theta } if alpha > 0.5 => Some(po_cdf_past_closed_form(theta, alpha, 1.0)),
        _ => cf.ph_exponent().map(|c| ph_full(c, alpha)),
    }
}

// c^(1-α) / (α + c(1-α)), the integral of the proportional-hazards shape.
fn ph_full(c: f64, alpha: f64) -> Result<f64> {
    let k = alpha + c * (1.0 - alpha);
    if k <= 0.0 {
        return Err(divergent_denominator("I*", k));
    }
    Ok(powf(c, 1.0 - alpha) / k)
}

/// Relative information generating function `I*(α) = ∫₀¹ q3^(1-α) dp`.
pub fn igf(m: &ComposedModel, alpha: AlphaValue, cfg: &EvalConfig) -> Result<IgfValue> {
    cfg.validate()?;
    let a = alpha.get();
    if alpha.is_one() {
        return Ok(IgfValue::exact(1.0));
    }
    if let Some(v) = m.closed_form().and_then(|cf| closed_igf(cf, a)) {
        return IgfValue::closed(v?);
    }
    igf_quadrature(m, alpha, cfg)
}

/// `I*(α)` by quadrature regardless of any closed form.
pub fn igf_quadrature(m: &ComposedModel, alpha: AlphaValue, cfg: &EvalConfig) -> Result<IgfValue> {
    cfg.validate()?;
    let (lo, hi) = cfg.unit_limits();
    let (value, err) = power_integral(m, alpha.get(), lo, hi, cfg)?;
    Ok(IgfValue {
        value,
        method: Method::Quadrature,
        est_abs_error: err,
    })
}

/// Residual-lifetime function
/// `R*(α, u) = (1 - Q3(u))^(α-1) / (1-u)^α · ∫ᵤ¹ q3^(1-α) dp`, `0 ≤ u < 1`.
pub fn igf_residual(m: &ComposedModel, alpha: AlphaValue, u: f64, cfg: &EvalConfig) -> Result<IgfValue> {
    cfg.validate()?;
    if !(0.0..1.0).contains(&u) {
        return Err(Error::Domain(format!("residual age u = {u} must lie in [0, 1)")));
    }
    let a = alpha.get();
    if alpha.is_one() {
        return Ok(IgfValue::exact(1.0));
    }
    if u == 0.0 {
        return igf(m, alpha, cfg);
    }
    if let Some(cf) = m.closed_form() {
        match *cf {
            ClosedForm::Identity => return Ok(IgfValue::exact(1.0)),
            ClosedForm::ReversedProportionalHazards { c } => {
                // ∫ᵤ¹ c^(1-α) p^(k-1) dp
                let k = a + c * (1.0 - a);
                let tail = if k == 0.0 { -ln(u) } else { -exp_m1(k * ln(u)) / k } * powf(c, 1.0 - a);
                let pre = powf(1.0 - powf(u, c), a - 1.0) / powf(1.0 - u, a);
                return IgfValue::closed(pre * tail);
            }
            ClosedForm::ProportionalOddsSurvival { r } if a > 0.5 => {
                return IgfValue::closed(po_survival_residual_closed_form(r, a, u)?);
            }
            _ => {
                if let Some(c) = cf.ph_exponent() {
                    return IgfValue::closed(
                        ph_full(c, a).map_err(|_| divergent_denominator("R*", a + c * (1.0 - a)))?,
                    );
                }
            }
        }
    }
    igf_residual_quadrature(m, alpha, u, cfg)
}

/// `R*(α, u)` by quadrature regardless of any closed form.
pub fn igf_residual_quadrature(m: &ComposedModel, alpha: AlphaValue, u: f64, cfg: &EvalConfig) -> Result<IgfValue> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::Domain(format!("residual age u = {u} must lie in [0, 1)")));
    }
    let a = alpha.get();
    let (eps, hi) = cfg.unit_limits();
    let lo = u.max(eps);
    if lo >= hi {
        return Err(Error::Domain(format!(
            "u = {u} leaves nothing to integrate below 1 - {eps}"
        )));
    }
    let (integral, err) = power_integral(m, a, lo, hi, cfg)?;
    let q3u = m.quantile(u, cfg)?;
    let pre = powf(1.0 - q3u, a - 1.0) / powf(1.0 - u, a);
    finish(pre, integral, err)
}

fn finish(prefactor: f64, integral: f64, err: f64) -> Result<IgfValue> {
    let value = prefactor * integral;
    if !value.is_finite() {
        return Err(Error::DivergentIntegral(format!(
            "prefactor {prefactor} times integral {integral} is not finite"
        )));
    }
    Ok(IgfValue {
        value,
        method: Method::Quadrature,
        est_abs_error: (prefactor * err).abs(),
    })
}

/// Past-lifetime function
/// `J*(α, u) = Q3(u)^(α-1) / u^α · ∫₀ᵘ q3^(1-α) dp`, `0 < u ≤ 1`.
pub fn igf_past(m: &ComposedModel, alpha: AlphaValue, u: f64, cfg: &EvalConfig) -> Result<IgfValue> {
    cfg.validate()?;
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::Domain(format!("past age u = {u} must lie in (0, 1]")));
    }
    let a = alpha.get();
    if alpha.is_one() {
        return Ok(IgfValue::exact(1.0));
    }
    if u == 1.0 {
        // Q3(1) = 1 for a proper distortion, leaving I* itself
        let top = m.quantile(1.0, cfg)?;
        let full = igf(m, alpha, cfg)?;
        if top == 1.0 {
            return Ok(full);
        }
        let pre = powf(top, a - 1.0);
        return finish(pre, full.value, full.est_abs_error).map(|v| IgfValue {
            method: full.method,
            ..v
        });
    }
    if let Some(cf) = m.closed_form() {
        match *cf {
            ClosedForm::Identity => return Ok(IgfValue::exact(1.0)),
            ClosedForm::ReversedProportionalHazards { c } => {
                return IgfValue::closed(ph_full(c, a).map_err(|_| divergent_denominator("J*", a + c * (1.0 - a)))?);
            }
            ClosedForm::ProportionalOddsCdf { theta } if a > 0.5 => {
                return IgfValue::closed(po_cdf_past_closed_form(theta, a, u)?);
            }
            _ => {
                if let Some(c) = cf.ph_exponent() {
                    // ∫₀ᵘ c^(1-α) (1-p)^(k-1) dp = c^(1-α) (1 - (1-u)^k) / k
                    let k = a + c * (1.0 - a);
                    let integral = if k == 0.0 {
                        -ln_1p(-u)
                    } else {
                        -exp_m1(k * ln_1p(-u)) / k
                    } * powf(c, 1.0 - a);
                    let q3u = one_minus_pow_one_minus(u, c);
                    return IgfValue::closed(powf(q3u, a - 1.0) / powf(u, a) * integral);
                }
            }
        }
    }
    igf_past_quadrature(m, alpha, u, cfg)
}

/// `J*(α, u)` by quadrature regardless of any closed form.
pub fn igf_past_quadrature(m: &ComposedModel, alpha: AlphaValue, u: f64, cfg: &EvalConfig) -> Result<IgfValue> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::Domain(format!("past age u = {u} must lie in (0, 1]")));
    }
    let a = alpha.get();
    let (lo, eps_hi) = cfg.unit_limits();
    let hi = u.min(eps_hi);
    if hi <= lo {
        return Err(Error::Domain(format!("u = {u} leaves nothing to integrate above {lo}")));
    }
    let (integral, err) = power_integral(m, a, lo, hi, cfg)?;
    let q3u = m.quantile(u, cfg)?;
    let pre = powf(q3u, a - 1.0) / powf(u, a);
    finish(pre, integral, err)
}

/// `S_k(q3) = ∫₀¹ (log q3(p))^k dp`, with `S_0 = 1` exactly.
pub fn log_moment(m: &ComposedModel, k: u32, cfg: &EvalConfig) -> Result<f64> {
    cfg.validate()?;
    if k == 0 {
        return Ok(1.0);
    }
    if m.is_identity() {
        return Ok(0.0);
    }
    let (lo, hi) = cfg.unit_limits();
    let q = integrate(
        |p| Ok(libm::pow(ln(m.quantile_density(p, cfg)?), k as f64)),
        lo,
        hi,
        cfg,
    )?;
    Ok(q.value)
}

/// Quantile Kullback–Leibler divergence `-∫₀¹ log q3(p) dp`.
pub fn kl_divergence(m: &ComposedModel, cfg: &EvalConfig) -> Result<f64> {
    Ok(-log_moment(m, 1, cfg)?)
}

/// Generalized divergence `∫₀¹ (-log q3(p))^k dp`, the `k`-th α-derivative
/// of `I*` at `α = 1`.
pub fn generalized_kl(m: &ComposedModel, k: u32, cfg: &EvalConfig) -> Result<f64> {
    if k == 0 {
        return Err(Error::Param("generalized K-L order must be at least 1".into()));
    }
    let s = log_moment(m, k, cfg)?;
    Ok(if k.is_multiple_of(2) { s } else { -s })
}

/// `∂I*/∂α` at `α = 1` by a central difference of step `fd_step`.
///
/// Closed-form models difference two closed-form values; otherwise the
/// difference quotient `-sinh(h log q3) / h` is integrated directly, which
/// keeps the cancellation inside the integrand.
pub fn kl_by_derivative(m: &ComposedModel, cfg: &EvalConfig) -> Result<f64> {
    cfg.validate()?;
    let h = cfg.fd_step;
    if m.is_identity() {
        return Ok(0.0);
    }
    if let Some(cf) = m.closed_form() {
        if let (Some(up), Some(down)) = (closed_igf(cf, 1.0 + h), closed_igf(cf, 1.0 - h)) {
            return Ok((up? - down?) / (2.0 * h));
        }
    }
    let (lo, hi) = cfg.unit_limits();
    let q = integrate(
        |p| {
            let l = ln(m.quantile_density(p, cfg)?);
            Ok(-libm::sinh(h * l) / h)
        },
        lo,
        hi,
        cfg,
    )?;
    Ok(q.value)
}

/// Partial sum `Σ_{k=0}^{K} (1-α)^k / k! · S_k(q3)` of the log-moment series.
pub fn igf_series(m: &ComposedModel, alpha: AlphaValue, terms: u32, cfg: &EvalConfig) -> Result<f64> {
    cfg.validate()?;
    if alpha.is_one() {
        return Ok(1.0);
    }
    let t = 1.0 - alpha.get();
    let mut coeff = 1.0;
    let mut sum = 0.0;
    for k in 0..=terms {
        if k > 0 {
            coeff *= t / k as f64;
        }
        sum += coeff * log_moment(m, k, cfg)?;
    }
    Ok(sum)
}

/// Bounds `L(α) = max(0, (1-α) S_1)` and `U(α) = ∫₀¹ H3(p)^(α-1) dp`.
///
/// `L ≤ I*` holds for every `α`. Since `H3^(α-1) = (1-p)^(1-α) q3^(1-α)`,
/// `I* ≤ U` holds for `α ≥ 1`; for `α < 1` the ordering reverses and `U`
/// is a lower bound.
pub fn igf_bounds(m: &ComposedModel, alpha: AlphaValue, cfg: &EvalConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    let a = alpha.get();
    if alpha.is_one() {
        return Ok((0.0, 1.0));
    }
    let s1 = log_moment(m, 1, cfg).map_err(|e| Error::DivergentIntegral(format!("lower bound: {e}")))?;
    let lower = ((1.0 - a) * s1).max(0.0);
    let (lo, hi) = cfg.unit_limits();
    let upper = integrate(
        |p| Ok(powf((1.0 - p) * m.quantile_density(p, cfg)?, 1.0 - a)),
        lo,
        hi,
        cfg,
    )
    .map_err(|e| Error::DivergentIntegral(format!("upper bound: {e}")))?;
    Ok((lower, upper.value))
}
