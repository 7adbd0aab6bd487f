//! The distortion `Q3 = Q2⁻¹ ∘ Q1` and its quantile density `q3`.

use alloc::format;
use alloc::string::String;

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::math::{exp, ln_1p, one_minus_pow_one_minus, pow_one_minus, powf};
use crate::quantile::{hazard_from_density, reversed_hazard_from_density, Family, QuantileModel};
use crate::semiparam::UnitDistribution;

/// Closed-form shapes of `Q3`/`q3` recognised by family matching.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    /// `Q3(p) = p`.
    Identity,
    /// Two exponentials, `ratio = λ₁/λ₂`: `Q3(p) = 1 - (1-p)^ratio`.
    ExpPair { ratio: f64 },
    /// Proportional hazards: `Q3(p) = 1 - (1-p)^θ`.
    ProportionalHazards { theta: f64 },
    /// Two Pareto II laws, `ratio = β₂/β₁`: `Q3(p) = 1 - (1-p)^ratio`.
    ParetoIIPair { ratio: f64 },
    /// Govindarajulu against reciprocal exponential: `Q3(p) = exp(-λ / Q1(p))`.
    GovindarajuluRecipExp { scale: f64, shape: f64, lambda: f64 },
    /// Power-Pareto against power: `Q3(p) = (Q1(p)/β₁)^β₂`.
    ///
    /// The power law is bounded by `β₁` while power-Pareto is not, so this is
    /// the formal extension of `Q2⁻¹` beyond `β₁`; `Q3` is unbounded.
    PowerParetoPower {
        scale: f64,
        lambda1: f64,
        lambda2: f64,
        beta1: f64,
        beta2: f64,
    },
    /// Proportional odds on the survival scale: `Q3(p) = 1 - r(1-p) / (1 - (1-r)(1-p))`.
    ProportionalOddsSurvival { r: f64 },
    /// Proportional odds on the distribution scale: `Q3(u) = u / (θ + u(1-θ))`.
    ProportionalOddsCdf { theta: f64 },
    /// Proportional reversed hazards: `Q3(u) = u^c`.
    ReversedProportionalHazards { c: f64 },
    /// Survival-scale transform `F̄2 = G(F̄1)`: `Q3(p) = 1 - G(1-p)`.
    GTransformSurvival(UnitDistribution),
    /// Distribution-scale transform `F2 = G(F1)`: `Q3(p) = G(p)`.
    GTransformCdf(UnitDistribution),
}

impl ClosedForm {
    /// Exponent `c` when the distortion has the proportional-hazards shape
    /// `1 - (1-p)^c`.
    pub(crate) fn ph_exponent(&self) -> Option<f64> {
        match *self {
            ClosedForm::ExpPair { ratio } | ClosedForm::ParetoIIPair { ratio } => Some(ratio),
            ClosedForm::ProportionalHazards { theta } => Some(theta),
            _ => None,
        }
    }

    fn quantile(&self, p: f64) -> Result<f64> {
        Ok(match self {
            ClosedForm::Identity => p,
            ClosedForm::GovindarajuluRecipExp { scale, shape, lambda } => {
                let g = govindarajulu(*scale, *shape, p);
                if g == 0.0 {
                    0.0
                } else {
                    exp(-lambda / g)
                }
            }
            ClosedForm::PowerParetoPower {
                scale,
                lambda1,
                lambda2,
                beta1,
                beta2,
            } => {
                if p == 1.0 {
                    return Err(Error::Domain("Q3(1) is infinite for power-Pareto vs power".into()));
                }
                let q1 = scale * powf(p, *lambda1) * exp(-lambda2 * ln_1p(-p));
                powf(q1 / beta1, *beta2)
            }
            ClosedForm::ProportionalOddsSurvival { r } => {
                let s = 1.0 - p;
                1.0 - r * s / (1.0 - (1.0 - r) * s)
            }
            ClosedForm::ProportionalOddsCdf { theta } => p / (theta + p * (1.0 - theta)),
            ClosedForm::ReversedProportionalHazards { c } => powf(p, *c),
            ClosedForm::GTransformSurvival(g) => 1.0 - g.cdf(1.0 - p),
            ClosedForm::GTransformCdf(g) => g.cdf(p),
            other => {
                let c = other.ph_exponent().expect("proportional-hazards shape");
                one_minus_pow_one_minus(p, c)
            }
        })
    }

    fn density(&self, p: f64) -> f64 {
        match self {
            ClosedForm::Identity => 1.0,
            ClosedForm::GovindarajuluRecipExp { scale, shape, lambda } => {
                let g = govindarajulu(*scale, *shape, p);
                let dg = scale * shape * (shape + 1.0) * powf(p, shape - 1.0) * (1.0 - p);
                exp(-lambda / g) * lambda * dg / (g * g)
            }
            ClosedForm::PowerParetoPower {
                scale,
                lambda1,
                lambda2,
                beta1,
                beta2,
            } => {
                beta2
                    * powf(scale / beta1, *beta2)
                    * powf(p, lambda1 * beta2 - 1.0)
                    * pow_one_minus(p, -lambda2 * beta2 - 1.0)
                    * (lambda1 + p * (lambda2 - lambda1))
            }
            ClosedForm::ProportionalOddsSurvival { r } => {
                let v = 1.0 - (1.0 - r) * (1.0 - p);
                r / (v * v)
            }
            ClosedForm::ProportionalOddsCdf { theta } => {
                let w = theta + p * (1.0 - theta);
                theta / (w * w)
            }
            ClosedForm::ReversedProportionalHazards { c } => c * powf(p, c - 1.0),
            ClosedForm::GTransformSurvival(g) => g.density(1.0 - p),
            ClosedForm::GTransformCdf(g) => g.density(p),
            other => {
                let c = other.ph_exponent().expect("proportional-hazards shape");
                c * pow_one_minus(p, c - 1.0)
            }
        }
    }
}

fn govindarajulu(scale: f64, shape: f64, p: f64) -> f64 {
    scale * powf(p, shape) * ((shape + 1.0) - shape * p)
}

/// A distortion `Q3`, built either from two marginal quantile models or
/// directly from a semiparametric relationship.
#[derive(Debug, Clone, PartialEq)]
pub struct ComposedModel {
    marginals: Option<(QuantileModel, QuantileModel)>,
    closed_form: Option<ClosedForm>,
}

/// Compose `q1` and `q2` with the default [`EvalConfig`].
pub fn compose(q1: QuantileModel, q2: QuantileModel) -> Result<ComposedModel> {
    compose_with(q1, q2, &EvalConfig::default())
}

/// Compose `q1` and `q2`, checking that `Q1(ε)` and `Q1(1-ε)` lie in the
/// support of `Q2`.
///
/// Pairs matching a known closed form get the corresponding tag; everything
/// else is evaluated through `Q2⁻¹(Q1(p))`.
pub fn compose_with(q1: QuantileModel, q2: QuantileModel, cfg: &EvalConfig) -> Result<ComposedModel> {
    cfg.validate()?;
    let closed_form = match (q1.family(), q2.family()) {
        _ if q1 == q2 => Some(ClosedForm::Identity),
        (Family::Exponential { mean: l1 }, Family::Exponential { mean: l2 }) => {
            Some(ClosedForm::ExpPair { ratio: l1 / l2 })
        }
        (Family::ParetoII { beta: b1 }, Family::ParetoII { beta: b2 }) => {
            Some(ClosedForm::ParetoIIPair { ratio: b2 / b1 })
        }
        (Family::Govindarajulu { scale, shape }, Family::ReciprocalExponential { lambda }) => {
            Some(ClosedForm::GovindarajuluRecipExp { scale, shape, lambda })
        }
        (
            Family::PowerPareto {
                scale,
                lambda1,
                lambda2,
            },
            Family::Power {
                scale: beta1,
                shape: beta2,
            },
        ) => {
            return Ok(ComposedModel {
                marginals: Some((q1, q2)),
                closed_form: Some(ClosedForm::PowerParetoPower {
                    scale,
                    lambda1,
                    lambda2,
                    beta1,
                    beta2,
                }),
            })
        }
        _ => None,
    };

    let (p_lo, p_hi) = cfg.unit_limits();
    let (lo2, hi2) = q2.support();
    for p in [p_lo, p_hi] {
        let x = q1.quantile(p)?;
        if x < lo2 || x > hi2 {
            return Err(Error::SupportMismatch(format!(
                "Q1({p}) = {x} is outside [{lo2}, {hi2}] ({} vs {})",
                q1.name(),
                q2.name()
            )));
        }
    }
    Ok(ComposedModel {
        marginals: Some((q1, q2)),
        closed_form,
    })
}

impl ComposedModel {
    /// The identity distortion `Q3(p) = p`.
    pub fn identity() -> Self {
        ComposedModel {
            marginals: None,
            closed_form: Some(ClosedForm::Identity),
        }
    }

    pub(crate) fn from_closed_form(closed_form: ClosedForm) -> Self {
        ComposedModel {
            marginals: None,
            closed_form: Some(closed_form),
        }
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn marginals(&self) -> Option<(&QuantileModel, &QuantileModel)> {
        self.marginals.as_ref().map(|(a, b)| (a, b))
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.closed_form, Some(ClosedForm::Identity))
    }

    /// Human-readable description used in reports.
    pub fn describe(&self) -> String {
        match (&self.marginals, &self.closed_form) {
            (Some((a, b)), _) => format!("{}{:?} vs {}{:?}", a.name(), a.params(), b.name(), b.params()),
            (None, Some(c)) => format!("{c:?}"),
            (None, None) => String::from("unknown"),
        }
    }

    /// `Q3(p)` for `p` in `[0, 1]`.
    pub fn quantile(&self, p: f64, cfg: &EvalConfig) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("probability {p} is outside [0, 1]")));
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        match (&self.closed_form, &self.marginals) {
            (Some(c), _) => c.quantile(p),
            (None, Some((q1, q2))) if p == 1.0 => {
                let top = q1.quantile(1.0).unwrap_or(f64::INFINITY);
                q2.cdf(top.min(q2.support().1), cfg)
            }
            (None, Some((q1, q2))) => q2.cdf(q1.quantile(p)?, cfg),
            (None, None) => unreachable!("composed model without definition"),
        }
    }

    /// `q3(p) = q1(p) f2(Q1(p))` for `p` in `(0, 1)`.
    pub fn quantile_density(&self, p: f64, cfg: &EvalConfig) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!("probability {p} is outside (0, 1)")));
        }
        match &self.closed_form {
            Some(c) => Ok(c.density(p)),
            None => self.quantile_density_numeric(p, cfg),
        }
    }

    /// `q3` through the marginal route `q1(p) / q2(Q2⁻¹(Q1(p)))`, ignoring
    /// any closed form.
    pub fn quantile_density_numeric(&self, p: f64, cfg: &EvalConfig) -> Result<f64> {
        let (q1, q2) = self
            .marginals
            .as_ref()
            .ok_or_else(|| Error::Param("model has no marginal quantile functions".into()))?;
        let x = q1.quantile(p)?;
        Ok(q1.quantile_density(p)? * q2.pdf(x, cfg)?)
    }

    /// `Q3` through `Q2⁻¹(Q1(p))`, ignoring any closed form.
    pub fn quantile_numeric(&self, p: f64, cfg: &EvalConfig) -> Result<f64> {
        let (q1, q2) = self
            .marginals
            .as_ref()
            .ok_or_else(|| Error::Param("model has no marginal quantile functions".into()))?;
        q2.cdf(q1.quantile(p)?, cfg)
    }

    /// Hazard quantile function `H3(p)` of the distortion.
    pub fn hazard_quantile(&self, p: f64, cfg: &EvalConfig) -> Result<f64> {
        hazard_from_density(p, self.quantile_density(p, cfg)?)
    }

    /// Reversed hazard quantile function `H̃3(p)` of the distortion.
    pub fn reversed_hazard_quantile(&self, p: f64, cfg: &EvalConfig) -> Result<f64> {
        reversed_hazard_from_density(p, self.quantile_density(p, cfg)?)
    }
}
