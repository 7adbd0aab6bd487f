//! Parametric quantile-function families.
//!
//! Each family is given by its quantile function `Q(p)` together with the
//! quantile density `q(p) = Q'(p)`; the distribution function is recovered by
//! inverting `Q`, in closed form where one exists and by bisection otherwise.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::math::{exp, exp_m1, ln, ln_1p, powf};
use crate::roots::bisect_increasing;

/// The supported quantile families and their parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `Q(p) = -λ log(1 - p)`, mean `λ`.
    Exponential { mean: f64 },
    /// `Q(p) = (1 - p)^(-γ)`.
    ParetoI { gamma: f64 },
    /// `Q(p) = (1 - p)^(-1/β) - 1`.
    ParetoII { beta: f64 },
    /// `Q(p) = β₁ p^(1/β₂)`.
    Power { scale: f64, shape: f64 },
    /// `Q(p) = c p^λ₁ (1 - p)^(-λ₂)`.
    PowerPareto { scale: f64, lambda1: f64, lambda2: f64 },
    /// `Q(p) = σ((β + 1) p^β - β p^(β+1))`; `σ = β = 1` gives `2p - p²`.
    Govindarajulu { scale: f64, shape: f64 },
    /// `Q(p) = log((a + bp) / (a(1 - p))) / (a + b)`, hazard quantile `a + bp`.
    LinearHazardQuantile { a: f64, b: f64 },
    /// `Q(p) = -λ / log p`.
    ReciprocalExponential { lambda: f64 },
}

/// A validated member of one of the [`Family`] variants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileModel {
    family: Family,
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Param(format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_open_unit(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("probability {p} is outside (0, 1)")))
    }
}

impl QuantileModel {
    pub fn new(family: Family) -> Result<Self> {
        match family {
            Family::Exponential { mean } => require_positive("lambda", mean)?,
            Family::ParetoI { gamma } => require_positive("gamma", gamma)?,
            Family::ParetoII { beta } => require_positive("beta", beta)?,
            Family::Power { scale, shape } => {
                require_positive("beta1", scale)?;
                require_positive("beta2", shape)?;
            }
            Family::PowerPareto {
                scale,
                lambda1,
                lambda2,
            } => {
                require_positive("c", scale)?;
                require_positive("lambda1", lambda1)?;
                require_positive("lambda2", lambda2)?;
            }
            Family::Govindarajulu { scale, shape } => {
                require_positive("sigma", scale)?;
                require_positive("beta", shape)?;
            }
            Family::LinearHazardQuantile { a, b } => {
                require_positive("a", a)?;
                if !(b.is_finite() && a + b > 0.0) {
                    return Err(Error::Param(format!("a + b must be positive, got a = {a}, b = {b}")));
                }
            }
            Family::ReciprocalExponential { lambda } => require_positive("lambda", lambda)?,
        }
        let model = QuantileModel { family };
        // Reject anything whose quantile density turns negative on a grid.
        for i in 1..100 {
            let p = i as f64 / 100.0;
            let q = model.quantile_density(p)?;
            if !(q >= 0.0) {
                return Err(Error::Param(format!(
                    "quantile density is {q} at p = {p}; Q must be nondecreasing"
                )));
            }
        }
        Ok(model)
    }

    pub fn exponential(mean: f64) -> Result<Self> {
        Self::new(Family::Exponential { mean })
    }

    pub fn pareto_i(gamma: f64) -> Result<Self> {
        Self::new(Family::ParetoI { gamma })
    }

    pub fn pareto_ii(beta: f64) -> Result<Self> {
        Self::new(Family::ParetoII { beta })
    }

    pub fn power(scale: f64, shape: f64) -> Result<Self> {
        Self::new(Family::Power { scale, shape })
    }

    pub fn power_pareto(scale: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        Self::new(Family::PowerPareto {
            scale,
            lambda1,
            lambda2,
        })
    }

    pub fn govindarajulu(scale: f64, shape: f64) -> Result<Self> {
        Self::new(Family::Govindarajulu { scale, shape })
    }

    pub fn linear_hazard_quantile(a: f64, b: f64) -> Result<Self> {
        Self::new(Family::LinearHazardQuantile { a, b })
    }

    pub fn reciprocal_exponential(lambda: f64) -> Result<Self> {
        Self::new(Family::ReciprocalExponential { lambda })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Short family name, as used by the command-line model grammar.
    pub fn name(&self) -> &'static str {
        match self.family {
            Family::Exponential { .. } => "exp",
            Family::ParetoI { .. } => "pareto1",
            Family::ParetoII { .. } => "pareto2",
            Family::Power { .. } => "power",
            Family::PowerPareto { .. } => "powerpareto",
            Family::Govindarajulu { .. } => "gov",
            Family::LinearHazardQuantile { .. } => "lhq",
            Family::ReciprocalExponential { .. } => "recipexp",
        }
    }

    /// Parameters in the documented order of the family.
    pub fn params(&self) -> Vec<f64> {
        match self.family {
            Family::Exponential { mean } => vec![mean],
            Family::ParetoI { gamma } => vec![gamma],
            Family::ParetoII { beta } => vec![beta],
            Family::Power { scale, shape } => vec![scale, shape],
            Family::PowerPareto {
                scale,
                lambda1,
                lambda2,
            } => vec![scale, lambda1, lambda2],
            Family::Govindarajulu { scale, shape } => vec![scale, shape],
            Family::LinearHazardQuantile { a, b } => vec![a, b],
            Family::ReciprocalExponential { lambda } => vec![lambda],
        }
    }

    /// Closure of the support, `[Q(0), Q(1)]`; the upper end may be infinite.
    pub fn support(&self) -> (f64, f64) {
        match self.family {
            Family::ParetoI { .. } => (1.0, f64::INFINITY),
            Family::Power { scale, .. } => (0.0, scale),
            Family::Govindarajulu { scale, .. } => (0.0, scale),
            _ => (0.0, f64::INFINITY),
        }
    }

    /// `Q(p)`. The endpoints 0 and 1 are accepted when the limit is finite.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("probability {p} is outside [0, 1]")));
        }
        if p == 0.0 || p == 1.0 {
            let (lo, hi) = self.support();
            let v = if p == 0.0 { lo } else { hi };
            return if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Domain(format!(
                    "Q({p}) is infinite for the {} family",
                    self.name()
                )))
            };
        }
        Ok(self.quantile_unchecked(p))
    }

    fn quantile_unchecked(&self, p: f64) -> f64 {
        match self.family {
            Family::Exponential { mean } => -mean * ln_1p(-p),
            Family::ParetoI { gamma } => exp(-gamma * ln_1p(-p)),
            Family::ParetoII { beta } => exp_m1(-ln_1p(-p) / beta),
            Family::Power { scale, shape } => scale * powf(p, 1.0 / shape),
            Family::PowerPareto {
                scale,
                lambda1,
                lambda2,
            } => scale * powf(p, lambda1) * exp(-lambda2 * ln_1p(-p)),
            Family::Govindarajulu { scale, shape } => scale * powf(p, shape) * ((shape + 1.0) - shape * p),
            Family::LinearHazardQuantile { a, b } => (ln(a + b * p) - ln(a) - ln_1p(-p)) / (a + b),
            Family::ReciprocalExponential { lambda } => -lambda / ln(p),
        }
    }

    /// Quantile density `q(p) = dQ/dp` on the open unit interval.
    pub fn quantile_density(&self, p: f64) -> Result<f64> {
        check_open_unit(p)?;
        Ok(match self.family {
            Family::Exponential { mean } => mean / (1.0 - p),
            Family::ParetoI { gamma } => gamma * exp(-(gamma + 1.0) * ln_1p(-p)),
            Family::ParetoII { beta } => exp(-(1.0 / beta + 1.0) * ln_1p(-p)) / beta,
            Family::Power { scale, shape } => scale / shape * powf(p, 1.0 / shape - 1.0),
            Family::PowerPareto { lambda1, lambda2, .. } => {
                self.quantile_unchecked(p) * (lambda1 / p + lambda2 / (1.0 - p))
            }
            Family::Govindarajulu { scale, shape } => scale * shape * (shape + 1.0) * powf(p, shape - 1.0) * (1.0 - p),
            Family::LinearHazardQuantile { a, b } => 1.0 / ((a + b * p) * (1.0 - p)),
            Family::ReciprocalExponential { lambda } => {
                let l = ln(p);
                lambda / (p * l * l)
            }
        })
    }

    /// Distribution function `F(x) = Q⁻¹(x)`.
    ///
    /// Closed-form inverses are used for every family except power-Pareto and
    /// Govindarajulu, which are bisected on `[ε, 1 - ε]`.
    pub fn cdf(&self, x: f64, cfg: &EvalConfig) -> Result<f64> {
        let (lo, hi) = self.support();
        if x.is_nan() || x < lo || x > hi {
            return Err(Error::Domain(format!(
                "{x} is outside the support [{lo}, {hi}] of the {} family",
                self.name()
            )));
        }
        if x == lo {
            return Ok(0.0);
        }
        if x == hi {
            return Ok(1.0);
        }
        Ok(match self.family {
            Family::Exponential { mean } => -exp_m1(-x / mean),
            Family::ParetoI { gamma } => -exp_m1(-ln(x) / gamma),
            Family::ParetoII { beta } => -exp_m1(-beta * ln_1p(x)),
            Family::Power { scale, shape } => powf(x / scale, shape),
            Family::LinearHazardQuantile { a, b } => {
                let e = exp((a + b) * x);
                a * exp_m1((a + b) * x) / (b + a * e)
            }
            Family::ReciprocalExponential { lambda } => exp(-lambda / x),
            Family::PowerPareto { .. } | Family::Govindarajulu { .. } => {
                let (p_lo, p_hi) = cfg.unit_limits();
                let (x_lo, x_hi) = (self.quantile_unchecked(p_lo), self.quantile_unchecked(p_hi));
                if x < x_lo || x > x_hi {
                    return Err(Error::Domain(format!(
                        "{x} lies outside [Q({p_lo}), Q({p_hi})] = [{x_lo}, {x_hi}]"
                    )));
                }
                bisect_increasing(
                    |p| Ok(self.quantile_unchecked(p)),
                    x,
                    p_lo,
                    p_hi,
                    cfg.root_tol,
                    cfg.max_subdivisions,
                )?
            }
        })
    }

    /// Probability density `f(x) = 1 / q(F(x))`, in closed form where available.
    pub fn pdf(&self, x: f64, cfg: &EvalConfig) -> Result<f64> {
        let (lo, hi) = self.support();
        if x.is_nan() || x < lo || x > hi {
            return Err(Error::Domain(format!("{x} is outside the support [{lo}, {hi}]")));
        }
        Ok(match self.family {
            Family::Exponential { mean } => exp(-x / mean) / mean,
            Family::ParetoI { gamma } => powf(x, -1.0 / gamma - 1.0) / gamma,
            Family::ParetoII { beta } => beta * exp(-(beta + 1.0) * ln_1p(x)),
            Family::Power { scale, shape } => shape / scale * powf(x / scale, shape - 1.0),
            Family::ReciprocalExponential { lambda } => {
                if x == 0.0 {
                    0.0
                } else {
                    lambda / (x * x) * exp(-lambda / x)
                }
            }
            Family::LinearHazardQuantile { a, b } => {
                let p = self.cdf(x, cfg)?;
                (a + b * p) * (1.0 - p)
            }
            Family::PowerPareto { .. } | Family::Govindarajulu { .. } => {
                let p = self.cdf(x, cfg)?;
                1.0 / self.quantile_density(p)?
            }
        })
    }

    /// Hazard quantile function `H(p) = 1 / ((1 - p) q(p))`.
    pub fn hazard_quantile(&self, p: f64) -> Result<f64> {
        hazard_from_density(p, self.quantile_density(p)?)
    }

    /// Reversed hazard quantile function `H̃(p) = 1 / (p q(p))`.
    pub fn reversed_hazard_quantile(&self, p: f64) -> Result<f64> {
        reversed_hazard_from_density(p, self.quantile_density(p)?)
    }
}

pub(crate) fn hazard_from_density(p: f64, q: f64) -> Result<f64> {
    check_open_unit(p)?;
    if q == 0.0 {
        return Err(Error::DegenerateDensity(p));
    }
    Ok(1.0 / ((1.0 - p) * q))
}

pub(crate) fn reversed_hazard_from_density(p: f64, q: f64) -> Result<f64> {
    check_open_unit(p)?;
    if q == 0.0 {
        return Err(Error::DegenerateDensity(p));
    }
    Ok(1.0 / (p * q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn all_models() -> Vec<QuantileModel> {
        vec![
            QuantileModel::exponential(2.0).unwrap(),
            QuantileModel::pareto_i(1.5).unwrap(),
            QuantileModel::pareto_ii(2.0).unwrap(),
            QuantileModel::power(74.13, 1.0 / 0.17).unwrap(),
            QuantileModel::power_pareto(1.0, 0.5, 0.3).unwrap(),
            QuantileModel::govindarajulu(1.0, 1.0).unwrap(),
            QuantileModel::govindarajulu(69.26, 1.04).unwrap(),
            QuantileModel::linear_hazard_quantile(0.1, 0.2).unwrap(),
            QuantileModel::linear_hazard_quantile(1.0, -0.5).unwrap(),
            QuantileModel::reciprocal_exponential(0.7).unwrap(),
        ]
    }

    #[test]
    fn exponential_quantile_and_density() {
        let m = QuantileModel::exponential(2.0).unwrap();
        assert_relative_eq!(m.quantile(0.5).unwrap(), 1.386_294_361_119_890_6, max_relative = 1e-15);
        assert_relative_eq!(m.quantile_density(0.5).unwrap(), 4.0, max_relative = 1e-15);
        // brute-force inversion of F(x) = 1 - exp(-x/2)
        let x = m.quantile(0.5).unwrap();
        assert_relative_eq!(1.0 - libm::exp(-x / 2.0), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn govindarajulu_unit_case() {
        let m = QuantileModel::govindarajulu(1.0, 1.0).unwrap();
        assert_eq!(m.quantile(0.5).unwrap(), 0.75);
        assert_eq!(m.quantile_density(0.25).unwrap(), 1.5);
        let p = m.cdf(0.75, &EvalConfig::default()).unwrap();
        assert!((p - 0.5).abs() < 1e-10);
    }

    #[test]
    fn uniform_power_density_is_one() {
        let m = QuantileModel::power(1.0, 1.0).unwrap();
        assert_eq!(m.quantile_density(0.3).unwrap(), 1.0);
    }

    #[test]
    fn power_upper_endpoint_inverts_to_one() {
        let m = QuantileModel::power(74.13, 1.0 / 0.17).unwrap();
        assert_eq!(m.cdf(74.13, &EvalConfig::default()).unwrap(), 1.0);
        assert_eq!(m.quantile(1.0).unwrap(), 74.13);
    }

    #[test]
    fn exponential_inverse_round_trip() {
        let m = QuantileModel::exponential(2.0).unwrap();
        let p = m.cdf(1.386_294, &EvalConfig::default()).unwrap();
        assert!((p - 0.5).abs() < 1e-6);
    }

    #[test]
    fn endpoints_are_limits_when_finite() {
        let e = QuantileModel::exponential(1.0).unwrap();
        assert_eq!(e.quantile(0.0).unwrap(), 0.0);
        assert_eq!(e.quantile(1.0).unwrap_err().kind(), "DomainError");
        assert_eq!(e.quantile(1.5).unwrap_err().kind(), "DomainError");
        assert_eq!(e.quantile_density(0.0).unwrap_err().kind(), "DomainError");
        let r = QuantileModel::reciprocal_exponential(0.7).unwrap();
        assert_eq!(r.quantile(0.0).unwrap(), 0.0);
    }

    #[test]
    fn parameter_constraints() {
        assert_eq!(QuantileModel::exponential(0.0).unwrap_err().kind(), "ParamError");
        assert_eq!(QuantileModel::power(1.0, -1.0).unwrap_err().kind(), "ParamError");
        assert_eq!(
            QuantileModel::linear_hazard_quantile(0.0, 1.0).unwrap_err().kind(),
            "ParamError"
        );
        assert_eq!(
            QuantileModel::linear_hazard_quantile(1.0, -1.0).unwrap_err().kind(),
            "ParamError"
        );
        assert_eq!(
            QuantileModel::govindarajulu(f64::NAN, 1.0).unwrap_err().kind(),
            "ParamError"
        );
    }

    #[test]
    fn linear_hazard_quantile_has_linear_hazard() {
        let m = QuantileModel::linear_hazard_quantile(0.1, 0.2).unwrap();
        for i in 1..20 {
            let p = i as f64 / 20.0;
            assert_relative_eq!(m.hazard_quantile(p).unwrap(), 0.1 + 0.2 * p, max_relative = 1e-12);
        }
    }

    #[test]
    fn hazard_quantiles() {
        let m = QuantileModel::exponential(2.0).unwrap();
        assert_relative_eq!(m.hazard_quantile(0.5).unwrap(), 0.5, max_relative = 1e-15);
        let m1 = QuantileModel::exponential(1.0).unwrap();
        assert_relative_eq!(m1.reversed_hazard_quantile(0.5).unwrap(), 1.0, max_relative = 1e-15);
        assert_eq!(hazard_from_density(0.5, 0.0).unwrap_err().kind(), "DegenerateDensity");
    }

    #[test]
    fn round_trip_and_derivative_on_grid() {
        let cfg = EvalConfig::default();
        for m in all_models() {
            for i in 1..100 {
                let p = i as f64 / 100.0;
                let x = m.quantile(p).unwrap();
                let back = m.cdf(x, &cfg).unwrap();
                assert!((back - p).abs() < 1e-8, "{} p={p} back={back}", m.name());

                let h = 1e-5_f64.min(p).min(1.0 - p) / 2.0;
                let fd = (m.quantile(p + h).unwrap() - m.quantile(p - h).unwrap()) / (2.0 * h);
                let q = m.quantile_density(p).unwrap();
                assert!(((fd - q) / q).abs() < 1e-6, "{} p={p} fd={fd} q={q}", m.name());

                let f = m.pdf(x, &cfg).unwrap();
                assert_relative_eq!(f * q, 1.0, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn quantiles_are_monotone() {
        for m in all_models() {
            let mut prev = m.quantile(0.001).unwrap();
            for i in 2..1000 {
                let x = m.quantile(i as f64 / 1000.0).unwrap();
                assert!(x >= prev, "{}", m.name());
                prev = x;
            }
        }
    }

    #[test]
    fn cdf_outside_support_is_domain_error() {
        let cfg = EvalConfig::default();
        let g = QuantileModel::govindarajulu(1.0, 1.0).unwrap();
        assert_eq!(g.cdf(1.5, &cfg).unwrap_err().kind(), "DomainError");
        assert_eq!(g.cdf(1e-30, &cfg).unwrap_err().kind(), "DomainError");
        assert_eq!(g.cdf(0.0, &cfg).unwrap(), 0.0);
        let p = QuantileModel::pareto_i(1.0).unwrap();
        assert_eq!(p.cdf(0.5, &cfg).unwrap_err().kind(), "DomainError");
    }
}
