//! Text syntax for models, pairs and transforms.
//!
//! ```text
//! model      = family ":" params          e.g. exp:2   gov:69.26,1.04
//! pair       = "identity"
//!            | model "/" model            e.g. gov:1,1/recipexp:0.7
//!            | family ":" params params   same family, e.g. exp:2,1
//!            | "ph:" θ | "po:" r | "pocdf:" θ | "rph:" c
//!            | ("gsurv" | "gcdf") ":" g   g = power:θ | odds:θ | table:PATH
//! transform  = identity | log | exp | affine:scale,shift | power:exponent
//! ```
//!
//! Parameter order per family:
//!
//! | family | parameters | `Q(p)` |
//! |--------|-----------|--------|
//! | `exp` | mean λ | `-λ log(1-p)` |
//! | `pareto1` | γ | `(1-p)^(-1/γ)` |
//! | `pareto2` | β | `(1-p)^(-1/β) - 1` |
//! | `power` | scale β₁, shape β₂ | `β₁ p^(1/β₂)` |
//! | `powerpareto` | c, λ₁, λ₂ | `c p^λ₁ (1-p)^(-λ₂)` |
//! | `gov` | σ, β | `σ((β+1)p^β - βp^(β+1))` |
//! | `lhq` | a, b | `(log(a+bp) - log a - log(1-p)) / (a+b)` |
//! | `recipexp` | λ | `-λ / log p` |

use std::path::Path;

use qigf_core::{
    compose, distortion_to_composed, ComposedModel, DistortionSpec, Family, MonotoneTransform, QuantileModel,
    UnitDistribution,
};

use crate::error::{CliError, Result};
use crate::io::read_table_file;

fn params(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("'{t}' is not a number")))
        })
        .collect()
}

fn arity(family: &str) -> Option<usize> {
    Some(match family {
        "exp" | "pareto1" | "pareto2" | "recipexp" => 1,
        "power" | "gov" | "lhq" => 2,
        "powerpareto" => 3,
        _ => return None,
    })
}

fn build(family: &str, p: &[f64]) -> Result<QuantileModel> {
    let f = match (family, p) {
        ("exp", &[mean]) => Family::Exponential { mean },
        ("pareto1", &[gamma]) => Family::ParetoI { gamma },
        ("pareto2", &[beta]) => Family::ParetoII { beta },
        ("power", &[scale, shape]) => Family::Power { scale, shape },
        ("powerpareto", &[scale, lambda1, lambda2]) => Family::PowerPareto {
            scale,
            lambda1,
            lambda2,
        },
        ("gov", &[scale, shape]) => Family::Govindarajulu { scale, shape },
        ("lhq", &[a, b]) => Family::LinearHazardQuantile { a, b },
        ("recipexp", &[lambda]) => Family::ReciprocalExponential { lambda },
        _ => {
            return Err(match arity(family) {
                Some(k) => CliError::usage(format!("{family} takes {k} parameter(s), got {}", p.len())),
                None => CliError::usage(format!("unknown family '{family}'")),
            })
        }
    };
    Ok(QuantileModel::new(f)?)
}

fn split_spec(text: &str) -> Result<(&str, &str)> {
    text.split_once(':')
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| CliError::usage(format!("expected 'name:params', got '{text}'")))
}

/// Parse a single quantile model such as `gov:1,1`.
pub fn parse_model(text: &str) -> Result<QuantileModel> {
    let (family, rest) = split_spec(text)?;
    build(family, &params(rest)?)
}

fn one(text: &str) -> Result<f64> {
    match params(text)?.as_slice() {
        &[v] => Ok(v),
        other => Err(CliError::usage(format!("expected one parameter, got {}", other.len()))),
    }
}

fn unit_distribution(text: &str) -> Result<UnitDistribution> {
    let (kind, rest) = split_spec(text)?;
    Ok(match kind {
        "power" => UnitDistribution::power(one(rest)?)?,
        "odds" => UnitDistribution::odds_kernel(one(rest)?)?,
        "table" => UnitDistribution::table(&read_table_file(Path::new(rest))?)?,
        _ => return Err(CliError::usage(format!("unknown G '{kind}' (power, odds, table)"))),
    })
}

/// Parse a pair of models or a semiparametric distortion.
pub fn parse_pair(text: &str) -> Result<ComposedModel> {
    let text = text.trim();
    if text == "identity" {
        return Ok(ComposedModel::identity());
    }
    if let Some((a, b)) = text.split_once('/') {
        return Ok(compose(parse_model(a)?, parse_model(b)?)?);
    }
    let (name, rest) = split_spec(text)?;
    let spec = match name {
        "ph" => DistortionSpec::ProportionalHazards { theta: one(rest)? },
        "po" => DistortionSpec::ProportionalOddsSurvival { r: one(rest)? },
        "pocdf" => DistortionSpec::ProportionalOddsCdf { theta: one(rest)? },
        "rph" => DistortionSpec::ReversedProportionalHazards { c: one(rest)? },
        "gsurv" => DistortionSpec::GTransformSurvival(unit_distribution(rest)?),
        "gcdf" => DistortionSpec::GTransformCdf(unit_distribution(rest)?),
        family => {
            let k = arity(family).ok_or_else(|| CliError::usage(format!("unknown pair or family '{family}'")))?;
            let p = params(rest)?;
            if p.len() != 2 * k {
                return Err(CliError::usage(format!(
                    "same-family pair {family} needs {} parameters, got {}",
                    2 * k,
                    p.len()
                )));
            }
            return Ok(compose(build(family, &p[..k])?, build(family, &p[k..])?)?);
        }
    };
    Ok(distortion_to_composed(&spec)?)
}

pub fn parse_transform(text: &str) -> Result<MonotoneTransform> {
    let t = match text.trim().split_once(':') {
        None => match text.trim() {
            "identity" => MonotoneTransform::Identity,
            "log" => MonotoneTransform::Log,
            "exp" => MonotoneTransform::Exp,
            other => return Err(CliError::usage(format!("unknown transform '{other}'"))),
        },
        Some(("affine", rest)) => match params(rest)?.as_slice() {
            &[scale, shift] => MonotoneTransform::Affine { scale, shift },
            _ => return Err(CliError::usage("affine takes scale,shift")),
        },
        Some(("power", rest)) => MonotoneTransform::Power { exponent: one(rest)? },
        Some((other, _)) => return Err(CliError::usage(format!("unknown transform '{other}'"))),
    };
    t.validate()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qigf_core::ClosedForm;

    #[test]
    fn pair_forms() {
        let m = parse_pair("exp:2,1").unwrap();
        assert_eq!(m.closed_form(), Some(&ClosedForm::ExpPair { ratio: 2.0 }));
        let m = parse_pair("exp:2/exp:1").unwrap();
        assert_eq!(m.closed_form(), Some(&ClosedForm::ExpPair { ratio: 2.0 }));
        assert!(parse_pair("identity").unwrap().is_identity());
        assert!(parse_pair("gov:1,1/recipexp:0.7").is_ok());
        assert_eq!(
            parse_pair("ph:2").unwrap().closed_form(),
            Some(&ClosedForm::ProportionalHazards { theta: 2.0 })
        );
        assert!(parse_pair("po:0.5").is_ok());
        assert!(parse_pair("pocdf:0.5").is_ok());
        assert!(parse_pair("rph:2").is_ok());
        assert!(parse_pair("gsurv:power:2").is_ok());
        assert!(parse_pair("gcdf:odds:0.4").is_ok());
    }

    #[test]
    fn pair_errors() {
        assert!(matches!(parse_pair("exp:2"), Err(CliError::Usage(_))));
        assert!(matches!(parse_pair("nope:1"), Err(CliError::Usage(_))));
        assert!(matches!(parse_pair("exp:x,1"), Err(CliError::Usage(_))));
        assert!(matches!(parse_pair("exp:-1,1"), Err(CliError::Core(_))));
        assert!(matches!(parse_pair("exp:1/pareto1:1"), Err(CliError::Core(_))));
        assert!(matches!(parse_pair("gsurv:beta:2"), Err(CliError::Usage(_))));
    }

    #[test]
    fn transforms() {
        assert_eq!(parse_transform("log").unwrap(), MonotoneTransform::Log);
        assert_eq!(
            parse_transform("affine:2,0").unwrap(),
            MonotoneTransform::Affine { scale: 2.0, shift: 0.0 }
        );
        assert!(parse_transform("affine:-2,0").is_err());
        assert!(parse_transform("sqrt").is_err());
    }
}
