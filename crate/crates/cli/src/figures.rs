//! Data behind the four model-based figures, as `x,y,series` tables.

use qigf_core::{
    compose, distortion_to_composed, igf, igf_past, igf_residual, AlphaValue, ComposedModel, DistortionSpec,
    EvalConfig, QuantileModel,
};

use crate::error::{CliError, Result};
use crate::io::Table;

/// Power-Pareto `(c, λ₁, λ₂)` against power `(β₁, β₂)` for figure 1, written
/// `(β₁, β₂, c, λ₁, λ₂)`.
pub const FIGURE1_CONFIGS: [(f64, f64, f64, f64, f64); 4] = [
    (3.0, 2.0, 1.0, 0.5, 0.1),
    (3.0, 3.0, 1.0, 0.4, 0.1),
    (5.0, 2.0, 1.0, 0.5, 0.2),
    (4.0, 3.0, 1.0, 0.3, 0.05),
];

/// `α = 0.5, 0.55, …, 2`.
pub fn figure1_alphas() -> Vec<f64> {
    (0..=30).map(|k| 0.5 + 0.05 * k as f64).collect()
}

pub fn figure1_model(cfg: (f64, f64, f64, f64, f64)) -> Result<ComposedModel> {
    let (b1, b2, c, l1, l2) = cfg;
    Ok(compose(
        QuantileModel::power_pareto(c, l1, l2)?,
        QuantileModel::power(b1, b2)?,
    )?)
}

pub fn figure1_label(cfg: (f64, f64, f64, f64, f64)) -> String {
    let (b1, b2, c, l1, l2) = cfg;
    format!("b1={b1} b2={b2} c={c} l1={l1} l2={l2}")
}

fn grid(step: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|k| k as f64 * step).collect()
}

fn alpha(a: f64) -> Result<AlphaValue> {
    Ok(AlphaValue::new(a)?)
}

fn figure1(cfg: &EvalConfig) -> Result<Table> {
    let mut t = Table::new(&["x", "y", "series"]);
    for c in FIGURE1_CONFIGS {
        let m = figure1_model(c)?;
        for a in figure1_alphas() {
            t.push(vec![
                a.into(),
                igf(&m, alpha(a)?, cfg)?.value.into(),
                figure1_label(c).into(),
            ]);
        }
    }
    Ok(t)
}

fn figure2(cfg: &EvalConfig) -> Result<Table> {
    let m = compose(
        QuantileModel::linear_hazard_quantile(0.1, 0.2)?,
        QuantileModel::exponential(1.0 / 0.6)?,
    )?;
    let mut t = Table::new(&["x", "y", "series"]);
    for a in grid(0.25, 8) {
        if a == 1.0 {
            continue;
        }
        for u in grid(0.05, 19) {
            let v = igf_residual(&m, alpha(a)?, u, cfg)?.value;
            t.push(vec![u.into(), v.into(), format!("alpha={a}").into()]);
        }
    }
    Ok(t)
}

fn figure3(cfg: &EvalConfig) -> Result<Table> {
    let mut t = Table::new(&["x", "y", "series"]);
    for lambda in [0.5, 0.7, 1.0, 2.0] {
        let m = compose(
            QuantileModel::govindarajulu(1.0, 1.0)?,
            QuantileModel::reciprocal_exponential(lambda)?,
        )?;
        for u in grid(0.05, 20) {
            let v = igf_past(&m, alpha(0.5)?, u, cfg)?.value;
            t.push(vec![u.into(), v.into(), format!("lambda={lambda}").into()]);
        }
    }
    Ok(t)
}

fn figure4(cfg: &EvalConfig) -> Result<Table> {
    let mut t = Table::new(&["x", "y", "series"]);
    for theta in [0.25, 0.5, 2.0, 4.0] {
        let m = distortion_to_composed(&DistortionSpec::ProportionalOddsCdf { theta })?;
        for u in grid(0.05, 20) {
            let v = igf_past(&m, alpha(0.7)?, u, cfg)?.value;
            t.push(vec![u.into(), v.into(), format!("theta={theta}").into()]);
        }
    }
    Ok(t)
}

/// Series for figure `id`:
///
/// 1. `I*(α)` against `α` for [`FIGURE1_CONFIGS`].
/// 2. `R*(α, u)` for linear hazard quantile `(0.1, 0.2)` against an
///    exponential with mean `1/0.6`, one series per `α`.
/// 3. `J*(0.5, u)` for Govindarajulu `(1, 1)` against reciprocal
///    exponential, one series per `λ`.
/// 4. `J*(0.7, u)` for proportional odds on the distribution scale, one
///    series per `θ`.
pub fn figure(id: u8, cfg: &EvalConfig) -> Result<Table> {
    match id {
        1 => figure1(cfg),
        2 => figure2(cfg),
        3 => figure3(cfg),
        4 => figure4(cfg),
        _ => Err(CliError::usage(format!("figure must be 1-4, got {id}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_figure_evaluates() {
        let cfg = EvalConfig::default();
        for id in 1..=4 {
            let t = figure(id, &cfg).unwrap();
            assert!(!t.rows.is_empty());
            assert!(t.numbers("y").iter().all(|v| v.is_some_and(f64::is_finite)));
        }
        assert!(figure(5, &cfg).is_err());
    }

    #[test]
    fn figure_four_at_one_is_the_full_igf() {
        let cfg = EvalConfig::default();
        let t = figure(4, &cfg).unwrap();
        let m = distortion_to_composed(&DistortionSpec::ProportionalOddsCdf { theta: 0.25 }).unwrap();
        let full = igf(&m, alpha(0.7).unwrap(), &cfg).unwrap().value;
        let last = t.numbers("y")[19].unwrap();
        assert!((last - full).abs() < 1e-6 * full, "{last} vs {full}");
    }
}
