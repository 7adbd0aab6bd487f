//! Placebo against 5 mg DES survival analysis: a seeded sample from the
//! fitted distortion, nonparametric estimates against the fitted model, and
//! the divergence panel.
//!
//! Placebo follows Govindarajulu with `σ = 69.26`, `β = 1.04`; the 5 mg arm a
//! power law with `β₁ = 74.13` and `1/β₂ = 0.17`.

use qigf_core::{
    compose, estimate_igf, estimate_kl, estimate_past, estimate_residual, igf, igf_past, igf_residual, kl_divergence,
    parzen_q3, sample_from_q3, AlphaValue, ComposedModel, DivergencePanel, EvalConfig, OrderedSample, QuantileModel,
};

use crate::error::Result;
use crate::io::{Cell, Table};

pub const RENYI_ORDERS: [f64; 3] = [0.25, 0.5, 0.75];

pub fn placebo() -> Result<QuantileModel> {
    Ok(QuantileModel::govindarajulu(69.26, 1.04)?)
}

pub fn five_mg() -> Result<QuantileModel> {
    Ok(QuantileModel::power(74.13, 1.0 / 0.17)?)
}

/// Placebo composed with the 5 mg arm.
pub fn placebo_vs_five_mg() -> Result<ComposedModel> {
    Ok(compose(placebo()?, five_mg()?)?)
}

fn alpha(a: f64) -> Result<AlphaValue> {
    Ok(AlphaValue::new(a)?)
}

/// Divergence panel of a sample, built from its plug-in estimates.
pub fn nonparametric_panel(s: &OrderedSample) -> Result<DivergencePanel> {
    let half = estimate_igf(s, alpha(0.5)?)?.estimate;
    let at = RENYI_ORDERS
        .iter()
        .map(|&a| Ok((a, estimate_igf(s, alpha(a)?)?.estimate)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DivergencePanel::from_parts(estimate_kl(s)?, half, &at)?)
}

/// Divergence panel of the fitted model.
pub fn parametric_panel(m: &ComposedModel, cfg: &EvalConfig) -> Result<DivergencePanel> {
    let half = igf(m, alpha(0.5)?, cfg)?.value;
    let at = RENYI_ORDERS
        .iter()
        .map(|&a| Ok((a, igf(m, alpha(a)?, cfg)?.value)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DivergencePanel::from_parts(kl_divergence(m, cfg)?, half, &at)?)
}

fn panel_rows(p: &DivergencePanel) -> Vec<(String, Option<f64>, f64)> {
    let mut rows = vec![
        ("kl".to_owned(), None, p.kl),
        ("igf_half".to_owned(), Some(0.5), p.igf_half),
        ("hellinger".to_owned(), None, p.hellinger),
        ("bhattacharyya".to_owned(), None, p.bhattacharyya),
    ];
    rows.extend(p.renyi.iter().map(|&(a, r)| ("renyi".to_owned(), Some(a), r)));
    rows
}

#[derive(Debug, Clone)]
pub struct ProstateReport {
    pub sample: OrderedSample,
    pub panel: DivergencePanel,
    pub model_panel: DivergencePanel,
    pub one_mg_panel: Option<DivergencePanel>,
    /// Divergence table with columns `measure, order, placebo_vs_5mg,
    /// model_5mg` and, when a 1 mg model was given, `placebo_vs_1mg`.
    pub divergences: Table,
    /// `(file stem, table)` for the Q3, I*, R* and J* comparisons.
    pub figures: Vec<(&'static str, Table)>,
}

fn series(t: &mut Table, x: f64, y: f64, label: String) {
    t.push(vec![x.into(), y.into(), label.into()]);
}

fn unit_grid(step: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|k| k as f64 * step).collect()
}

fn figures(m: &ComposedModel, s: &OrderedSample, cfg: &EvalConfig) -> Result<Vec<(&'static str, Table)>> {
    let mut f5 = Table::new(&["x", "y", "series"]);
    for u in unit_grid(0.01, 100) {
        series(&mut f5, u, m.quantile(u, cfg)?, "parametric".into());
    }
    for u in unit_grid(0.01, 100) {
        series(&mut f5, u, parzen_q3(s, u)?, "nonparametric".into());
    }

    let mut f6 = Table::new(&["x", "y", "series"]);
    let alphas = unit_grid(0.05, 20);
    for &a in &alphas {
        series(&mut f6, a, igf(m, alpha(a)?, cfg)?.value, "parametric".into());
    }
    for &a in &alphas {
        series(&mut f6, a, estimate_igf(s, alpha(a)?)?.estimate, "nonparametric".into());
    }

    let mut f7 = Table::new(&["x", "y", "series"]);
    let mut f8 = Table::new(&["x", "y", "series"]);
    for a in RENYI_ORDERS {
        let av = alpha(a)?;
        for u in unit_grid(0.05, 19) {
            series(
                &mut f7,
                u,
                igf_residual(m, av, u, cfg)?.value,
                format!("parametric alpha={a}"),
            );
            series(
                &mut f7,
                u,
                estimate_residual(s, av, u)?.estimate,
                format!("nonparametric alpha={a}"),
            );
        }
        for u in unit_grid(0.05, 20) {
            series(
                &mut f8,
                u,
                igf_past(m, av, u, cfg)?.value,
                format!("parametric alpha={a}"),
            );
            series(
                &mut f8,
                u,
                estimate_past(s, av, u)?.estimate,
                format!("nonparametric alpha={a}"),
            );
        }
    }
    Ok(vec![("q3", f5), ("igf", f6), ("residual", f7), ("past", f8)])
}

/// Run the analysis with a sample of size `n` drawn with `seed`. When
/// `one_mg` is given, a second sample from placebo against that model (same
/// seed) fills the `placebo_vs_1mg` column.
pub fn prostate(n: usize, seed: u64, one_mg: Option<QuantileModel>, cfg: &EvalConfig) -> Result<ProstateReport> {
    let m = placebo_vs_five_mg()?;
    let sample = sample_from_q3(&m, n, seed, cfg)?;
    let panel = nonparametric_panel(&sample)?;
    let model_panel = parametric_panel(&m, cfg)?;
    let one_mg_panel = match one_mg {
        Some(q2) => {
            let m1 = compose(placebo()?, q2)?;
            Some(nonparametric_panel(&sample_from_q3(&m1, n, seed, cfg)?)?)
        }
        None => None,
    };

    let mut columns = vec!["measure", "order", "placebo_vs_5mg", "model_5mg"];
    if one_mg_panel.is_some() {
        columns.push("placebo_vs_1mg");
    }
    let mut divergences = Table::new(&columns);
    let model_rows = panel_rows(&model_panel);
    let one_rows = one_mg_panel.as_ref().map(panel_rows);
    for (i, (name, order, v)) in panel_rows(&panel).into_iter().enumerate() {
        let mut row: Vec<Cell> = vec![name.into(), order.into(), v.into(), model_rows[i].2.into()];
        if let Some(r) = &one_rows {
            row.push(r[i].2.into());
        }
        divergences.push(row);
    }

    let figures = figures(&m, &sample, cfg)?;
    Ok(ProstateReport {
        sample,
        panel,
        model_panel,
        one_mg_panel,
        divergences,
        figures,
    })
}
