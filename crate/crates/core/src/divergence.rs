//! Divergence measures derived from `I*` and its α-derivative.

use alloc::format;
use alloc::vec::Vec;

use crate::composed::ComposedModel;
use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::igf::{igf, kl_divergence, AlphaValue};
use crate::math::ln;

/// Kullback–Leibler, Hellinger, Bhattacharyya and Rényi divergences of one
/// distortion.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergencePanel {
    pub kl: f64,
    /// `I*(1/2)`, from which the Hellinger and Bhattacharyya values follow.
    pub igf_half: f64,
    /// `1 - I*(1/2)`.
    pub hellinger: f64,
    /// `-log I*(1/2)`.
    pub bhattacharyya: f64,
    /// `(α, log I*(α) / (α - 1))` for each requested order.
    pub renyi: Vec<(f64, f64)>,
}

impl DivergencePanel {
    /// Assemble a panel from a K-L value, `I*(1/2)` and `(α, I*(α))` pairs.
    ///
    /// Model-based and nonparametric panels both go through here, so the
    /// recombination identities hold bit for bit in either case.
    pub fn from_parts(kl: f64, igf_half: f64, igf_at: &[(f64, f64)]) -> Result<Self> {
        let renyi = igf_at
            .iter()
            .map(|&(a, i)| {
                check_renyi_order(a)?;
                Ok((a, ln(i) / (a - 1.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DivergencePanel {
            kl,
            igf_half,
            hellinger: 1.0 - igf_half,
            bhattacharyya: -ln(igf_half),
            renyi,
        })
    }
}

/// Rényi orders must be positive and different from 1.
pub fn check_renyi_order(a: f64) -> Result<()> {
    AlphaValue::new(a)?;
    if a == 1.0 {
        return Err(Error::Param(format!("Rényi order must differ from 1, got {a}")));
    }
    Ok(())
}

/// All divergence measures of `m`, with Rényi divergences at `renyi_orders`.
pub fn divergence_panel(m: &ComposedModel, renyi_orders: &[f64], cfg: &EvalConfig) -> Result<DivergencePanel> {
    for &a in renyi_orders {
        check_renyi_order(a)?;
    }
    let kl = kl_divergence(m, cfg)?;
    let half = igf(m, AlphaValue::new(0.5)?, cfg)?.value;
    let mut at = Vec::with_capacity(renyi_orders.len());
    for &a in renyi_orders {
        let v = if a == 0.5 {
            half
        } else {
            igf(m, AlphaValue::new(a)?, cfg)?.value
        };
        at.push((a, v));
    }
    DivergencePanel::from_parts(kl, half, &at)
}
