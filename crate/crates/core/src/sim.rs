//! Seeded Monte Carlo bias/MSE studies of the plug-in estimators.
//!
//! Replication `k` draws its sample with seed `base_seed + k`, so replications
//! can run in any order (or in parallel) and still aggregate to the same
//! result when combined in index order with [`aggregate`].

use alloc::format;
use alloc::vec::Vec;

use crate::composed::{ClosedForm, ComposedModel};
use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::estimation::{estimate_igf, estimate_past, estimate_residual, sample_from_q3, OrderedSample};
use crate::igf::{igf, igf_past, igf_residual, AlphaValue};
use crate::math::{exp, powf};
use crate::quadrature::integrate;

/// Redraw attempts allowed per replication before giving up.
pub const MAX_REDRAWS: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Igf,
    Residual(f64),
    Past(f64),
}

impl Target {
    pub fn u(&self) -> Option<f64> {
        match *self {
            Target::Igf => None,
            Target::Residual(u) | Target::Past(u) => Some(u),
        }
    }

    fn estimate(&self, s: &OrderedSample, a: AlphaValue) -> Result<f64> {
        Ok(match *self {
            Target::Igf => estimate_igf(s, a)?.estimate,
            Target::Residual(u) => estimate_residual(s, a, u)?.estimate,
            Target::Past(u) => estimate_past(s, a, u)?.estimate,
        })
    }
}

/// Which integrand defines the true value the estimates are compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TruthSource {
    /// `I*`, `R*` and `J*` evaluated from their definitions on `q3`.
    #[default]
    Definition,
    /// Closed residual integrand for the Govindarajulu `2p - p²` vs
    /// reciprocal exponential scenario,
    /// `(2λ(1-p))^(1-α) (2p - p²)^(2(1-α)) exp(-λ(1-α)/(2p - p²))`, with
    /// prefactor `(1 - exp(-λ/(2u - u²))) / (1-u)^α`. The `I*` truth is the
    /// same integral at `u = 0`. Only that scenario is supported.
    PrintedDisplay,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimScenario {
    pub model: ComposedModel,
    pub alpha: f64,
    pub targets: Vec<Target>,
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub base_seed: u64,
    pub truth_cfg: EvalConfig,
    pub truth_source: TruthSource,
}

impl SimScenario {
    /// Scenario with target `I*` when `u_list` is empty and `R*(u)` for each
    /// `u` otherwise.
    pub fn new(
        model: ComposedModel,
        alpha: f64,
        u_list: &[f64],
        n_list: Vec<usize>,
        reps: usize,
        base_seed: u64,
    ) -> Result<Self> {
        let targets = if u_list.is_empty() {
            alloc::vec![Target::Igf]
        } else {
            u_list.iter().map(|&u| Target::Residual(u)).collect()
        };
        let s = SimScenario {
            model,
            alpha,
            targets,
            n_list,
            reps,
            base_seed,
            truth_cfg: EvalConfig::default(),
            truth_source: TruthSource::Definition,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        AlphaValue::new(self.alpha)?;
        self.truth_cfg.validate()?;
        if self.reps == 0 {
            return Err(Error::Param("reps must be at least 1".into()));
        }
        if self.targets.is_empty() || self.n_list.is_empty() {
            return Err(Error::Param(
                "scenario needs at least one target and one sample size".into(),
            ));
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n < 2) {
            return Err(Error::TooSmall { needed: 2, got: n });
        }
        for t in &self.targets {
            match *t {
                Target::Residual(u) if !(0.0..1.0).contains(&u) => {
                    return Err(Error::Domain(format!("residual age {u} must lie in [0, 1)")))
                }
                Target::Past(u) if !(u > 0.0 && u <= 1.0) => {
                    return Err(Error::Domain(format!("past age {u} must lie in (0, 1]")))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRow {
    pub n: usize,
    pub target: Target,
    pub truth: f64,
    pub mean_estimate: f64,
    pub bias: f64,
    pub mse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub rows: Vec<SimRow>,
    /// Replications that hit a zero spacing and were redrawn.
    pub redraws: usize,
}

/// Estimates of every target from one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub estimates: Vec<f64>,
    pub redraws: usize,
}

/// Seed for replication `rep`, attempt `attempt` (0 for the first draw).
pub fn replication_seed(base_seed: u64, rep: usize, attempt: u32) -> u64 {
    let seed = base_seed.wrapping_add(rep as u64);
    if attempt == 0 {
        seed
    } else {
        seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17)
    }
}

/// Run replication `rep` at sample size `n`.
pub fn replicate(s: &SimScenario, n: usize, rep: usize) -> Result<Replication> {
    let a = AlphaValue::new(s.alpha)?;
    let mut attempt = 0;
    loop {
        let seed = replication_seed(s.base_seed, rep, attempt);
        let sample = sample_from_q3(&s.model, n, seed, &s.truth_cfg)?;
        let estimates: Result<Vec<f64>> = s.targets.iter().map(|t| t.estimate(&sample, a)).collect();
        match estimates {
            Ok(estimates) => {
                return Ok(Replication {
                    estimates,
                    redraws: attempt as usize,
                })
            }
            Err(Error::ZeroSpacing { .. }) if attempt < MAX_REDRAWS => attempt += 1,
            Err(e) => return Err(e),
        }
    }
}

/// True values of each target.
pub fn truths(s: &SimScenario) -> Result<Vec<f64>> {
    let a = AlphaValue::new(s.alpha)?;
    let cfg = &s.truth_cfg;
    s.targets
        .iter()
        .map(|t| match s.truth_source {
            TruthSource::Definition => Ok(match *t {
                Target::Igf => igf(&s.model, a, cfg)?.value,
                Target::Residual(u) => igf_residual(&s.model, a, u, cfg)?.value,
                Target::Past(u) => igf_past(&s.model, a, u, cfg)?.value,
            }),
            TruthSource::PrintedDisplay => printed_display_truth(&s.model, s.alpha, *t, cfg),
        })
        .collect()
}

/// Truth under [`TruthSource::PrintedDisplay`] for the Govindarajulu(1, 1)
/// vs reciprocal exponential scenario.
pub fn printed_display_truth(m: &ComposedModel, alpha: f64, target: Target, cfg: &EvalConfig) -> Result<f64> {
    let lambda = match m.closed_form() {
        Some(&ClosedForm::GovindarajuluRecipExp { scale, shape, lambda }) if scale == 1.0 && shape == 1.0 => lambda,
        _ => {
            return Err(Error::Param(
                "the PrintedDisplay truth is only defined for Govindarajulu(1, 1) vs reciprocal exponential".into(),
            ))
        }
    };
    let u = match target {
        Target::Igf => 0.0,
        Target::Residual(u) => u,
        Target::Past(_) => {
            return Err(Error::Param(
                "the PrintedDisplay truth has no past-lifetime form".into(),
            ))
        }
    };
    let t = 1.0 - alpha;
    let (eps, hi) = cfg.unit_limits();
    let q = integrate(
        |p| {
            let g = 2.0 * p - p * p;
            Ok(powf(2.0 * lambda * (1.0 - p), t) * powf(g, 2.0 * t) * exp(-lambda * t / g))
        },
        u.max(eps),
        hi,
        cfg,
    )?;
    let pre = if u == 0.0 {
        1.0
    } else {
        (1.0 - exp(-lambda / (2.0 * u - u * u))) / powf(1.0 - u, alpha)
    };
    Ok(pre * q.value)
}

/// Combine replications, given in index order, into one row per target.
pub fn aggregate(s: &SimScenario, truths: &[f64], n: usize, reps: &[Replication]) -> Vec<SimRow> {
    let k = reps.len() as f64;
    s.targets
        .iter()
        .zip(truths)
        .enumerate()
        .map(|(i, (&target, &truth))| {
            let (mut sum, mut sq) = (0.0, 0.0);
            for r in reps {
                let e = r.estimates[i];
                sum += e;
                sq += (e - truth) * (e - truth);
            }
            let mean_estimate = sum / k;
            SimRow {
                n,
                target,
                truth,
                mean_estimate,
                bias: mean_estimate - truth,
                mse: sq / k,
            }
        })
        .collect()
}

/// Run the full study sequentially.
pub fn run_simulation(s: &SimScenario) -> Result<SimResult> {
    s.validate()?;
    let truth = truths(s)?;
    let mut rows = Vec::new();
    let mut redraws = 0;
    for &n in &s.n_list {
        let reps = (0..s.reps)
            .map(|rep| replicate(s, n, rep))
            .collect::<Result<Vec<_>>>()?;
        redraws += reps.iter().map(|r| r.redraws).sum::<usize>();
        rows.extend(aggregate(s, &truth, n, &reps));
    }
    Ok(SimResult { rows, redraws })
}
