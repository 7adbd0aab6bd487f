//! Library-level implementations of each subcommand. Every function returns
//! a [`Table`] so the binary and the tests share one code path.

use std::path::Path;

use qigf_core::sim::{aggregate, replicate, truths};
use qigf_core::{
    divergence_panel, empirical_q3_sample, estimate_igf, estimate_kl, estimate_past, estimate_residual, igf,
    igf_bounds, igf_past, igf_residual, igf_series, order_sample, past_constancy_check, residual_constancy_check,
    sample_from_q3, transformed_igf, AlphaValue, ComposedModel, EvalConfig, IgfValue, Method, MonotoneTransform,
    OrderedSample, QuantileModel, SampleSource, SimScenario, Target, TruthSource,
};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::io::{read_sample_file, write_sample_file, Cell, Table};

fn alpha(a: f64) -> Result<AlphaValue> {
    Ok(AlphaValue::new(a)?)
}

fn nonempty<'a>(name: &str, v: &'a [f64]) -> Result<&'a [f64]> {
    if v.is_empty() {
        Err(CliError::usage(format!("--{name} needs at least one value")))
    } else {
        Ok(v)
    }
}

fn method(m: Method) -> &'static str {
    match m {
        Method::ClosedForm => "closed_form",
        Method::Quadrature => "quadrature",
    }
}

fn value_cells(v: IgfValue) -> [Cell; 3] {
    [v.value.into(), method(v.method).into(), v.est_abs_error.into()]
}

pub fn eval(m: &ComposedModel, alphas: &[f64], cfg: &EvalConfig) -> Result<Table> {
    let mut t = Table::new(&["alpha", "value", "method", "abs_error"]);
    for &a in nonempty("alpha", alphas)? {
        let v = igf(m, alpha(a)?, cfg)?;
        let mut row = vec![a.into()];
        row.extend(value_cells(v));
        t.push(row);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Lifetime {
    Residual,
    Past,
}

/// `R*` or `J*` over every `(alpha, u)` combination.
pub fn lifetime(m: &ComposedModel, which: Lifetime, alphas: &[f64], us: &[f64], cfg: &EvalConfig) -> Result<Table> {
    let mut t = Table::new(&["alpha", "u", "value", "method", "abs_error"]);
    let us = nonempty("u", us)?;
    for &a in nonempty("alpha", alphas)? {
        let av = alpha(a)?;
        for &u in us {
            let v = match which {
                Lifetime::Residual => igf_residual(m, av, u, cfg)?,
                Lifetime::Past => igf_past(m, av, u, cfg)?,
            };
            let mut row = vec![a.into(), u.into()];
            row.extend(value_cells(v));
            t.push(row);
        }
    }
    Ok(t)
}

pub fn divergences(m: &ComposedModel, orders: &[f64], cfg: &EvalConfig) -> Result<Table> {
    let p = divergence_panel(m, orders, cfg)?;
    let mut t = Table::new(&["measure", "order", "value"]);
    t.push(vec!["kl".into(), Cell::Empty, p.kl.into()]);
    t.push(vec!["igf_half".into(), 0.5.into(), p.igf_half.into()]);
    t.push(vec!["hellinger".into(), Cell::Empty, p.hellinger.into()]);
    t.push(vec!["bhattacharyya".into(), Cell::Empty, p.bhattacharyya.into()]);
    for (a, r) in p.renyi {
        t.push(vec!["renyi".into(), a.into(), r.into()]);
    }
    Ok(t)
}

pub fn bounds(m: &ComposedModel, alphas: &[f64], cfg: &EvalConfig) -> Result<Table> {
    let mut t = Table::new(&["alpha", "lower", "value", "upper"]);
    for &a in nonempty("alpha", alphas)? {
        let av = alpha(a)?;
        let (lo, hi) = igf_bounds(m, av, cfg)?;
        t.push(vec![a.into(), lo.into(), igf(m, av, cfg)?.value.into(), hi.into()]);
    }
    Ok(t)
}

pub fn series(m: &ComposedModel, alphas: &[f64], terms: u32, cfg: &EvalConfig) -> Result<Table> {
    let mut t = Table::new(&["alpha", "terms", "series", "value"]);
    for &a in nonempty("alpha", alphas)? {
        let av = alpha(a)?;
        let s = igf_series(m, av, terms, cfg)?;
        t.push(vec![
            a.into(),
            (terms as usize).into(),
            s.into(),
            igf(m, av, cfg)?.value.into(),
        ]);
    }
    Ok(t)
}

pub fn transformed(
    q1: &QuantileModel,
    q2: &QuantileModel,
    t1: &MonotoneTransform,
    t2: &MonotoneTransform,
    alphas: &[f64],
    cfg: &EvalConfig,
) -> Result<Table> {
    let mut t = Table::new(&["alpha", "value", "method", "abs_error"]);
    for &a in nonempty("alpha", alphas)? {
        let v = transformed_igf(q1, q2, t1, t2, alpha(a)?, cfg)?;
        let mut row = vec![a.into()];
        row.extend(value_cells(v));
        t.push(row);
    }
    Ok(t)
}

pub fn constancy(m: &ComposedModel, which: Lifetime, a: f64, us: &[f64], cfg: &EvalConfig) -> Result<Table> {
    let av = alpha(a)?;
    let r = match which {
        Lifetime::Residual => residual_constancy_check(m, av, us, cfg)?,
        Lifetime::Past => past_constancy_check(m, av, us, cfg)?,
    };
    let mut t = Table::new(&["u", "value", "deviation", "is_constant"]);
    let flag = if r.is_constant { "true" } else { "false" };
    for (u, v) in r.values {
        t.push(vec![u.into(), v.into(), (v - r.reference).abs().into(), flag.into()]);
    }
    Ok(t)
}

/// Draw `n` values of `Z = Q3(U)` and write them to `path`.
pub fn sample(
    m: &ComposedModel,
    spec: &str,
    n: usize,
    seed: u64,
    path: &Path,
    cfg: &EvalConfig,
) -> Result<OrderedSample> {
    let s = sample_from_q3(m, n, seed, cfg)?;
    let header = format!("qigf sample\npair={spec} n={n} seed={seed}");
    write_sample_file(path, &header, s.values())?;
    Ok(s)
}

/// Ordered sample from a file of `Z` values, or from two raw lifetime files.
pub fn load_sample(path: &Path, reference: Option<&Path>) -> Result<OrderedSample> {
    let x = read_sample_file(path)?;
    let s = match reference {
        None => order_sample(&x)?.with_provenance(SampleSource::FileSample, None),
        Some(r) => empirical_q3_sample(&x, &read_sample_file(r)?)?,
    };
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EstimateTarget {
    Igf,
    Residual,
    Past,
    Kl,
}

pub fn estimate(s: &OrderedSample, kind: EstimateTarget, alphas: &[f64], us: &[f64]) -> Result<Table> {
    let mut t = Table::new(&["kind", "alpha", "u", "estimate", "n"]);
    let n = s.len();
    match kind {
        EstimateTarget::Kl => t.push(vec![
            "kl".into(),
            Cell::Empty,
            Cell::Empty,
            estimate_kl(s)?.into(),
            n.into(),
        ]),
        EstimateTarget::Igf => {
            for &a in nonempty("alpha", alphas)? {
                let e = estimate_igf(s, alpha(a)?)?.estimate;
                t.push(vec!["igf".into(), a.into(), Cell::Empty, e.into(), n.into()]);
            }
        }
        EstimateTarget::Residual | EstimateTarget::Past => {
            let us = nonempty("u", us)?;
            for &a in nonempty("alpha", alphas)? {
                let av = alpha(a)?;
                for &u in us {
                    let (name, e) = if kind == EstimateTarget::Residual {
                        ("residual", estimate_residual(s, av, u)?)
                    } else {
                        ("past", estimate_past(s, av, u)?)
                    };
                    t.push(vec![name.into(), a.into(), u.into(), e.estimate.into(), n.into()]);
                }
            }
        }
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SimTarget {
    Residual,
    Past,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Truth {
    #[default]
    Definition,
    Printed,
}

/// Options of a simulation study beyond the model.
#[derive(Debug, Clone)]
pub struct SimOptions {
    pub alpha: f64,
    /// Empty for `I*`.
    pub u_list: Vec<f64>,
    pub target: SimTarget,
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub jobs: usize,
    pub truth: Truth,
}

pub fn scenario(m: ComposedModel, o: &SimOptions, cfg: &EvalConfig) -> Result<SimScenario> {
    let mut s = SimScenario::new(m, o.alpha, &o.u_list, o.n_list.clone(), o.reps, o.seed)?;
    if o.target == SimTarget::Past && !o.u_list.is_empty() {
        s.targets = o.u_list.iter().map(|&u| Target::Past(u)).collect();
    }
    s.truth_cfg = *cfg;
    s.truth_source = match o.truth {
        Truth::Definition => TruthSource::Definition,
        Truth::Printed => TruthSource::PrintedDisplay,
    };
    s.validate()?;
    Ok(s)
}

/// Run the study with `jobs` worker threads; the result does not depend on
/// `jobs`. Returns the table and the number of redrawn replications.
pub fn simulate(s: &SimScenario, jobs: usize) -> Result<(Table, usize)> {
    if jobs == 0 {
        return Err(CliError::usage("--jobs must be at least 1"));
    }
    let truth = truths(s)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    let mut t = Table::new(&["n", "u", "truth", "mean_estimate", "bias", "mse"]);
    let mut redraws = 0;
    for &n in &s.n_list {
        let reps = pool.install(|| {
            (0..s.reps)
                .into_par_iter()
                .map(|rep| replicate(s, n, rep))
                .collect::<qigf_core::Result<Vec<_>>>()
        })?;
        redraws += reps.iter().map(|r| r.redraws).sum::<usize>();
        for row in aggregate(s, &truth, n, &reps) {
            t.push(vec![
                row.n.into(),
                row.target.u().into(),
                row.truth.into(),
                row.mean_estimate.into(),
                row.bias.into(),
                row.mse.into(),
            ]);
        }
    }
    Ok((t, redraws))
}
