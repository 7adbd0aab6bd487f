//! Argument definitions and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qigf_core::EvalConfig;

use crate::commands::{self, EstimateTarget, Lifetime, SimOptions, SimTarget, Truth};
use crate::error::{CliError, Result};
use crate::figures::figure;
use crate::grammar::{parse_model, parse_pair, parse_transform};
use crate::io::{Format, Table};
use crate::prostate::prostate;

#[derive(Debug, Parser)]
#[command(
    name = "qigf",
    version,
    about = "Quantile-based relative information generating functions"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write the result table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Integrals over [0, 1] are taken on [eps, 1 - eps].
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub abs_tol: Option<f64>,
    /// Maximum number of adaptive quadrature subdivisions.
    #[arg(long, global = true)]
    pub max_subdivisions: Option<usize>,
}

impl Global {
    pub fn eval_config(&self) -> Result<EvalConfig> {
        let mut c = EvalConfig::default();
        if let Some(v) = self.eps {
            c.endpoint_eps = v;
        }
        if let Some(v) = self.rel_tol {
            c.quad_rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            c.quad_abs_tol = v;
        }
        if let Some(v) = self.max_subdivisions {
            c.max_subdivisions = v;
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct PairArg {
    /// Pair of models (`exp:2/exp:1`, `exp:2,1`), a distortion (`ph:2`,
    /// `po:0.5`, `pocdf:2`, `rph:2`, `gsurv:power:2`, `gcdf:table:FILE`) or
    /// `identity`.
    #[arg(long)]
    pub pair: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// I*(alpha) for each alpha.
    Eval {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
        alpha: Vec<f64>,
    },
    /// Residual function R*(alpha, u).
    Residual {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
        alpha: Vec<f64>,
        #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
        u: Vec<f64>,
    },
    /// Past function J*(alpha, u).
    Past {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
        alpha: Vec<f64>,
        #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
        u: Vec<f64>,
    },
    /// K-L, Hellinger, Bhattacharyya and Renyi divergences.
    Divergences {
        #[command(flatten)]
        pair: PairArg,
        /// Renyi orders.
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
        orders: Vec<f64>,
    },
    /// Lower and upper bounds on I*(alpha).
    Bounds {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long, required = true, value_delimiter = ',')]
        alpha: Vec<f64>,
    },
    /// Log-moment series for I*(alpha).
    Series {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long, required = true, value_delimiter = ',')]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 8)]
        terms: u32,
    },
    /// I*(alpha) for the laws of T1(X1) and T2(X2).
    Transformed {
        #[arg(long)]
        q1: String,
        #[arg(long)]
        q2: String,
        /// identity, log, exp, affine:scale,shift or power:exponent.
        #[arg(long, default_value = "identity")]
        t1: String,
        #[arg(long, default_value = "identity")]
        t2: String,
        #[arg(long, required = true, value_delimiter = ',')]
        alpha: Vec<f64>,
    },
    /// Check whether R* or J* is constant in u.
    Constancy {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long, value_enum)]
        kind: Lifetime,
        #[arg(long)]
        alpha: f64,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0.05,0.15,0.25,0.35,0.45,0.55,0.65,0.75,0.85,0.95"
        )]
        u: Vec<f64>,
    },
    /// Draw Z = Q3(U) and write it as a sample file.
    Sample {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        n: usize,
        #[arg(long, env = "QIGF_SEED", default_value_t = 1)]
        seed: u64,
    },
    /// Plug-in estimates from a sample file.
    Estimate {
        /// File of Z values, or of raw X1 lifetimes with --reference.
        #[arg(long)]
        input: PathBuf,
        /// File of raw X2 lifetimes; switches to two-sample mode.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = EstimateTarget::Igf)]
        kind: EstimateTarget,
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        u: Vec<f64>,
    },
    /// Bias and MSE of the plug-in estimators by simulation.
    Simulate {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        alpha: f64,
        /// Ages for R* or J*; omit for I*.
        #[arg(long, value_delimiter = ',')]
        u: Vec<f64>,
        #[arg(long, value_enum, default_value_t = SimTarget::Residual)]
        target: SimTarget,
        #[arg(long, required = true, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, env = "QIGF_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// `printed` uses the displayed integrand of the Govindarajulu vs
        /// reciprocal exponential study as the true value.
        #[arg(long, value_enum, default_value_t = Truth::Definition)]
        truth: Truth,
    },
    /// Data for figures 1 to 4.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
    },
    /// Placebo vs 5 mg DES analysis: divergence table and estimate-vs-model series.
    Prostate {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, env = "QIGF_SEED", default_value_t = 1)]
        seed: u64,
        /// Directory for the Q3, I*, R* and J* comparison tables.
        #[arg(long)]
        figures_dir: Option<PathBuf>,
        /// Fitted 1 mg model, e.g. `power:74.13,4`; adds a placebo_vs_1mg column.
        #[arg(long)]
        one_mg: Option<String>,
    },
}

/// Outcome of a command: the main table plus optional notes for stderr.
#[derive(Debug)]
pub struct Outcome {
    pub table: Option<Table>,
    pub notes: Vec<String>,
}

fn table(t: Table) -> Outcome {
    Outcome {
        table: Some(t),
        notes: Vec::new(),
    }
}

/// Execute `cli` and return what should be written. Side outputs (sample
/// files, prostate figures) are written here.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = cli.global.eval_config()?;
    let g = &cli.global;
    Ok(match &cli.command {
        Command::Eval { pair, alpha } => table(commands::eval(&parse_pair(&pair.pair)?, alpha, &cfg)?),
        Command::Residual { pair, alpha, u } => table(commands::lifetime(
            &parse_pair(&pair.pair)?,
            Lifetime::Residual,
            alpha,
            u,
            &cfg,
        )?),
        Command::Past { pair, alpha, u } => table(commands::lifetime(
            &parse_pair(&pair.pair)?,
            Lifetime::Past,
            alpha,
            u,
            &cfg,
        )?),
        Command::Divergences { pair, orders } => table(commands::divergences(&parse_pair(&pair.pair)?, orders, &cfg)?),
        Command::Bounds { pair, alpha } => table(commands::bounds(&parse_pair(&pair.pair)?, alpha, &cfg)?),
        Command::Series { pair, alpha, terms } => {
            table(commands::series(&parse_pair(&pair.pair)?, alpha, *terms, &cfg)?)
        }
        Command::Transformed { q1, q2, t1, t2, alpha } => table(commands::transformed(
            &parse_model(q1)?,
            &parse_model(q2)?,
            &parse_transform(t1)?,
            &parse_transform(t2)?,
            alpha,
            &cfg,
        )?),
        Command::Constancy { pair, kind, alpha, u } => {
            table(commands::constancy(&parse_pair(&pair.pair)?, *kind, *alpha, u, &cfg)?)
        }
        Command::Sample { pair, n, seed } => {
            let path = g.out.as_deref().ok_or_else(|| CliError::usage("sample needs --out"))?;
            commands::sample(&parse_pair(&pair.pair)?, &pair.pair, *n, *seed, path, &cfg)?;
            Outcome {
                table: None,
                notes: vec![format!("wrote {n} values to {}", path.display())],
            }
        }
        Command::Estimate {
            input,
            reference,
            kind,
            alpha,
            u,
        } => {
            let s = commands::load_sample(input, reference.as_deref())?;
            table(commands::estimate(&s, *kind, alpha, u)?)
        }
        Command::Simulate {
            pair,
            alpha,
            u,
            target,
            n,
            reps,
            seed,
            jobs,
            truth,
        } => {
            let o = SimOptions {
                alpha: *alpha,
                u_list: u.clone(),
                target: *target,
                n_list: n.clone(),
                reps: *reps,
                seed: *seed,
                jobs: *jobs,
                truth: *truth,
            };
            let s = commands::scenario(parse_pair(&pair.pair)?, &o, &cfg)?;
            let (t, redraws) = commands::simulate(&s, o.jobs)?;
            Outcome {
                table: Some(t),
                notes: vec![format!("redraws: {redraws}")],
            }
        }
        Command::Figure { id } => table(figure(*id, &cfg)?),
        Command::Prostate {
            n,
            seed,
            figures_dir,
            one_mg,
        } => {
            let one = one_mg.as_deref().map(parse_model).transpose()?;
            let r = prostate(*n, *seed, one, &cfg)?;
            let mut notes = Vec::new();
            if let Some(dir) = figures_dir {
                std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.clone(),
                    source,
                })?;
                let ext = match g.format {
                    Format::Csv => "csv",
                    Format::Json => "json",
                };
                for (stem, t) in &r.figures {
                    let p = dir.join(format!("{stem}.{ext}"));
                    t.emit(g.format, Some(&p))?;
                    notes.push(format!("wrote {}", p.display()));
                }
            }
            Outcome {
                table: Some(r.divergences),
                notes,
            }
        }
    })
}

/// Parse-free entry point used by the binary and tests: run and write.
pub fn run(cli: &Cli) -> Result<Vec<String>> {
    let o = execute(cli)?;
    if let Some(t) = o.table {
        t.emit(cli.global.format, cli.global.out.as_deref())?;
    }
    Ok(o.notes)
}
