//! Quantile-based relative information generating function.
//!
//! For two lifetimes `X1`, `X2` with quantile functions `Q1`, `Q2`, the
//! distortion `Q3 = Q2⁻¹ ∘ Q1` maps `[0, 1]` into `[0, 1]` and its quantile
//! density `q3` carries everything needed to compare the two laws:
//!
//! | Functional | Definition |
//! |------------|------------|
//! | [`igf`] | `I*(α) = ∫₀¹ q3(p)^(1-α) dp` |
//! | [`igf_residual`] | `R*(α, u) = (1-Q3(u))^(α-1) / (1-u)^α · ∫ᵤ¹ q3^(1-α)` |
//! | [`igf_past`] | `J*(α, u) = Q3(u)^(α-1) / u^α · ∫₀ᵘ q3^(1-α)` |
//! | [`kl_divergence`] | `-∫₀¹ log q3(p) dp`, the α-derivative of `I*` at 1 |
//!
//! Hellinger, Bhattacharyya and Rényi measures are recombinations of the same
//! `I*` values ([`divergence_panel`]). The [`estimation`] module provides the
//! spacing-based plug-in estimators built on the Parzen quantile estimator,
//! and [`sim`] runs seeded bias/MSE studies of those estimators.
//!
//! The crate is `no_std` and only needs `alloc`. Floating-point special
//! functions come from `libm`.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod math;

pub mod composed;
pub mod config;
pub mod divergence;
pub mod error;
pub mod estimation;
pub mod igf;
pub mod quadrature;
pub mod quantile;
pub mod roots;
pub mod semiparam;
pub mod sim;

pub use composed::{compose, ClosedForm, ComposedModel};
pub use config::EvalConfig;
pub use divergence::{divergence_panel, DivergencePanel};
pub use error::{Error, Result};
pub use estimation::{
    empirical_q3_sample, estimate_igf, estimate_kl, estimate_past, estimate_residual, order_sample, parzen_q3,
    parzen_quantile, sample_from_q3, EstimateKind, EstimateReport, OrderedSample, SampleSource,
};
pub use igf::{
    generalized_kl, igf, igf_bounds, igf_past, igf_residual, igf_series, kl_by_derivative, kl_divergence, log_moment,
    AlphaValue, IgfValue, Method,
};
pub use quantile::{Family, QuantileModel};
pub use semiparam::{
    distortion_to_composed, past_constancy_check, residual_constancy_check, transformed_igf, ConstancyReport,
    DistortionSpec, MonotoneMap, MonotoneTransform, UnitDistribution,
};
pub use sim::{run_simulation, SimResult, SimRow, SimScenario, Target, TruthSource};
