//! Option pricing in the strike/spot dual space.
//!
//! A put on `(spot, rate; strike, yield)` is priced as a call on
//! `(strike, yield; spot, rate)` and vice versa. The crate provides:
//!
//! * [`analytic`]: closed-form European prices and Greeks (continuous yield,
//!   or Garman-Kohlhagen with the yield read as the foreign rate).
//! * [`lattice`]: Cox-Ross-Rubinstein trees for American and European
//!   exercise, with delta and gamma read off the first two levels.
//! * [`duality`]: the dual transform and engine-agnostic dual pricing.
//! * [`hedge`]: static hedge weights built from three shorter-dated calls,
//!   plus gross/net/true hedge-error accounting.
//! * [`simulate`]: Monte Carlo hedge-error statistics under GBM.
//! * [`tables`]: the standard experiment grids used by the CLI and the
//!   acceptance suite.
//!
//! Data-parallel loops go through [`exec::ExecMode`]; with the `parallel`
//! feature disabled every mode runs serially.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod duality;
pub mod error;
pub mod exec;
pub mod hedge;
pub mod lattice;
pub mod simulate;
pub mod tables;

pub use analytic::{ExerciseStyle, MarketState, OptionRight, OptionSpec};
pub use duality::Engine;
pub use error::{Error, Result};
pub use exec::ExecMode;
pub use hedge::{HedgeConfig, HedgeScheme, HedgeWeights};
pub use simulate::{SimConfig, SimSummary};
