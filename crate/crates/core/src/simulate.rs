//! Monte Carlo hedge-error statistics under geometric Brownian motion.
//!
//! Each path draws one standard normal and moves the spot to the end of the
//! hedge horizon. Path `j` uses ChaCha8 seeded with `seed` on stream `j`, with
//! the normal drawn by the ziggurat sampler from `rand_distr`, so the draws do
//! not depend on thread count or [`ExecMode`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::hedge::{solve_weights, HedgeConfig, HedgeScheme, PathEvaluator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub spot0: f64,
    /// Real-world drift `mu` of the underlying.
    pub drift: f64,
    pub paths: usize,
    pub seed: u64,
    pub hedge: HedgeConfig,
    pub scheme: HedgeScheme,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(Error::invalid("need at least one path"));
        }
        if !(self.spot0.is_finite() && self.spot0 > 0.0) {
            return Err(Error::invalid(format!("spot must be > 0, got {}", self.spot0)));
        }
        if !self.drift.is_finite() {
            return Err(Error::invalid("drift must be finite"));
        }
        self.hedge.validate()
    }
}

/// Mean and mean-absolute percentage true errors, and RMSE in currency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSummary {
    pub mhe_pct: f64,
    pub mae_pct: f64,
    pub rmse: f64,
    pub paths: usize,
}

/// `S0 exp((mu - sigma^2/2) T_h + sigma sqrt(T_h) z)`.
pub fn gbm_terminal(spot0: f64, drift: f64, vol: f64, horizon: f64, z: f64) -> f64 {
    spot0 * ((drift - 0.5 * vol * vol) * horizon + vol * horizon.sqrt() * z).exp()
}

/// `n` standard normal draws; draw `j` comes from stream `j` of `seed`.
pub fn normal_draws(seed: u64, n: usize, mode: ExecMode) -> Vec<f64> {
    exec::map_indices(n, mode, |j| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(j as u64);
        rng.sample(StandardNormal)
    })
}

pub fn run_hedge_sim(cfg: &SimConfig) -> Result<SimSummary> {
    run_hedge_sim_with(cfg, ExecMode::default())
}

pub fn run_hedge_sim_with(cfg: &SimConfig, mode: ExecMode) -> Result<SimSummary> {
    cfg.validate()?;
    let draws = normal_draws(cfg.seed, cfg.paths, mode);
    summarize_draws(cfg, &draws, mode)
}

/// Hedge statistics for caller-supplied normal draws (`cfg.paths` and
/// `cfg.seed` are ignored).
pub fn summarize_draws(cfg: &SimConfig, draws: &[f64], mode: ExecMode) -> Result<SimSummary> {
    if draws.is_empty() {
        return Err(Error::invalid("need at least one draw"));
    }
    let hedge = &cfg.hedge;
    let weights = solve_weights(hedge, cfg.scheme)?;
    let eval = PathEvaluator::new(hedge, &weights, cfg.spot0)?;

    let per_path = exec::map_slice(draws, mode, |&z| {
        let spot = gbm_terminal(cfg.spot0, cfg.drift, hedge.local_vol, hedge.horizon, z);
        let r = eval.report(spot);
        (r.true_error, r.true_error / r.gross.hedged_value)
    });

    let n = per_path.len() as f64;
    let (mut sum_rel, mut sum_abs, mut sum_sq) = (0.0, 0.0, 0.0);
    for &(err, rel) in &per_path {
        sum_rel += rel;
        sum_abs += rel.abs();
        sum_sq += err * err;
    }
    Ok(SimSummary {
        mhe_pct: 100.0 * sum_rel / n,
        mae_pct: 100.0 * sum_abs / n,
        rmse: (sum_sq / n).sqrt(),
        paths: per_path.len(),
    })
}
