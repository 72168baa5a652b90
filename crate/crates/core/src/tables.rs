//! Standard experiment grids: American puts against their dual calls,
//! currency puts against closed-form values, and static-hedge error sweeps.
//!
//! Rows are computed independently and, with [`ExecMode::Parallel`], in parallel.

use crate::analytic::{bsm_price, MarketState, OptionRight, OptionSpec};
use crate::duality::{to_dual, valuation_via_dual, Engine, Exactness};
use crate::error::Result;
use crate::exec::{map_indices, map_slice, ExecMode};
use crate::hedge::{
    gross_error, net_cost, solve_weights, true_error, ErrorAmount, HedgeConfig, HedgeScheme, HedgeWeights,
};
use crate::lattice::lattice_valuation;
use crate::simulate::{run_hedge_sim_with, SimConfig, SimSummary};

/// American put grid priced on daily trees.
#[derive(Debug, Clone, PartialEq)]
pub struct AmericanGrid {
    pub spots: Vec<f64>,
    pub strike: f64,
    pub rate: f64,
    pub dividend_yield: f64,
    pub vol: f64,
    pub maturity: f64,
    pub steps: usize,
}

impl Default for AmericanGrid {
    fn default() -> Self {
        AmericanGrid {
            spots: vec![36.0, 38.0, 40.0, 42.0, 44.0],
            strike: 40.0,
            rate: 0.06,
            dividend_yield: 0.0,
            vol: 0.4,
            maturity: 1.0,
            steps: 365,
        }
    }
}

impl AmericanGrid {
    fn put_problem(&self, spot: f64, rate: f64, q: f64) -> Result<(OptionSpec, MarketState)> {
        let spec = OptionSpec::american(OptionRight::Put, self.strike, self.maturity);
        spec.validate()?;
        Ok((spec, MarketState::new(spot, rate, q, self.vol)?))
    }
}

/// American put and its dual American call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualPriceRow {
    pub spot: f64,
    pub strike: f64,
    pub put: f64,
    pub dual_spot: f64,
    pub dual_strike: f64,
    pub dual_call: f64,
    /// `(dual_call - put) / put` in percent.
    pub error_pct: f64,
}

pub fn american_put_duality(grid: &AmericanGrid, mode: ExecMode) -> Result<Vec<DualPriceRow>> {
    let engine = Engine::Lattice { steps: grid.steps };
    map_slice(&grid.spots, mode, |&spot| {
        let (spec, mkt) = grid.put_problem(spot, grid.rate, grid.dividend_yield)?;
        let put = engine.price(&spec, &mkt)?;
        let dual = to_dual(&spec, &mkt).dual;
        let dual_call = engine.price(&dual.spec, &dual.market)?;
        Ok(DualPriceRow {
            spot,
            strike: spec.strike,
            put,
            dual_spot: dual.market.spot,
            dual_strike: dual.spec.strike,
            dual_call,
            error_pct: 100.0 * (dual_call - put) / put,
        })
    })
    .into_iter()
    .collect()
}

/// Tree Greeks of an American put next to those recovered from its dual call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualGreeksRow {
    pub spot: f64,
    pub strike: f64,
    pub put_delta: f64,
    pub put_gamma: f64,
    pub dual_call_price: f64,
    pub dual_call_delta: f64,
    pub dual_call_gamma: f64,
    pub delta_via_dual: f64,
    pub gamma_via_dual: f64,
    /// `(delta_via_dual - put_delta) / put_delta` in percent.
    pub delta_error_pct: f64,
    pub gamma_error_pct: f64,
}

pub fn american_put_greeks(grid: &AmericanGrid, mode: ExecMode) -> Result<Vec<DualGreeksRow>> {
    let engine = Engine::Lattice { steps: grid.steps };
    map_slice(&grid.spots, mode, |&spot| {
        let (spec, mkt) = grid.put_problem(spot, grid.rate, grid.dividend_yield)?;
        let direct = lattice_valuation(&spec, &mkt, grid.steps)?;
        let dual = to_dual(&spec, &mkt).dual;
        let dual_val = lattice_valuation(&dual.spec, &dual.market, grid.steps)?;
        let via = valuation_via_dual(&spec, &mkt, engine)?;
        Ok(DualGreeksRow {
            spot,
            strike: spec.strike,
            put_delta: direct.delta,
            put_gamma: direct.gamma,
            dual_call_price: dual_val.price,
            dual_call_delta: dual_val.delta,
            dual_call_gamma: dual_val.gamma,
            delta_via_dual: via.delta,
            gamma_via_dual: via.gamma,
            delta_error_pct: 100.0 * (via.delta - direct.delta) / direct.delta,
            gamma_error_pct: 100.0 * (via.gamma - direct.gamma) / direct.gamma,
        })
    })
    .into_iter()
    .collect()
}

/// American currency put on a tree against the closed-form European value,
/// shown as the dual European call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrencyPutRow {
    pub spot: f64,
    pub strike: f64,
    pub american_put: f64,
    pub dual_spot: f64,
    pub dual_strike: f64,
    pub european_call: f64,
    /// `(european_call - american_put) / american_put` in percent.
    pub error_pct: f64,
    pub exactness: Exactness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurrencyPanel {
    pub domestic_rate: f64,
    pub foreign_rate: f64,
    pub rows: Vec<CurrencyPutRow>,
}

pub const CURRENCY_DOMESTIC_RATES: [f64; 3] = [0.0, 0.03, 0.05];
pub const CURRENCY_FOREIGN_RATE: f64 = 0.06;

/// One panel per domestic rate; the grid's rate and yield are ignored.
pub fn currency_puts(
    grid: &AmericanGrid,
    domestic_rates: &[f64],
    foreign_rate: f64,
    mode: ExecMode,
) -> Result<Vec<CurrencyPanel>> {
    let n = grid.spots.len();
    let cells = map_indices(domestic_rates.len() * n, mode, |i| {
        let (rate, spot) = (domestic_rates[i / n], grid.spots[i % n]);
        let (spec, mkt) = grid.put_problem(spot, rate, foreign_rate)?;
        let american_put = Engine::Lattice { steps: grid.steps }.price(&spec, &mkt)?;
        let dual = to_dual(&spec, &mkt).dual;
        let call_spec = OptionSpec::european(OptionRight::Call, dual.spec.strike, dual.spec.maturity);
        let european_call = bsm_price(&call_spec, &dual.market)?;
        Ok(CurrencyPutRow {
            spot,
            strike: spec.strike,
            american_put,
            dual_spot: dual.market.spot,
            dual_strike: dual.spec.strike,
            european_call,
            error_pct: 100.0 * (european_call - american_put) / american_put,
            exactness: if rate == 0.0 {
                Exactness::Exact
            } else {
                Exactness::Approximation
            },
        })
    });
    let mut cells = cells.into_iter().collect::<Result<Vec<_>>>()?.into_iter();
    Ok(domestic_rates
        .iter()
        .map(|&domestic_rate| CurrencyPanel {
            domestic_rate,
            foreign_rate,
            rows: cells.by_ref().take(n).collect(),
        })
        .collect())
}

/// A value computed under both hedge schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemePair<T> {
    pub bsm_dual: T,
    pub wu_zhu: T,
}

impl<T> SchemePair<T> {
    pub fn get(&self, scheme: HedgeScheme) -> &T {
        match scheme {
            HedgeScheme::BsmDual => &self.bsm_dual,
            HedgeScheme::WuZhu => &self.wu_zhu,
        }
    }
}

pub fn scheme_weights(cfg: &HedgeConfig) -> Result<SchemePair<HedgeWeights>> {
    Ok(SchemePair {
        bsm_dual: solve_weights(cfg, HedgeScheme::BsmDual)?,
        wu_zhu: solve_weights(cfg, HedgeScheme::WuZhu)?,
    })
}

pub const HEDGE_SPOTS: [f64; 11] = [35.0, 40.0, 45.0, 50.0, 55.0, 60.0, 65.0, 70.0, 75.0, 80.0, 85.0];
pub const PATH_SPOTS: [f64; 3] = [45.0, 50.0, 55.0];
pub const SIM_SPOTS: [f64; 5] = [46.0, 48.0, 50.0, 52.0, 54.0];
pub const SIM_DRIFTS: [f64; 2] = [0.04, 0.08];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedgeErrorRow {
    pub spot: f64,
    /// Hedged call value at the evaluation time.
    pub hedged_value: f64,
    pub errors: SchemePair<ErrorAmount>,
}

/// Gross errors at the end of the horizon, one row per horizon spot.
pub fn gross_errors(cfg: &HedgeConfig, spots: &[f64]) -> Result<Vec<HedgeErrorRow>> {
    let w = scheme_weights(cfg)?;
    spots
        .iter()
        .map(|&spot| {
            let bsm_dual = gross_error(cfg, &w.bsm_dual, spot)?;
            let wu_zhu = gross_error(cfg, &w.wu_zhu, spot)?;
            Ok(HedgeErrorRow {
                spot,
                hedged_value: bsm_dual.hedged_value,
                errors: SchemePair { bsm_dual, wu_zhu },
            })
        })
        .collect()
}

/// Net setup costs, one row per setup spot.
pub fn net_costs(cfg: &HedgeConfig, spots: &[f64]) -> Result<Vec<HedgeErrorRow>> {
    let w = scheme_weights(cfg)?;
    spots
        .iter()
        .map(|&spot| {
            let bsm_dual = net_cost(cfg, &w.bsm_dual, spot)?;
            let wu_zhu = net_cost(cfg, &w.wu_zhu, spot)?;
            Ok(HedgeErrorRow {
                spot,
                hedged_value: bsm_dual.hedged_value,
                errors: SchemePair { bsm_dual, wu_zhu },
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrueErrorRow {
    pub spot_at_horizon: f64,
    pub spot_at_setup: f64,
    /// `(true_error, true_error_pct)` per scheme.
    pub errors: SchemePair<(f64, f64)>,
}

/// True errors for every pair of spots, ordered by horizon spot then setup spot.
pub fn true_errors(cfg: &HedgeConfig, spots: &[f64]) -> Result<Vec<TrueErrorRow>> {
    let w = scheme_weights(cfg)?;
    let mut rows = Vec::with_capacity(spots.len() * spots.len());
    for &spot_at_horizon in spots {
        for &spot_at_setup in spots {
            let a = true_error(cfg, &w.bsm_dual, spot_at_setup, spot_at_horizon)?;
            let b = true_error(cfg, &w.wu_zhu, spot_at_setup, spot_at_horizon)?;
            rows.push(TrueErrorRow {
                spot_at_horizon,
                spot_at_setup,
                errors: SchemePair {
                    bsm_dual: (a.true_error, a.true_error_pct),
                    wu_zhu: (b.true_error, b.true_error_pct),
                },
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimRow {
    pub drift: f64,
    pub spot0: f64,
    pub summary: SchemePair<SimSummary>,
}

/// Simulated hedge statistics for every (drift, setup spot) pair. Row `i`
/// uses seed `seed + i`; both schemes in a row share the same draws.
pub fn simulated_errors(
    cfg: &HedgeConfig,
    drifts: &[f64],
    spots: &[f64],
    paths: usize,
    seed: u64,
    mode: ExecMode,
) -> Result<Vec<SimRow>> {
    let mut rows = Vec::with_capacity(drifts.len() * spots.len());
    for (i, (drift, spot0)) in drifts
        .iter()
        .flat_map(|&d| spots.iter().map(move |&s| (d, s)))
        .enumerate()
    {
        let base = SimConfig {
            spot0,
            drift,
            paths,
            seed: seed.wrapping_add(i as u64),
            hedge: *cfg,
            scheme: HedgeScheme::BsmDual,
        };
        let bsm_dual = run_hedge_sim_with(&base, mode)?;
        let wu_zhu = run_hedge_sim_with(
            &SimConfig {
                scheme: HedgeScheme::WuZhu,
                ..base
            },
            mode,
        )?;
        rows.push(SimRow {
            drift,
            spot0,
            summary: SchemePair { bsm_dual, wu_zhu },
        });
    }
    Ok(rows)
}
