//! Cox-Ross-Rubinstein binomial trees.
//!
//! `u = e^{σ√δ}`, `d = 1/u`, risk-neutral up-probability
//! `Q = (e^{(r-q)δ} - d) / (u - d)` and one-step discount `e^{-rδ}`.
//! Delta and gamma are read off the step-1 and step-2 nodes and quoted at
//! time zero.

use crate::analytic::{ExerciseStyle, MarketState, OptionSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    pub steps: usize,
    pub up: f64,
    pub down: f64,
    pub prob_up: f64,
    /// Year fraction per step.
    pub dt: f64,
    /// Log of the up move, `σ√δ`.
    log_up: f64,
    discount: f64,
}

impl LatticeParams {
    pub fn discount(&self) -> f64 {
        self.discount
    }
}

pub fn build_lattice(mkt: &MarketState, maturity: f64, steps: usize) -> Result<LatticeParams> {
    mkt.validate()?;
    if steps == 0 {
        return Err(Error::invalid("lattice needs at least one step"));
    }
    if !(maturity > 0.0 && maturity.is_finite()) {
        return Err(Error::invalid(format!("maturity must be > 0, got {maturity}")));
    }
    let dt = maturity / steps as f64;
    let log_up = mkt.vol * dt.sqrt();
    let up = log_up.exp();
    let down = (-log_up).exp();
    let growth = ((mkt.rate - mkt.dividend_yield) * dt).exp();
    if !(down < growth && growth < up) {
        return Err(Error::NoArbitrage { down, growth, up });
    }
    Ok(LatticeParams {
        steps,
        up,
        down,
        prob_up: (growth - down) / (up - down),
        dt,
        log_up,
        discount: (-mkt.rate * dt).exp(),
    })
}

/// Price, delta and gamma from one backward induction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeGreeks {
    pub price: f64,
    pub delta: f64,
    pub gamma: f64,
}

struct Rollback {
    price: f64,
    level1: [f64; 2],
    level2: [f64; 3],
    params: LatticeParams,
}

fn roll_back(spec: &OptionSpec, mkt: &MarketState, steps: usize) -> Result<Rollback> {
    spec.validate()?;
    let params = build_lattice(mkt, spec.maturity, steps)?;
    let n = steps;
    // spot_at[k] = S u^{k - n}, k = 0..=2n; node j of level i sits at k = 2j - i + n
    let spot_at: Vec<f64> = (0..=2 * n)
        .map(|k| mkt.spot * (params.log_up * (k as f64 - n as f64)).exp())
        .collect();
    let right = spec.right;
    let strike = spec.strike;
    let american = spec.style == ExerciseStyle::American;
    let p = params.prob_up;
    let disc = params.discount;

    let mut values: Vec<f64> = (0..=n)
        .map(|j| right.intrinsic(spot_at[2 * j], strike))
        .collect();
    let mut level1 = [f64::NAN; 2];
    let mut level2 = [f64::NAN; 3];

    for i in (0..n).rev() {
        for j in 0..=i {
            let hold = disc * (p * values[j + 1] + (1.0 - p) * values[j]);
            values[j] = if american {
                let exercise = right.intrinsic(spot_at[2 * j + n - i], strike);
                // ties keep the hold value
                if exercise > hold {
                    exercise
                } else {
                    hold
                }
            } else {
                hold
            };
        }
        match i {
            2 => level2.copy_from_slice(&values[..3]),
            1 => level1.copy_from_slice(&values[..2]),
            _ => {}
        }
    }
    Ok(Rollback {
        price: values[0],
        level1,
        level2,
        params,
    })
}

pub fn lattice_price(spec: &OptionSpec, mkt: &MarketState, steps: usize) -> Result<f64> {
    Ok(roll_back(spec, mkt, steps)?.price)
}

/// Price plus tree delta and gamma. Needs at least two steps.
pub fn lattice_valuation(spec: &OptionSpec, mkt: &MarketState, steps: usize) -> Result<LatticeGreeks> {
    if steps < 2 {
        return Err(Error::invalid("tree Greeks need at least two steps"));
    }
    let rb = roll_back(spec, mkt, steps)?;
    let s = mkt.spot;
    let (u, d) = (rb.params.up, rb.params.down);
    let delta = (rb.level1[1] - rb.level1[0]) / (s * u - s * d);

    let (s_dd, s_ud, s_uu) = (s * d * d, s * u * d, s * u * u);
    let [v_dd, v_ud, v_uu] = rb.level2;
    let upper = (v_uu - v_ud) / (s_uu - s_ud);
    let lower = (v_ud - v_dd) / (s_ud - s_dd);
    let gamma = (upper - lower) / (0.5 * (s_uu - s_dd));

    Ok(LatticeGreeks {
        price: rb.price,
        delta,
        gamma,
    })
}

pub fn lattice_delta(spec: &OptionSpec, mkt: &MarketState, steps: usize) -> Result<f64> {
    Ok(lattice_valuation(spec, mkt, steps)?.delta)
}

pub fn lattice_gamma(spec: &OptionSpec, mkt: &MarketState, steps: usize) -> Result<f64> {
    Ok(lattice_valuation(spec, mkt, steps)?.gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExerciseHint {
    HoldLikely,
    ExerciseLikely,
}

/// One-step test for an American call: holding beats exercise to first
/// order in the step size when `S·q < K·r`. Ties hold.
pub fn early_exercise_hint(spot: f64, strike: f64, rate: f64, dividend_yield: f64) -> ExerciseHint {
    if spot * dividend_yield > strike * rate {
        ExerciseHint::ExerciseLikely
    } else {
        ExerciseHint::HoldLikely
    }
}
