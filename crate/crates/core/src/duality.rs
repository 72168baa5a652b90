//! Put-call equality through the strike/spot dual space.
//!
//! The dual of `(right; S0, r; K, q)` is `(flip(right); K, q; S0, r)`: the
//! strike becomes the underlying, the spot becomes the strike, and the rate
//! and yield trade places. Prices agree; the original spot Greeks follow from
//! the dual Greeks taken with respect to the dual underlying:
//!
//! ```text
//! dV/dS0   = (V~ - K * Delta~) / S0
//! d2V/dS0^2 = K^2 * Gamma~ / S0^2
//! ```

use crate::analytic::{self, ExerciseStyle, MarketState, OptionRight, OptionSpec};
use crate::error::{Error, Result};
use crate::lattice;

/// An option together with the market it is priced in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionProblem {
    pub spec: OptionSpec,
    pub market: MarketState,
}

impl OptionProblem {
    pub fn new(spec: OptionSpec, market: MarketState) -> Self {
        OptionProblem { spec, market }
    }

    pub fn dual(&self) -> OptionProblem {
        OptionProblem {
            spec: OptionSpec {
                right: self.spec.right.flip(),
                style: self.spec.style,
                strike: self.market.spot,
                maturity: self.spec.maturity,
            },
            market: MarketState {
                spot: self.spec.strike,
                rate: self.market.dividend_yield,
                dividend_yield: self.market.rate,
                vol: self.market.vol,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualProblem {
    pub original: OptionProblem,
    pub dual: OptionProblem,
}

pub fn to_dual(spec: &OptionSpec, mkt: &MarketState) -> DualProblem {
    let original = OptionProblem::new(*spec, *mkt);
    DualProblem {
        original,
        dual: original.dual(),
    }
}

/// Pricing backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Closed form; European exercise only.
    Analytic,
    /// CRR tree with the given number of steps.
    Lattice { steps: usize },
}

/// Price with spot delta and gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Valuation {
    pub price: f64,
    pub delta: f64,
    pub gamma: f64,
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Lattice { .. } => "lattice",
        }
    }

    pub fn price(&self, spec: &OptionSpec, mkt: &MarketState) -> Result<f64> {
        match *self {
            Engine::Analytic => analytic::bsm_price(spec, mkt),
            Engine::Lattice { steps } => lattice::lattice_price(spec, mkt, steps),
        }
    }

    pub fn valuation(&self, spec: &OptionSpec, mkt: &MarketState) -> Result<Valuation> {
        match *self {
            Engine::Analytic => Ok(Valuation {
                price: analytic::bsm_price(spec, mkt)?,
                delta: analytic::bsm_delta(spec, mkt)?,
                gamma: analytic::bsm_gamma(spec, mkt)?,
            }),
            Engine::Lattice { steps } => {
                let g = lattice::lattice_valuation(spec, mkt, steps)?;
                Ok(Valuation {
                    price: g.price,
                    delta: g.delta,
                    gamma: g.gamma,
                })
            }
        }
    }

    fn check_style(&self, style: ExerciseStyle) -> Result<()> {
        if *self == Engine::Analytic && style != ExerciseStyle::European {
            return Err(Error::UnsupportedStyle {
                engine: self.name(),
                style,
            });
        }
        Ok(())
    }
}

pub fn price_via_dual(spec: &OptionSpec, mkt: &MarketState, engine: Engine) -> Result<f64> {
    engine.check_style(spec.style)?;
    let dual = to_dual(spec, mkt).dual;
    engine.price(&dual.spec, &dual.market)
}

/// Original-space price and Greeks, all computed in the dual space.
pub fn valuation_via_dual(spec: &OptionSpec, mkt: &MarketState, engine: Engine) -> Result<Valuation> {
    engine.check_style(spec.style)?;
    spec.validate()?;
    mkt.validate()?;
    let dual = to_dual(spec, mkt).dual;
    let v = engine.valuation(&dual.spec, &dual.market)?;
    let (spot, strike) = (mkt.spot, spec.strike);
    Ok(Valuation {
        price: v.price,
        delta: (v.price - strike * v.delta) / spot,
        gamma: strike * strike * v.gamma / (spot * spot),
    })
}

pub fn delta_via_dual(spec: &OptionSpec, mkt: &MarketState, engine: Engine) -> Result<f64> {
    Ok(valuation_via_dual(spec, mkt, engine)?.delta)
}

pub fn gamma_via_dual(spec: &OptionSpec, mkt: &MarketState, engine: Engine) -> Result<f64> {
    Ok(valuation_via_dual(spec, mkt, engine)?.gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exactness {
    Exact,
    Approximation,
}

/// Closed-form value for an American currency put, with `dividend_yield`
/// read as the foreign rate.
///
/// With a zero domestic rate the dual call carries no yield and is never
/// exercised early, so the European put value is exact. For `0 < r < r_f`
/// the early-exercise premium is small and the value is an approximation.
pub fn price_currency_put_approx(spec: &OptionSpec, mkt: &MarketState) -> Result<(f64, Exactness)> {
    if spec.right != OptionRight::Put || spec.style != ExerciseStyle::American {
        return Err(Error::invalid("currency put approximation needs an American put"));
    }
    let european = OptionSpec::european(OptionRight::Put, spec.strike, spec.maturity);
    let price = analytic::bsm_price(&european, mkt)?;
    let exactness = if mkt.rate == 0.0 {
        Exactness::Exact
    } else {
        Exactness::Approximation
    };
    Ok((price, exactness))
}
