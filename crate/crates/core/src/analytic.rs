//! Closed-form European prices and Greeks under Black-Scholes-Merton.
//!
//! Equity options carry a continuous dividend yield `q`; for currency options
//! (Garman-Kohlhagen) `q` is the foreign risk-free rate.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptionRight {
    Call,
    Put,
}

impl OptionRight {
    pub fn flip(self) -> Self {
        match self {
            OptionRight::Call => OptionRight::Put,
            OptionRight::Put => OptionRight::Call,
        }
    }

    /// Payoff at `spot` for the given strike.
    pub fn intrinsic(self, spot: f64, strike: f64) -> f64 {
        match self {
            OptionRight::Call => (spot - strike).max(0.0),
            OptionRight::Put => (strike - spot).max(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExerciseStyle {
    European,
    American,
}

/// Market inputs. Rates and yields are continuously compounded per annum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketState {
    pub spot: f64,
    pub rate: f64,
    /// Dividend yield, or the foreign rate for currency options.
    pub dividend_yield: f64,
    pub vol: f64,
}

impl MarketState {
    pub fn new(spot: f64, rate: f64, dividend_yield: f64, vol: f64) -> Result<Self> {
        let m = MarketState {
            spot,
            rate,
            dividend_yield,
            vol,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spot.is_finite() && self.spot > 0.0) {
            return Err(Error::invalid(format!("spot must be > 0, got {}", self.spot)));
        }
        if !(self.vol.is_finite() && self.vol > 0.0) {
            return Err(Error::invalid(format!("volatility must be > 0, got {}", self.vol)));
        }
        if !self.rate.is_finite() || !self.dividend_yield.is_finite() {
            return Err(Error::invalid("rate and yield must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionSpec {
    pub right: OptionRight,
    pub style: ExerciseStyle,
    pub strike: f64,
    /// Time to expiry in years.
    pub maturity: f64,
}

impl OptionSpec {
    pub fn new(right: OptionRight, style: ExerciseStyle, strike: f64, maturity: f64) -> Result<Self> {
        let s = OptionSpec {
            right,
            style,
            strike,
            maturity,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn european(right: OptionRight, strike: f64, maturity: f64) -> Self {
        OptionSpec {
            right,
            style: ExerciseStyle::European,
            strike,
            maturity,
        }
    }

    pub fn american(right: OptionRight, strike: f64, maturity: f64) -> Self {
        OptionSpec {
            right,
            style: ExerciseStyle::American,
            strike,
            maturity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strike.is_finite() && self.strike > 0.0) {
            return Err(Error::invalid(format!("strike must be > 0, got {}", self.strike)));
        }
        if !(self.maturity.is_finite() && self.maturity > 0.0) {
            return Err(Error::invalid(format!(
                "maturity must be > 0, got {}",
                self.maturity
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct D1D2 {
    pub d1: f64,
    pub d2: f64,
}

/// Standard normal CDF, via `erfc` so both tails keep full relative precision.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

pub fn d1_d2(mkt: &MarketState, strike: f64, maturity: f64) -> Result<D1D2> {
    mkt.validate()?;
    if !(strike > 0.0 && strike.is_finite()) {
        return Err(Error::invalid(format!("strike must be > 0, got {strike}")));
    }
    if !(maturity > 0.0 && maturity.is_finite()) {
        return Err(Error::invalid(format!("maturity must be > 0, got {maturity}")));
    }
    Ok(d1_d2_raw(
        mkt.spot,
        strike,
        mkt.rate,
        mkt.dividend_yield,
        mkt.vol,
        maturity,
    ))
}

fn d1_d2_raw(spot: f64, strike: f64, rate: f64, q: f64, vol: f64, tau: f64) -> D1D2 {
    let vol_sqrt_t = vol * tau.sqrt();
    let d1 = ((spot / strike).ln() + (rate - q + 0.5 * vol * vol) * tau) / vol_sqrt_t;
    D1D2 {
        d1,
        d2: d1 - vol_sqrt_t,
    }
}

/// European value without input validation. Callers guarantee positive
/// spot, strike, vol and time to expiry.
pub(crate) fn european_value(
    right: OptionRight,
    spot: f64,
    strike: f64,
    rate: f64,
    q: f64,
    vol: f64,
    tau: f64,
) -> f64 {
    let D1D2 { d1, d2 } = d1_d2_raw(spot, strike, rate, q, vol, tau);
    let fwd_spot = spot * (-q * tau).exp();
    let pv_strike = strike * (-rate * tau).exp();
    let v = match right {
        OptionRight::Call => fwd_spot * norm_cdf(d1) - pv_strike * norm_cdf(d2),
        OptionRight::Put => pv_strike * norm_cdf(-d2) - fwd_spot * norm_cdf(-d1),
    };
    v.max(0.0)
}

/// Call value used by the hedging code: spot, strike, time to expiry.
pub(crate) fn call_value(spot: f64, strike: f64, rate: f64, q: f64, vol: f64, tau: f64) -> f64 {
    european_value(OptionRight::Call, spot, strike, rate, q, vol, tau)
}

fn check_european(spec: &OptionSpec, mkt: &MarketState) -> Result<()> {
    spec.validate()?;
    mkt.validate()?;
    if spec.style != ExerciseStyle::European {
        return Err(Error::UnsupportedStyle {
            engine: "analytic",
            style: spec.style,
        });
    }
    Ok(())
}

pub fn bsm_price(spec: &OptionSpec, mkt: &MarketState) -> Result<f64> {
    check_european(spec, mkt)?;
    Ok(european_value(
        spec.right,
        mkt.spot,
        spec.strike,
        mkt.rate,
        mkt.dividend_yield,
        mkt.vol,
        spec.maturity,
    ))
}

/// Spot delta: `e^{-qT}N(d1)` for calls, `-e^{-qT}N(-d1)` for puts.
pub fn bsm_delta(spec: &OptionSpec, mkt: &MarketState) -> Result<f64> {
    check_european(spec, mkt)?;
    let D1D2 { d1, .. } = d1_d2(mkt, spec.strike, spec.maturity)?;
    let carry = (-mkt.dividend_yield * spec.maturity).exp();
    Ok(match spec.right {
        OptionRight::Call => carry * norm_cdf(d1),
        OptionRight::Put => -carry * norm_cdf(-d1),
    })
}

/// Spot gamma, identical for calls and puts.
pub fn bsm_gamma(spec: &OptionSpec, mkt: &MarketState) -> Result<f64> {
    check_european(spec, mkt)?;
    let D1D2 { d1, .. } = d1_d2(mkt, spec.strike, spec.maturity)?;
    let carry = (-mkt.dividend_yield * spec.maturity).exp();
    Ok(carry * norm_pdf(d1) / (mkt.spot * mkt.vol * spec.maturity.sqrt()))
}
