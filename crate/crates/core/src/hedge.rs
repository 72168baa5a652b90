//! Static hedging of a call with three shorter-dated calls.
//!
//! The target `(K, T)` is replicated over a horizon `T_h` by calls at
//! `(K_d, T_o)`, `(K_c, T_c)` and `(K_u, T_o)`. Weights come from matching a
//! Taylor expansion around `(K, T_h)`, where the strike-space pricing equation
//! removes the second strike derivative:
//!
//! ```text
//! | 1 + g h_d^2     1 + g h_c^2     1 + g h_u^2   |   | w_d |   | 1 |
//! | (1 + b h_d) h_d (1 + b h_c) h_c (1 + b h_u) h_u | * | w_c | = | 0 |
//! | h_d^2 - a_o     h_c^2 - a_c     h_u^2 - a_o   |   | w_u |   | 1 |
//!
//! h_x = (K_x - K) / (sigma K sqrt(T - T_h))
//! a_x = (T_h - T_x) / (T - T_h)
//! b   = (r - q) sqrt(T - T_h) / sigma
//! g   = q (T - T_h)
//! ```
//!
//! [`HedgeScheme::WuZhu`] is the zero-carry special case with `r = q = 0`
//! and the horizon set to the front maturity `T_o`.

use crate::analytic::call_value;
use crate::error::{Error, Result};

/// Determinants below this magnitude are treated as singular.
pub const SINGULAR_DETERMINANT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedgeConfig {
    /// Strike `K` of the hedged call.
    pub target_strike: f64,
    /// Maturity `T` of the hedged call.
    pub target_maturity: f64,
    pub strike_down: f64,
    pub strike_center: f64,
    pub strike_up: f64,
    /// `T_o`, shared by the down and up legs.
    pub front_maturity: f64,
    /// `T_c`, for the center leg.
    pub center_maturity: f64,
    /// `T_h`, end of the hedge.
    pub horizon: f64,
    /// Volatility at `(K, T_h)`; also used to price every leg.
    pub local_vol: f64,
    pub rate: f64,
    pub dividend_yield: f64,
}

impl HedgeConfig {
    /// Six-month 50-strike call hedged with 40/60 one-month and 50 two-month
    /// calls until five days before the front expiry; r = 5%, q = 1%, vol 20%.
    pub fn baseline() -> Self {
        HedgeConfig {
            target_strike: 50.0,
            target_maturity: 0.5,
            strike_down: 40.0,
            strike_center: 50.0,
            strike_up: 60.0,
            front_maturity: 1.0 / 12.0,
            center_maturity: 2.0 / 12.0,
            horizon: 1.0 / 12.0 - 5.0 / 365.0,
            local_vol: 0.2,
            rate: 0.05,
            dividend_yield: 0.01,
        }
    }

    /// Checks every constraint, including the strict horizon and strike
    /// bracketing required for error accounting.
    pub fn validate(&self) -> Result<()> {
        self.validate_structure(self.horizon, false)?;
        self.validate_bracketing()
    }

    fn validate_structure(&self, horizon: f64, allow_horizon_at_expiry: bool) -> Result<()> {
        let positive = [
            ("K > 0", self.target_strike),
            ("K_d > 0", self.strike_down),
            ("K_c > 0", self.strike_center),
            ("K_u > 0", self.strike_up),
            ("T_o > 0", self.front_maturity),
            ("T_c > 0", self.center_maturity),
            ("T_h > 0", horizon),
            ("sigma(K,T_h) > 0", self.local_vol),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(violation(name, format!("got {v}")));
            }
        }
        if !self.rate.is_finite() || !self.dividend_yield.is_finite() {
            return Err(violation("finite r and q", String::new()));
        }
        let first_expiry = self.front_maturity.min(self.center_maturity);
        let horizon_ok = if allow_horizon_at_expiry {
            horizon <= first_expiry
        } else {
            horizon < first_expiry
        };
        if !horizon_ok {
            return Err(violation(
                "T_h < min(T_o, T_c)",
                format!("T_h={horizon}, T_o={}, T_c={}", self.front_maturity, self.center_maturity),
            ));
        }
        if !(self.front_maturity.max(self.center_maturity) < self.target_maturity) {
            return Err(violation(
                "max(T_o, T_c) < T",
                format!(
                    "T_o={}, T_c={}, T={}",
                    self.front_maturity, self.center_maturity, self.target_maturity
                ),
            ));
        }
        if !(self.strike_down <= self.strike_center && self.strike_center <= self.strike_up) {
            return Err(violation(
                "K_d <= K_c <= K_u",
                format!("K_d={}, K_c={}, K_u={}", self.strike_down, self.strike_center, self.strike_up),
            ));
        }
        Ok(())
    }

    fn validate_bracketing(&self) -> Result<()> {
        if !(self.strike_down < self.target_strike && self.target_strike < self.strike_up) {
            return Err(violation(
                "K_d < K < K_u",
                format!("K_d={}, K={}, K_u={}", self.strike_down, self.target_strike, self.strike_up),
            ));
        }
        Ok(())
    }

    /// Hedged call value at `spot` and time `at` (time to expiry `T - at`).
    pub fn target_value(&self, spot: f64, at: f64) -> f64 {
        self.value(spot, self.target_strike, self.target_maturity - at)
    }

    fn value(&self, spot: f64, strike: f64, tau: f64) -> f64 {
        call_value(spot, strike, self.rate, self.dividend_yield, self.local_vol, tau)
    }

    /// Hedge portfolio value at `spot` and time `at`.
    fn portfolio_value(&self, w: &HedgeWeights, spot: f64, at: f64) -> f64 {
        w.down * self.value(spot, self.strike_down, self.front_maturity - at)
            + w.center * self.value(spot, self.strike_center, self.center_maturity - at)
            + w.up * self.value(spot, self.strike_up, self.front_maturity - at)
    }
}

fn violation(constraint: &'static str, detail: String) -> Error {
    Error::HedgeConstraint { constraint, detail }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HedgeScheme {
    /// Carry-aware weights with horizon `T_h`.
    BsmDual,
    /// Zero-carry weights with the horizon at the front expiry.
    WuZhu,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualCoefficients {
    pub h_down: f64,
    pub h_center: f64,
    pub h_up: f64,
    pub alpha_front: f64,
    pub alpha_center: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl DualCoefficients {
    fn compute(cfg: &HedgeConfig, rate: f64, q: f64, horizon: f64) -> Self {
        let tau = cfg.target_maturity - horizon;
        let k = cfg.target_strike;
        let scale = cfg.local_vol * k * tau.sqrt();
        DualCoefficients {
            h_down: (cfg.strike_down - k) / scale,
            h_center: (cfg.strike_center - k) / scale,
            h_up: (cfg.strike_up - k) / scale,
            alpha_front: (horizon - cfg.front_maturity) / tau,
            alpha_center: (horizon - cfg.center_maturity) / tau,
            beta: (rate - q) * tau.sqrt() / cfg.local_vol,
            gamma: q * tau,
        }
    }

    /// Coefficient matrix of the weight system; columns are (down, center, up).
    pub fn matrix(&self) -> [[f64; 3]; 3] {
        let h = [self.h_down, self.h_center, self.h_up];
        let alpha = [self.alpha_front, self.alpha_center, self.alpha_front];
        let mut m = [[0.0; 3]; 3];
        for c in 0..3 {
            m[0][c] = 1.0 + self.gamma * h[c] * h[c];
            m[1][c] = (1.0 + self.beta * h[c]) * h[c];
            m[2][c] = h[c] * h[c] - alpha[c];
        }
        m
    }
}

/// Right-hand side of the weight system.
pub const HEDGE_RHS: [f64; 3] = [1.0, 0.0, 1.0];

pub fn dual_coefficients(cfg: &HedgeConfig) -> Result<DualCoefficients> {
    cfg.validate()?;
    Ok(DualCoefficients::compute(cfg, cfg.rate, cfg.dividend_yield, cfg.horizon))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedgeWeights {
    pub down: f64,
    pub center: f64,
    pub up: f64,
    pub scheme: HedgeScheme,
    pub determinant: f64,
}

impl HedgeWeights {
    pub fn as_array(&self) -> [f64; 3] {
        [self.down, self.center, self.up]
    }

    /// Weights that hold nothing.
    pub fn empty(scheme: HedgeScheme) -> Self {
        HedgeWeights {
            down: 0.0,
            center: 0.0,
            up: 0.0,
            scheme,
            determinant: f64::NAN,
        }
    }
}

pub fn determinant3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cramer's rule with a determinant guard. Returns the solution and the determinant.
pub fn solve3(m: &[[f64; 3]; 3], rhs: &[f64; 3]) -> Result<([f64; 3], f64)> {
    let det = determinant3(m);
    if !(det.abs() >= SINGULAR_DETERMINANT) {
        return Err(Error::SingularHedgeSystem { determinant: det });
    }
    let mut x = [0.0; 3];
    for (col, xi) in x.iter_mut().enumerate() {
        let mut mc = *m;
        for row in 0..3 {
            mc[row][col] = rhs[row];
        }
        *xi = determinant3(&mc) / det;
    }
    Ok((x, det))
}

/// Coefficients as used by `scheme`: the config's carry and horizon for
/// [`HedgeScheme::BsmDual`], zero carry and `T_h = T_o` for [`HedgeScheme::WuZhu`].
pub fn scheme_coefficients(cfg: &HedgeConfig, scheme: HedgeScheme) -> Result<DualCoefficients> {
    match scheme {
        HedgeScheme::BsmDual => {
            cfg.validate_structure(cfg.horizon, false)?;
            Ok(DualCoefficients::compute(cfg, cfg.rate, cfg.dividend_yield, cfg.horizon))
        }
        HedgeScheme::WuZhu => {
            cfg.validate_structure(cfg.front_maturity, true)?;
            Ok(DualCoefficients::compute(cfg, 0.0, 0.0, cfg.front_maturity))
        }
    }
}

pub fn solve_weights(cfg: &HedgeConfig, scheme: HedgeScheme) -> Result<HedgeWeights> {
    let coeffs = scheme_coefficients(cfg, scheme)?;
    let (x, determinant) = solve3(&coeffs.matrix(), &HEDGE_RHS)?;
    // singular strike sets (all legs at K) are reported as such above
    cfg.validate_bracketing()?;
    Ok(HedgeWeights {
        down: x[0],
        center: x[1],
        up: x[2],
        scheme,
        determinant,
    })
}

/// A hedge error in currency and as a percentage of the hedged call's value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorAmount {
    pub value: f64,
    pub pct: f64,
    /// Hedged call value the percentage refers to.
    pub hedged_value: f64,
}

/// Portfolio minus hedged call at the end of the horizon, with spot `spot_at_horizon`.
pub fn gross_error(cfg: &HedgeConfig, w: &HedgeWeights, spot_at_horizon: f64) -> Result<ErrorAmount> {
    cfg.validate()?;
    check_spot(spot_at_horizon)?;
    Ok(gross_error_unchecked(cfg, w, spot_at_horizon))
}

fn gross_error_unchecked(cfg: &HedgeConfig, w: &HedgeWeights, spot: f64) -> ErrorAmount {
    let hedged_value = cfg.target_value(spot, cfg.horizon);
    let value = cfg.portfolio_value(w, spot, cfg.horizon) - hedged_value;
    ErrorAmount {
        value,
        pct: 100.0 * value / hedged_value,
        hedged_value,
    }
}

/// Portfolio minus hedged call at setup.
pub fn net_cost(cfg: &HedgeConfig, w: &HedgeWeights, spot_at_setup: f64) -> Result<ErrorAmount> {
    cfg.validate()?;
    check_spot(spot_at_setup)?;
    let hedged_value = cfg.target_value(spot_at_setup, 0.0);
    let value = cfg.portfolio_value(w, spot_at_setup, 0.0) - hedged_value;
    Ok(ErrorAmount {
        value,
        pct: 100.0 * value / hedged_value,
        hedged_value,
    })
}

fn check_spot(spot: f64) -> Result<()> {
    if !(spot.is_finite() && spot > 0.0) {
        return Err(Error::invalid(format!("spot must be > 0, got {spot}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HedgeReport {
    pub gross: ErrorAmount,
    pub net_cost: ErrorAmount,
    /// `gross - net_cost * e^{r T_h}`.
    pub true_error: f64,
    /// True error as a percentage of the hedged call at the horizon.
    pub true_error_pct: f64,
}

impl HedgeReport {
    pub fn from_parts(cfg: &HedgeConfig, gross: ErrorAmount, net_cost: ErrorAmount) -> Self {
        let true_error = gross.value - net_cost.value * (cfg.rate * cfg.horizon).exp();
        HedgeReport {
            gross,
            net_cost,
            true_error,
            true_error_pct: 100.0 * true_error / gross.hedged_value,
        }
    }
}

/// Gross error, net cost and true error for one (setup spot, horizon spot) path.
pub fn true_error(
    cfg: &HedgeConfig,
    w: &HedgeWeights,
    spot_at_setup: f64,
    spot_at_horizon: f64,
) -> Result<HedgeReport> {
    let cost = net_cost(cfg, w, spot_at_setup)?;
    let gross = gross_error(cfg, w, spot_at_horizon)?;
    Ok(HedgeReport::from_parts(cfg, gross, cost))
}

/// Evaluator for many horizon spots sharing one setup. Validation and the
/// net cost are done once.
#[derive(Debug, Clone, Copy)]
pub struct PathEvaluator {
    cfg: HedgeConfig,
    weights: HedgeWeights,
    cost: ErrorAmount,
}

impl PathEvaluator {
    pub fn new(cfg: &HedgeConfig, weights: &HedgeWeights, spot_at_setup: f64) -> Result<Self> {
        let cost = net_cost(cfg, weights, spot_at_setup)?;
        Ok(PathEvaluator {
            cfg: *cfg,
            weights: *weights,
            cost,
        })
    }

    pub fn net_cost(&self) -> ErrorAmount {
        self.cost
    }

    /// Spot must be positive; not rechecked.
    pub fn report(&self, spot_at_horizon: f64) -> HedgeReport {
        let gross = gross_error_unchecked(&self.cfg, &self.weights, spot_at_horizon);
        HedgeReport::from_parts(&self.cfg, gross, self.cost)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn residual(m: &[[f64; 3]; 3], x: &[f64; 3]) -> f64 {
        (0..3)
            .map(|r| ((0..3).map(|c| m[r][c] * x[c]).sum::<f64>() - HEDGE_RHS[r]).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn baseline_coefficients() {
        // independent float evaluation of the defining formulas
        let c = dual_coefficients(&HedgeConfig::baseline()).unwrap();
        assert_relative_eq!(c.h_up, 1.524_338_357_142_436_7, max_relative = 1e-13);
        assert_relative_eq!(c.h_up, 10.0 / (0.2 * 50.0 * 0.430_365_296_803_653_f64.sqrt()), max_relative = 1e-13);
        assert_relative_eq!(c.h_down, -c.h_up, epsilon = 1e-15);
        assert_eq!(c.h_center, 0.0);
        assert_relative_eq!(c.alpha_front, -0.031_830_238_726_790_45, max_relative = 1e-12);
        assert_relative_eq!(c.alpha_center, -0.225_464_190_981_432_33, max_relative = 1e-12);
        assert_relative_eq!(c.beta, 0.131_204_465_900_159_5, max_relative = 1e-12);
        assert_relative_eq!(c.gamma, 0.004_303_652_968_036_53, max_relative = 1e-12);
        assert!(c.alpha_front < 0.0 && c.alpha_center < 0.0);
    }

    #[test]
    fn zero_carry_coefficients() {
        let mut cfg = HedgeConfig::baseline();
        cfg.rate = 0.03;
        cfg.dividend_yield = 0.03;
        assert_eq!(dual_coefficients(&cfg).unwrap().beta, 0.0);
        cfg.dividend_yield = 0.0;
        assert_eq!(dual_coefficients(&cfg).unwrap().gamma, 0.0);
    }

    #[test]
    fn baseline_weights() {
        let cfg = HedgeConfig::baseline();
        let w = solve_weights(&cfg, HedgeScheme::BsmDual).unwrap();
        for (got, want) in w.as_array().iter().zip([0.2184, 0.6323, 0.1456]) {
            assert!((got - want).abs() < 5e-5, "{got} vs {want}");
        }
        assert_relative_eq!(w.determinant, 6.486_726_860_380_932, max_relative = 1e-12);

        let w = solve_weights(&cfg, HedgeScheme::WuZhu).unwrap();
        for (got, want) in w.as_array().iter().zip([0.1818, 0.6364, 0.1818]) {
            assert!((got - want).abs() < 5e-5, "{got} vs {want}");
        }
    }

    #[test]
    fn weights_solve_their_system() {
        let cfg = HedgeConfig::baseline();
        for scheme in [HedgeScheme::BsmDual, HedgeScheme::WuZhu] {
            let w = solve_weights(&cfg, scheme).unwrap();
            let m = scheme_coefficients(&cfg, scheme).unwrap().matrix();
            assert!(residual(&m, &w.as_array()) < 1e-12);
        }
    }

    #[test]
    fn bsm_dual_reduces_to_wu_zhu() {
        let mut cfg = HedgeConfig::baseline();
        cfg.rate = 0.0;
        cfg.dividend_yield = 0.0;
        let wz = solve_weights(&cfg, HedgeScheme::WuZhu).unwrap();
        // same system as BsmDual at T_h = T_o; evaluate directly since the
        // strict horizon check forbids T_h = T_o for BsmDual
        let m = DualCoefficients::compute(&cfg, 0.0, 0.0, cfg.front_maturity).matrix();
        let (x, _) = solve3(&m, &HEDGE_RHS).unwrap();
        for (a, b) in x.iter().zip(wz.as_array()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_strikes_give_equal_wings() {
        let mut cfg = HedgeConfig::baseline();
        cfg.rate = 0.0;
        cfg.dividend_yield = 0.0;
        cfg.center_maturity = cfg.front_maturity;
        cfg.horizon = 0.05;
        let w = solve_weights(&cfg, HedgeScheme::BsmDual).unwrap();
        assert!((w.down - w.up).abs() < 1e-12);
    }

    #[test]
    fn degenerate_strikes_are_singular() {
        let mut cfg = HedgeConfig::baseline();
        cfg.strike_down = 50.0;
        cfg.strike_center = 50.0;
        cfg.strike_up = 50.0;
        match solve_weights(&cfg, HedgeScheme::BsmDual) {
            Err(Error::SingularHedgeSystem { determinant }) => assert!(determinant.abs() < 1e-12),
            other => panic!("expected singular system, got {other:?}"),
        }
    }

    #[test]
    fn constraint_violations_are_named() {
        let mut cfg = HedgeConfig::baseline();
        cfg.horizon = cfg.front_maturity;
        match solve_weights(&cfg, HedgeScheme::BsmDual) {
            Err(Error::HedgeConstraint { constraint, .. }) => assert_eq!(constraint, "T_h < min(T_o, T_c)"),
            other => panic!("{other:?}"),
        }
        // Wu-Zhu solves at T_h = T_o regardless of the configured horizon
        assert!(solve_weights(&cfg, HedgeScheme::WuZhu).is_ok());

        let mut cfg = HedgeConfig::baseline();
        cfg.center_maturity = 0.6;
        assert!(matches!(
            dual_coefficients(&cfg),
            Err(Error::HedgeConstraint { constraint: "max(T_o, T_c) < T", .. })
        ));

        let mut cfg = HedgeConfig::baseline();
        cfg.strike_up = 45.0;
        cfg.strike_center = 45.0;
        assert!(matches!(
            solve_weights(&cfg, HedgeScheme::BsmDual),
            Err(Error::HedgeConstraint { constraint: "K_d < K < K_u", .. })
        ));

        let mut cfg = HedgeConfig::baseline();
        cfg.strike_center = 65.0;
        assert!(matches!(
            dual_coefficients(&cfg),
            Err(Error::HedgeConstraint { constraint: "K_d <= K_c <= K_u", .. })
        ));

        let mut cfg = HedgeConfig::baseline();
        cfg.local_vol = 0.0;
        assert!(dual_coefficients(&cfg).is_err());
    }

    #[test]
    fn reference_errors() {
        let cfg = HedgeConfig::baseline();
        let dual = solve_weights(&cfg, HedgeScheme::BsmDual).unwrap();
        let wz = solve_weights(&cfg, HedgeScheme::WuZhu).unwrap();

        let g = gross_error(&cfg, &dual, 50.0).unwrap();
        assert!((g.value - 0.006).abs() < 5e-4 && (g.pct - 0.19).abs() < 5e-3);
        let g = gross_error(&cfg, &wz, 60.0).unwrap();
        assert!((g.value + 0.779).abs() < 5e-4 && (g.pct + 7.07).abs() < 5e-3);

        let x = net_cost(&cfg, &dual, 50.0).unwrap();
        assert!((x.value - 0.047).abs() < 5e-4 && (x.pct - 1.43).abs() < 5e-3);
        let x = net_cost(&cfg, &wz, 55.0).unwrap();
        assert!((x.value + 0.520).abs() < 5e-4 && (x.pct + 7.63).abs() < 5e-3);

        // setup 55, horizon 45
        let r = true_error(&cfg, &dual, 55.0, 45.0).unwrap();
        assert!((r.true_error - 0.210).abs() < 5e-4 && (r.true_error_pct - 22.88).abs() < 5e-3);
        let r = true_error(&cfg, &wz, 50.0, 50.0).unwrap();
        assert!((r.true_error + 0.038).abs() < 5e-4 && (r.true_error_pct + 1.26).abs() < 5e-3);
        let r = true_error(&cfg, &dual, 55.0, 55.0).unwrap();
        assert!((r.true_error - 0.039).abs() < 5e-4 && (r.true_error_pct - 0.59).abs() < 5e-3);
    }

    #[test]
    fn empty_portfolio_errors() {
        let cfg = HedgeConfig::baseline();
        let w = HedgeWeights::empty(HedgeScheme::BsmDual);
        let g = gross_error(&cfg, &w, 52.0).unwrap();
        assert_eq!(g.value, -cfg.target_value(52.0, cfg.horizon));
        assert_eq!(g.pct, -100.0);
        let x = net_cost(&cfg, &w, 48.0).unwrap();
        assert_eq!(x.value, -cfg.target_value(48.0, 0.0));
    }

    #[test]
    fn report_identity() {
        let cfg = HedgeConfig::baseline();
        let w = solve_weights(&cfg, HedgeScheme::BsmDual).unwrap();
        let r = true_error(&cfg, &w, 47.0, 53.0).unwrap();
        let gross = gross_error(&cfg, &w, 53.0).unwrap().value;
        let cost = net_cost(&cfg, &w, 47.0).unwrap().value;
        assert_eq!(r.true_error, gross - cost * (0.05 * cfg.horizon).exp());

        let eval = PathEvaluator::new(&cfg, &w, 47.0).unwrap();
        assert_eq!(eval.report(53.0), r);
        assert!(gross_error(&cfg, &w, 0.0).is_err());
    }

    #[test]
    fn cramer_matches_elimination() {
        let m = [[2.0, -1.0, 0.5], [1.0, 3.0, -2.0], [0.0, 1.0, 4.0]];
        let (x, det) = solve3(&m, &[1.0, 2.0, 3.0]).unwrap();
        assert_relative_eq!(det, 2.0 * 14.0 + 1.0 * 4.0 + 0.5 * 1.0, epsilon = 1e-14);
        for r in 0..3 {
            let lhs: f64 = (0..3).map(|c| m[r][c] * x[c]).sum();
            assert_relative_eq!(lhs, [1.0, 2.0, 3.0][r], epsilon = 1e-14);
        }
    }
}
