//! Resolves an [`ExperimentConfig`] into a report.

use std::io::Write as _;
use std::path::Path;

use dualpricer::duality::{to_dual, valuation_via_dual, Valuation};
use dualpricer::hedge::{gross_error, net_cost, solve_weights, true_error};
use dualpricer::simulate::run_hedge_sim;
use dualpricer::tables::{
    american_put_duality, american_put_greeks, currency_puts, gross_errors, net_costs, simulated_errors, true_errors,
    AmericanGrid, SchemePair, CURRENCY_DOMESTIC_RATES, CURRENCY_FOREIGN_RATE, HEDGE_SPOTS, PATH_SPOTS, SIM_DRIFTS,
    SIM_SPOTS,
};
use dualpricer::{
    Engine, ExecMode, ExerciseStyle, HedgeConfig, HedgeScheme, MarketState, OptionRight, OptionSpec, SimConfig,
};

use crate::args::Command;
use crate::config::{CommandKind, EngineKind, ExperimentConfig, Format, Right, Scheme, Style, TableName};
use crate::error::CliError;
use crate::report::{Cell, Column, Fmt, Layout, Table, GREEK, PCT, PRICE};

pub const DEFAULT_STEPS: usize = 365;
pub const DEFAULT_PATHS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_DRIFT: f64 = 0.04;
pub const DEFAULT_SIM_SPOT: f64 = 50.0;
pub const SEED_ENV: &str = "DUALPRICER_SEED";

/// Table-one, table-three style errors are quoted to three decimals.
const DUAL_PCT: Fmt = Fmt::Fixed(3);

/// Runs a parsed command: merges the config file under the flags, then
/// renders the report to stdout or the requested file.
pub fn execute(cmd: &Command) -> Result<(), CliError> {
    let out = cmd.output_args();
    let file = match &out.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(kind) = file.command {
        if kind != cmd.kind() {
            return Err(CliError::Usage(format!(
                "config file describes a `{kind}` run, not `{}`",
                cmd.kind()
            )));
        }
    }
    let cfg = file.overlay(cmd.to_config());
    if let Some(path) = &out.save_config {
        let mut saved = cfg.clone();
        if uses_seed(&cfg) {
            saved.seed = Some(resolve_seed(&cfg)?);
        }
        saved.save(path)?;
    }
    let table = build_report(&cfg)?;
    emit(&table, cfg.format.unwrap_or_default(), cfg.output.as_deref())
}

pub fn emit(table: &Table, format: Format, output: Option<&Path>) -> Result<(), CliError> {
    let text = match format {
        Format::Table => table.render_text(),
        Format::Csv => table
            .render_csv()
            .map_err(|e| CliError::io("<csv>", std::io::Error::other(e)))?,
    };
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path.to_path_buf(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

pub fn build_report(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    match cfg.command {
        Some(CommandKind::Price) => price_report(cfg),
        Some(CommandKind::Table) => {
            let name = cfg
                .table
                .ok_or_else(|| CliError::Usage("missing table name (t1..t7)".into()))?;
            table_report(name, cfg)
        }
        Some(CommandKind::Hedge) => hedge_report(cfg),
        None => Err(CliError::Usage("no command given".into())),
    }
}

fn required<T>(value: Option<T>, flag: &str, key: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required value {flag} (or `{key}` in the config file)")))
}

fn uses_seed(cfg: &ExperimentConfig) -> bool {
    match cfg.command {
        Some(CommandKind::Table) => cfg.table == Some(TableName::T7),
        Some(CommandKind::Hedge) => cfg.sim == Some(true),
        _ => false,
    }
}

/// Explicit seed, else `DUALPRICER_SEED`, else [`DEFAULT_SEED`].
pub fn resolve_seed(cfg: &ExperimentConfig) -> Result<u64, CliError> {
    if let Some(seed) = cfg.seed {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

impl From<Right> for OptionRight {
    fn from(r: Right) -> Self {
        match r {
            Right::Call => OptionRight::Call,
            Right::Put => OptionRight::Put,
        }
    }
}

impl From<Style> for ExerciseStyle {
    fn from(s: Style) -> Self {
        match s {
            Style::European => ExerciseStyle::European,
            Style::American => ExerciseStyle::American,
        }
    }
}

impl From<Scheme> for HedgeScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::BsmDual => HedgeScheme::BsmDual,
            Scheme::WuZhu => HedgeScheme::WuZhu,
        }
    }
}

fn right_name(r: OptionRight) -> &'static str {
    match r {
        OptionRight::Call => "call",
        OptionRight::Put => "put",
    }
}

fn pct_diff(a: f64, reference: f64) -> f64 {
    100.0 * (a - reference) / reference
}

fn price_report(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let right: OptionRight = required(cfg.right, "--right", "right")?.into();
    let spot = required(cfg.spot, "-S/--spot", "spot")?;
    let strike = required(cfg.strike, "-K/--strike", "strike")?;
    let rate = required(cfg.rate, "-r/--rate", "rate")?;
    let vol = required(cfg.vol, "--vol", "vol")?;
    let maturity = required(cfg.maturity, "-T/--maturity", "maturity")?;
    let q = cfg.dividend_yield.unwrap_or(0.0);
    let style = cfg.style.unwrap_or(Style::European);
    let steps = cfg.steps.unwrap_or(DEFAULT_STEPS);
    let default_engine = match style {
        Style::European => EngineKind::Analytic,
        Style::American => EngineKind::Lattice,
    };
    let engine = match cfg.engine.unwrap_or(default_engine) {
        EngineKind::Analytic => Engine::Analytic,
        EngineKind::Lattice => Engine::Lattice { steps },
    };
    let greeks = cfg.greeks.unwrap_or(false);
    let dual = cfg.dual.unwrap_or(false);

    let spec = OptionSpec::new(right, style.into(), strike, maturity)?;
    let mkt = MarketState::new(spot, rate, q, vol)?;
    let value = |spec: &OptionSpec, mkt: &MarketState| -> Result<Valuation, CliError> {
        Ok(if greeks {
            engine.valuation(spec, mkt)?
        } else {
            Valuation {
                price: engine.price(spec, mkt)?,
                delta: f64::NAN,
                gamma: f64::NAN,
            }
        })
    };

    let mut columns = vec![
        Column::new("method", "method", Fmt::Plain),
        Column::new("right", "right", Fmt::Plain),
        Column::new("spot", "S", Fmt::Plain),
        Column::new("strike", "K", Fmt::Plain),
        Column::new("rate", "r", Fmt::Plain),
        Column::new("dividend_yield", "q", Fmt::Plain),
        Column::new("price", "price", PRICE),
    ];
    if greeks {
        columns.push(Column::new("delta", "delta", GREEK));
        columns.push(Column::new("gamma", "gamma", GREEK));
    }
    if dual {
        columns.push(Column::new("price_diff_pct", "diff (%)", DUAL_PCT));
        if greeks {
            columns.push(Column::new("delta_diff_pct", "delta diff (%)", DUAL_PCT));
            columns.push(Column::new("gamma_diff_pct", "gamma diff (%)", DUAL_PCT));
        }
    }
    let engine_label = match engine {
        Engine::Analytic => "analytic".to_string(),
        Engine::Lattice { steps } => format!("lattice, {steps} steps"),
    };
    let style_label = match style {
        Style::European => "European",
        Style::American => "American",
    };
    let mut table = Table::new(
        format!("{style_label} {} ({engine_label}); vol {vol}, T {maturity}", right_name(right)),
        columns,
    );

    let row = |method: &str, s: &OptionSpec, m: &MarketState, v: &Valuation, diffs: [Option<f64>; 3]| {
        let mut cells: Vec<Cell> = vec![
            method.into(),
            right_name(s.right).into(),
            m.spot.into(),
            s.strike.into(),
            m.rate.into(),
            m.dividend_yield.into(),
            v.price.into(),
        ];
        if greeks {
            cells.push(v.delta.into());
            cells.push(v.gamma.into());
        }
        if dual {
            let n = if greeks { 3 } else { 1 };
            cells.extend(diffs[..n].iter().map(|d| d.map_or(Cell::Empty, Cell::Num)));
        }
        cells
    };

    let direct = value(&spec, &mkt)?;
    table.push(row("direct", &spec, &mkt, &direct, [None; 3]));
    if dual {
        let d = to_dual(&spec, &mkt).dual;
        let dv = value(&d.spec, &d.market)?;
        table.push(row("dual", &d.spec, &d.market, &dv, [Some(pct_diff(dv.price, direct.price)), None, None]));
        if greeks {
            let via = valuation_via_dual(&spec, &mkt, engine)?;
            table.push(row(
                "via-dual",
                &spec,
                &mkt,
                &via,
                [
                    Some(pct_diff(via.price, direct.price)),
                    Some(pct_diff(via.delta, direct.delta)),
                    Some(pct_diff(via.gamma, direct.gamma)),
                ],
            ));
        }
    }
    Ok(table)
}

fn hedge_config(cfg: &ExperimentConfig) -> HedgeConfig {
    let b = HedgeConfig::baseline();
    HedgeConfig {
        target_strike: cfg.target_strike.unwrap_or(b.target_strike),
        target_maturity: cfg.target_maturity.unwrap_or(b.target_maturity),
        strike_down: cfg.strike_down.unwrap_or(b.strike_down),
        strike_center: cfg.strike_center.unwrap_or(b.strike_center),
        strike_up: cfg.strike_up.unwrap_or(b.strike_up),
        front_maturity: cfg.front_maturity.unwrap_or(b.front_maturity),
        center_maturity: cfg.center_maturity.unwrap_or(b.center_maturity),
        horizon: cfg.horizon.unwrap_or(b.horizon),
        local_vol: cfg.vol.unwrap_or(b.local_vol),
        rate: cfg.rate.unwrap_or(b.rate),
        dividend_yield: cfg.dividend_yield.unwrap_or(b.dividend_yield),
    }
}

fn hedge_title(h: &HedgeConfig) -> String {
    format!(
        "call K={} T={} hedged with ({}, {}), ({}, {}), ({}, {}) until T_h={:.4}; r={}, q={}, vol={}",
        h.target_strike,
        h.target_maturity,
        h.strike_down,
        fmt_t(h.front_maturity),
        h.strike_center,
        fmt_t(h.center_maturity),
        h.strike_up,
        fmt_t(h.front_maturity),
        h.horizon,
        h.rate,
        h.dividend_yield,
        h.local_vol
    )
}

fn fmt_t(t: f64) -> String {
    format!("{t:.4}")
}

const SCHEMES: [(HedgeScheme, &str, &str); 2] = [
    (HedgeScheme::BsmDual, "bsm_dual", "BSM-Dual"),
    (HedgeScheme::WuZhu, "wu_zhu", "Wu-Zhu"),
];

fn selected_schemes(cfg: &ExperimentConfig) -> Vec<(HedgeScheme, &'static str, &'static str)> {
    match cfg.scheme {
        Some(s) => {
            let s = HedgeScheme::from(s);
            SCHEMES.into_iter().filter(|(x, ..)| *x == s).collect()
        }
        None => SCHEMES.to_vec(),
    }
}

fn table_report(name: TableName, cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let mode = ExecMode::default();
    let grid = AmericanGrid {
        steps: cfg.steps.unwrap_or(DEFAULT_STEPS),
        ..AmericanGrid::default()
    };
    let grid_note = format!("vol {}, T {}, {} steps", grid.vol, grid.maturity, grid.steps);
    match name {
        TableName::T1 => {
            let mut t = Table::new(
                format!("American put (r=0.06, q=0) vs dual American call (r=0, q=0.06); {grid_note}"),
                vec![
                    Column::new("spot", "pxS", Fmt::Plain),
                    Column::new("strike", "Strike", Fmt::Plain),
                    Column::new("put", "pxP", PRICE),
                    Column::new("dual_spot", "pxS", Fmt::Plain),
                    Column::new("dual_strike", "Strike", Fmt::Plain),
                    Column::new("dual_call", "pxC", PRICE),
                    Column::new("error_pct", "Error (%)", DUAL_PCT),
                ],
            );
            for r in american_put_duality(&grid, mode)? {
                t.push(vec![
                    r.spot.into(),
                    r.strike.into(),
                    r.put.into(),
                    r.dual_spot.into(),
                    r.dual_strike.into(),
                    r.dual_call.into(),
                    r.error_pct.into(),
                ]);
            }
            Ok(t)
        }
        TableName::T2 => {
            let mut t = Table::new(
                format!("American put Greeks, direct and through the dual call; {grid_note}"),
                vec![
                    Column::new("spot", "pxS", Fmt::Plain),
                    Column::new("strike", "Strike", Fmt::Plain),
                    Column::new("put_delta", "delP", GREEK),
                    Column::new("put_gamma", "gamP", GREEK),
                    Column::new("dual_spot", "pxS", Fmt::Plain),
                    Column::new("dual_strike", "Strike", Fmt::Plain),
                    Column::new("dual_call", "pxC", PRICE),
                    Column::new("dual_call_delta", "delC", GREEK),
                    Column::new("dual_call_gamma", "gamC", GREEK),
                    Column::new("delta_via_dual", "Delta", GREEK),
                    Column::new("delta_error_pct", "Error (%)", DUAL_PCT),
                    Column::new("gamma_via_dual", "Gamma", GREEK),
                    Column::new("gamma_error_pct", "Error (%)", DUAL_PCT),
                ],
            );
            for r in american_put_greeks(&grid, mode)? {
                t.push(vec![
                    r.spot.into(),
                    r.strike.into(),
                    r.put_delta.into(),
                    r.put_gamma.into(),
                    r.strike.into(),
                    r.spot.into(),
                    r.dual_call_price.into(),
                    r.dual_call_delta.into(),
                    r.dual_call_gamma.into(),
                    r.delta_via_dual.into(),
                    r.delta_error_pct.into(),
                    r.gamma_via_dual.into(),
                    r.gamma_error_pct.into(),
                ]);
            }
            Ok(t)
        }
        TableName::T3 => {
            let mut t = Table::new(
                format!("American currency put (tree) vs dual European call (closed form); {grid_note}"),
                vec![
                    Column::new("rate", "r", Fmt::Plain),
                    Column::new("foreign_rate", "r_f", Fmt::Plain),
                    Column::new("spot", "pxS", Fmt::Plain),
                    Column::new("strike", "Strike", Fmt::Plain),
                    Column::new("american_put", "pxP", PRICE),
                    Column::new("dual_spot", "pxS", Fmt::Plain),
                    Column::new("dual_strike", "Strike", Fmt::Plain),
                    Column::new("european_call", "pxc", PRICE),
                    Column::new("error_pct", "Error (%)", DUAL_PCT),
                ],
            );
            for panel in currency_puts(&grid, &CURRENCY_DOMESTIC_RATES, CURRENCY_FOREIGN_RATE, mode)? {
                for r in panel.rows {
                    t.push(vec![
                        panel.domestic_rate.into(),
                        panel.foreign_rate.into(),
                        r.spot.into(),
                        r.strike.into(),
                        r.american_put.into(),
                        r.dual_spot.into(),
                        r.dual_strike.into(),
                        r.european_call.into(),
                        r.error_pct.into(),
                    ]);
                }
            }
            Ok(t)
        }
        TableName::T4 | TableName::T5 => {
            let h = hedge_config(cfg);
            let gross = name == TableName::T4;
            let (rows, spot_label, what, pct_label) = if gross {
                (gross_errors(&h, &HEDGE_SPOTS)?, "S(T_h)", "gross", "Gross (%)")
            } else {
                (net_costs(&h, &HEDGE_SPOTS)?, "S(0)", "net_cost", "Net Cost (%)")
            };
            let schemes = selected_schemes(cfg);
            let mut columns = vec![
                Column::new(if gross { "spot_at_horizon" } else { "spot_at_setup" }, spot_label, Fmt::Plain),
                Column::new("hedged_call", "Hedged Call", PRICE),
            ];
            for (_, key, label) in &schemes {
                let noun = if gross { "Gross" } else { "Net Cost" };
                columns.push(Column::new(format!("{key}_{what}"), format!("{label} {noun}"), PRICE));
                columns.push(Column::new(
                    format!("{key}_{what}_pct"),
                    format!("{label} {pct_label}"),
                    PCT,
                ));
            }
            let title = if gross {
                "Gross hedge errors at the end of the hedge"
            } else {
                "Net cost of the hedge at setup"
            };
            let mut t = Table::new(format!("{title}; {}", hedge_title(&h)), columns);
            for r in rows {
                let mut cells: Vec<Cell> = vec![r.spot.into(), r.hedged_value.into()];
                for (scheme, ..) in &schemes {
                    let e = r.errors.get(*scheme);
                    cells.push(e.value.into());
                    cells.push(e.pct.into());
                }
                t.push(cells);
            }
            Ok(t)
        }
        TableName::T6 => {
            let h = hedge_config(cfg);
            let schemes = selected_schemes(cfg);
            let mut columns = vec![
                Column::new("spot_at_horizon", "S(T_h)", Fmt::Plain),
                Column::new("spot_at_setup", "S(0)", Fmt::Plain),
            ];
            for (_, key, label) in &schemes {
                columns.push(Column::new(format!("{key}_true_error"), format!("{label} True"), PRICE));
                columns.push(Column::new(
                    format!("{key}_true_error_pct"),
                    format!("{label} True (%)"),
                    PCT,
                ));
            }
            let mut t = Table::new(format!("True hedge errors per path; {}", hedge_title(&h)), columns);
            for r in true_errors(&h, &PATH_SPOTS)? {
                let mut cells: Vec<Cell> = vec![r.spot_at_horizon.into(), r.spot_at_setup.into()];
                for (scheme, ..) in &schemes {
                    let (value, pct) = *r.errors.get(*scheme);
                    cells.push(value.into());
                    cells.push(pct.into());
                }
                t.push(cells);
            }
            Ok(t)
        }
        TableName::T7 => {
            let h = hedge_config(cfg);
            let paths = cfg.paths.unwrap_or(DEFAULT_PATHS);
            let seed = resolve_seed(cfg)?;
            let schemes = selected_schemes(cfg);
            let mut columns = vec![
                Column::new("drift", "mu", Fmt::Plain),
                Column::new("spot0", "S(0)", Fmt::Plain),
            ];
            for (_, key, label) in &schemes {
                columns.push(Column::new(format!("{key}_mhe_pct"), format!("{label} MHE (%)"), PCT));
                columns.push(Column::new(format!("{key}_mae_pct"), format!("{label} MAE (%)"), PCT));
                columns.push(Column::new(format!("{key}_rmse"), format!("{label} RMSE"), PRICE));
            }
            let mut t = Table::new(
                format!(
                    "Simulated true hedge errors, {paths} paths, seed {seed} (row i uses seed + i); {}",
                    hedge_title(&h)
                ),
                columns,
            );
            for r in simulated_errors(&h, &SIM_DRIFTS, &SIM_SPOTS, paths, seed, mode)? {
                let mut cells: Vec<Cell> = vec![r.drift.into(), r.spot0.into()];
                for (scheme, ..) in &schemes {
                    let s = pick(&r.summary, *scheme);
                    cells.push(s.mhe_pct.into());
                    cells.push(s.mae_pct.into());
                    cells.push(s.rmse.into());
                }
                t.push(cells);
            }
            Ok(t)
        }
    }
}

fn pick<T: Copy>(pair: &SchemePair<T>, scheme: HedgeScheme) -> T {
    *pair.get(scheme)
}

fn hedge_report(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let h = hedge_config(cfg);
    let scheme: HedgeScheme = cfg.scheme.unwrap_or(Scheme::BsmDual).into();
    let sim = cfg.sim.unwrap_or(false);
    if sim && cfg.spot_at_horizon.is_some() {
        return Err(CliError::Usage("--sim cannot be combined with --spot-th".into()));
    }
    let w = solve_weights(&h, scheme)?;
    let label = SCHEMES.iter().find(|(s, ..)| *s == scheme).map_or("", |s| s.2);

    let mut columns = vec![
        Column::new("scheme", "scheme", Fmt::Plain),
        Column::new("w_down", "w_down", GREEK),
        Column::new("w_center", "w_center", GREEK),
        Column::new("w_up", "w_up", GREEK),
        Column::new("determinant", "determinant", Fmt::Fixed(6)),
    ];
    let mut cells: Vec<Cell> = vec![label.into(), w.down.into(), w.center.into(), w.up.into(), w.determinant.into()];
    let mut add = |key: &str, lbl: &str, fmt: Fmt, cell: Cell| {
        columns.push(Column::new(key, lbl, fmt));
        cells.push(cell);
    };

    if sim {
        let spot0 = cfg.spot0.unwrap_or(DEFAULT_SIM_SPOT);
        let sc = SimConfig {
            spot0,
            drift: cfg.drift.unwrap_or(DEFAULT_DRIFT),
            paths: cfg.paths.unwrap_or(DEFAULT_PATHS),
            seed: resolve_seed(cfg)?,
            hedge: h,
            scheme,
        };
        let s = run_hedge_sim(&sc)?;
        add("spot0", "S(0)", Fmt::Plain, spot0.into());
        add("drift", "mu", Fmt::Plain, sc.drift.into());
        add("paths", "paths", Fmt::Plain, Cell::Text(sc.paths.to_string()));
        add("seed", "seed", Fmt::Plain, Cell::Text(sc.seed.to_string()));
        add("mhe_pct", "MHE (%)", PCT, s.mhe_pct.into());
        add("mae_pct", "MAE (%)", PCT, s.mae_pct.into());
        add("rmse", "RMSE", PRICE, s.rmse.into());
    } else {
        if let Some(spot0) = cfg.spot0 {
            let c = net_cost(&h, &w, spot0)?;
            add("spot0", "S(0)", Fmt::Plain, spot0.into());
            add("hedged_call_at_setup", "hedged call at 0", PRICE, c.hedged_value.into());
            add("net_cost", "net cost", PRICE, c.value.into());
            add("net_cost_pct", "net cost (%)", PCT, c.pct.into());
        }
        if let Some(spot_th) = cfg.spot_at_horizon {
            let g = gross_error(&h, &w, spot_th)?;
            add("spot_at_horizon", "S(T_h)", Fmt::Plain, spot_th.into());
            add("hedged_call_at_horizon", "hedged call at T_h", PRICE, g.hedged_value.into());
            add("gross_error", "gross error", PRICE, g.value.into());
            add("gross_error_pct", "gross error (%)", PCT, g.pct.into());
            if let Some(spot0) = cfg.spot0 {
                let r = true_error(&h, &w, spot0, spot_th)?;
                add("true_error", "true error", PRICE, r.true_error.into());
                add("true_error_pct", "true error (%)", PCT, r.true_error_pct.into());
            }
        }
    }
    let mut t = Table::new(format!("Static hedge; {}", hedge_title(&h)), columns);
    t.layout = Layout::Record;
    t.push(cells);
    Ok(t)
}
