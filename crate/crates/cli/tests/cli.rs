use std::path::Path;
use std::process::{Command, Output};

use dualpricer_cli::config::{CommandKind, Scheme, TableName};
use dualpricer_cli::report::format_num;
use dualpricer_cli::run::build_report;
use dualpricer_cli::ExperimentConfig;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dualpricer"));
    c.env_remove("DUALPRICER_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Parses CSV output into (header, rows of raw fields).
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn field(header: &[String], row: &[String], key: &str) -> f64 {
    let j = header.iter().position(|h| h == key).unwrap_or_else(|| panic!("no column {key}"));
    row[j].parse().unwrap()
}

const AMERICAN_PUT: [&str; 17] = [
    "price", "--style", "american", "--right", "put", "-S", "36", "-K", "40", "-r", "0.06", "-q", "0", "--vol", "0.4",
    "-T", "1",
];

#[test]
fn american_put_prices_like_its_dual_call() {
    let mut args = AMERICAN_PUT.to_vec();
    args.extend(["--steps", "365", "--dual", "--format", "csv"]);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, rows) = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert!((field(&h, &rows[0], "price") - 7.108).abs() <= 0.002);
    assert!((field(&h, &rows[1], "price") - 7.109).abs() <= 0.002);
    assert_eq!(rows[1][h.iter().position(|k| k == "right").unwrap()], "call");
    assert_eq!(field(&h, &rows[1], "spot"), 40.0);
    assert_eq!(field(&h, &rows[1], "dividend_yield"), 0.06);
}

#[test]
fn european_call_closed_form() {
    let o = run(&[
        "price", "--style", "european", "--right", "call", "-S", "40", "-K", "40", "-r", "0.06", "-q", "0", "--vol",
        "0.4", "-T", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let direct = text.lines().find(|l| l.starts_with("direct")).unwrap();
    assert!(direct.split_whitespace().any(|t| t == "7.389"), "{text}");
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let o = run(&["price", "--right", "call", "-S", "40", "-K", "40", "-r", "0.06", "--vol", "0.4"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("-T/--maturity") && err.contains("--help"), "{err}");
    assert!(stdout(&o).is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["table", "t8"],
        vec!["table"],
        vec!["price", "--right", "sideways"],
        vec!["hedge", "--Kd", "forty"],
        vec!["frobnicate"],
        vec![],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["table", "--help"]).status.code(), Some(0));
}

#[test]
fn domain_failures_exit_one() {
    let o = run(&["hedge", "--Kd", "50", "--Kc", "50", "--Ku", "50"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("singular hedge system"), "{}", stderr(&o));

    let o = run(&["hedge", "--Th", "0.0833333333333333333"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("T_h < min(T_o, T_c)"), "{}", stderr(&o));

    // no-arbitrage violation on a coarse tree
    let o = run(&[
        "price", "--style", "american", "--right", "put", "-S", "40", "-K", "40", "-r", "0.9", "--vol", "0.01", "-T",
        "1", "--steps", "4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no-arbitrage"));

    let o = run(&["price", "--style", "american", "--right", "put", "-S", "40", "-K", "40", "-r", "0.05", "--vol", "0.2",
        "-T", "1", "--engine", "analytic"]);
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["price", "--right", "call", "-S", "-40", "-K", "40", "-r", "0.05", "--vol", "0.2", "-T", "1"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn hedge_weights_for_both_schemes() {
    for (scheme, want) in [("bsm-dual", ["0.2184", "0.6323", "0.1456"]), ("wu-zhu", ["0.1818", "0.6364", "0.1818"])] {
        let o = run(&["hedge", "--scheme", scheme]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        for (key, w) in ["w_down", "w_center", "w_up"].iter().zip(want) {
            let line = text.lines().find(|l| l.starts_with(key)).unwrap();
            assert_eq!(line.split_whitespace().last(), Some(w), "{scheme} {key}");
        }
    }
}

#[test]
fn hedge_simulation_reports_statistics() {
    let o = run(&["hedge", "--sim", "--spot0", "48", "--mu", "0.08", "--paths", "500", "--seed", "3", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (h, rows) = parse_csv(&stdout(&o));
    assert!(field(&h, &rows[0], "mae_pct") >= field(&h, &rows[0], "mhe_pct").abs());
    assert_eq!(field(&h, &rows[0], "seed"), 3.0);
    assert_eq!(run(&["hedge", "--sim", "--spot-th", "50"]).status.code(), Some(2));
}

#[test]
fn table_four_scheme_filter() {
    let o = run(&["table", "t4", "--scheme", "wu-zhu", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = parse_csv(&stdout(&o));
    assert_eq!(h, ["spot_at_horizon", "hedged_call", "wu_zhu_gross", "wu_zhu_gross_pct"]);
    let want = [-0.008, -0.074, 0.034, -0.355, -0.482, -0.779, -0.706, -0.652, -0.627, -0.608, -0.590];
    for (row, w) in rows.iter().zip(want) {
        assert!((field(&h, row, "wu_zhu_gross") - w).abs() <= 0.002);
    }
}

#[test]
fn csv_is_plain_lf_with_header() {
    let o = run(&["table", "t1", "--format", "csv"]);
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("spot,strike,put,dual_spot,dual_strike,dual_call,error_pct"));
    assert_eq!(lines.count(), 5);
}

fn table_cfg(name: TableName) -> ExperimentConfig {
    ExperimentConfig {
        command: Some(CommandKind::Table),
        table: Some(name),
        paths: Some(300),
        seed: Some(11),
        ..Default::default()
    }
}

#[test]
fn csv_values_round_to_the_text_table() {
    use TableName::*;
    for name in [T1, T2, T3, T4, T5, T6, T7] {
        let table = build_report(&table_cfg(name)).unwrap();
        let text = table.render_text();
        let (header, rows) = parse_csv(&table.render_csv().unwrap());
        assert_eq!(header.len(), table.columns.len());
        let text_rows: Vec<Vec<&str>> = text.lines().skip(2).map(|l| l.split_whitespace().collect()).collect();
        assert_eq!(text_rows.len(), rows.len(), "{name:?}");
        for (csv_row, text_row) in rows.iter().zip(&text_rows) {
            assert_eq!(text_row.len(), csv_row.len(), "{name:?}");
            for ((raw, shown), col) in csv_row.iter().zip(text_row).zip(&table.columns) {
                let v: f64 = raw.parse().unwrap();
                assert_eq!(format_num(v, col.fmt), *shown, "{name:?} {}", col.key);
            }
        }
    }
}

#[test]
fn binary_text_and_csv_agree() {
    let text = stdout(&run(&["table", "t6"]));
    let (h, rows) = parse_csv(&stdout(&run(&["table", "t6", "--format", "csv"])));
    for (line, row) in text.lines().skip(2).zip(&rows) {
        let shown: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(shown[2], format!("{:.3}", field(&h, row, "bsm_dual_true_error")).replace("-0.000", "0.000"));
        assert_eq!(shown[3], format!("{:.2}", field(&h, row, "bsm_dual_true_error_pct")));
    }
}

#[test]
fn seed_comes_from_the_environment_by_default() {
    let args = ["table", "t7", "--paths", "200", "--scheme", "bsm-dual", "--format", "csv"];
    let from_env = bin().args(args).env("DUALPRICER_SEED", "5").output().unwrap();
    assert_eq!(from_env.status.code(), Some(0));
    let explicit = run(&[&args[..], &["--seed", "5"]].concat());
    assert_eq!(stdout(&from_env), stdout(&explicit));

    let other = bin().args(args).env("DUALPRICER_SEED", "6").output().unwrap();
    assert_ne!(stdout(&from_env), stdout(&other));

    // an explicit seed wins over the environment
    let flag = bin().args(args).args(["--seed", "5"]).env("DUALPRICER_SEED", "6").output().unwrap();
    assert_eq!(stdout(&flag), stdout(&explicit));

    let bad = bin().args(args).env("DUALPRICER_SEED", "minus one").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn output_file_and_saved_config_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t5.csv");
    let saved = dir.path().join("t5.toml");
    let o = run(&[
        "table",
        "t5",
        "--scheme",
        "bsm-dual",
        "--rate",
        "0.04",
        "--format",
        "csv",
        "--output",
        out.to_str().unwrap(),
        "--save-config",
        saved.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let first = std::fs::read_to_string(&out).unwrap();

    let cfg = ExperimentConfig::load(&saved).unwrap();
    assert_eq!(cfg.command, Some(CommandKind::Table));
    assert_eq!(cfg.table, Some(TableName::T5));
    assert_eq!(cfg.scheme, Some(Scheme::BsmDual));
    assert_eq!(cfg.rate, Some(0.04));

    std::fs::remove_file(&out).unwrap();
    let again = run(&["table", "--config", saved.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0), "{}", stderr(&again));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("price.toml");
    std::fs::write(
        &path,
        "command = \"price\"\nstyle = \"european\"\nright = \"call\"\nspot = 40\nstrike = 40.0\nrate = 0.06\n\
         dividend_yield = 0.0\nvol = 0.4\nmaturity = 1.0\nformat = \"csv\"\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let (h, rows) = parse_csv(&stdout(&run(&["price", "--config", p])));
    assert_eq!(format!("{:.3}", field(&h, &rows[0], "price")), "7.389");

    let (h, rows) = parse_csv(&stdout(&run(&["price", "--config", p, "-S", "44"])));
    assert_eq!(field(&h, &rows[0], "spot"), 44.0);

    assert_eq!(run(&["hedge", "--config", p]).status.code(), Some(2));
    assert_eq!(run(&["price", "--config", "/nonexistent/dualpricer.toml"]).status.code(), Some(2));
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "spot = 40\nvolatility = 0.2\n").unwrap();
    let o = run(&["price", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("volatility"), "{}", stderr(&o));
}

#[test]
fn experiment_config_is_lossless_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.toml");
    let mut x = 0.123_456_789_f64;
    for i in 0..200 {
        x = (x * 7919.0 + 0.1).fract() + i as f64 * 1e-3;
        let cfg = ExperimentConfig {
            command: Some(CommandKind::Hedge),
            target_strike: Some(50.0 + x),
            horizon: Some(x / 17.0),
            vol: Some(x.powi(5)),
            rate: Some(-x * 1e-3),
            drift: Some(1.0 / (3.0 + x)),
            seed: Some((x * 1e19) as u64),
            paths: Some(i + 1),
            sim: Some(i % 2 == 0),
            ..Default::default()
        };
        cfg.save(&path).unwrap();
        assert_eq!(ExperimentConfig::load(&path).unwrap(), cfg);
    }
    assert!(Path::new(&path).exists());
}
