use std::path::{Path, PathBuf};

use tempfile::TempDir;
use twoway_secrecy_cli::table::{Format, ResultTable};
use twoway_secrecy_cli::{run, stats_path, OUT_DIR_ENV};

fn run_with(cmd: &str, output: &Path, extra: &[&str]) -> i32 {
    let mut args = vec![
        "twoway-secrecy".to_string(),
        cmd.to_string(),
        "--output".into(),
    ];
    args.push(output.to_string_lossy().into_owned());
    args.extend(extra.iter().map(|s| s.to_string()));
    run(args)
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn out(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

const SMALL_SIM: [&str; 8] = [
    "--trials",
    "2000",
    "--set",
    "geometry.thetas=4",
    "--set",
    "pt_step=0.05",
    "--set",
    "seed=7",
];

#[test]
fn every_region_command_writes_a_table() {
    let dir = TempDir::new().unwrap();
    let cases: [(&str, &[&str]); 5] = [
        ("region-fd-modulo", &["--step", "0.1"]),
        (
            "region-fd-gaussian",
            &["--set", "budget_steps=6", "--set", "codeword_steps=6"],
        ),
        ("region-hd-modulo", &["--step", "0.25"]),
        (
            "region-hd-gaussian",
            &[
                "--set",
                "sched_step=0.5",
                "--set",
                "power_steps=2",
                "--set",
                "codeword_steps=2",
                "--set",
                "full_duplex_steps=5",
            ],
        ),
        (
            "compare-gaussian",
            &[
                "--set",
                "budget_steps=6",
                "--set",
                "codeword_steps=6",
                "--set",
                "alpha_step=0.01",
            ],
        ),
    ];
    for (cmd, extra) in cases {
        let path = out(&dir, &format!("{cmd}.csv"));
        assert_eq!(run_with(cmd, &path, extra), 0, "{cmd}");
        let text = read(&path);
        assert!(text.contains(&format!("# command={cmd}")), "{cmd}");
        assert!(text.contains("curve,point,r1,r2"), "{cmd}");
        let rows = text.lines().filter(|l| !l.starts_with('#')).count();
        assert!(rows > 2, "{cmd}: only {rows} lines");
    }
}

#[test]
fn full_duplex_modulo_reports_region_extremes() {
    let dir = TempDir::new().unwrap();
    let path = out(&dir, "fm.json");
    assert_eq!(
        run_with(
            "region-fd-modulo",
            &path,
            &["--format", "json", "--step", "0.05"]
        ),
        0
    );
    let table = ResultTable::from_json(&read(&path)).unwrap();
    let max_r1: f64 = table.metadata.notes["curve.0.max_r1"].parse().unwrap();
    let max_r2: f64 = table.metadata.notes["curve.0.max_r2"].parse().unwrap();
    // 1 - h2(0.3) and 1 - h2(0.2) for the default channel
    assert!((max_r1 - 0.118_709_100_769_307_3).abs() < 1e-9);
    assert!((max_r2 - 0.278_071_905_112_637_7).abs() < 1e-9);
}

#[test]
fn asymptote_matches_closed_form() {
    let dir = TempDir::new().unwrap();
    let path = out(&dir, "asym.csv");
    assert_eq!(run_with("asymptote", &path, &[]), 0);
    let text = read(&path);
    let row: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((row[0] - 0.1194).abs() < 5e-4, "r_max {}", row[0]);
    assert!((row[1] - 0.3837).abs() < 1e-3, "p_t {}", row[1]);
}

#[test]
fn simulations_are_reproducible_and_write_stats() {
    let dir = TempDir::new().unwrap();
    for cmd in ["sim-twoway", "sim-tdm"] {
        let extra: Vec<&str> = if cmd == "sim-tdm" {
            vec![
                "--trials",
                "2000",
                "--set",
                "geometry.thetas=4",
                "--set",
                "beta_step=0.05",
                "--seed",
                "7",
            ]
        } else {
            SMALL_SIM.to_vec()
        };
        let a = out(&dir, &format!("{cmd}-a.csv"));
        let b = out(&dir, &format!("{cmd}-b.csv"));
        assert_eq!(run_with(cmd, &a, &extra), 0, "{cmd}");
        assert_eq!(run_with(cmd, &b, &extra), 0, "{cmd}");
        assert_eq!(read(&a), read(&b), "{cmd} main output differs between runs");
        let (sa, sb) = (stats_path(&a, Format::Csv), stats_path(&b, Format::Csv));
        assert_eq!(read(&sa), read(&sb), "{cmd} stats differ between runs");
        assert!(read(&a).contains("# seed=7"));
        assert!(read(&sa).lines().filter(|l| !l.starts_with('#')).count() > 1);
    }
}

#[test]
fn different_seeds_change_the_statistics() {
    let dir = TempDir::new().unwrap();
    let a = out(&dir, "a.csv");
    let b = out(&dir, "b.csv");
    let base = [
        "--trials",
        "2000",
        "--set",
        "geometry.thetas=2",
        "--set",
        "pt_step=0.1",
    ];
    let mut ea = base.to_vec();
    ea.extend(["--seed", "1"]);
    let mut eb = base.to_vec();
    eb.extend(["--seed", "2"]);
    assert_eq!(run_with("sim-twoway", &a, &ea), 0);
    assert_eq!(run_with("sim-twoway", &b, &eb), 0);
    assert_ne!(
        read(&stats_path(&a, Format::Csv)),
        read(&stats_path(&b, Format::Csv))
    );
}

#[test]
fn json_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let path = out(&dir, "tw.json");
    let mut extra = SMALL_SIM.to_vec();
    extra.extend(["--format", "json"]);
    assert_eq!(run_with("sim-twoway", &path, &extra), 0);
    let text = read(&path);
    let table = ResultTable::from_json(&text).unwrap();
    assert_eq!(table.metadata.command, "sim-twoway");
    assert_eq!(table.metadata.seed, Some(7));
    assert_eq!(table.rows.len(), 4);
    assert_eq!(table.to_json(), text);
    let stats = ResultTable::from_json(&read(&stats_path(&path, Format::Json))).unwrap();
    for row in &stats.rows {
        // each true class row of the confusion matrix sums to one
        for t in 0..3 {
            let s: f64 = row[3 + 3 * t..6 + 3 * t].iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn config_file_and_flags_combine() {
    let dir = TempDir::new().unwrap();
    let cfg = out(&dir, "cfg.json");
    std::fs::write(
        &cfg,
        r#"{"eps1": 0.1, "eps2": 0.1, "eps_e": 0.5, "step": 0.5}"#,
    )
    .unwrap();
    let path = out(&dir, "fm.json");
    let cfg_arg = cfg.to_string_lossy().into_owned();
    assert_eq!(
        run_with(
            "region-fd-modulo",
            &path,
            &["--config", &cfg_arg, "--set", "eps2=0.2", "--format", "json"]
        ),
        0
    );
    let table = ResultTable::from_json(&read(&path)).unwrap();
    let max_r1: f64 = table.metadata.notes["curve.0.max_r1"].parse().unwrap();
    let max_sum: f64 = table.metadata.notes["curve.0.max_sum"].parse().unwrap();
    // user 1 is capped by the link into user 2: 1 - h2(0.2)
    assert!((max_r1 - 0.278_071_905_112_637_7).abs() < 1e-9);
    // a useless Eve leaves both links fully secret: 2 - h2(0.1) - h2(0.2)
    assert!((max_sum - 0.809_076_311_523_356_6).abs() < 1e-9);
}

#[test]
fn invalid_input_exits_with_code_two() {
    let dir = TempDir::new().unwrap();
    let path = out(&dir, "x.csv");
    assert_eq!(run_with("sim-twoway", &path, &["--trials", "0"]), 2);
    assert_eq!(
        run_with("region-fd-modulo", &path, &["--set", "bogus=1"]),
        2
    );
    assert_eq!(
        run_with("region-fd-modulo", &path, &["--set", "eps1=1.5"]),
        2
    );
    assert_eq!(run_with("region-fd-modulo", &path, &["--seed", "3"]), 2);
    assert_eq!(run_with("asymptote", &path, &["--set", "pt_step=0"]), 2);
    assert_eq!(
        run_with("sim-twoway", &path, &["--set", "variants=[\"psychic\"]"]),
        2
    );
    assert_eq!(run(["twoway-secrecy", "no-such-command"]), 2);
    assert!(!path.exists());
}

#[test]
fn missing_config_file_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let path = out(&dir, "x.csv");
    let missing = out(&dir, "missing.json").to_string_lossy().into_owned();
    assert_eq!(run_with("asymptote", &path, &["--config", &missing]), 1);
}

#[test]
fn default_output_goes_to_the_configured_directory() {
    let dir = TempDir::new().unwrap();
    // the only test that relies on the default output location
    std::env::set_var(OUT_DIR_ENV, dir.path());
    assert_eq!(run(["twoway-secrecy", "asymptote", "--format", "json"]), 0);
    std::env::remove_var(OUT_DIR_ENV);
    assert!(dir.path().join("asymptote.json").exists());
}
