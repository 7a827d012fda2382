use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fwm_core::checkpoint::Checkpoint;
use fwm_core::config::ExperimentConfig;
use fwm_core::csvout::CsvTable;
use fwm_core::units::Quantity;

fn fwmsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fwmsim"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn small_config(dir: &Path, model: &str, n_traj: usize) -> PathBuf {
    let mut cfg = ExperimentConfig { model: model.into(), n_traj, ..ExperimentConfig::default() };
    cfg.fwm.scan_stop = Quantity::si(0.1e-3);
    cfg.fwm.scan_points = 3;
    cfg.oat.n_traj = 400;
    cfg.oat.n_large = 2.0e4;
    cfg.robustness.epsilons = vec![0.0, 0.1, 0.5];
    cfg.output.dir = dir.join("out");
    let path = dir.join(format!("{model}.toml"));
    std::fs::write(&path, cfg.to_toml().unwrap()).unwrap();
    path
}

fn data_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).map(str::to_string).collect()
}

#[test]
fn prepare_is_reproducible_and_interfere_writes_the_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "fourmode", 300);
    let c = cfg.to_str().unwrap();
    let a = dir.path().join("a.ckpt");
    let b = dir.path().join("b.ckpt");
    for p in [&a, &b] {
        let o = fwmsim(&["--config", c, "prepare", "--output", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let ckpt = Checkpoint::read(&a).unwrap();
    assert_eq!(ckpt.states.len(), 300);
    assert_eq!(ckpt.seed, 1);
    assert!((ckpt.mean_total() / 2.02e5 - 1.0).abs() < 1e-3, "{}", ckpt.mean_total());

    let out = dir.path().join("sweep.csv");
    let o = fwmsim(&["--config", c, "interfere", "--checkpoint", a.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("min_delta_phi_sqrtNt"));
    let (comments, table) = CsvTable::read(&out).unwrap();
    let loaded = ExperimentConfig::load(&cfg).unwrap();
    assert!(comments.iter().any(|l| l == &format!("# config_hash: {}", loaded.hash_hex())));
    assert!(comments.iter().any(|l| l == "# seed: 1"));
    assert!(comments.iter().any(|l| l.starts_with("# code_version: ")));
    assert_eq!(
        table.columns,
        ["phi2", "mean_S", "var_S_over_Nt", "delta_phi_sqrtNt", "N_aL", "N_bL", "N_aR", "N_bR"]
    );
    assert_eq!(table.rows.len(), 256);
    let best = table.column("delta_phi_sqrtNt").unwrap().into_iter().filter(|x| x.is_finite()).fold(f64::MAX, f64::min);
    assert!(best < 1.0, "{best}");
}

#[test]
fn resuming_with_other_parameters_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "fourmode", 50);
    let c = cfg.to_str().unwrap();
    let ck = dir.path().join("x.ckpt");
    assert_eq!(code(&fwmsim(&["--config", c, "prepare", "-o", ck.to_str().unwrap()])), 0);
    let o = fwmsim(&["--config", c, "--seed", "2", "interfere", "--checkpoint", ck.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    let mut bytes = std::fs::read(&ck).unwrap();
    let last = bytes.len() - 40;
    bytes[last] ^= 0xff;
    std::fs::write(&ck, bytes).unwrap();
    assert_eq!(code(&fwmsim(&["--config", c, "interfere", "--checkpoint", ck.to_str().unwrap()])), 4);
    assert_eq!(code(&fwmsim(&["--config", c, "interfere", "--checkpoint", "/nonexistent.ckpt"])), 4);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let good = std::fs::read_to_string(small_config(dir.path(), "fourmode", 50)).unwrap();
    let unitless = dir.path().join("unitless.toml");
    std::fs::write(&unitless, good.replace("t_fwm = \"0.00012 s\"", "t_fwm = 0.00012")).unwrap();
    let o = fwmsim(&["--config", unitless.to_str().unwrap(), "prepare"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unit"));
    let unknown = dir.path().join("unknown.toml");
    std::fs::write(&unknown, good.replace("model = \"fourmode\"", "model = \"sixmode\"")).unwrap();
    assert_eq!(code(&fwmsim(&["--config", unknown.to_str().unwrap(), "prepare"])), 2);
    assert_eq!(code(&fwmsim(&["--config", "/nonexistent.toml", "prepare"])), 2);
    assert_eq!(code(&fwmsim(&["--threads", "0", "selftest"])), 2);
    assert_eq!(code(&fwmsim(&["no-such-command"])), 2);
}

#[test]
fn coherent_preparation_sits_at_the_standard_quantum_limit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "coherent", 4000);
    let c = cfg.to_str().unwrap();
    let ck = dir.path().join("coh.ckpt");
    assert_eq!(code(&fwmsim(&["--config", c, "prepare", "-o", ck.to_str().unwrap()])), 0);
    let out = dir.path().join("coh.csv");
    let o = fwmsim(&["--config", c, "interfere", "--checkpoint", ck.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let summary = stdout(&o);
    let value: f64 = summary
        .split("min_delta_phi_sqrtNt = ")
        .nth(1)
        .and_then(|s| s.split_whitespace().next())
        .and_then(|s| s.parse().ok())
        .unwrap();
    assert!((0.9..=1.1).contains(&value), "{summary}");
}

#[test]
fn scan_overplots_models_and_starts_coherent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "fourmode", 400);
    let out = dir.path().join("scan.csv");
    let o = fwmsim(&["--config", cfg.to_str().unwrap(), "scan-fwm", "--models", "fourmode,undepleted", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (_, table) = CsvTable::read(&out).unwrap();
    assert_eq!(&table.columns[..7], ["model", "t_fwm", "nt_chi_t", "N_aL", "N_bL", "N_aR", "N_bR"]);
    assert_eq!(table.columns[7], "v_aR_bL");
    assert_eq!(table.columns.len(), 19);
    assert_eq!(table.rows.len(), 6);
    let first = &table.rows[0];
    assert_eq!(first[0], "fourmode");
    for k in 0..6 {
        let v: f64 = first[7 + k].parse().unwrap();
        let se: f64 = first[13 + k].parse().unwrap();
        assert!((v - 1.0).abs() < 5.0 * se, "{} = {v} +- {se}", table.columns[7 + k]);
    }
    assert_eq!(table.rows[3][0], "undepleted");
    assert_eq!(table.rows[3][7], "1.0");
}

#[test]
fn thread_count_does_not_change_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "fourmode", 200);
    let run = |threads: &str, name: &str| {
        let out = dir.path().join(name);
        let o = fwmsim(&["--config", cfg.to_str().unwrap(), "--threads", threads, "scan-fwm", "-o", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        std::fs::read_to_string(out).unwrap()
    };
    assert_eq!(run("1", "one.csv"), run("4", "four.csv"));
}

#[test]
fn robustness_table_lists_every_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "fourmode", 300);
    let out = dir.path().join("rob.csv");
    let o = fwmsim(&["--config", cfg.to_str().unwrap(), "robustness", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = data_rows(&out);
    assert!(rows[0].starts_with("scheme,epsilon,min_delta_phi_sqrtNt"));
    let (_, table) = CsvTable::read(&out).unwrap();
    let schemes: Vec<&str> = table.rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(schemes, ["oat_N20000", "oat_N20000", "oat_N20000", "oat_N1000", "oat_N1000", "oat_N1000", "fwm", "fwm", "fwm"]);
    let fwm_frozen: f64 = table.rows[8][3].parse().unwrap();
    assert!(fwm_frozen < 1.0, "{fwm_frozen}");
    // Identical inputs reproduce identical rows.
    let again = dir.path().join("rob2.csv");
    assert_eq!(code(&fwmsim(&["--config", cfg.to_str().unwrap(), "robustness", "-o", again.to_str().unwrap()])), 0);
    assert_eq!(data_rows(&out), data_rows(&again));
}

#[test]
fn selftest_passes() {
    let o = fwmsim(&["selftest"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 8);
}

#[test]
fn show_config_round_trips() {
    let o = fwmsim(&["--seed", "77", "show-config"]);
    assert_eq!(code(&o), 0);
    let cfg = ExperimentConfig::from_toml(&stdout(&o)).unwrap();
    assert_eq!(cfg.rng_seed, 77);
    assert_eq!(cfg, ExperimentConfig { rng_seed: 77, ..ExperimentConfig::default() });
}
