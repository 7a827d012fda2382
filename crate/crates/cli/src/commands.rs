use std::path::{Path, PathBuf};

use fwm_core::checkpoint::Checkpoint;
use fwm_core::config::{hex, ExperimentConfig};
use fwm_core::csvout::{num, CsvHeader, CsvTable};
use fwm_core::interferometer::{balanced_sweep, check_separated, PulseSequence};
use fwm_core::oat::sub_sql_crossing;
use fwm_core::registry::{models, schemes};
use fwm_core::wigner::PAIRS;
use fwm_core::Result;

fn output_path(cfg: &ExperimentConfig, given: Option<PathBuf>, default: &str) -> PathBuf {
    given.unwrap_or_else(|| cfg.output.dir.join(default))
}

fn header(cfg: &ExperimentConfig, command: &str) -> CsvHeader {
    CsvHeader::new(command, cfg.hash_hex(), cfg.rng_seed)
}

pub fn prepare(cfg: &ExperimentConfig, output: Option<PathBuf>) -> Result<()> {
    let model = models().build(&cfg.model, cfg)?;
    let t_fwm = cfg.fwm.t_fwm.value();
    let prepared = model.prepare(t_fwm, cfg.n_traj, cfg.rng_seed)?;
    let ckpt = Checkpoint {
        params_hash: cfg.preparation_hash(),
        seed: cfg.rng_seed,
        t_fwm,
        nt_chi: model.nt_chi(),
        boundary_fraction: prepared.boundary_fraction,
        states: prepared.states,
    };
    let path = output_path(cfg, output, &format!("{}.ckpt", cfg.model));
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    ckpt.write(&path)?;
    println!(
        "prepared {} trajectories of {} at t_fwm = {t_fwm:e} s (N_t chi t = {:.3}), <N_t> = {:.1}, wrote {}",
        ckpt.states.len(),
        cfg.model,
        ckpt.nt_chi * t_fwm,
        ckpt.mean_total(),
        path.display()
    );
    Ok(())
}

pub fn scan_fwm(cfg: &ExperimentConfig, names: &[String], output: Option<PathBuf>) -> Result<()> {
    let names: Vec<String> = if names.is_empty() { vec![cfg.model.clone()] } else { names.to_vec() };
    let registry = models();
    let t_grid = cfg.scan_grid();
    let mut columns = vec!["model", "t_fwm", "nt_chi_t", "N_aL", "N_bL", "N_aR", "N_bR"];
    columns.extend(PAIRS.iter().map(|p| p.2));
    let se: Vec<String> = PAIRS.iter().map(|p| format!("{}_se", p.2)).collect();
    columns.extend(se.iter().map(String::as_str));
    let mut table = CsvTable::new(&columns);
    for name in &names {
        let model = registry.build(name, cfg)?;
        for p in model.scan(&t_grid, cfg.n_traj, cfg.rng_seed)? {
            let mut row = vec![name.clone(), num(p.t_fwm), num(cfg.fwm.nt_chi.value() * p.t_fwm)];
            let pops = &p.populations;
            row.extend([pops.n_al, pops.n_bl, pops.n_ar, pops.n_br].map(num));
            row.extend(p.pair_variances.iter().map(|e| num(e.value)));
            row.extend(p.pair_variances.iter().map(|e| num(e.std_err)));
            table.push(row);
        }
        let best = table
            .rows
            .iter()
            .filter(|r| &r[0] == name)
            .filter_map(|r| Some((r[2].parse::<f64>().ok()?, r[7].parse::<f64>().ok()?)))
            .filter(|(_, v)| v.is_finite())
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((tau, v)) = best {
            println!("{name}: minimum v_aR_bL = {v:.4} at N_t chi t = {tau:.3}");
        }
    }
    let path = output_path(cfg, output, "scan_fwm.csv");
    table.write(&header(cfg, "scan-fwm").with("models", names.join(" ")), &path)?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn interfere(cfg: &ExperimentConfig, checkpoint: &Path, output: Option<PathBuf>) -> Result<()> {
    let ckpt = Checkpoint::read(checkpoint)?;
    ckpt.verify(&cfg.preparation_hash())?;
    check_separated(ckpt.boundary_fraction)?;
    let sweep = balanced_sweep(&ckpt.states, &PulseSequence::default(), cfg.interferometer.phi2_points)?;
    let mut table = CsvTable::new(&[
        "phi2",
        "mean_S",
        "var_S_over_Nt",
        "delta_phi_sqrtNt",
        "N_aL",
        "N_bL",
        "N_aR",
        "N_bR",
    ]);
    let sqrt_nt = sweep.n_t.sqrt();
    for (i, &phi) in sweep.phi2_values.iter().enumerate() {
        let p = &sweep.populations[i];
        table.push_numbers(&[
            phi,
            sweep.mean_s[i],
            sweep.var_s[i].value / sweep.n_t,
            sweep.delta_phi[i] * sqrt_nt,
            p.n_al,
            p.n_bl,
            p.n_ar,
            p.n_br,
        ]);
    }
    let summary = format!(
        "min_delta_phi_sqrtNt = {:.4} at phi2 = {:.4}, visibility = {:.4}, <N_t> = {:.1}",
        sweep.min_delta_phi_sqrt_nt, sweep.phi2_at_min, sweep.visibility, sweep.n_t
    );
    let path = output_path(cfg, output, "interfere.csv");
    let h = header(cfg, "interfere")
        .with("checkpoint_params_hash", hex(&ckpt.params_hash))
        .with("t_fwm_s", num(ckpt.t_fwm))
        .with("summary", &summary);
    table.write(&h, &path)?;
    println!("{summary}");
    println!("wrote {}", path.display());
    Ok(())
}

pub fn robustness(cfg: &ExperimentConfig, output: Option<PathBuf>) -> Result<()> {
    let registry = schemes();
    let mut table = CsvTable::new(&[
        "scheme",
        "epsilon",
        "min_delta_phi_sqrtNt",
        "frozen_delta_phi_sqrtNt",
        "frozen_var_S_over_Nt",
        "N_t",
    ]);
    for name in &cfg.robustness.schemes {
        let points = registry.build(name, cfg)?.scan(&cfg.robustness.epsilons)?;
        let mut labels: Vec<&str> = points.iter().map(|p| p.scheme.as_str()).collect();
        labels.dedup();
        for label in labels {
            let rows: Vec<_> = points.iter().filter(|p| p.scheme == label).cloned().collect();
            match sub_sql_crossing(&rows, true) {
                Some(e) => println!("{label}: frozen sensitivity reaches the standard quantum limit at |epsilon| = {e:.4}"),
                None => println!("{label}: frozen sensitivity stays below the standard quantum limit over the scan"),
            }
        }
        for p in &points {
            table.push(vec![
                p.scheme.clone(),
                num(p.epsilon),
                num(p.min_delta_phi_sqrt_nt),
                num(p.frozen_delta_phi_sqrt_nt),
                num(p.frozen_variance_over_nt),
                num(p.n_t),
            ]);
        }
    }
    let path = output_path(cfg, output, "robustness.csv");
    table.write(&header(cfg, "robustness"), &path)?;
    println!("wrote {}", path.display());
    Ok(())
}
