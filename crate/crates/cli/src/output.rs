//! CSV and metadata emission.
//!
//! Floating-point values are printed with 17 significant digits so files are
//! reproducible byte for byte and round-trip through `f64` exactly.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::json;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{HarnessError, Result};
use crate::runner::{BetaTable, CommCostResult, ExperimentOutput, GraphRunResult};

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Mean-curve CSV: `t,variant,mean_ase,trials_used,diverged`, one row per
/// `(t, variant)` with the iteration index outermost. The noncooperative
/// baseline appears as a constant curve; the fixed-point floor is a single
/// trailing row at `t = 0`.
pub fn ase_csv(run: &GraphRunResult) -> String {
    let mut out = String::from("t,variant,mean_ase,trials_used,diverged\n");
    let trials = run.trials;
    if trials == 0 || (run.variants.is_empty() && run.noncoop.is_empty()) {
        return out;
    }
    let noncoop_mean = run.noncoop.iter().sum::<f64>() / trials as f64;
    for t in 0..=run.iterations {
        if !run.noncoop.is_empty() {
            out.push_str(&format!(
                "{t},noncoop,{},{trials},0\n",
                fmt_float(noncoop_mean)
            ));
        }
        for v in &run.variants {
            out.push_str(&format!(
                "{t},{},{},{},{}\n",
                v.name,
                fmt_float(v.mean[t]),
                v.trials_used(),
                v.diverged_count()
            ));
        }
    }
    if !run.floor.is_empty() {
        let floor_mean = run.floor.iter().sum::<f64>() / trials as f64;
        out.push_str(&format!("0,floor,{},{trials},0\n", fmt_float(floor_mean)));
    }
    out
}

/// Raw per-trial CSV: `t,variant,trial,ase`. Diverged trials stop at their
/// truncation point; the constant baseline and floor get one row per trial
/// at `t = 0`.
pub fn raw_csv(run: &GraphRunResult) -> String {
    let mut out = String::from("t,variant,trial,ase\n");
    for t in 0..=run.iterations {
        for v in &run.variants {
            for (trial, curve) in v.per_trial.iter().enumerate() {
                if let Some(val) = curve.get(t) {
                    out.push_str(&format!("{t},{},{trial},{}\n", v.name, fmt_float(*val)));
                }
            }
        }
    }
    for (trial, val) in run.noncoop.iter().enumerate() {
        out.push_str(&format!("0,noncoop,{trial},{}\n", fmt_float(*val)));
    }
    for (trial, val) in run.floor.iter().enumerate() {
        out.push_str(&format!("0,floor,{trial},{}\n", fmt_float(*val)));
    }
    out
}

/// Damping-table CSV: `lambda,beta_abs_T<1>,...` with one column per period.
pub fn beta_csv(table: &BetaTable) -> String {
    let mut out = String::from("lambda");
    for (t, _) in &table.columns {
        out.push_str(&format!(",beta_abs_T{t}"));
    }
    out.push('\n');
    for (i, lambda) in table.lambdas.iter().enumerate() {
        out.push_str(&fmt_float(*lambda));
        for (_, col) in &table.columns {
            out.push(',');
            out.push_str(&fmt_float(col[i]));
        }
        out.push('\n');
    }
    out
}

/// Factor-sequence CSV for one period: `t,omega`.
pub fn omega_csv(factors: &[f64]) -> String {
    let mut out = String::from("t,omega\n");
    for (t, w) in factors.iter().enumerate() {
        out.push_str(&format!("{t},{}\n", fmt_float(*w)));
    }
    out
}

/// Operator-spectrum CSV: `index,eigenvalue`, ascending.
pub fn eigen_csv(vals: &[f64]) -> String {
    let mut out = String::from("index,eigenvalue\n");
    for (i, v) in vals.iter().enumerate() {
        out.push_str(&format!("{i},{}\n", fmt_float(*v)));
    }
    out
}

/// Communication-cost CSV: `variant,rounds,messages,scalars`, rows ordered
/// by trial then variant.
pub fn comm_csv(result: &CommCostResult) -> String {
    let mut out = String::from("variant,rounds,messages,scalars\n");
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.variant, row.rounds, row.messages, row.scalars
        ));
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

/// Writes every output file for the experiment plus the `meta.json` sidecar;
/// returns the paths written.
pub fn write_outputs(
    cfg: &ExperimentConfig,
    output: &ExperimentOutput,
    elapsed: Duration,
) -> Result<Vec<PathBuf>> {
    let dir = &cfg.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let mut files = Vec::new();
    let emit = |name: String, contents: String, files: &mut Vec<PathBuf>| -> Result<()> {
        let path = dir.join(name);
        write(&path, &contents)?;
        files.push(path);
        Ok(())
    };

    let mut diverged = serde_json::Map::new();
    let mut er_resamples = 0usize;
    let mut not_reached = 0usize;

    match output {
        ExperimentOutput::Ase(runs) => {
            for run in runs {
                let stem = match &run.graph_label {
                    Some(label) => format!("{}_{label}", cfg.name),
                    None => cfg.name.clone(),
                };
                emit(format!("{stem}.csv"), ase_csv(run), &mut files)?;
                emit(format!("{stem}_raw.csv"), raw_csv(run), &mut files)?;
                er_resamples += run.er_resamples;
                for v in &run.variants {
                    let key = match &run.graph_label {
                        Some(label) => format!("{label}/{}", v.name),
                        None => v.name.clone(),
                    };
                    diverged.insert(key, v.diverged_count().into());
                }
            }
        }
        ExperimentOutput::BetaPlot(table) => {
            emit(format!("{}.csv", cfg.name), beta_csv(table), &mut files)?;
        }
        ExperimentOutput::OmegaSchedule(rows) => {
            for (t, factors) in rows {
                emit(format!("{}_T{t}.csv", cfg.name), omega_csv(factors), &mut files)?;
            }
        }
        ExperimentOutput::QEigenHist(vals) => {
            emit(format!("{}.csv", cfg.name), eigen_csv(vals), &mut files)?;
        }
        ExperimentOutput::CommCost(result) => {
            emit(format!("{}.csv", cfg.name), comm_csv(result), &mut files)?;
            not_reached = result.not_reached;
        }
    }

    let meta = json!({
        "experiment": cfg.name,
        "kind": kind_name(cfg.kind),
        "master_seed": cfg.seed,
        "trials": cfg.trials,
        "iterations": cfg.iterations,
        "graph_resampled_per_trial": cfg.graph.resampled_per_trial(),
        "er_connectivity_resamples": er_resamples,
        "diverged_trials": diverged,
        "comm_targets_not_reached": not_reached,
        "seed_scheme": "ChaCha8(seed) with the trial index as stream number",
        "config": serde_json::to_value(cfg)?,
        "version": env!("CARGO_PKG_VERSION"),
        "duration_ms": elapsed.as_millis() as u64,
        "outputs": files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect::<Vec<_>>(),
    });
    let meta_path = dir.join("meta.json");
    write(&meta_path, &format!("{:#}\n", meta))?;
    files.push(meta_path);
    Ok(files)
}

fn kind_name(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::Ase => "ase",
        ExperimentKind::BetaPlot => "beta_plot",
        ExperimentKind::OmegaSchedule => "omega_schedule",
        ExperimentKind::QEigenHist => "q_eigen_hist",
        ExperimentKind::CommCost => "comm_cost",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::VariantResult;

    fn tiny_run() -> GraphRunResult {
        GraphRunResult {
            graph_label: None,
            iterations: 2,
            trials: 2,
            variants: vec![VariantResult {
                name: "plain".into(),
                per_trial: vec![vec![4.0, 2.0, 1.0], vec![2.0, 1.0, 0.5]],
                diverged_flags: vec![false, false],
                mean: vec![3.0, 1.5, 0.75],
            }],
            noncoop: vec![1.0, 3.0],
            floor: vec![0.5, 0.25],
            er_resamples: 0,
        }
    }

    #[test]
    fn empty_variant_list_gives_header_only() {
        let run = GraphRunResult {
            graph_label: None,
            iterations: 5,
            trials: 0,
            variants: vec![],
            noncoop: vec![],
            floor: vec![],
            er_resamples: 0,
        };
        assert_eq!(ase_csv(&run), "t,variant,mean_ase,trials_used,diverged\n");
    }

    #[test]
    fn ase_csv_layout() {
        let text = ase_csv(&tiny_run());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,variant,mean_ase,trials_used,diverged");
        // (noncoop + plain) per t in 0..=2, then the floor row
        assert_eq!(lines.len(), 1 + 3 * 2 + 1);
        assert!(lines[1].starts_with("0,noncoop,2.0000000000000000e0,2,0"));
        assert!(lines[2].starts_with("0,plain,3.0000000000000000e0,2,0"));
        assert!(lines.last().unwrap().starts_with("0,floor,3.7500000000000000e-1,2,0"));
    }

    #[test]
    fn raw_csv_contains_per_trial_rows() {
        let text = raw_csv(&tiny_run());
        assert!(text.contains("0,plain,0,4.0000000000000000e0"));
        assert!(text.contains("2,plain,1,5.0000000000000000e-1"));
        assert!(text.contains("0,noncoop,1,3.0000000000000000e0"));
        assert!(text.contains("0,floor,0,5.0000000000000000e-1"));
    }

    #[test]
    fn truncated_trials_stop_emitting_rows() {
        let mut run = tiny_run();
        run.variants[0].per_trial[1] = vec![2.0, 1.0]; // diverged after t = 1
        run.variants[0].diverged_flags[1] = true;
        let text = raw_csv(&run);
        assert!(text.contains("1,plain,1,"));
        assert!(!text.contains("2,plain,1,"));
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn float_format_is_17_significant_digits() {
        assert_eq!(fmt_float(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(fmt_float(0.0), "0.0000000000000000e0");
        let v = 0.1234567890123456789;
        let parsed: f64 = fmt_float(v).parse().unwrap();
        assert_eq!(parsed, v);
    }

    #[test]
    fn beta_csv_header_matches_periods() {
        let table = BetaTable {
            lambdas: vec![0.0, 0.5],
            columns: vec![(1, vec![1.0, 0.2]), (2, vec![1.0, 0.1])],
        };
        let text = beta_csv(&table);
        assert!(text.starts_with("lambda,beta_abs_T1,beta_abs_T2\n"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn comm_csv_rows() {
        let result = CommCostResult {
            rows: vec![crate::runner::CommRow {
                trial: 0,
                variant: "plain".into(),
                rounds: 50,
                messages: 7800,
                scalars: 23400,
            }],
            not_reached: 0,
        };
        assert_eq!(comm_csv(&result), "variant,rounds,messages,scalars\nplain,50,7800,23400\n");
    }
}
