//! Experiment execution: per-trial seeding, variant runs, ASE aggregation
//! and the analytic table builders.
//!
//! Trials run in parallel; every trial derives its own ChaCha stream from
//! the master seed, and aggregation walks trials in index order, so results
//! are byte-identical regardless of the parallel schedule.

use coop_lms_core::chebyshev::ChebyshevSchedule;
use coop_lms_core::lms::{
    self, ase_of_state, fixed_point, lms_solution, noncooperative_solutions, run_cooperative_lms,
    run_chebyshev_lms, Scenario, Trajectory,
};
use coop_lms_core::simnet::{self, Variant};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentKind, GraphSpec};
use crate::error::{HarnessError, Result};

/// Per-trial RNG: the master seed keys the cipher, the trial index selects
/// the stream. Trials are reproducible independently and in any execution
/// order. Within a trial the stream is consumed in a fixed order: graph
/// draws (random ensembles only), then scenario draws.
pub fn trial_rng(master_seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial as u64);
    rng
}

/// One variant's ASE data over all trials of a run.
#[derive(Clone, Debug)]
pub struct VariantResult {
    pub name: String,
    /// ASE at each iteration per trial; diverged trials carry the truncated
    /// curve up to the offending state.
    pub per_trial: Vec<Vec<f64>>,
    pub diverged_flags: Vec<bool>,
    /// Trial mean at each iteration, diverged trials excluded entirely.
    pub mean: Vec<f64>,
}

impl VariantResult {
    pub fn diverged_count(&self) -> usize {
        self.diverged_flags.iter().filter(|d| **d).count()
    }

    pub fn trials_used(&self) -> usize {
        self.per_trial.len() - self.diverged_count()
    }
}

/// ASE curves for one graph (presets over several graphs produce one of
/// these per graph).
#[derive(Clone, Debug)]
pub struct GraphRunResult {
    /// Set when the experiment spans several graphs.
    pub graph_label: Option<String>,
    pub iterations: usize,
    pub trials: usize,
    pub variants: Vec<VariantResult>,
    /// Constant noncooperative baseline per trial: the ASE of the per-agent
    /// closed-form solutions against the centralized solution.
    pub noncoop: Vec<f64>,
    /// ASE of the cooperative fixed point against the centralized solution,
    /// per trial: the plateau the curves converge to.
    pub floor: Vec<f64>,
    /// Total ER connectivity resamples across trials.
    pub er_resamples: usize,
}

/// Damping-magnitude table over a lambda grid, one column per period.
#[derive(Clone, Debug)]
pub struct BetaTable {
    pub lambdas: Vec<f64>,
    /// `(period, |damping| per lambda)` in config order.
    pub columns: Vec<(usize, Vec<f64>)>,
}

/// One row of the communication-cost table.
#[derive(Clone, Debug)]
pub struct CommRow {
    pub trial: usize,
    pub variant: String,
    pub rounds: u64,
    pub messages: u64,
    pub scalars: u64,
}

#[derive(Clone, Debug)]
pub struct CommCostResult {
    pub rows: Vec<CommRow>,
    /// Trials whose relaxed run never reached the target within the budget.
    pub not_reached: usize,
}

#[derive(Clone, Debug)]
pub enum ExperimentOutput {
    Ase(Vec<GraphRunResult>),
    BetaPlot(BetaTable),
    /// `(period, factor at t)` for `t` in `0..iterations`.
    OmegaSchedule(Vec<(usize, Vec<f64>)>),
    QEigenHist(Vec<f64>),
    CommCost(CommCostResult),
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    match cfg.kind {
        ExperimentKind::Ase => run_ase(cfg).map(ExperimentOutput::Ase),
        ExperimentKind::BetaPlot => Ok(ExperimentOutput::BetaPlot(beta_table(cfg)?)),
        ExperimentKind::OmegaSchedule => Ok(ExperimentOutput::OmegaSchedule(omega_schedule(cfg)?)),
        ExperimentKind::QEigenHist => run_q_eigen_hist(cfg).map(ExperimentOutput::QEigenHist),
        ExperimentKind::CommCost => run_comm_cost(cfg).map(ExperimentOutput::CommCost),
    }
}

/// Dynamic (per-iteration) variant names in output order.
pub fn variant_names(cfg: &ExperimentConfig) -> Vec<String> {
    let mut names = vec!["plain".to_string()];
    for t in &cfg.chebyshev.periods {
        names.push(format!("cheb_T{t}"));
    }
    for v in &cfg.mu_sweep {
        names.push(format!("mu_{v}"));
    }
    for v in &cfg.eta_sweep {
        names.push(format!("eta_{v}"));
    }
    names
}

struct TrialData {
    curves: Vec<(Vec<f64>, bool)>,
    noncoop: f64,
    floor: f64,
    er_resamples: usize,
}

fn ase_curve(tr: &Trajectory, reference: &[f64]) -> Result<(Vec<f64>, bool)> {
    let curve = tr
        .states()
        .iter()
        .map(|st| ase_of_state(st, reference))
        .collect::<coop_lms_core::Result<Vec<f64>>>()?;
    Ok((curve, tr.diverged()))
}

fn sample_trial_scenario(
    cfg: &ExperimentConfig,
    spec: &GraphSpec,
    trial: usize,
) -> Result<(Scenario, usize)> {
    let mut rng = trial_rng(cfg.seed, trial);
    let (graph, er_resamples) = spec.build(&mut rng)?;
    let s = Scenario::sample(graph, cfg.dim, cfg.obs_per_agent, cfg.sigma, cfg.epsilon, &mut rng)?;
    Ok((s, er_resamples))
}

fn run_trial(cfg: &ExperimentConfig, spec: &GraphSpec, trial: usize) -> Result<TrialData> {
    let (s, er_resamples) = sample_trial_scenario(cfg, spec, trial)?;
    let reference = lms_solution(&s)?;
    let noncoop = lms::ase(&noncooperative_solutions(&s)?, &reference)?;
    let floor = ase_of_state(&fixed_point(&s)?, &reference)?;

    let mut curves = Vec::new();
    curves.push(ase_curve(&run_cooperative_lms(&s, cfg.iterations), &reference)?);
    for t in &cfg.chebyshev.periods {
        let sched = ChebyshevSchedule::new(cfg.chebyshev.a, cfg.chebyshev.b, *t)?;
        curves.push(ase_curve(&run_chebyshev_lms(&s, cfg.iterations, &sched), &reference)?);
    }
    for mu in &cfg.mu_sweep {
        let sw = s.clone().with_step_sizes(s.eta(), *mu)?;
        curves.push(ase_curve(&run_cooperative_lms(&sw, cfg.iterations), &reference)?);
    }
    for eta in &cfg.eta_sweep {
        let sw = s.clone().with_step_sizes(*eta, s.mu())?;
        curves.push(ase_curve(&run_cooperative_lms(&sw, cfg.iterations), &reference)?);
    }
    Ok(TrialData { curves, noncoop, floor, er_resamples })
}

fn aggregate(cfg: &ExperimentConfig, label: Option<String>, trials: Vec<TrialData>) -> GraphRunResult {
    let names = variant_names(cfg);
    let mut variants: Vec<VariantResult> = names
        .into_iter()
        .map(|name| VariantResult {
            name,
            per_trial: Vec::with_capacity(trials.len()),
            diverged_flags: Vec::with_capacity(trials.len()),
            mean: Vec::new(),
        })
        .collect();
    let mut noncoop = Vec::with_capacity(trials.len());
    let mut floor = Vec::with_capacity(trials.len());
    let mut er_resamples = 0;
    for trial in trials {
        for (slot, (curve, diverged)) in variants.iter_mut().zip(trial.curves) {
            slot.per_trial.push(curve);
            slot.diverged_flags.push(diverged);
        }
        noncoop.push(trial.noncoop);
        floor.push(trial.floor);
        er_resamples += trial.er_resamples;
    }
    for v in &mut variants {
        v.mean = mean_curve(&v.per_trial, &v.diverged_flags, cfg.iterations);
    }
    GraphRunResult {
        graph_label: label,
        iterations: cfg.iterations,
        trials: noncoop.len(),
        variants,
        noncoop,
        floor,
        er_resamples,
    }
}

/// Mean over non-diverged trials at every iteration, summed in trial order.
fn mean_curve(per_trial: &[Vec<f64>], diverged: &[bool], iterations: usize) -> Vec<f64> {
    let used = diverged.iter().filter(|d| !**d).count();
    (0..=iterations)
        .map(|t| {
            if used == 0 {
                return f64::NAN;
            }
            let mut acc = 0.0;
            for (curve, d) in per_trial.iter().zip(diverged) {
                if !*d {
                    acc += curve[t];
                }
            }
            acc / used as f64
        })
        .collect()
}

fn run_ase(cfg: &ExperimentConfig) -> Result<Vec<GraphRunResult>> {
    let specs: Vec<(Option<String>, GraphSpec)> = match &cfg.graph {
        GraphSpec::NamedMany { names } => names
            .iter()
            .map(|n| (Some(n.clone()), GraphSpec::Named { name: n.clone() }))
            .collect(),
        other => vec![(None, other.clone())],
    };
    specs
        .into_iter()
        .map(|(label, spec)| {
            let trials: Result<Vec<TrialData>> = (0..cfg.trials)
                .into_par_iter()
                .map(|trial| run_trial(cfg, &spec, trial))
                .collect();
            Ok(aggregate(cfg, label, trials?))
        })
        .collect()
}

fn beta_table(cfg: &ExperimentConfig) -> Result<BetaTable> {
    // the scan runs past the interval's upper end so the growth outside is
    // visible on the plot
    let hi = cfg.chebyshev.b * 1.1;
    let points = 1101usize;
    let lambdas: Vec<f64> =
        (0..points).map(|i| hi * i as f64 / (points - 1) as f64).collect();
    let mut columns = Vec::new();
    for t in &cfg.chebyshev.periods {
        let sched = ChebyshevSchedule::new(cfg.chebyshev.a, cfg.chebyshev.b, *t)?;
        let col = lambdas.iter().map(|l| sched.damping_at(*l).abs()).collect();
        columns.push((*t, col));
    }
    Ok(BetaTable { lambdas, columns })
}

fn omega_schedule(cfg: &ExperimentConfig) -> Result<Vec<(usize, Vec<f64>)>> {
    cfg.chebyshev
        .periods
        .iter()
        .map(|t| {
            let sched = ChebyshevSchedule::new(cfg.chebyshev.a, cfg.chebyshev.b, *t)?;
            Ok((*t, (0..cfg.iterations).map(|i| sched.factor_at(i)).collect()))
        })
        .collect()
}

fn run_q_eigen_hist(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    let (s, _) = sample_trial_scenario(cfg, &cfg.graph.clone(), 0)?;
    Ok(lms::update_operator_eigvals(&s)?)
}

fn run_comm_cost(cfg: &ExperimentConfig) -> Result<CommCostResult> {
    if cfg.chebyshev.periods.is_empty() {
        return Err(HarnessError::invalid(
            "chebyshev.periods",
            "the communication-cost experiment needs at least one period",
        ));
    }
    struct TrialRows {
        rows: Vec<CommRow>,
        not_reached: usize,
    }
    let per_trial: Result<Vec<TrialRows>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let (s, _) = sample_trial_scenario(cfg, &cfg.graph.clone(), trial)?;
            let reference = lms_solution(&s)?;
            let plain = run_cooperative_lms(&s, cfg.iterations);
            let target = ase_of_state(plain.final_state(), &reference)?;
            let edges = s.graph().edge_count() as u64;
            let dim = s.dim() as u64;
            let mut rows = vec![CommRow {
                trial,
                variant: "plain".into(),
                rounds: cfg.iterations as u64,
                messages: 2 * edges * cfg.iterations as u64,
                scalars: 2 * edges * cfg.iterations as u64 * dim,
            }];
            let mut not_reached = 0;
            for t in &cfg.chebyshev.periods {
                let sched = ChebyshevSchedule::new(cfg.chebyshev.a, cfg.chebyshev.b, *t)?;
                match simnet::messages_to_target_ase(
                    &s,
                    target,
                    &Variant::Chebyshev(sched),
                    cfg.max_rounds,
                )? {
                    Some(stats) => rows.push(CommRow {
                        trial,
                        variant: format!("cheb_T{t}"),
                        rounds: stats.rounds,
                        messages: stats.messages_sent,
                        scalars: stats.scalars_sent,
                    }),
                    None => not_reached += 1,
                }
            }
            Ok(TrialRows { rows, not_reached })
        })
        .collect();
    let mut rows = Vec::new();
    let mut not_reached = 0;
    for t in per_trial? {
        rows.extend(t.rows);
        not_reached += t.not_reached;
    }
    Ok(CommCostResult { rows, not_reached })
}
