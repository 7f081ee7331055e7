//! Experiment configuration: one JSON document per experiment, with CLI
//! flags overriding individual fields.

use std::path::{Path, PathBuf};

use coop_lms_core::graph::{gen_ba, gen_er, named_graph, Graph, NamedGraph};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// What the experiment computes and emits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Trial-averaged ASE curves per variant.
    Ase,
    /// Damping-polynomial magnitude table over a lambda grid.
    BetaPlot,
    /// Relaxation-factor sequence per period length.
    OmegaSchedule,
    /// Eigenvalues of the update operator for a single sampled scenario.
    QEigenHist,
    /// Rounds/messages needed to reach the plain variant's reference ASE.
    CommCost,
}

/// Agent-network description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GraphSpec {
    /// One graph from the embedded catalog; fixed across trials.
    Named { name: String },
    /// Several catalog graphs, each producing its own curve file.
    NamedMany { names: Vec<String> },
    /// Erdős–Rényi ensemble; redrawn per trial.
    Er { nodes: usize, p: f64 },
    /// Barabási–Albert ensemble; redrawn per trial.
    Ba { nodes: usize, m_attach: usize },
}

impl GraphSpec {
    /// Random ensembles are redrawn per trial; named graphs stay fixed.
    pub fn resampled_per_trial(&self) -> bool {
        matches!(self, GraphSpec::Er { .. } | GraphSpec::Ba { .. })
    }

    /// Draws (or looks up) the graph, returning any ER resample count.
    pub fn build(&self, rng: &mut ChaCha8Rng) -> Result<(Graph, usize)> {
        match self {
            GraphSpec::Named { name } => Ok((named_graph(parse_named(name)?), 0)),
            GraphSpec::NamedMany { .. } => Err(HarnessError::invalid(
                "graph",
                "a multi-graph spec must be split before building",
            )),
            GraphSpec::Er { nodes, p } => Ok(gen_er(*nodes, *p, rng)?),
            GraphSpec::Ba { nodes, m_attach } => Ok((gen_ba(*nodes, *m_attach, rng)?, 0)),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            GraphSpec::Named { name } => parse_named(name).map(|_| ()),
            GraphSpec::NamedMany { names } => {
                if names.is_empty() {
                    return Err(HarnessError::invalid("graph.names", "must not be empty"));
                }
                names.iter().try_for_each(|n| parse_named(n).map(|_| ()))
            }
            GraphSpec::Er { nodes, p } => {
                if *nodes < 2 {
                    return Err(HarnessError::invalid("graph.nodes", "need at least 2 nodes"));
                }
                if !(0.0..=1.0).contains(p) {
                    return Err(HarnessError::invalid("graph.p", format!("{p} outside [0, 1]")));
                }
                Ok(())
            }
            GraphSpec::Ba { nodes, m_attach } => {
                if *m_attach < 1 {
                    return Err(HarnessError::invalid("graph.m_attach", "must be at least 1"));
                }
                if nodes <= m_attach {
                    return Err(HarnessError::invalid(
                        "graph.nodes",
                        "must exceed the attachment count",
                    ));
                }
                Ok(())
            }
        }
    }
}

fn parse_named(name: &str) -> Result<NamedGraph> {
    name.parse::<NamedGraph>()
        .map_err(|e| HarnessError::invalid("graph.name", e.to_string()))
}

/// Relaxation-schedule settings: the interval endpoints and the period
/// lengths to run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevConfig {
    pub a: f64,
    pub b: f64,
    #[serde(default)]
    pub periods: Vec<usize>,
}

fn default_max_rounds() -> usize {
    200
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub kind: ExperimentKind,
    pub graph: GraphSpec,
    /// Dimension of the estimated parameter.
    pub dim: usize,
    /// Observations per agent.
    pub obs_per_agent: usize,
    /// Observation noise standard deviation.
    pub sigma: f64,
    /// Step-size safety margin.
    pub epsilon: f64,
    pub chebyshev: ChebyshevConfig,
    /// Gradient step sizes to sweep with the consensus step fixed by rule.
    #[serde(default)]
    pub mu_sweep: Vec<f64>,
    /// Consensus step sizes to sweep with the gradient step fixed by rule.
    #[serde(default)]
    pub eta_sweep: Vec<f64>,
    pub iterations: usize,
    pub trials: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Round budget for the communication-cost search.
    #[serde(default = "default_max_rounds")]
    pub max_rounds: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(HarnessError::invalid("name", "must not be empty"));
        }
        self.graph.validate()?;
        if self.dim < 1 {
            return Err(HarnessError::invalid("dim", "must be at least 1"));
        }
        if self.obs_per_agent < 1 {
            return Err(HarnessError::invalid("obs_per_agent", "must be at least 1"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(HarnessError::invalid("sigma", "must be finite and >= 0"));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(HarnessError::invalid("epsilon", "must lie in (0, 1)"));
        }
        if !(self.chebyshev.a > 0.0 && self.chebyshev.a < self.chebyshev.b) {
            return Err(HarnessError::invalid("chebyshev", "need 0 < a < b"));
        }
        if self.chebyshev.periods.iter().any(|t| *t < 1) {
            return Err(HarnessError::invalid("chebyshev.periods", "periods must be >= 1"));
        }
        for v in self.mu_sweep.iter() {
            if !(v.is_finite() && *v > 0.0) {
                return Err(HarnessError::invalid("mu_sweep", format!("{v} must be positive")));
            }
        }
        for v in self.eta_sweep.iter() {
            if !(v.is_finite() && *v > 0.0) {
                return Err(HarnessError::invalid("eta_sweep", format!("{v} must be positive")));
            }
        }
        if self.iterations < 1 {
            return Err(HarnessError::invalid("iterations", "must be at least 1"));
        }
        if self.trials < 1 {
            return Err(HarnessError::invalid("trials", "must be at least 1"));
        }
        if self.max_rounds < 1 {
            return Err(HarnessError::invalid("max_rounds", "must be at least 1"));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
