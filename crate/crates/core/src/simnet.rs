//! Synchronous message-passing simulation of the distributed protocol.
//!
//! Agents are independent state machines holding only their own observation
//! data and estimate; per round every agent computes its local gradient
//! update, posts it to each neighbor's mailbox, and after a barrier folds the
//! received updates into the consensus step and the (optional) relaxation.
//! Nothing here reads global state: an agent sees its own fields and its
//! inbox, and the inbox is validated against the graph before folding.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::chebyshev::ChebyshevSchedule;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::lms::{self, GlobalState, Scenario, Trajectory, DIVERGENCE_LIMIT};

/// Which update rule the agents run.
#[derive(Clone, Debug)]
pub enum Variant {
    /// Plain cooperative update.
    Plain,
    /// Relaxed update with factors from the shared schedule and the
    /// synchronized round index.
    Chebyshev(ChebyshevSchedule),
}

impl Variant {
    fn factor_at(&self, round: usize) -> f64 {
        match self {
            Variant::Plain => 1.0,
            Variant::Chebyshev(sched) => sched.factor_at(round),
        }
    }
}

/// A vector exchanged between neighbors in one round.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorMessage {
    pub from: usize,
    pub to: usize,
    pub round: usize,
    pub payload: Vec<f64>,
}

/// Communication accounting for a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CommStats {
    pub messages_sent: u64,
    pub scalars_sent: u64,
    pub rounds: u64,
}

/// One agent: private observation data, private estimate, neighbor ids and
/// the shared step sizes. All reads go through `&self`.
#[derive(Clone, Debug)]
pub struct AgentNode {
    id: usize,
    neighbors: Vec<usize>,
    obs_matrix: Matrix,
    obs_vector: Vec<f64>,
    estimate: Vec<f64>,
    eta: f64,
    mu: f64,
}

impl AgentNode {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn estimate(&self) -> &[f64] {
        &self.estimate
    }

    pub fn neighbors(&self) -> &[usize] {
        &self.neighbors
    }

    /// Local gradient update from the agent's own state only.
    pub fn local_update(&self) -> Vec<f64> {
        lms::local_gradient_step(&self.obs_matrix, &self.obs_vector, &self.estimate, self.mu)
    }

    /// Posts the local update to every neighbor's mailbox.
    fn broadcast(&self, update: &[f64], round: usize, mailboxes: &mut [Vec<VectorMessage>]) {
        for &j in &self.neighbors {
            mailboxes[j].push(VectorMessage {
                from: self.id,
                to: j,
                round,
                payload: update.to_vec(),
            });
        }
    }

    /// Validates the round's inbox and folds it into the consensus step and
    /// the relaxation. `update` must be the value returned by
    /// [`AgentNode::local_update`] for this round.
    ///
    /// The inbox must contain exactly one message per neighbor, addressed to
    /// this agent, carrying the current round index; anything else is a
    /// protocol violation. Messages are folded in ascending sender order, so
    /// the result does not depend on delivery order.
    pub fn receive_round(
        &mut self,
        round: usize,
        update: &[f64],
        inbox: &mut Vec<VectorMessage>,
        omega: f64,
    ) -> Result<()> {
        if inbox.len() != self.neighbors.len() {
            return Err(Error::Protocol(format!(
                "agent {} expected {} messages in round {round}, found {}",
                self.id,
                self.neighbors.len(),
                inbox.len()
            )));
        }
        inbox.sort_by_key(|m| m.from);
        let mut seen_from = None;
        for msg in inbox.iter() {
            if msg.to != self.id {
                return Err(Error::Protocol(format!(
                    "agent {} received a message addressed to {}",
                    self.id, msg.to
                )));
            }
            if msg.round != round {
                return Err(Error::Protocol(format!(
                    "agent {} received a round-{} message in round {round}",
                    self.id, msg.round
                )));
            }
            if !self.neighbors.contains(&msg.from) {
                return Err(Error::Protocol(format!(
                    "agent {} received a message across the non-edge from {}",
                    self.id, msg.from
                )));
            }
            if seen_from == Some(msg.from) {
                return Err(Error::Protocol(format!(
                    "agent {} received a duplicate message from {}",
                    self.id, msg.from
                )));
            }
            if msg.payload.len() != self.estimate.len() {
                return Err(Error::Protocol(format!(
                    "agent {} received a payload of length {}, expected {}",
                    self.id,
                    msg.payload.len(),
                    self.estimate.len()
                )));
            }
            seen_from = Some(msg.from);
        }

        let mut folded = update.to_vec();
        for msg in inbox.iter() {
            for (f, (uj, uk)) in folded.iter_mut().zip(msg.payload.iter().zip(update)) {
                *f += self.eta * (uj - uk);
            }
        }
        for (x, v) in self.estimate.iter_mut().zip(&folded) {
            *x = (1.0 - omega) * *x + omega * v;
        }
        inbox.clear();
        Ok(())
    }
}

/// Result of a distributed run: final per-agent estimates, communication
/// totals and the full trajectory (for comparison against the centralized
/// loops).
#[derive(Clone, Debug)]
pub struct DistributedRun {
    pub final_states: Vec<Vec<f64>>,
    pub stats: CommStats,
    pub trajectory: Trajectory,
}

fn agents_from_scenario(s: &Scenario) -> Vec<AgentNode> {
    (0..s.agent_count())
        .map(|k| AgentNode {
            id: k,
            neighbors: s.graph().neighbors(k).to_vec(),
            obs_matrix: s.obs_matrix(k).clone(),
            obs_vector: s.obs_vector(k).to_vec(),
            estimate: vec![0.0; s.dim()],
            eta: s.eta(),
            mu: s.mu(),
        })
        .collect()
}

fn snapshot(agents: &[AgentNode]) -> GlobalState {
    let blocks: Vec<&[f64]> = agents.iter().map(|a| a.estimate()).collect();
    GlobalState::from_blocks(&blocks).expect("one block per agent")
}

/// Runs `rounds` synchronous rounds of the protocol with agents processed in
/// id order within each phase.
pub fn run_distributed(s: &Scenario, rounds: usize, variant: &Variant) -> Result<DistributedRun> {
    run_engine(s, rounds, variant, |_round, order| order.sort_unstable())
}

/// Same protocol, but the processing order of agents inside each phase is
/// shuffled per round. Results must be identical to [`run_distributed`]:
/// the barrier makes intra-round order unobservable.
pub fn run_distributed_with_schedule<R: Rng + ?Sized>(
    s: &Scenario,
    rounds: usize,
    variant: &Variant,
    rng: &mut R,
) -> Result<DistributedRun> {
    run_engine(s, rounds, variant, |_round, order| {
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
    })
}

fn run_engine(
    s: &Scenario,
    rounds: usize,
    variant: &Variant,
    mut reorder: impl FnMut(usize, &mut Vec<usize>),
) -> Result<DistributedRun> {
    let mut agents = agents_from_scenario(s);
    let count = agents.len();
    let mut mailboxes: Vec<Vec<VectorMessage>> = vec![Vec::new(); count];
    let mut states = Vec::with_capacity(rounds + 1);
    states.push(snapshot(&agents));
    let mut stats = CommStats::default();
    let mut diverged = false;

    for round in 0..rounds {
        let mut order: Vec<usize> = (0..count).collect();
        reorder(round, &mut order);

        // compute phase: every local update uses the pre-round estimates
        let mut updates: Vec<Option<Vec<f64>>> = vec![None; count];
        for &k in &order {
            updates[k] = Some(agents[k].local_update());
        }
        // post phase, then the barrier: all mailboxes filled before any fold
        for &k in &order {
            let u = updates[k].as_ref().expect("computed this round");
            agents[k].broadcast(u, round, &mut mailboxes);
            stats.messages_sent += agents[k].neighbors().len() as u64;
            stats.scalars_sent += (agents[k].neighbors().len() * s.dim()) as u64;
        }
        // fold phase: each agent drains its own mailbox exactly once
        let omega = variant.factor_at(round);
        for &k in &order {
            let u = updates[k].take().expect("computed this round");
            let mut inbox = core::mem::take(&mut mailboxes[k]);
            agents[k].receive_round(round, &u, &mut inbox, omega)?;
        }
        stats.rounds += 1;

        let st = snapshot(&agents);
        let n = st.norm();
        states.push(st);
        if n > DIVERGENCE_LIMIT {
            diverged = true;
            break;
        }
    }

    Ok(DistributedRun {
        final_states: agents.into_iter().map(|a| a.estimate).collect(),
        stats,
        trajectory: Trajectory::from_states(states, diverged),
    })
}

/// Runs the protocol until the averaged squared error against the
/// centralized least-squares solution drops to `target`, or `max_rounds`
/// passes. Returns the communication spent, or `None` if the target was
/// never reached.
pub fn messages_to_target_ase(
    s: &Scenario,
    target: f64,
    variant: &Variant,
    max_rounds: usize,
) -> Result<Option<CommStats>> {
    let target_ok = target.is_finite() && target > 0.0;
    if !target_ok {
        return Err(Error::Config(format!("target ASE {target} must be positive")));
    }
    let reference = lms::lms_solution(s)?;
    let mut agents = agents_from_scenario(s);
    let count = agents.len();

    let current_ase = |agents: &[AgentNode]| -> Result<f64> {
        let blocks: Vec<&[f64]> = agents.iter().map(|a| a.estimate()).collect();
        lms::ase(&blocks, &reference)
    };

    let mut stats = CommStats::default();
    if current_ase(&agents)? <= target {
        return Ok(Some(stats));
    }
    let mut mailboxes: Vec<Vec<VectorMessage>> = vec![Vec::new(); count];
    for round in 0..max_rounds {
        let updates: Vec<Vec<f64>> = agents.iter().map(AgentNode::local_update).collect();
        for (k, u) in updates.iter().enumerate() {
            agents[k].broadcast(u, round, &mut mailboxes);
            stats.messages_sent += agents[k].neighbors().len() as u64;
            stats.scalars_sent += (agents[k].neighbors().len() * s.dim()) as u64;
        }
        let omega = variant.factor_at(round);
        for (k, u) in updates.iter().enumerate() {
            let mut inbox = core::mem::take(&mut mailboxes[k]);
            agents[k].receive_round(round, u, &mut inbox, omega)?;
        }
        stats.rounds += 1;
        if current_ase(&agents)? <= target {
            return Ok(Some(stats));
        }
    }
    Ok(None)
}
