//! Cooperative least-mean-square estimation: scenario model, the agent-form
//! and global-form iterations, the Chebyshev-relaxed variant, step-size
//! rules, the update operator governing error evolution, and error metrics.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::chebyshev::ChebyshevSchedule;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, Matrix};
use crate::math;

/// A trajectory whose state norm crosses this limit is marked diverged and
/// truncated instead of propagating toward infinities.
pub const DIVERGENCE_LIMIT: f64 = 1e9;

/// One estimation problem instance over an agent network.
///
/// Each of the `K` agents holds an `m x N` observation matrix and an
/// observation vector `y_k = H_k x0 + w_k`; the step sizes couple the local
/// gradient updates (`mu`) with the neighbor-averaging consensus updates
/// (`eta`).
#[derive(Clone, Debug)]
pub struct Scenario {
    graph: Graph,
    dim: usize,
    obs: usize,
    sigma: f64,
    x0: Vec<f64>,
    obs_matrices: Vec<Matrix>,
    obs_vectors: Vec<Vec<f64>>,
    eta: f64,
    mu: f64,
    lambda_max_l: f64,
    gram_maxes: Vec<f64>,
}

impl Scenario {
    /// Draws a random scenario on `graph`: hidden parameter and observation
    /// matrices with i.i.d. standard normal entries, observation noise
    /// `N(0, sigma^2)`, and step sizes from [`step_sizes`] with the given
    /// safety margin `epsilon`.
    ///
    /// Draw order (fixed for reproducibility): the `N` entries of the hidden
    /// parameter, then each agent's observation matrix row-major, then each
    /// agent's noise vector. Noise is drawn even when `sigma == 0`, so a
    /// noiseless run consumes the same stream as a noisy one.
    pub fn sample<R: Rng + ?Sized>(
        graph: Graph,
        dim: usize,
        obs: usize,
        sigma: f64,
        epsilon: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if dim < 1 || obs < 1 {
            return Err(Error::Config("dimensions must be at least 1".to_string()));
        }
        let sigma_ok = sigma.is_finite() && sigma >= 0.0;
        if !sigma_ok {
            return Err(Error::Config(format!("noise level {sigma} must be finite and >= 0")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Config(format!("margin {epsilon} outside (0, 1)")));
        }
        if !graph.is_connected() {
            return Err(Error::Config("scenario graph must be connected".to_string()));
        }
        let k = graph.node_count();
        let x0: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let obs_matrices: Vec<Matrix> = (0..k)
            .map(|_| {
                let data = (0..obs * dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                Matrix::from_vec(obs, dim, data)
            })
            .collect::<Result<_>>()?;
        let obs_vectors: Vec<Vec<f64>> = obs_matrices
            .iter()
            .map(|h| {
                let mut y = h.matvec(&x0);
                for v in &mut y {
                    *v += sigma * rng.sample::<f64, _>(StandardNormal);
                }
                y
            })
            .collect();

        let lambda_max_l = graph.laplacian_lambda_max()?;
        let gram_maxes: Vec<f64> =
            obs_matrices.iter().map(linalg::gram_lambda_max).collect::<Result<_>>()?;
        let (eta, mu) = if lambda_max_l > 0.0 {
            step_sizes(lambda_max_l, &gram_maxes, epsilon)?
        } else {
            // single-agent network: no consensus term, eta is inert
            let (_, mu) = step_sizes(1.0, &gram_maxes, epsilon)?;
            (1.0 - epsilon, mu)
        };

        Ok(Scenario {
            graph,
            dim,
            obs,
            sigma,
            x0,
            obs_matrices,
            obs_vectors,
            eta,
            mu,
            lambda_max_l,
            gram_maxes,
        })
    }

    /// Assembles a scenario from explicit parts, validating shapes,
    /// finiteness and connectivity. Step sizes are accepted as given (the
    /// mismatched-parameter sweeps deliberately probe values outside the
    /// convergence conditions).
    pub fn from_parts(
        graph: Graph,
        x0: Vec<f64>,
        obs_matrices: Vec<Matrix>,
        obs_vectors: Vec<Vec<f64>>,
        eta: f64,
        mu: f64,
    ) -> Result<Self> {
        if !graph.is_connected() {
            return Err(Error::Config("scenario graph must be connected".to_string()));
        }
        let k = graph.node_count();
        if obs_matrices.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: obs_matrices.len() });
        }
        if obs_vectors.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: obs_vectors.len() });
        }
        let dim = x0.len();
        if dim == 0 {
            return Err(Error::Config("hidden parameter must be nonempty".to_string()));
        }
        let obs = obs_matrices[0].rows();
        for h in &obs_matrices {
            if h.rows() != obs || h.cols() != dim {
                return Err(Error::Config("observation matrices must share one shape".to_string()));
            }
        }
        for y in &obs_vectors {
            if y.len() != obs {
                return Err(Error::DimensionMismatch { expected: obs, got: y.len() });
            }
            if !y.iter().all(|v| v.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        if !x0.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(eta > 0.0 && eta.is_finite() && mu > 0.0 && mu.is_finite()) {
            return Err(Error::Config(format!("step sizes ({eta}, {mu}) must be positive")));
        }
        let lambda_max_l = graph.laplacian_lambda_max()?;
        let gram_maxes: Vec<f64> =
            obs_matrices.iter().map(linalg::gram_lambda_max).collect::<Result<_>>()?;
        Ok(Scenario {
            graph,
            dim,
            obs,
            sigma: 0.0,
            x0,
            obs_matrices,
            obs_vectors,
            eta,
            mu,
            lambda_max_l,
            gram_maxes,
        })
    }

    /// Same scenario with overridden step sizes (mismatched-parameter runs).
    pub fn with_step_sizes(mut self, eta: f64, mu: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite() && mu > 0.0 && mu.is_finite()) {
            return Err(Error::Config(format!("step sizes ({eta}, {mu}) must be positive")));
        }
        self.eta = eta;
        self.mu = mu;
        Ok(self)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn agent_count(&self) -> usize {
        self.graph.node_count()
    }

    /// Dimension `N` of the estimated parameter.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Observations per agent, `m`.
    pub fn obs_per_agent(&self) -> usize {
        self.obs
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn hidden_parameter(&self) -> &[f64] {
        &self.x0
    }

    pub fn obs_matrix(&self, k: usize) -> &Matrix {
        &self.obs_matrices[k]
    }

    pub fn obs_vector(&self, k: usize) -> &[f64] {
        &self.obs_vectors[k]
    }

    /// Consensus step size.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Gradient step size.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda_max_laplacian(&self) -> f64 {
        self.lambda_max_l
    }

    /// Largest Gram eigenvalue per agent.
    pub fn gram_maxes(&self) -> &[f64] {
        &self.gram_maxes
    }

    /// True iff the step sizes satisfy the strict contraction conditions
    /// (`eta * lambda_max(L) < 1` and `mu * max_k lambda_max(H_k^T H_k) < 1`).
    pub fn is_convergence_valid(&self) -> bool {
        let gmax = self.gram_maxes.iter().fold(0.0f64, |a, b| math::max(a, *b));
        self.eta * self.lambda_max_l < 1.0 && self.mu * gmax < 1.0
    }
}

/// Step-size rule: `eta = (1 - epsilon) / lambda_max(L)` and
/// `mu = (1 - epsilon) / max_k lambda_max(H_k^T H_k)`.
///
/// Both satisfy the strict positive-definiteness conditions of the update
/// operator whenever `epsilon` lies in `(0, 1)`.
pub fn step_sizes(lambda_max_l: f64, gram_maxes: &[f64], epsilon: f64) -> Result<(f64, f64)> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Config(format!("margin {epsilon} outside (0, 1)")));
    }
    let lambda_ok = lambda_max_l.is_finite() && lambda_max_l > 0.0;
    if !lambda_ok {
        return Err(Error::Config(format!("lambda_max(L) = {lambda_max_l} must be positive")));
    }
    let gmax = gram_maxes.iter().fold(0.0f64, |a, b| math::max(a, *b));
    let gmax_ok = gmax.is_finite() && gmax > 0.0;
    if gram_maxes.is_empty() || !gmax_ok {
        return Err(Error::Config("Gram maxima must contain a positive entry".to_string()));
    }
    Ok(((1.0 - epsilon) / lambda_max_l, (1.0 - epsilon) / gmax))
}

/// Stacked agent estimates: `K` blocks of length `N` in agent order.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalState {
    data: Vec<f64>,
    block_len: usize,
}

impl GlobalState {
    pub fn zeros(agents: usize, block_len: usize) -> Self {
        assert!(agents > 0 && block_len > 0);
        GlobalState { data: vec![0.0; agents * block_len], block_len }
    }

    pub fn from_vec(data: Vec<f64>, block_len: usize) -> Result<Self> {
        if block_len == 0 || data.is_empty() || !data.len().is_multiple_of(block_len) {
            return Err(Error::DimensionMismatch { expected: block_len, got: data.len() });
        }
        Ok(GlobalState { data, block_len })
    }

    pub fn from_blocks<S: AsRef<[f64]>>(blocks: &[S]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Config("state needs at least one block".to_string()));
        }
        let block_len = blocks[0].as_ref().len();
        let mut data = Vec::with_capacity(blocks.len() * block_len);
        for b in blocks {
            if b.as_ref().len() != block_len {
                return Err(Error::DimensionMismatch { expected: block_len, got: b.as_ref().len() });
            }
            data.extend_from_slice(b.as_ref());
        }
        GlobalState::from_vec(data, block_len)
    }

    pub fn agent_count(&self) -> usize {
        self.data.len() / self.block_len
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn block(&self, k: usize) -> &[f64] {
        &self.data[k * self.block_len..(k + 1) * self.block_len]
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.block_len)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.data)
    }
}

/// States indexed by iteration, `t = 0..=L`; `states[0]` is the all-zeros
/// initialization. A diverged run is truncated at the first state whose norm
/// crosses [`DIVERGENCE_LIMIT`].
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    states: Vec<GlobalState>,
    diverged: bool,
}

impl Trajectory {
    pub(crate) fn from_states(states: Vec<GlobalState>, diverged: bool) -> Self {
        assert!(!states.is_empty(), "trajectory holds at least the initial state");
        Trajectory { states, diverged }
    }

    pub fn states(&self) -> &[GlobalState] {
        &self.states
    }

    pub fn state(&self, t: usize) -> &GlobalState {
        &self.states[t]
    }

    pub fn final_state(&self) -> &GlobalState {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Number of applied iterations (states minus the initial one).
    pub fn iterations(&self) -> usize {
        self.states.len() - 1
    }

    pub fn diverged(&self) -> bool {
        self.diverged
    }
}

fn check_state(s: &Scenario, x: &GlobalState) {
    assert_eq!(x.block_len(), s.dim(), "state block length must equal the parameter dimension");
    assert_eq!(x.agent_count(), s.agent_count(), "state must hold one block per agent");
}

/// One synchronous iteration of the cooperative update: per agent the local
/// gradient step `u_k = x_k + mu * H_k^T (y_k - H_k x_k)`, then the
/// neighbor-averaging step `u_k + eta * sum_{j ~ k} (u_j - u_k)`, with every
/// `u` taken from the pre-step state.
///
/// Neighbor sums accumulate in ascending neighbor order; the distributed
/// simulation reproduces them bit for bit.
pub fn coop_lms_step(s: &Scenario, x: &GlobalState) -> GlobalState {
    check_state(s, x);
    let agents = s.agent_count();
    let n = s.dim();
    let mut u = vec![0.0; agents * n];
    for k in 0..agents {
        let xk = x.block(k);
        let uk = local_gradient_step(s.obs_matrix(k), s.obs_vector(k), xk, s.mu());
        u[k * n..(k + 1) * n].copy_from_slice(&uk);
    }
    let mut out = vec![0.0; agents * n];
    for k in 0..agents {
        let uk = &u[k * n..(k + 1) * n];
        let ok = &mut out[k * n..(k + 1) * n];
        ok.copy_from_slice(uk);
        for &j in s.graph().neighbors(k) {
            let uj = &u[j * n..j * n + n];
            for i in 0..n {
                ok[i] += s.eta() * (uj[i] - uk[i]);
            }
        }
    }
    GlobalState::from_vec(out, n).expect("constructed with consistent dimensions")
}

/// The local gradient update shared by the centralized loops and the
/// per-agent state machines of the network simulation.
pub(crate) fn local_gradient_step(h: &Matrix, y: &[f64], x: &[f64], mu: f64) -> Vec<f64> {
    let hx = h.matvec(x);
    let r: Vec<f64> = y.iter().zip(&hx).map(|(yi, hxi)| yi - hxi).collect();
    let g = h.tr_matvec(&r);
    x.iter().zip(&g).map(|(xi, gi)| xi + mu * gi).collect()
}

/// One relaxed iteration: `(1 - omega) * x + omega * coop_lms_step(x)`,
/// blockwise. `omega = 1` reduces to the plain step; `omega = 0` leaves the
/// state unchanged.
pub fn cheb_lms_step(s: &Scenario, x: &GlobalState, omega: f64) -> GlobalState {
    check_state(s, x);
    let v = coop_lms_step(s, x);
    relax(x, &v, omega)
}

pub(crate) fn relax(x: &GlobalState, v: &GlobalState, omega: f64) -> GlobalState {
    let data = x
        .as_slice()
        .iter()
        .zip(v.as_slice())
        .map(|(xi, vi)| (1.0 - omega) * xi + omega * vi)
        .collect();
    GlobalState::from_vec(data, x.block_len()).expect("same shape as input")
}

fn run_loop(s: &Scenario, iterations: usize, sched: Option<&ChebyshevSchedule>) -> Trajectory {
    let mut states = Vec::with_capacity(iterations + 1);
    let mut x = GlobalState::zeros(s.agent_count(), s.dim());
    states.push(x.clone());
    let mut diverged = false;
    for t in 0..iterations {
        let v = coop_lms_step(s, &x);
        x = match sched {
            None => v,
            Some(sch) => relax(&x, &v, sch.factor_at(t)),
        };
        states.push(x.clone());
        if x.norm() > DIVERGENCE_LIMIT {
            diverged = true;
            break;
        }
    }
    Trajectory { states, diverged }
}

/// Runs the plain cooperative iteration for `iterations` steps from the
/// all-zeros state.
pub fn run_cooperative_lms(s: &Scenario, iterations: usize) -> Trajectory {
    run_loop(s, iterations, None)
}

/// Runs the relaxed iteration, taking the factor for step `t` from the
/// schedule's periodic extension.
pub fn run_chebyshev_lms(s: &Scenario, iterations: usize, sched: &ChebyshevSchedule) -> Trajectory {
    run_loop(s, iterations, Some(sched))
}

/// The linear operator driving the global-form iteration, in factored form.
#[derive(Clone, Debug)]
pub struct UpdateOperator {
    /// `consensus * gradient`; governs the error evolution.
    pub matrix: Matrix,
    /// `I - eta * (L (x) I_N)`: the neighbor-averaging factor. Symmetric;
    /// positive definite iff `eta * lambda_max(L) < 1`.
    pub consensus: Matrix,
    /// Block diagonal of the per-agent gradient factors
    /// `I - mu * H_k^T H_k`. Symmetric; positive definite iff
    /// `mu * lambda_max(H_k^T H_k) < 1` for every agent.
    pub gradient: Matrix,
}

/// Materializes the update operator and its two symmetric factors.
///
/// This is a diagnostic path: the iteration loops never build these
/// matrices, they apply the same operator blockwise through the graph.
pub fn build_update_operator(s: &Scenario) -> UpdateOperator {
    let agents = s.agent_count();
    let n = s.dim();
    let kn = agents * n;

    let mut consensus = Matrix::identity(kn);
    for k in 0..agents {
        let deg = s.graph().degree(k) as f64;
        for i in 0..n {
            consensus.set(k * n + i, k * n + i, 1.0 - s.eta() * deg);
        }
    }
    for &(u, v) in s.graph().edges() {
        for i in 0..n {
            consensus.set(u * n + i, v * n + i, s.eta());
            consensus.set(v * n + i, u * n + i, s.eta());
        }
    }

    let mut gradient = Matrix::zeros(kn, kn);
    for k in 0..agents {
        let g = s.obs_matrix(k).gram();
        for i in 0..n {
            for j in 0..n {
                let v = if i == j { 1.0 } else { 0.0 } - s.mu() * g.get(i, j);
                gradient.set(k * n + i, k * n + j, v);
            }
        }
    }

    let matrix = consensus.matmul(&gradient);
    UpdateOperator { matrix, consensus, gradient }
}

/// Stacked constant terms of the local gradient steps,
/// `b_k = mu * H_k^T y_k`.
pub fn gradient_offset(s: &Scenario) -> GlobalState {
    let blocks: Vec<Vec<f64>> = (0..s.agent_count())
        .map(|k| {
            s.obs_matrix(k)
                .tr_matvec(s.obs_vector(k))
                .into_iter()
                .map(|v| s.mu() * v)
                .collect()
        })
        .collect();
    GlobalState::from_blocks(&blocks).expect("one block per agent")
}

/// Runs the global affine form: `chi <- Q chi + (consensus) b` on the
/// materialized operator. Algebraically identical to the agent form; kept on
/// the dense route so the two serve as oracles for each other.
pub fn run_global_form(s: &Scenario, iterations: usize) -> Trajectory {
    let op = build_update_operator(s);
    let c = op.consensus.matvec(gradient_offset(s).as_slice());
    let kn = s.agent_count() * s.dim();
    let mut states = Vec::with_capacity(iterations + 1);
    let mut x = vec![0.0; kn];
    states.push(GlobalState::from_vec(x.clone(), s.dim()).expect("sized state"));
    let mut diverged = false;
    for _ in 0..iterations {
        let qx = op.matrix.matvec(&x);
        x = qx.iter().zip(&c).map(|(a, b)| a + b).collect();
        let st = GlobalState::from_vec(x.clone(), s.dim()).expect("sized state");
        let n = st.norm();
        states.push(st);
        if n > DIVERGENCE_LIMIT {
            diverged = true;
            break;
        }
    }
    Trajectory { states, diverged }
}

/// The unique fixed point of the cooperative iteration,
/// `(I - Q) chi = consensus * b`, solved densely.
pub fn fixed_point(s: &Scenario) -> Result<GlobalState> {
    let op = build_update_operator(s);
    let kn = s.agent_count() * s.dim();
    let mut a = Matrix::identity(kn);
    for i in 0..kn {
        for j in 0..kn {
            a.set(i, j, a.get(i, j) - op.matrix.get(i, j));
        }
    }
    let rhs = op.consensus.matvec(gradient_offset(s).as_slice());
    let x = linalg::solve_linear(&a, &rhs)?;
    GlobalState::from_vec(x, s.dim())
}

/// Eigenvalues of the update operator, ascending, computed through the
/// symmetric-product route on its two factors.
///
/// Fails with a positive-definiteness error when the step sizes violate the
/// contraction conditions.
pub fn update_operator_eigvals(s: &Scenario) -> Result<Vec<f64>> {
    let op = build_update_operator(s);
    linalg::eigvals_spd_product(&op.consensus, &op.gradient)
}

/// Largest eigenvalue of the block-diagonal gradient factor: the linear
/// convergence rate bound of the plain iteration.
pub fn gradient_factor_lambda_max(s: &Scenario) -> Result<f64> {
    let mut best = f64::NEG_INFINITY;
    for k in 0..s.agent_count() {
        let g = s.obs_matrix(k).gram();
        let mut a = Matrix::identity(s.dim());
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                a.set(i, j, a.get(i, j) - s.mu() * g.get(i, j));
            }
        }
        let vals = linalg::sym_eigvals(&a)?;
        best = math::max(best, *vals.last().expect("nonempty"));
    }
    Ok(best)
}

/// Averaged squared error: the mean over agents of the squared Euclidean
/// distance between each agent's estimate and the reference vector.
pub fn ase<S: AsRef<[f64]>>(states: &[S], reference: &[f64]) -> Result<f64> {
    if states.is_empty() {
        return Err(Error::Config("ASE needs at least one agent state".to_string()));
    }
    let mut total = 0.0;
    for st in states {
        let st = st.as_ref();
        if st.len() != reference.len() {
            return Err(Error::DimensionMismatch { expected: reference.len(), got: st.len() });
        }
        total += st.iter().zip(reference).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
    }
    Ok(total / states.len() as f64)
}

/// [`ase`] over the blocks of a stacked state.
pub fn ase_of_state(x: &GlobalState, reference: &[f64]) -> Result<f64> {
    if x.block_len() != reference.len() {
        return Err(Error::DimensionMismatch { expected: reference.len(), got: x.block_len() });
    }
    let blocks: Vec<&[f64]> = x.blocks().collect();
    ase(&blocks, reference)
}

/// The centralized least-squares solution of the stacked problem:
/// `(sum_k H_k^T H_k) x = sum_k H_k^T y_k`. This is the ASE reference.
pub fn lms_solution(s: &Scenario) -> Result<Vec<f64>> {
    let n = s.dim();
    let mut a = Matrix::zeros(n, n);
    let mut b = vec![0.0; n];
    for k in 0..s.agent_count() {
        let g = s.obs_matrix(k).gram();
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, a.get(i, j) + g.get(i, j));
            }
        }
        let hy = s.obs_matrix(k).tr_matvec(s.obs_vector(k));
        for (bi, hyi) in b.iter_mut().zip(&hy) {
            *bi += hyi;
        }
    }
    linalg::solve_linear(&a, &b)
}

/// Each agent's own minimum-norm least-squares solution; the iteration-free
/// estimates behind the noncooperative baseline.
pub fn noncooperative_solutions(s: &Scenario) -> Result<Vec<Vec<f64>>> {
    (0..s.agent_count())
        .map(|k| linalg::min_norm_lstsq(s.obs_matrix(k), s.obs_vector(k)))
        .collect()
}
