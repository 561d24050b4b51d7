//! Learning dynamics: stochastic and deterministic linear Q-learning and
//! approximate value iteration, with trajectory recording and heuristic
//! verdicts.

mod avi;
mod classify;
mod qlearning;

pub use avi::run_avi;
pub use classify::{classify_trajectory, Classifier};
pub use qlearning::{run_deterministic_q, run_q_learning, run_q_learning_seeds, StochasticUpdate};

use serde::{Deserialize, Serialize};

use crate::mdp::{greedy_actions, policy_index, Distribution, FeatureMatrix, Theta};
use crate::{Error, Result};

/// Step-size sequence `α_k`, `k = 0, 1, …`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StepSchedule {
    /// `α_k = a / (k + b)`.
    RobbinsMonro { a: f64, b: f64 },
    Constant { alpha: f64 },
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule::RobbinsMonro { a: 2.0, b: 10.0 }
    }
}

impl StepSchedule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StepSchedule::RobbinsMonro { a, b } if a > 0.0 && a.is_finite() && b >= 1.0 && b.is_finite() => Ok(()),
            StepSchedule::Constant { alpha } if alpha > 0.0 && alpha < 1.0 => Ok(()),
            s => Err(Error::InvalidArgument(format!("invalid step schedule {s:?}"))),
        }
    }

    pub fn rate(&self, k: usize) -> f64 {
        match *self {
            StepSchedule::RobbinsMonro { a, b } => a / (k as f64 + b),
            StepSchedule::Constant { alpha } => alpha,
        }
    }
}

/// Sampling model of the stochastic simulator.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    /// Distribution of the sampled state-action pair.
    pub d: Distribution,
    /// Rewards are `R(s,a)` plus uniform noise on `[−h, h]`.
    pub reward_noise_halfwidth: f64,
    pub seed: u64,
}

/// Iteration budget and bookkeeping shared by all simulators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub eta: f64,
    pub max_iter: usize,
    pub tol: f64,
    /// Record every `stride`-th iterate (the final iterate is always kept).
    pub stride: usize,
    /// Number of trailing steps inspected by the verdict.
    pub window: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { eta: 0.0, max_iter: 100_000, tol: 1e-6, stride: 100, window: 20 }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        crate::pbe::check_eta(self.eta)?;
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument(format!("tolerance {} must be positive", self.tol)));
        }
        if self.stride == 0 {
            return Err(Error::InvalidArgument("stride must be at least 1".into()));
        }
        if self.window < 2 {
            return Err(Error::InvalidArgument("window must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Converged { theta: Theta },
    Oscillating,
    Diverging,
    BudgetExhausted,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Converged { .. } => "converged",
            Verdict::Oscillating => "oscillating",
            Verdict::Diverging => "diverging",
            Verdict::BudgetExhausted => "budget_exhausted",
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self, Verdict::Converged { .. })
    }
}

/// Subsampled iterate history of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Iteration number of each recorded iterate.
    pub steps: Vec<usize>,
    pub thetas: Vec<Theta>,
    /// Step size applied at each recorded iteration (1 for AVI).
    pub step_sizes: Vec<f64>,
    pub residual_inf: Vec<f64>,
    pub policy_index: Vec<usize>,
    pub verdict: Verdict,
    /// Sampler seed; `None` for deterministic runs.
    pub seed: Option<u64>,
    /// Number of updates performed.
    pub iterations: usize,
}

impl Trajectory {
    pub fn final_theta(&self) -> &[f64] {
        self.thetas.last().expect("trajectories record the initial iterate")
    }

    pub fn final_residual(&self) -> f64 {
        *self.residual_inf.last().expect("trajectories record the initial iterate")
    }
}

/// Lexicographic index (1-based) of the greedy policy of each iterate.
pub fn policy_trace(thetas: &[Theta], phi: &FeatureMatrix) -> Vec<usize> {
    thetas.iter().map(|t| policy_index(&greedy_actions(phi, t), phi.num_actions)).collect()
}

/// Shared recording and stopping logic of the simulators.
struct Recorder {
    traj: Trajectory,
    classifier: Classifier,
    cfg: RunConfig,
}

impl Recorder {
    fn new(cfg: RunConfig, seed: Option<u64>) -> Self {
        Recorder {
            traj: Trajectory {
                steps: Vec::new(),
                thetas: Vec::new(),
                step_sizes: Vec::new(),
                residual_inf: Vec::new(),
                policy_index: Vec::new(),
                verdict: Verdict::BudgetExhausted,
                seed,
                iterations: 0,
            },
            classifier: Classifier::new(cfg.tol, cfg.window),
            cfg,
        }
    }

    fn record(&mut self, k: usize, theta: &[f64], step: f64, residual: f64, phi: &FeatureMatrix) {
        self.traj.steps.push(k);
        self.traj.thetas.push(theta.to_vec());
        self.traj.step_sizes.push(step);
        self.traj.residual_inf.push(residual);
        self.traj.policy_index.push(policy_index(&greedy_actions(phi, theta), phi.num_actions));
    }

    fn finish(mut self, k: usize, theta: &[f64], step: f64, residual: f64, phi: &FeatureMatrix) -> Trajectory {
        if self.traj.steps.last() != Some(&k) {
            self.record(k, theta, step, residual, phi);
        }
        self.traj.iterations = k;
        let verdict = self.classifier.verdict();
        self.traj.verdict = match verdict {
            Verdict::Converged { .. } if residual < self.cfg.tol => Verdict::Converged { theta: theta.to_vec() },
            Verdict::Converged { .. } => Verdict::BudgetExhausted,
            v => v,
        };
        self.traj
    }
}
