//! Scenario files: JSON in, validated model out.

use std::path::Path;

use pbe_core::catalog;
use pbe_core::dynamics::{RunConfig, StepSchedule};
use pbe_core::epsilon_lab::{linear_grid, TargetMode};
use pbe_core::mdp::{Distribution, FeatureMatrix, Mdp, Policy};
use pbe_core::numerics::DenseMatrix;
use pbe_core::pbe::{stationary_of, NuMode};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, ParseError, Result};

/// Target operator used by `scan-epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TargetChoice {
    #[default]
    Greedy,
    EpsGreedy,
}

impl From<TargetChoice> for TargetMode {
    fn from(t: TargetChoice) -> Self {
        match t {
            TargetChoice::Greedy => TargetMode::Greedy,
            TargetChoice::EpsGreedy => TargetMode::EpsGreedy,
        }
    }
}

/// Evenly spaced ε values, `count` points from `start` to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Default for EpsGrid {
    fn default() -> Self {
        EpsGrid { start: 0.005, stop: 0.995, count: 200 }
    }
}

impl EpsGrid {
    pub fn points(&self) -> Vec<f64> {
        linear_grid(self.start, self.stop, self.count)
    }
}

impl std::str::FromStr for EpsGrid {
    type Err = String;

    /// Parses `start:stop:count`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count] = parts.as_slice() else {
            return Err(format!("expected start:stop:count, got {s:?}"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        Ok(EpsGrid {
            start: num(start)?,
            stop: num(stop)?,
            count: count.trim().parse().map_err(|e| format!("{count:?}: {e}"))?,
        })
    }
}

/// Parameters of the simulators and the ε scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Algorithms {
    pub schedule: StepSchedule,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    pub stride: usize,
    pub window: usize,
    pub eps_grid: EpsGrid,
    /// Initial iterate; zeros when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta0: Option<Vec<f64>>,
    /// Half-width of the uniform reward noise in `qlearn`.
    pub reward_noise: f64,
    pub target_mode: TargetChoice,
}

impl Default for Algorithms {
    fn default() -> Self {
        let run = RunConfig::default();
        Algorithms {
            schedule: StepSchedule::default(),
            max_iter: run.max_iter,
            tol: run.tol,
            seed: 0,
            stride: run.stride,
            window: run.window,
            eps_grid: EpsGrid::default(),
            theta0: None,
            reward_noise: 0.0,
            target_mode: TargetChoice::Greedy,
        }
    }
}

/// On-disk layout. Matrices are flat and row-major; pair `(s, a)` is row
/// `s·|A| + a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub name: String,
    pub num_states: usize,
    pub num_actions: usize,
    pub gamma: f64,
    pub transition: Vec<f64>,
    pub reward: Vec<f64>,
    pub phi: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub behavior: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<Vec<f64>>,
    #[serde(default)]
    pub eta: f64,
    #[serde(default)]
    pub algorithms: Algorithms,
}

/// Where the state-action weighting comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum NuSource {
    /// Stationary distribution of the chain under a behavior policy.
    Behavior(Policy),
    /// Fixed sampling distribution over pairs.
    Sampling(Distribution),
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub mdp: Mdp,
    pub phi: FeatureMatrix,
    pub nu: NuSource,
    pub eta: f64,
    pub algorithms: Algorithms,
}

impl Scenario {
    pub fn from_file(file: ScenarioFile) -> Result<Self> {
        let ScenarioFile { name, num_states: ns, num_actions: na, gamma, transition, reward, phi, behavior, sampling, eta, algorithms } =
            file;
        if ns == 0 || na == 0 {
            return Err(CliError::validation("NonEmptyModel", "num_states and num_actions must be positive"));
        }
        let pairs = ns * na;
        let transition = DenseMatrix::from_row_major(pairs, ns, transition)?;
        let mdp = Mdp::new(ns, na, transition, reward, gamma)?;
        if phi.is_empty() || phi.len() % pairs != 0 {
            return Err(CliError::validation(
                "DimensionMismatch",
                format!("phi has {} entries, not a positive multiple of {pairs} pairs", phi.len()),
            ));
        }
        let dim = phi.len() / pairs;
        let phi = FeatureMatrix::new(ns, na, DenseMatrix::from_row_major(pairs, dim, phi)?)?;
        let nu = match (behavior, sampling) {
            (Some(b), None) => NuSource::Behavior(Policy::from_table(DenseMatrix::from_row_major(ns, na, b)?)?),
            (None, Some(d)) => {
                if d.len() != pairs {
                    return Err(CliError::validation(
                        "DimensionMismatch",
                        format!("sampling has {} entries for {pairs} pairs", d.len()),
                    ));
                }
                NuSource::Sampling(Distribution::new(d)?)
            }
            _ => return Err(CliError::validation("NuSource", "exactly one of behavior and sampling must be given")),
        };
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(CliError::validation("InvalidArgument", format!("eta {eta} must be finite and non-negative")));
        }
        if let Some(t) = &algorithms.theta0 {
            phi.check_theta(t)?;
        }
        algorithms.schedule.validate()?;
        Ok(Scenario { name, mdp, phi, nu, eta, algorithms })
    }

    pub fn to_file(&self) -> ScenarioFile {
        let (behavior, sampling) = match &self.nu {
            NuSource::Behavior(b) => (Some(b.table().as_slice().to_vec()), None),
            NuSource::Sampling(d) => (None, Some(d.weights().to_vec())),
        };
        ScenarioFile {
            name: self.name.clone(),
            num_states: self.mdp.num_states,
            num_actions: self.mdp.num_actions,
            gamma: self.mdp.gamma,
            transition: self.mdp.transition.as_slice().to_vec(),
            reward: self.mdp.reward.clone(),
            phi: self.phi.phi.as_slice().to_vec(),
            behavior,
            sampling,
            eta: self.eta,
            algorithms: self.algorithms.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("scenario serializes");
        s.push('\n');
        s
    }

    /// Parses and validates JSON text; `origin` labels parse errors.
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| ParseError {
            path: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
        .map_err(CliError::Parse)?;
        Scenario::from_file(file)
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let ex = catalog::by_name(name).ok_or_else(|| {
            CliError::validation("BuiltinName", format!("unknown builtin {name:?}; known: {}", catalog::NAMES.join(", ")))
        })?;
        Ok(Scenario {
            name: name.to_string(),
            mdp: ex.mdp,
            phi: ex.phi,
            nu: NuSource::Behavior(ex.behavior),
            eta: 0.0,
            algorithms: Algorithms::default(),
        })
    }

    /// Weighting used by the solution enumerator and the certificates.
    pub fn nu_mode(&self) -> NuMode {
        match &self.nu {
            NuSource::Behavior(b) => NuMode::Stationary(b.clone()),
            NuSource::Sampling(d) => NuMode::Fixed(d.clone()),
        }
    }

    /// Sampling distribution of the simulators.
    pub fn sampling_distribution(&self) -> Result<Distribution> {
        match &self.nu {
            NuSource::Behavior(b) => Ok(stationary_of(&self.mdp, b)?),
            NuSource::Sampling(d) => Ok(d.clone()),
        }
    }

    pub fn theta0(&self) -> Vec<f64> {
        self.algorithms.theta0.clone().unwrap_or_else(|| vec![0.0; self.phi.dim()])
    }

    pub fn run_config(&self) -> RunConfig {
        let a = &self.algorithms;
        RunConfig { eta: self.eta, max_iter: a.max_iter, tol: a.tol, stride: a.stride, window: a.window }
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Scenario::from_json(&text, &path.display().to_string())
}
