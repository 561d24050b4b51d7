//! The projected Bellman operator, its solutions and the certificates that
//! guarantee existence, uniqueness and stability.

mod certificates;
mod lipschitz;
mod operator;
mod solutions;

pub use certificates::{certificate_report, eta_threshold, CertificateReport, EtaThreshold, PolicyCertificate};
pub use lipschitz::one_sided_lipschitz_estimate;
pub use operator::{greedy_pbe_residual, pbe_residual, snrdd_margin, t_matrix, td_fixed_point, Projection, TOperator};
pub use solutions::{
    classify_stability, enumerate_pbe_solutions, enumerate_with_target, stability_of, PbeSolution,
    SkippedPolicy, SolutionSet, Stability,
};

use crate::mdp::{chain_matrix, deterministic_policies, epsilon_perturbation, Distribution, Mdp, Policy};
use crate::numerics::stationary_distribution;
use crate::{Error, Result};

/// Cap on `|A|^|S|` for exhaustive policy enumeration.
pub const POLICY_CAP: usize = 4096;

/// How the state-action weighting `ν` is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum NuMode {
    /// A fixed distribution over state-action pairs.
    Fixed(Distribution),
    /// Stationary distribution of the chain driven by a behavior policy.
    Stationary(Policy),
    /// Stationary distribution of the ε-greedy perturbation of the
    /// candidate policy itself.
    OnPolicyEpsilon(f64),
}

impl NuMode {
    /// Resolves `ν` for a candidate deterministic policy.
    pub fn resolve(&self, mdp: &Mdp, candidate: &Policy) -> Result<Distribution> {
        match self {
            NuMode::OnPolicyEpsilon(eps) => {
                let beta = epsilon_perturbation(candidate, *eps)?;
                stationary_of(mdp, &beta)
            }
            _ => self.resolve_fixed(mdp).expect("policy independent"),
        }
    }

    /// `ν` when it does not depend on the candidate policy.
    pub fn resolve_fixed(&self, mdp: &Mdp) -> Option<Result<Distribution>> {
        match self {
            NuMode::Fixed(d) => Some(if d.len() == mdp.num_pairs() {
                Ok(d.clone())
            } else {
                Err(Error::DimensionMismatch(format!(
                    "distribution over {} pairs, MDP has {}",
                    d.len(),
                    mdp.num_pairs()
                )))
            }),
            NuMode::Stationary(beta) => Some(stationary_of(mdp, beta)),
            NuMode::OnPolicyEpsilon(_) => None,
        }
    }
}

/// State-action stationary distribution under a behavior policy.
pub fn stationary_of(mdp: &Mdp, beta: &Policy) -> Result<Distribution> {
    Distribution::new(stationary_distribution(&chain_matrix(mdp, beta)?)?)
}

/// Policies over which certificates are maximized.
#[derive(Debug, Clone, PartialEq)]
pub enum PolicySet {
    AllDeterministic,
    Explicit(Vec<Policy>),
}

impl PolicySet {
    /// Policies paired with their labels: the lexicographic index for
    /// deterministic policies, the 1-based list position otherwise.
    pub fn resolve(&self, mdp: &Mdp) -> Result<Vec<(usize, Policy)>> {
        let list = match self {
            PolicySet::AllDeterministic => deterministic_policies(mdp.num_states, mdp.num_actions, POLICY_CAP)?,
            PolicySet::Explicit(list) => list.clone(),
        };
        Ok(list
            .into_iter()
            .enumerate()
            .map(|(i, p)| (p.index().unwrap_or(i + 1), p))
            .collect())
    }
}

/// Which policy enters the target position of the operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TargetMode {
    /// The deterministic candidate itself.
    #[default]
    Greedy,
    /// Its ε-greedy perturbation (requires [`NuMode::OnPolicyEpsilon`]).
    EpsGreedy,
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::InvalidArgument(format!("eta {eta} must be finite and non-negative")));
    }
    Ok(())
}
