use serde::Serialize;

use super::{check_eta, NuMode, Projection, TargetMode, POLICY_CAP};
use crate::mdp::{
    deterministic_policies, epsilon_perturbation, greedy_policy, Distribution, FeatureMatrix, Mdp, Policy, Theta,
};
use crate::numerics::{eigenvalues, vec_inf_norm, DenseMatrix, TOL};
use crate::{parallel, Error, Result};

/// A parameter vector solving the PBE for its own greedy policy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PbeSolution {
    pub theta: Theta,
    /// The deterministic candidate whose linear equation `theta` solves.
    /// Its action is inside the tolerant argmax set in every state.
    pub policy: Policy,
    pub policy_index: usize,
    pub residual_inf: f64,
    /// Margin of `T − ηI` at the solution.
    pub snrdd_margin: f64,
    /// Whether `T − ηI` is Hurwitz at the solution.
    pub hurwitz: bool,
    pub eta: f64,
    pub nu: Distribution,
}

/// A candidate policy whose linear system could not be solved.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedPolicy {
    pub policy_index: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct SolutionSet {
    pub solutions: Vec<PbeSolution>,
    pub skipped: Vec<SkippedPolicy>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Unstable,
}

/// Stable iff every eigenvalue of `t` has real part below `−TOL.hurwitz`.
pub fn stability_of(t: &DenseMatrix) -> Result<Stability> {
    let spectrum = eigenvalues(t)?;
    if !spectrum.converged {
        return Err(Error::NoConvergence { sweeps: 100 * t.rows() * t.rows() });
    }
    Ok(if spectrum.is_hurwitz() { Stability::Stable } else { Stability::Unstable })
}

/// Local stability of Q-learning at `theta_star`: Hurwitz test of
/// `T(θ*, greedy(θ*), ν)`.
pub fn classify_stability(
    mdp: &Mdp,
    phi: &FeatureMatrix,
    theta_star: &[f64],
    nu: &Distribution,
) -> Result<Stability> {
    let pi = greedy_policy(phi, theta_star)?;
    let proj = Projection::new(mdp, phi, nu.clone())?;
    stability_of(&proj.t_matrix(&pi))
}

/// All PBE solutions over the deterministic policies, with the candidate
/// itself as target policy.
pub fn enumerate_pbe_solutions(mdp: &Mdp, phi: &FeatureMatrix, nu_mode: &NuMode, eta: f64) -> Result<SolutionSet> {
    enumerate_with_target(mdp, phi, nu_mode, eta, TargetMode::Greedy)
}

enum Outcome {
    Solution(Box<PbeSolution>),
    Rejected,
    Skipped(SkippedPolicy),
}

/// Enumerates the PBE solutions, choosing the target operator per
/// `target`. Candidates whose linear system is singular are reported in
/// `skipped`.
pub fn enumerate_with_target(
    mdp: &Mdp,
    phi: &FeatureMatrix,
    nu_mode: &NuMode,
    eta: f64,
    target: TargetMode,
) -> Result<SolutionSet> {
    phi.check_compatible(mdp)?;
    check_eta(eta)?;
    let eps = match (target, nu_mode) {
        (TargetMode::Greedy, _) => None,
        (TargetMode::EpsGreedy, NuMode::OnPolicyEpsilon(e)) => Some(*e),
        (TargetMode::EpsGreedy, _) => {
            return Err(Error::InvalidArgument("eps-greedy targets need an on-policy epsilon weighting".into()))
        }
    };
    let policies = deterministic_policies(mdp.num_states, mdp.num_actions, POLICY_CAP)?;
    let fixed_nu = nu_mode.resolve_fixed(mdp).transpose()?;

    let outcomes = parallel::map(&policies, |pi| -> Result<Outcome> {
        let index = pi.index().expect("deterministic");
        let skip = |e: Error| Outcome::Skipped(SkippedPolicy { policy_index: index, reason: e.to_string() });
        let nu = match &fixed_nu {
            Some(nu) => nu.clone(),
            None => match nu_mode.resolve(mdp, pi) {
                Ok(nu) => nu,
                Err(e) if e.is_numerical() => return Ok(skip(e)),
                Err(e) => return Err(e),
            },
        };
        let target_pi = match eps {
            Some(e) => epsilon_perturbation(pi, e)?,
            None => pi.clone(),
        };
        let proj = Projection::new(mdp, phi, nu.clone())?;
        let theta = match proj.td_fixed_point(&target_pi, eta) {
            Ok(t) => t,
            Err(e) if e.is_numerical() => return Ok(skip(e)),
            Err(e) => return Err(e),
        };
        if !greedy_consistent(phi, &theta, pi) {
            return Ok(Outcome::Rejected);
        }
        let t = proj.t_matrix(&target_pi).shift_diagonal(-eta);
        let hurwitz = match stability_of(&t) {
            Ok(s) => s == Stability::Stable,
            Err(e) => return Ok(skip(e)),
        };
        Ok(Outcome::Solution(Box::new(PbeSolution {
            residual_inf: vec_inf_norm(&proj.residual(&theta, &target_pi, eta)),
            snrdd_margin: super::snrdd_margin(&t),
            hurwitz,
            theta,
            policy: pi.clone(),
            policy_index: index,
            eta,
            nu,
        })))
    });

    let mut set = SolutionSet::default();
    for outcome in outcomes {
        match outcome? {
            Outcome::Solution(s) => set.solutions.push(*s),
            Outcome::Rejected => {}
            Outcome::Skipped(s) => set.skipped.push(s),
        }
    }
    Ok(set)
}

/// True when the policy's action is within `TOL.argmax` of the best score
/// in every state.
fn greedy_consistent(phi: &FeatureMatrix, theta: &[f64], pi: &Policy) -> bool {
    let actions = pi.actions().expect("deterministic");
    phi.scores(theta).chunks(phi.num_actions).zip(actions).all(|(row, a)| {
        let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        row[a] >= max - TOL.argmax
    })
}
