use std::collections::BTreeMap;

use serde::Serialize;

use super::{check_eta, snrdd_margin, NuMode, PolicySet, Projection};
use crate::mdp::{FeatureMatrix, Mdp, Policy};
use crate::numerics::{eigenvalues, infinity_norm, solve_matrix, DenseMatrix};
use crate::{parallel, Error, Result};

/// Certificates evaluated at a single target policy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyCertificate {
    pub policy_index: usize,
    /// `max_i S_i(T − ηI)`.
    pub snrdd_margin: f64,
    /// `γ ‖Φ (ΦᵀDΦ + ηI)⁻¹ ΦᵀD P Π‖∞`.
    pub avi_norm_1: f64,
    /// `γ ‖(ΦᵀDΦ + ηI)⁻¹ ΦᵀD P Π Φ‖∞`.
    pub avi_norm_2: f64,
    /// Spectral radius of `γ (ΦᵀDΦ + ηI)⁻¹ ΦᵀD P Π Φ`.
    pub spectral_radius: f64,
    /// `λ_min(ΦᵀDΦ)` for the weighting used with this policy.
    pub min_eig_gram: f64,
}

/// Certificates maximized over a policy set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub eta: f64,
    pub snrdd_worst_margin: f64,
    pub avi_norm_1: f64,
    pub avi_norm_2: f64,
    pub spectral_radius_at: BTreeMap<usize, f64>,
    /// Smallest Gram eigenvalue over the weightings used.
    pub min_eig_gram: f64,
    pub eta_threshold: f64,
    pub features_scaled: bool,
    pub per_policy: Vec<PolicyCertificate>,
}

/// Regularization threshold: any `η` strictly above `value` makes `T − ηI`
/// SNRDD for every policy in the set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaThreshold {
    pub value: f64,
    /// Whether every feature entry satisfies `|φ_i(s,a)| ≤ 1/√p`, in which
    /// case `value ≤ 3`.
    pub features_scaled: bool,
}

struct Evaluated {
    cert: PolicyCertificate,
    raw_margin: f64,
}

fn evaluate(
    mdp: &Mdp,
    phi: &FeatureMatrix,
    nu_mode: &NuMode,
    label: usize,
    pi: &Policy,
    eta: f64,
) -> Result<Evaluated> {
    let nu = nu_mode.resolve(mdp, pi)?;
    let proj = Projection::new(mdp, phi, nu)?;
    let gamma = mdp.gamma;
    let reg_gram = proj.gram().shift_diagonal(eta);

    let t = proj.t_matrix(pi);
    let raw_margin = snrdd_margin(&t);

    let k1 = solve_matrix(&reg_gram, &proj.phi_d_p_pi(pi))?;
    let avi_norm_1 = gamma * infinity_norm(&phi.phi.matmul(&k1));

    let k2 = solve_matrix(&reg_gram, &proj.target_matrix(pi))?.scaled(gamma);
    let avi_norm_2 = infinity_norm(&k2);
    let spectrum = eigenvalues(&k2)?;
    if !spectrum.converged {
        return Err(Error::NoConvergence { sweeps: 100 * k2.rows() * k2.rows() });
    }

    Ok(Evaluated {
        cert: PolicyCertificate {
            policy_index: label,
            snrdd_margin: raw_margin - eta,
            avi_norm_1,
            avi_norm_2,
            spectral_radius: spectrum.spectral_radius(),
            min_eig_gram: min_symmetric_eigenvalue(proj.gram())?,
        },
        raw_margin,
    })
}

fn min_symmetric_eigenvalue(a: &DenseMatrix) -> Result<f64> {
    let sym = a.add(&a.transpose()).scaled(0.5);
    let spectrum = eigenvalues(&sym)?;
    if !spectrum.converged {
        return Err(Error::NoConvergence { sweeps: 100 * a.rows() * a.rows() });
    }
    Ok(spectrum.values.iter().map(|z| z.re).fold(f64::INFINITY, f64::min))
}

fn features_scaled(phi: &FeatureMatrix) -> bool {
    let bound = 1.0 / (phi.dim() as f64).sqrt();
    phi.phi.as_slice().iter().all(|x| x.abs() <= bound * (1.0 + 1e-12))
}

fn evaluate_all(
    mdp: &Mdp,
    phi: &FeatureMatrix,
    nu_mode: &NuMode,
    policy_set: &PolicySet,
    eta: f64,
) -> Result<Vec<Evaluated>> {
    phi.check_compatible(mdp)?;
    check_eta(eta)?;
    let policies = policy_set.resolve(mdp)?;
    if policies.is_empty() {
        return Err(Error::InvalidArgument("empty policy set".into()));
    }
    if let Some((_, p)) = policies.iter().find(|(_, p)| p.num_states() != mdp.num_states || p.num_actions() != mdp.num_actions) {
        return Err(Error::DimensionMismatch(format!(
            "policy is {}x{}, MDP has {} states and {} actions",
            p.num_states(),
            p.num_actions(),
            mdp.num_states,
            mdp.num_actions
        )));
    }
    parallel::map(&policies, |(label, pi)| evaluate(mdp, phi, nu_mode, *label, pi, eta))
        .into_iter()
        .collect()
}

/// Existence, uniqueness and AVI-contraction certificates maximized over
/// `policy_set`.
pub fn certificate_report(
    mdp: &Mdp,
    phi: &FeatureMatrix,
    nu_mode: &NuMode,
    policy_set: &PolicySet,
    eta: f64,
) -> Result<CertificateReport> {
    let evaluated = evaluate_all(mdp, phi, nu_mode, policy_set, eta)?;
    let max = |f: fn(&PolicyCertificate) -> f64| {
        evaluated.iter().map(|e| f(&e.cert)).fold(f64::NEG_INFINITY, f64::max)
    };
    Ok(CertificateReport {
        eta,
        snrdd_worst_margin: max(|c| c.snrdd_margin),
        avi_norm_1: max(|c| c.avi_norm_1),
        avi_norm_2: max(|c| c.avi_norm_2),
        spectral_radius_at: evaluated.iter().map(|e| (e.cert.policy_index, e.cert.spectral_radius)).collect(),
        min_eig_gram: evaluated.iter().map(|e| e.cert.min_eig_gram).fold(f64::INFINITY, f64::min),
        eta_threshold: evaluated.iter().map(|e| e.raw_margin).fold(f64::NEG_INFINITY, f64::max),
        features_scaled: features_scaled(phi),
        per_policy: evaluated.into_iter().map(|e| e.cert).collect(),
    })
}

/// Supremum over the policy set of `max_i S_i(T)`.
pub fn eta_threshold(mdp: &Mdp, phi: &FeatureMatrix, nu_mode: &NuMode, policy_set: &PolicySet) -> Result<EtaThreshold> {
    phi.check_compatible(mdp)?;
    let policies = policy_set.resolve(mdp)?;
    let margins = parallel::map(&policies, |(_, pi)| -> Result<f64> {
        let proj = Projection::new(mdp, phi, nu_mode.resolve(mdp, pi)?)?;
        Ok(snrdd_margin(&proj.t_matrix(pi)))
    });
    let mut value = f64::NEG_INFINITY;
    for m in margins {
        value = value.max(m?);
    }
    Ok(EtaThreshold { value, features_scaled: features_scaled(phi) })
}
