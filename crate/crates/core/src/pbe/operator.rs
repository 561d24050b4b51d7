use serde::Serialize;

use super::check_eta;
use crate::mdp::{greedy_policy, Distribution, FeatureMatrix, Mdp, Policy, Theta};
use crate::numerics::{solve_linear_scaled, DenseMatrix};
use crate::{Error, Result};

/// `T = γ ΦᵀD P Π Φ − ΦᵀDΦ` together with the policy and weighting used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TOperator {
    pub matrix: DenseMatrix,
    pub pi: Policy,
    pub nu: Distribution,
}

/// Policy-independent pieces of the projected operator for a fixed `ν`.
#[derive(Debug, Clone)]
pub struct Projection<'a> {
    mdp: &'a Mdp,
    phi: &'a FeatureMatrix,
    nu: Distribution,
    gram: DenseMatrix,
    phi_d_r: Vec<f64>,
    phi_d_p: DenseMatrix,
}

impl<'a> Projection<'a> {
    pub fn new(mdp: &'a Mdp, phi: &'a FeatureMatrix, nu: Distribution) -> Result<Self> {
        phi.check_compatible(mdp)?;
        if nu.len() != mdp.num_pairs() {
            return Err(Error::DimensionMismatch(format!(
                "distribution over {} pairs, MDP has {}",
                nu.len(),
                mdp.num_pairs()
            )));
        }
        let d_phi_t = phi.phi.scale_rows(nu.weights()).transpose();
        let gram = d_phi_t.matmul(&phi.phi);
        let phi_d_r = d_phi_t.mul_vec(&mdp.reward);
        let phi_d_p = d_phi_t.matmul(&mdp.transition);
        Ok(Projection { mdp, phi, nu, gram, phi_d_r, phi_d_p })
    }

    pub fn mdp(&self) -> &Mdp {
        self.mdp
    }

    pub fn features(&self) -> &FeatureMatrix {
        self.phi
    }

    pub fn nu(&self) -> &Distribution {
        &self.nu
    }

    /// `ΦᵀDΦ`.
    pub fn gram(&self) -> &DenseMatrix {
        &self.gram
    }

    /// `ΦᵀDR`.
    pub fn phi_d_r(&self) -> &[f64] {
        &self.phi_d_r
    }

    /// `ΦᵀD P Π`, `p × |S||A|`.
    pub fn phi_d_p_pi(&self, pi: &Policy) -> DenseMatrix {
        self.phi_d_p.matmul(&pi.selection_matrix())
    }

    /// `ΦᵀD P Π Φ`, without the discount.
    pub fn target_matrix(&self, pi: &Policy) -> DenseMatrix {
        self.phi_d_p.matmul(&pi.selection_matrix().matmul(&self.phi.phi))
    }

    /// `γ ΦᵀD P Π Φ − ΦᵀDΦ`.
    pub fn t_matrix(&self, pi: &Policy) -> DenseMatrix {
        self.target_matrix(pi).scaled(self.mdp.gamma).sub(&self.gram)
    }

    /// `ΦᵀDR + Tθ − ηθ`.
    pub fn residual(&self, theta: &[f64], pi: &Policy, eta: f64) -> Vec<f64> {
        let t_theta = self.t_matrix(pi).mul_vec(theta);
        self.phi_d_r
            .iter()
            .zip(t_theta)
            .zip(theta)
            .map(|((b, t), x)| b + t - eta * x)
            .collect()
    }

    /// Residual with the greedy policy of `θ` in the target position. The
    /// `P Π Φ θ` product is evaluated as a max over next actions, avoiding
    /// the `p × p` operator.
    pub fn greedy_residual(&self, theta: &[f64], eta: f64) -> Vec<f64> {
        let next = self.next_state_values(theta);
        let boot = self.phi_d_p.mul_vec(&next);
        let gram_theta = self.gram.mul_vec(theta);
        (0..theta.len())
            .map(|i| self.phi_d_r[i] + self.mdp.gamma * boot[i] - gram_theta[i] - eta * theta[i])
            .collect()
    }

    /// `max_a φ(s, a)ᵀθ` per state.
    pub fn next_state_values(&self, theta: &[f64]) -> Vec<f64> {
        self.phi
            .scores(theta)
            .chunks(self.mdp.num_actions)
            .map(|row| row.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .collect()
    }

    /// `(ΦᵀDΦ + ηI − γΦᵀDPΠΦ)⁻¹ ΦᵀDR`.
    pub fn td_fixed_point(&self, pi: &Policy, eta: f64) -> Result<Theta> {
        let discount = self.target_matrix(pi).scaled(self.mdp.gamma);
        let base = self.gram.shift_diagonal(eta);
        let scale: Vec<f64> = (0..base.rows())
            .map(|i| {
                base.row(i)
                    .iter()
                    .zip(discount.row(i))
                    .fold(0.0_f64, |m, (x, y)| m.max(x.abs() + y.abs()))
            })
            .collect();
        solve_linear_scaled(&base.sub(&discount), &self.phi_d_r, &scale)
    }
}

fn check_policy(mdp: &Mdp, pi: &Policy) -> Result<()> {
    if pi.num_states() != mdp.num_states || pi.num_actions() != mdp.num_actions {
        return Err(Error::DimensionMismatch(format!(
            "policy is {}x{}, MDP has {} states and {} actions",
            pi.num_states(),
            pi.num_actions(),
            mdp.num_states,
            mdp.num_actions
        )));
    }
    Ok(())
}

pub fn t_matrix(mdp: &Mdp, phi: &FeatureMatrix, pi: &Policy, nu: &Distribution) -> Result<TOperator> {
    check_policy(mdp, pi)?;
    let proj = Projection::new(mdp, phi, nu.clone())?;
    Ok(TOperator { matrix: proj.t_matrix(pi), pi: pi.clone(), nu: nu.clone() })
}

/// `F_η(θ) = ΦᵀDR + T θ − ηθ` for a fixed target policy.
pub fn pbe_residual(
    mdp: &Mdp,
    phi: &FeatureMatrix,
    theta: &[f64],
    pi: &Policy,
    nu: &Distribution,
    eta: f64,
) -> Result<Vec<f64>> {
    check_policy(mdp, pi)?;
    check_eta(eta)?;
    phi.check_theta(theta)?;
    Ok(Projection::new(mdp, phi, nu.clone())?.residual(theta, pi, eta))
}

/// Residual with the target policy set to `greedy(θ)`.
pub fn greedy_pbe_residual(
    mdp: &Mdp,
    phi: &FeatureMatrix,
    theta: &[f64],
    nu: &Distribution,
    eta: f64,
) -> Result<Vec<f64>> {
    pbe_residual(mdp, phi, theta, &greedy_policy(phi, theta)?, nu, eta)
}

pub fn td_fixed_point(
    mdp: &Mdp,
    phi: &FeatureMatrix,
    pi: &Policy,
    nu: &Distribution,
    eta: f64,
) -> Result<Theta> {
    check_policy(mdp, pi)?;
    check_eta(eta)?;
    Projection::new(mdp, phi, nu.clone())?.td_fixed_point(pi, eta)
}

/// `max_i (a_ii + Σ_{j≠i} |a_ij|)`; negative iff `a` has a strictly
/// negatively row dominating diagonal.
pub fn snrdd_margin(a: &DenseMatrix) -> f64 {
    assert!(a.is_square(), "snrdd_margin needs a square matrix");
    (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .enumerate()
                .map(|(j, &x)| if i == j { x } else { x.abs() })
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::numerics::vec_inf_norm;
    use crate::pbe::stationary_of;

    #[test]
    fn snrdd_examples() {
        assert_eq!(snrdd_margin(&DenseMatrix::identity(3).scaled(-1.0)), -1.0);
        let a = DenseMatrix::from_rows(&[[-1.0, 0.5], [0.2, -0.3]]).unwrap();
        assert!((snrdd_margin(&a) + 0.1).abs() < 1e-15);
        let b = DenseMatrix::from_rows(&[[-1.0, -0.5], [0.2, -0.3]]).unwrap();
        assert!((snrdd_margin(&b) + 0.1).abs() < 1e-15);
    }

    #[test]
    fn tabular_t_matrix_drops_projection() {
        let ex = catalog::example1();
        let phi = FeatureMatrix::tabular(2, 2);
        let nu = Distribution::uniform(4);
        let pi = Policy::deterministic(&[1, 0], 2).unwrap();
        let t = t_matrix(&ex.mdp, &phi, &pi, &nu).unwrap().matrix;
        let d = DenseMatrix::from_diag(nu.weights());
        let expect = d
            .matmul(&ex.mdp.transition)
            .matmul(&pi.selection_matrix())
            .scaled(ex.mdp.gamma)
            .sub(&d);
        assert!(crate::numerics::infinity_norm(&t.sub(&expect)) < 1e-15);
    }

    #[test]
    fn zero_reward_zero_theta() {
        let mut ex = catalog::example2();
        ex.mdp.reward = vec![0.0; 4];
        let nu = stationary_of(&ex.mdp, &ex.behavior).unwrap();
        let pi = Policy::deterministic(&[0, 1], 2).unwrap();
        let r = pbe_residual(&ex.mdp, &ex.phi, &[0.0, 0.0], &pi, &nu, 0.3).unwrap();
        assert_eq!(r, vec![0.0, 0.0]);
    }

    #[test]
    fn td_point_has_zero_residual() {
        let ex = catalog::example3();
        let nu = stationary_of(&ex.mdp, &ex.behavior).unwrap();
        for eta in [0.0, 0.5] {
            for pi in crate::mdp::deterministic_policies(2, 2, 16).unwrap() {
                let th = td_fixed_point(&ex.mdp, &ex.phi, &pi, &nu, eta).unwrap();
                let r = pbe_residual(&ex.mdp, &ex.phi, &th, &pi, &nu, eta).unwrap();
                assert!(vec_inf_norm(&r) < 1e-9);
            }
        }
    }

    #[test]
    fn tabular_td_point_is_policy_value() {
        let ex = catalog::example2();
        let phi = FeatureMatrix::tabular(2, 2);
        let nu = Distribution::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let pi = Policy::deterministic(&[1, 0], 2).unwrap();
        let th = td_fixed_point(&ex.mdp, &phi, &pi, &nu, 0.0).unwrap();
        let q = crate::mdp::policy_q_values(&ex.mdp, &pi).unwrap().q;
        for (a, b) in th.iter().zip(&q) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn singular_scalar_instance() {
        // A zero feature makes both sides of the scalar equation vanish.
        let mdp = Mdp::new(1, 1, DenseMatrix::from_rows(&[[1.0]]).unwrap(), vec![1.0], 0.5).unwrap();
        let phi = FeatureMatrix::new(1, 1, DenseMatrix::from_rows(&[[0.0]]).unwrap()).unwrap();
        let pi = Policy::deterministic(&[0], 1).unwrap();
        let nu = Distribution::uniform(1);
        assert!(matches!(td_fixed_point(&mdp, &phi, &pi, &nu, 0.0), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn greedy_residual_matches_explicit_policy() {
        let ex = catalog::example1();
        let nu = stationary_of(&ex.mdp, &ex.behavior).unwrap();
        let proj = Projection::new(&ex.mdp, &ex.phi, nu.clone()).unwrap();
        for theta in [[0.3, -1.2], [-0.67, -1.76], [2.0, 0.5]] {
            let a = proj.greedy_residual(&theta, 0.1);
            let b = greedy_pbe_residual(&ex.mdp, &ex.phi, &theta, &nu, 0.1).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-14);
            }
        }
    }
}
