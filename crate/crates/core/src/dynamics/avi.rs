use super::{Recorder, RunConfig, Trajectory};
use crate::mdp::{Distribution, FeatureMatrix, Mdp, Theta};
use crate::numerics::{solve_linear, vec_inf_norm};
use crate::pbe::Projection;
use crate::Result;

/// Approximate value iteration
/// `θ ← (ΦᵀDΦ + ηI)⁻¹ (γ ΦᵀD P Π_{greedy(θ)} Φ θ + ΦᵀDR)`.
///
/// Stops once the last `window` steps moved less than `tol` and the
/// residual is below `tol`.
pub fn run_avi(mdp: &Mdp, phi: &FeatureMatrix, nu: &Distribution, theta0: &[f64], cfg: RunConfig) -> Result<Trajectory> {
    cfg.validate()?;
    phi.check_theta(theta0)?;
    let proj = Projection::new(mdp, phi, nu.clone())?;
    let reg_gram = proj.gram().shift_diagonal(cfg.eta);
    // Fail early on a singular system rather than at the first step.
    solve_linear(&reg_gram, proj.phi_d_r())?;
    let phi_d_p = mdp.transition.scale_rows(nu.weights());
    let step = |theta: &[f64]| -> Result<Theta> {
        let boot = phi.phi.tr_mul_vec(&phi_d_p.mul_vec(&proj.next_state_values(theta)));
        let rhs: Vec<f64> = boot.iter().zip(proj.phi_d_r()).map(|(b, r)| mdp.gamma * b + r).collect();
        solve_linear(&reg_gram, &rhs)
    };

    let mut rec = Recorder::new(cfg, None);
    let mut theta: Theta = theta0.to_vec();
    let mut r = vec_inf_norm(&proj.greedy_residual(&theta, cfg.eta));
    rec.classifier.push(&theta);
    rec.record(0, &theta, 1.0, r, phi);
    let mut k = 0;
    while k < cfg.max_iter {
        theta = step(&theta)?;
        k += 1;
        rec.classifier.push(&theta);
        if rec.classifier.blown_up() {
            break;
        }
        r = vec_inf_norm(&proj.greedy_residual(&theta, cfg.eta));
        if k % cfg.stride == 0 {
            rec.record(k, &theta, 1.0, r, phi);
        }
        if rec.classifier.settled() && r < cfg.tol {
            break;
        }
    }
    Ok(rec.finish(k, &theta, 1.0, r, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::dynamics::{policy_trace, Verdict};
    use crate::mdp::bellman_optimality;
    use crate::pbe::stationary_of;

    #[test]
    fn tabular_avi_is_value_iteration() {
        let ex = catalog::example3();
        let phi = FeatureMatrix::tabular(2, 2);
        let nu = Distribution::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let cfg = RunConfig { max_iter: 50, stride: 1, tol: 1e-300, ..RunConfig::default() };
        let tr = run_avi(&ex.mdp, &phi, &nu, &[0.0; 4], cfg).unwrap();
        let mut q = vec![0.0; 4];
        for theta in &tr.thetas {
            for (a, b) in theta.iter().zip(&q) {
                assert!((a - b).abs() < 1e-12);
            }
            q = bellman_optimality(&ex.mdp, &q);
        }
    }

    #[test]
    fn first_example_cycles() {
        let ex = catalog::example1();
        let nu = stationary_of(&ex.mdp, &ex.behavior).unwrap();
        let cfg = RunConfig { max_iter: 10_000, stride: 1, ..RunConfig::default() };
        let tr = run_avi(&ex.mdp, &ex.phi, &nu, &[0.0, 0.0], cfg).unwrap();
        assert_eq!(tr.verdict, Verdict::Oscillating);
        let mut trace = policy_trace(&tr.thetas, &ex.phi);
        trace.sort();
        trace.dedup();
        assert!(trace.len() >= 2);
    }

    #[test]
    fn second_example_converges() {
        let ex = catalog::example2();
        let nu = stationary_of(&ex.mdp, &ex.behavior).unwrap();
        let cfg = RunConfig { max_iter: 500, tol: 1e-8, ..RunConfig::default() };
        let tr = run_avi(&ex.mdp, &ex.phi, &nu, &[0.0, 0.0], cfg).unwrap();
        assert!(tr.verdict.is_converged());
        assert!(tr.iterations <= 500);
    }
}
