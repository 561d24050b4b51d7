//! How the PBE solution set changes with the exploration rate ε when the
//! weighting is the on-policy ε-greedy stationary distribution.

use serde::Serialize;

use crate::catalog::Example;
use crate::mdp::{FeatureMatrix, Mdp, Policy};
use crate::numerics::{DenseMatrix, TOL};
pub use crate::pbe::TargetMode;
use crate::pbe::{enumerate_with_target, NuMode, PbeSolution};
use crate::{parallel, Error, Result};

/// Solutions found at one exploration rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonScanRow {
    pub epsilon: f64,
    pub solutions: Vec<PbeSolution>,
    pub count: usize,
    pub stable_count: usize,
    /// Candidate policies with a singular linear system at this ε.
    pub skipped_policies: Vec<usize>,
}

/// `count` points evenly spaced on `[start, stop]`.
pub fn linear_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect(),
    }
}

/// 200 points on `[0.005, 0.995]`.
pub fn default_grid() -> Vec<f64> {
    linear_grid(0.005, 0.995, 200)
}

/// Enumerates PBE solutions at every ε of the grid, in grid order.
pub fn scan_epsilon(
    mdp: &Mdp,
    phi: &FeatureMatrix,
    eps_grid: &[f64],
    eta: f64,
    target_mode: TargetMode,
) -> Result<Vec<EpsilonScanRow>> {
    if let Some(&e) = eps_grid.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
        return Err(Error::InvalidArgument(format!("epsilon {e} outside (0, 1)")));
    }
    parallel::map(eps_grid, |&epsilon| {
        let set = enumerate_with_target(mdp, phi, &NuMode::OnPolicyEpsilon(epsilon), eta, target_mode)?;
        Ok(EpsilonScanRow {
            epsilon,
            count: set.solutions.len(),
            stable_count: set.solutions.iter().filter(|s| s.hurwitz).count(),
            skipped_policies: set.skipped.iter().map(|s| s.policy_index).collect(),
            solutions: set.solutions,
        })
    })
    .into_iter()
    .collect()
}

/// Single-state bandit with scalar features `x`, `y` and rewards `r1`, `r2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoArmInstance {
    pub x: f64,
    pub y: f64,
    pub r1: f64,
    pub r2: f64,
    pub gamma: f64,
}

impl TwoArmInstance {
    pub fn mdp(&self) -> Result<Mdp> {
        Mdp::new(1, 2, DenseMatrix::from_rows(&[[1.0], [1.0]])?, vec![self.r1, self.r2], self.gamma)
    }

    pub fn features(&self) -> Result<FeatureMatrix> {
        FeatureMatrix::new(1, 2, DenseMatrix::from_rows(&[[self.x], [self.y]])?)
    }

    /// As an [`Example`] with a uniform behavior policy.
    pub fn to_example(&self) -> Example {
        Example {
            mdp: self.mdp().expect("valid instance"),
            phi: self.features().expect("valid instance"),
            behavior: Policy::from_table(DenseMatrix::from_rows(&[[0.5, 0.5]]).expect("static")).expect("static"),
        }
    }
}

/// Closed-form analysis of a [`TwoArmInstance`] at one ε with greedy
/// targets and on-policy ε-greedy weighting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoArmSolution {
    /// `−T` for the candidate that plays arm 1.
    pub a1: f64,
    /// `−T` for the candidate that plays arm 2.
    pub a2: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub theta1_is_solution: bool,
    pub theta2_is_solution: bool,
    pub theta1_stable: bool,
    pub theta2_stable: bool,
}

pub fn two_arm_closed_form(inst: &TwoArmInstance, epsilon: f64) -> Result<TwoArmSolution> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside (0, 1)")));
    }
    let TwoArmInstance { x, y, r1, r2, gamma } = *inst;
    let a1 = epsilon * (-(1.0 - gamma) * x * x - gamma * x * y + y * y) + (1.0 - gamma) * x * x;
    let a2 = epsilon * (x * x - gamma * x * y - (1.0 - gamma) * y * y) + (1.0 - gamma) * y * y;
    for a in [a1, a2] {
        if a.abs() < 1e-14 {
            return Err(Error::DegenerateDenominator(a));
        }
    }
    let theta1 = ((1.0 - epsilon) * x * r1 + epsilon * y * r2) / a1;
    let theta2 = (epsilon * x * r1 + (1.0 - epsilon) * y * r2) / a2;
    // Arm 1 must score within the argmax tolerance of arm 2, and vice versa.
    Ok(TwoArmSolution {
        a1,
        a2,
        theta1,
        theta2,
        theta1_is_solution: x * theta1 >= y * theta1 - TOL.argmax,
        theta2_is_solution: y * theta2 >= x * theta2 - TOL.argmax,
        theta1_stable: a1 > 0.0,
        theta2_stable: a2 > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::mdp::Distribution;
    use crate::pbe::td_fixed_point;

    #[test]
    fn closed_form_denominators() {
        let inst = catalog::epsilon_f2();
        let s = two_arm_closed_form(&inst, 0.1).unwrap();
        // 0.1·(−0.0025 − 0.495 + 1) + 0.0025
        assert!((s.a1 - 0.05275).abs() < 1e-15);
        let s = two_arm_closed_form(&inst, 0.04).unwrap();
        assert!((s.a2 + 0.0002).abs() < 1e-15);
        assert!(!s.theta2_stable);
    }

    #[test]
    fn closed_form_matches_general_path() {
        let inst = catalog::epsilon_f2();
        let (mdp, phi) = (inst.mdp().unwrap(), inst.features().unwrap());
        for eps in [0.02, 0.3, 0.77] {
            let s = two_arm_closed_form(&inst, eps).unwrap();
            let nu = Distribution::new(vec![1.0 - eps, eps]).unwrap();
            let pi = Policy::deterministic(&[0], 2).unwrap();
            let th = td_fixed_point(&mdp, &phi, &pi, &nu, 0.0).unwrap();
            assert!((th[0] - s.theta1).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_denominator() {
        let inst = catalog::epsilon_f2();
        let eps = 0.01 / 0.255;
        assert!(matches!(two_arm_closed_form(&inst, eps), Err(Error::DegenerateDenominator(_))));
    }

    #[test]
    fn scan_counts_on_bifurcation_instance() {
        let inst = catalog::epsilon_f2();
        let (mdp, phi) = (inst.mdp().unwrap(), inst.features().unwrap());
        let rows = scan_epsilon(&mdp, &phi, &[0.01, 0.03, 0.05, 0.5], 0.0, TargetMode::Greedy).unwrap();
        let counts: Vec<usize> = rows.iter().map(|r| r.count).collect();
        assert_eq!(counts, vec![1, 1, 2, 2]);
        assert_eq!(rows[3].stable_count, 1);
    }

    #[test]
    fn grid_shapes() {
        let g = default_grid();
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 0.005);
        assert!((g[199] - 0.995).abs() < 1e-15);
        assert_eq!(linear_grid(0.1, 0.9, 1), vec![0.1]);
        assert!(scan_epsilon(&catalog::example1().mdp, &catalog::example1().phi, &[1.0], 0.0, TargetMode::Greedy).is_err());
    }
}
