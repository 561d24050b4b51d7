//! Builtin instances: three two-state, two-action MDPs with two features
//! each, and two single-state bandits used for ε sweeps.
//!
//! All discount factors are 0.99.

use crate::epsilon_lab::TwoArmInstance;
use crate::mdp::{FeatureMatrix, Mdp, Policy};
use crate::numerics::DenseMatrix;

pub const GAMMA: f64 = 0.99;

/// A two-state MDP with linear features and a behavior policy.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub mdp: Mdp,
    pub phi: FeatureMatrix,
    pub behavior: Policy,
}

fn two_state(phi: [[f64; 2]; 4], transition: [[f64; 2]; 4], reward: [f64; 4], behavior: [[f64; 2]; 2]) -> Example {
    let transition = DenseMatrix::from_rows(&transition).expect("static data");
    let mdp = Mdp::new(2, 2, transition, reward.to_vec(), GAMMA).expect("static data");
    let phi = FeatureMatrix::new(2, 2, DenseMatrix::from_rows(&phi).expect("static data")).expect("static data");
    let behavior = Policy::from_table(
        DenseMatrix::from_rows(&behavior).expect("static data"),
    )
    .expect("static data");
    Example { mdp, phi, behavior }
}

/// Linear Q-learning converges here while approximate value iteration
/// cycles between two greedy policies.
pub fn example1() -> Example {
    two_state(
        [[0.34, -0.59], [0.25, -0.16], [-0.92, 0.37], [0.83, 0.19]],
        [[0.0, 1.0], [0.02, 0.98], [0.99, 0.01], [0.05, 0.95]],
        [0.3, -0.47, -0.87, -1.0],
        [[0.96, 0.04], [0.19, 0.81]],
    )
}

/// Approximate value iteration converges here while linear Q-learning does
/// not (the linearization at the solution is not Hurwitz).
pub fn example2() -> Example {
    two_state(
        [[0.37, 0.99], [0.97, 1.0], [-1.0, -0.95], [-0.77, 0.19]],
        [[0.99, 0.01], [0.99, 0.01], [0.89, 0.11], [0.42, 0.58]],
        [-0.31, -0.46, -0.35, 0.73],
        [[0.59, 0.41], [0.98, 0.02]],
    )
}

/// Two PBE solutions; Q-learning started near the first one converges to
/// it although its greedy policy is worse.
pub fn example3() -> Example {
    two_state(
        [[0.13, 0.09], [1.0, 0.84], [-0.59, 0.64], [-0.94, -0.28]],
        [[0.99, 0.01], [0.37, 0.63], [0.99, 0.01], [0.99, 0.01]],
        [-0.48, 0.48, 0.41, 0.18],
        [[0.98, 0.02], [0.96, 0.04]],
    )
}

/// Bandit whose solution count jumps from 0 to 2 as ε grows when the
/// target operator uses the ε-greedy policy.
pub fn epsilon_f1() -> TwoArmInstance {
    TwoArmInstance { x: 0.45, y: 0.79, r1: 0.5, r2: -0.78, gamma: GAMMA }
}

/// Bandit that gains a second, unstable solution at ε = 0.01/0.255.
pub fn epsilon_f2() -> TwoArmInstance {
    TwoArmInstance { x: 0.5, y: 1.0, r1: -0.1, r2: -0.78, gamma: GAMMA }
}

pub const NAMES: [&str; 5] = ["ex1", "ex2", "ex3", "epsF1", "epsF2"];

/// Builtin by name. Bandits get a uniform behavior policy.
pub fn by_name(name: &str) -> Option<Example> {
    match name {
        "ex1" => Some(example1()),
        "ex2" => Some(example2()),
        "ex3" => Some(example3()),
        "epsF1" => Some(epsilon_f1().to_example()),
        "epsF2" => Some(epsilon_f2().to_example()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_resolve() {
        for name in NAMES {
            let ex = by_name(name).unwrap();
            assert_eq!(ex.mdp.gamma, GAMMA);
            assert_eq!(ex.phi.num_states, ex.mdp.num_states);
        }
        assert!(by_name("ex4").is_none());
    }

    #[test]
    fn payload_layout() {
        let ex = example1();
        assert_eq!(ex.mdp.transition.row(1), &[0.02, 0.98]);
        assert_eq!(ex.phi.row(1, 0), &[-0.92, 0.37]);
        assert_eq!(ex.behavior.table().row(1), &[0.19, 0.81]);
    }
}
