//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use pbe_core::mdp::{Distribution, FeatureMatrix, Mdp};
use pbe_core::numerics::DenseMatrix;
use rand::Rng;

/// Positive random probability vector.
pub fn random_simplex<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Row-stochastic matrix with strictly positive entries.
pub fn random_stochastic<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DenseMatrix {
    let rows: Vec<Vec<f64>> = (0..rows).map(|_| random_simplex(rng, cols)).collect();
    DenseMatrix::from_rows(&rows).unwrap()
}

pub fn random_mdp<R: Rng>(rng: &mut R, num_states: usize, num_actions: usize, gamma: f64) -> Mdp {
    let pairs = num_states * num_actions;
    let transition = random_stochastic(rng, pairs, num_states);
    let reward = (0..pairs).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Mdp::new(num_states, num_actions, transition, reward, gamma).unwrap()
}

pub fn random_features<R: Rng>(rng: &mut R, num_states: usize, num_actions: usize, dim: usize, scale: f64) -> FeatureMatrix {
    let data = (0..num_states * num_actions * dim).map(|_| rng.gen_range(-scale..=scale)).collect();
    FeatureMatrix::new(num_states, num_actions, DenseMatrix::from_row_major(num_states * num_actions, dim, data).unwrap())
        .unwrap()
}

pub fn random_distribution<R: Rng>(rng: &mut R, n: usize) -> Distribution {
    Distribution::new(random_simplex(rng, n)).unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, scale: f64) -> DenseMatrix {
    let data = (0..n * n).map(|_| rng.gen_range(-scale..=scale)).collect();
    DenseMatrix::from_row_major(n, n, data).unwrap()
}

/// Random matrix whose diagonal dominates every row negatively.
pub fn random_snrdd<R: Rng>(rng: &mut R, n: usize) -> DenseMatrix {
    let mut a = random_matrix(rng, n, 1.0);
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
        a[(i, i)] = -(off + rng.gen_range(0.01..1.0));
    }
    a
}

/// Features with exactly one non-negative nonzero per row; every column is
/// used at least once, so `ΦᵀDΦ` is diagonal and positive definite.
pub fn disjoint_features<R: Rng>(rng: &mut R, num_states: usize, num_actions: usize, dim: usize) -> FeatureMatrix {
    let pairs = num_states * num_actions;
    assert!(dim <= pairs);
    let mut owner: Vec<usize> = (0..pairs).map(|i| if i < dim { i } else { rng.gen_range(0..dim) }).collect();
    for i in (1..pairs).rev() {
        let j = rng.gen_range(0..=i);
        owner.swap(i, j);
    }
    let mut phi = DenseMatrix::zeros(pairs, dim);
    for (i, &c) in owner.iter().enumerate() {
        phi[(i, c)] = rng.gen_range(0.1..1.0);
    }
    FeatureMatrix::new(num_states, num_actions, phi).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}
