//! Analysis of the projected Bellman equation (PBE) for linear Q-learning on
//! finite MDPs.
//!
//! The crate enumerates PBE solutions over deterministic greedy policies,
//! computes sufficient-condition certificates (strictly negatively row
//! dominating diagonals, contraction bounds for approximate value iteration,
//! Hurwitz stability), and simulates the matching learning dynamics:
//! stochastic and deterministic regularized linear Q-learning and
//! approximate value iteration.
//!
//! Indexing convention: state-action pairs are flattened row-major, so pair
//! `(s, a)` lives at row `s * num_actions + a` of the transition and feature
//! matrices.

pub mod catalog;
pub mod dynamics;
pub mod epsilon_lab;
mod error;
pub mod mdp;
pub mod numerics;
pub mod parallel;
pub mod pbe;

pub use error::{Error, Result};
