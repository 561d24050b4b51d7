use std::collections::VecDeque;

use super::Verdict;
use crate::mdp::Theta;
use crate::numerics::{vec_inf_norm, TOL};

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Incremental trajectory classifier. Keeps the last `window + 1` iterates
/// and the sup-norm of every iterate.
#[derive(Debug, Clone)]
pub struct Classifier {
    tol: f64,
    window: usize,
    tail: VecDeque<Theta>,
    norms: Vec<f64>,
    small_steps: usize,
    blown_up: bool,
}

impl Classifier {
    pub fn new(tol: f64, window: usize) -> Self {
        Classifier {
            tol,
            window: window.max(2),
            tail: VecDeque::with_capacity(window + 2),
            norms: Vec::new(),
            small_steps: 0,
            blown_up: false,
        }
    }

    pub fn push(&mut self, theta: &[f64]) {
        let norm = vec_inf_norm(theta);
        if norm.is_nan() || norm > TOL.blowup {
            self.blown_up = true;
        }
        if let Some(prev) = self.tail.back() {
            if dist(prev, theta) < self.tol {
                self.small_steps += 1;
            } else {
                self.small_steps = 0;
            }
        }
        self.norms.push(norm);
        self.tail.push_back(theta.to_vec());
        if self.tail.len() > self.window + 1 {
            self.tail.pop_front();
        }
    }

    pub fn blown_up(&self) -> bool {
        self.blown_up
    }

    /// True once the last `window` successive differences are below `tol`.
    pub fn settled(&self) -> bool {
        self.small_steps >= self.window
    }

    fn converged(&self) -> bool {
        let n = self.norms.len();
        n >= 2 && self.small_steps >= self.window.min(n - 1)
    }

    fn growing(&self) -> bool {
        let n = self.norms.len();
        if n < 4 {
            return false;
        }
        let half = &self.norms[n / 2..];
        let first = half[0];
        first > 0.0 && half.windows(2).all(|w| w[1] >= w[0]) && *half.last().unwrap() >= 10.0 * first
    }

    fn oscillating(&self) -> bool {
        let tail: Vec<&Theta> = self.tail.iter().collect();
        if tail.len() < 3 {
            return false;
        }
        if tail.windows(2).any(|w| dist(w[0], w[1]) < self.tol) {
            return false;
        }
        (0..tail.len()).any(|i| (i + 2..tail.len()).any(|j| dist(tail[i], tail[j]) < self.tol))
    }

    pub fn verdict(&self) -> Verdict {
        if self.blown_up {
            Verdict::Diverging
        } else if self.converged() {
            Verdict::Converged { theta: self.tail.back().cloned().unwrap_or_default() }
        } else if self.growing() {
            Verdict::Diverging
        } else if self.oscillating() {
            Verdict::Oscillating
        } else {
            Verdict::BudgetExhausted
        }
    }
}

/// Verdict for a full list of raw iterates.
///
/// Converged when the last `window` successive differences are below `tol`;
/// diverging when the sup-norm exceeds the blowup bound or grows
/// monotonically by at least 10× over the second half; oscillating when two
/// non-adjacent iterates in the tail window are within `tol` while every
/// successive difference there is at least `tol`.
pub fn classify_trajectory(iterates: &[Theta], tol: f64, window: usize) -> Verdict {
    let mut c = Classifier::new(tol, window);
    for t in iterates {
        c.push(t);
    }
    c.verdict()
}
