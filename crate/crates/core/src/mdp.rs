//! Finite MDPs, linear features, policies and exact policy evaluation.

use serde::Serialize;

use crate::numerics::{solve_linear, DenseMatrix, TOL};
use crate::{Error, Result};

/// Parameter vector of a linear Q-function approximation.
pub type Theta = Vec<f64>;

/// Finite discounted MDP. Pair `(s, a)` is row `s * num_actions + a` of
/// `transition` and entry of `reward`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mdp {
    pub num_states: usize,
    pub num_actions: usize,
    /// `|S||A| × |S|`, row-stochastic.
    pub transition: DenseMatrix,
    /// Expected one-step reward per state-action pair.
    pub reward: Vec<f64>,
    pub gamma: f64,
}

impl Mdp {
    pub fn new(
        num_states: usize,
        num_actions: usize,
        transition: DenseMatrix,
        reward: Vec<f64>,
        gamma: f64,
    ) -> Result<Self> {
        let mdp = Mdp { num_states, num_actions, transition, reward, gamma };
        validate_mdp(&mdp)?;
        Ok(mdp)
    }

    pub fn num_pairs(&self) -> usize {
        self.num_states * self.num_actions
    }

    pub fn pair(&self, state: usize, action: usize) -> usize {
        state * self.num_actions + action
    }
}

/// Checks every structural invariant of an [`Mdp`].
pub fn validate_mdp(mdp: &Mdp) -> Result<()> {
    if mdp.num_states == 0 || mdp.num_actions == 0 {
        return Err(Error::InvalidArgument("state and action counts must be positive".into()));
    }
    let pairs = mdp.num_pairs();
    if mdp.transition.rows() != pairs || mdp.transition.cols() != mdp.num_states {
        return Err(Error::DimensionMismatch(format!(
            "transition is {}x{}, expected {pairs}x{}",
            mdp.transition.rows(),
            mdp.transition.cols(),
            mdp.num_states
        )));
    }
    if mdp.reward.len() != pairs {
        return Err(Error::DimensionMismatch(format!(
            "reward has {} entries, expected {pairs}",
            mdp.reward.len()
        )));
    }
    if !mdp.transition.is_finite() {
        return Err(Error::NonFinite("transition".into()));
    }
    if mdp.reward.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonFinite("reward".into()));
    }
    check_stochastic_rows(&mdp.transition)?;
    if !(mdp.gamma > 0.0 && mdp.gamma < 1.0) {
        return Err(Error::GammaOutOfRange(mdp.gamma));
    }
    Ok(())
}

fn check_stochastic_rows(m: &DenseMatrix) -> Result<()> {
    for i in 0..m.rows() {
        for (j, &v) in m.row(i).iter().enumerate() {
            if v < 0.0 {
                return Err(Error::NegativeProbability { row: i, col: j, value: v });
            }
        }
        let sum: f64 = m.row(i).iter().sum();
        if (sum - 1.0).abs() > TOL.probability_sum {
            return Err(Error::NonStochasticRow { row: i, sum });
        }
    }
    Ok(())
}

/// Feature matrix `Φ`, one row `φ(s, a)ᵀ` per state-action pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureMatrix {
    pub num_states: usize,
    pub num_actions: usize,
    pub phi: DenseMatrix,
}

impl FeatureMatrix {
    pub fn new(num_states: usize, num_actions: usize, phi: DenseMatrix) -> Result<Self> {
        if phi.rows() != num_states * num_actions {
            return Err(Error::DimensionMismatch(format!(
                "feature matrix has {} rows, expected {}",
                phi.rows(),
                num_states * num_actions
            )));
        }
        if phi.cols() == 0 {
            return Err(Error::DimensionMismatch("feature dimension is zero".into()));
        }
        if !phi.is_finite() {
            return Err(Error::NonFinite("features".into()));
        }
        Ok(FeatureMatrix { num_states, num_actions, phi })
    }

    /// Identity features: one indicator per state-action pair.
    pub fn tabular(num_states: usize, num_actions: usize) -> Self {
        FeatureMatrix {
            num_states,
            num_actions,
            phi: DenseMatrix::identity(num_states * num_actions),
        }
    }

    pub fn dim(&self) -> usize {
        self.phi.cols()
    }

    pub fn row(&self, state: usize, action: usize) -> &[f64] {
        self.phi.row(state * self.num_actions + action)
    }

    /// `Φθ`, the approximate Q-value of every pair.
    pub fn scores(&self, theta: &[f64]) -> Vec<f64> {
        self.phi.mul_vec(theta)
    }

    pub fn check_compatible(&self, mdp: &Mdp) -> Result<()> {
        if self.num_states != mdp.num_states || self.num_actions != mdp.num_actions {
            return Err(Error::DimensionMismatch(format!(
                "features built for {}x{} pairs, MDP has {}x{}",
                self.num_states, self.num_actions, mdp.num_states, mdp.num_actions
            )));
        }
        Ok(())
    }

    pub fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "theta has {} entries, feature dimension is {}",
                theta.len(),
                self.dim()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Deterministic,
    Stochastic,
}

/// Per-state action distribution stored as an `|S| × |A|` table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Policy {
    kind: PolicyKind,
    table: DenseMatrix,
}

impl Policy {
    /// One-hot policy choosing `actions[s]` in state `s`.
    pub fn deterministic(actions: &[usize], num_actions: usize) -> Result<Self> {
        let mut table = DenseMatrix::zeros(actions.len(), num_actions);
        for (s, &a) in actions.iter().enumerate() {
            if a >= num_actions {
                return Err(Error::InvalidArgument(format!(
                    "action {a} out of range for {num_actions} actions"
                )));
            }
            table[(s, a)] = 1.0;
        }
        Ok(Policy { kind: PolicyKind::Deterministic, table })
    }

    /// Stochastic policy from an `|S| × |A|` table of probabilities.
    pub fn from_table(table: DenseMatrix) -> Result<Self> {
        if !table.is_finite() {
            return Err(Error::NonFinite("policy table".into()));
        }
        check_stochastic_rows(&table)?;
        Ok(Policy { kind: PolicyKind::Stochastic, table })
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn table(&self) -> &DenseMatrix {
        &self.table
    }

    pub fn num_states(&self) -> usize {
        self.table.rows()
    }

    pub fn num_actions(&self) -> usize {
        self.table.cols()
    }

    pub fn prob(&self, state: usize, action: usize) -> f64 {
        self.table[(state, action)]
    }

    /// Chosen action per state, for deterministic policies.
    pub fn actions(&self) -> Option<Vec<usize>> {
        match self.kind {
            PolicyKind::Deterministic => Some(
                (0..self.num_states())
                    .map(|s| self.table.row(s).iter().position(|&p| p == 1.0).unwrap_or(0))
                    .collect(),
            ),
            PolicyKind::Stochastic => None,
        }
    }

    /// 1-based lexicographic index of a deterministic policy: actions read as
    /// base-`|A|` digits, state 0 most significant.
    pub fn index(&self) -> Option<usize> {
        self.actions().map(|a| policy_index(&a, self.num_actions()))
    }

    /// Selection matrix `Π`, `|S| × |S||A|`, whose row `s` is `e_s ⊗ π(·|s)`.
    pub fn selection_matrix(&self) -> DenseMatrix {
        let (ns, na) = (self.num_states(), self.num_actions());
        let mut pi = DenseMatrix::zeros(ns, ns * na);
        for s in 0..ns {
            for a in 0..na {
                pi[(s, s * na + a)] = self.table[(s, a)];
            }
        }
        pi
    }

    fn check_against(&self, mdp: &Mdp) -> Result<()> {
        if self.num_states() != mdp.num_states || self.num_actions() != mdp.num_actions {
            return Err(Error::DimensionMismatch(format!(
                "policy is {}x{}, MDP has {} states and {} actions",
                self.num_states(),
                self.num_actions(),
                mdp.num_states,
                mdp.num_actions
            )));
        }
        Ok(())
    }
}

/// 1-based lexicographic index of an action assignment.
pub fn policy_index(actions: &[usize], num_actions: usize) -> usize {
    actions.iter().fold(0, |acc, &a| acc * num_actions + a) + 1
}

/// All `|A|^|S|` deterministic policies in lexicographic order, or
/// `PolicySpaceTooLarge` beyond `cap`.
pub fn deterministic_policies(num_states: usize, num_actions: usize, cap: usize) -> Result<Vec<Policy>> {
    let count = (num_actions as u128).checked_pow(num_states as u32).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::PolicySpaceTooLarge { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut actions = vec![0usize; num_states];
    for _ in 0..count {
        out.push(Policy::deterministic(&actions, num_actions)?);
        for s in (0..num_states).rev() {
            actions[s] += 1;
            if actions[s] < num_actions {
                break;
            }
            actions[s] = 0;
        }
    }
    Ok(out)
}

/// Probability vector over state-action pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("empty distribution".into()));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("distribution".into()));
        }
        if let Some((i, &w)) = weights.iter().enumerate().find(|(_, &w)| w < 0.0) {
            return Err(Error::NegativeProbability { row: 0, col: i, value: w });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > TOL.probability_sum {
            return Err(Error::NonStochasticRow { row: 0, sum });
        }
        Ok(Distribution { weights })
    }

    pub fn uniform(n: usize) -> Self {
        Distribution { weights: vec![1.0 / n as f64; n] }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Actions whose score is within `TOL.argmax` of the maximum, ascending.
pub fn argmax_set(scores: &[f64]) -> Vec<usize> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..scores.len()).filter(|&a| scores[a] >= max - TOL.argmax).collect()
}

/// Greedy action per state with the lowest-index tie-break.
pub fn greedy_actions(phi: &FeatureMatrix, theta: &[f64]) -> Vec<usize> {
    let q = phi.scores(theta);
    q.chunks(phi.num_actions).map(|row| argmax_set(row)[0]).collect()
}

/// Deterministic greedy policy of `Φθ`; ties go to the lowest action index.
pub fn greedy_policy(phi: &FeatureMatrix, theta: &[f64]) -> Result<Policy> {
    phi.check_theta(theta)?;
    Policy::deterministic(&greedy_actions(phi, theta), phi.num_actions)
}

/// Exploration rule for [`make_policy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exploration {
    EpsilonGreedy { epsilon: f64 },
    /// Plain softmax of `τ φᵀθ`.
    Softmax { temperature: f64 },
    /// Gibbs weights `exp(−τ_θ φᵀθ)` with `τ_θ = κ₀/‖θ‖₂` when `‖θ‖₂ ≥ 1`,
    /// else `κ₀/2`. `epsilon` is carried for bookkeeping and does not enter
    /// the weights.
    TamedGibbs { epsilon: f64, kappa0: f64 },
}

/// Row of an ε-greedy policy given the argmax set.
fn epsilon_greedy_row(argmax: &[usize], num_actions: usize, epsilon: f64) -> Vec<f64> {
    if argmax.len() == num_actions {
        return vec![1.0 / num_actions as f64; num_actions];
    }
    let best = (1.0 - epsilon) / argmax.len() as f64;
    let rest = epsilon / (num_actions - argmax.len()) as f64;
    (0..num_actions).map(|a| if argmax.contains(&a) { best } else { rest }).collect()
}

/// Effective inverse temperature of the tamed Gibbs policy.
pub fn tamed_gibbs_temperature(theta: &[f64], kappa0: f64) -> f64 {
    let norm = theta.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm >= 1.0 {
        kappa0 / norm
    } else {
        kappa0 / 2.0
    }
}

fn normalized_exp(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// Stochastic policy derived from the scores `Φθ`.
pub fn make_policy(phi: &FeatureMatrix, theta: &[f64], rule: Exploration) -> Result<Policy> {
    phi.check_theta(theta)?;
    let na = phi.num_actions;
    let q = phi.scores(theta);
    let rows: Vec<Vec<f64>> = match rule {
        Exploration::EpsilonGreedy { epsilon } => {
            check_epsilon(epsilon)?;
            q.chunks(na).map(|row| epsilon_greedy_row(&argmax_set(row), na, epsilon)).collect()
        }
        Exploration::Softmax { temperature } => {
            if !(temperature > 0.0 && temperature.is_finite()) {
                return Err(Error::InvalidArgument(format!("temperature {temperature} must be positive")));
            }
            q.chunks(na)
                .map(|row| normalized_exp(&row.iter().map(|x| temperature * x).collect::<Vec<_>>()))
                .collect()
        }
        Exploration::TamedGibbs { epsilon, kappa0 } => {
            check_epsilon(epsilon)?;
            if !(kappa0 > 0.0 && kappa0.is_finite()) {
                return Err(Error::InvalidArgument(format!("kappa0 {kappa0} must be positive")));
            }
            let tau = tamed_gibbs_temperature(theta, kappa0);
            q.chunks(na)
                .map(|row| normalized_exp(&row.iter().map(|x| -tau * x).collect::<Vec<_>>()))
                .collect()
        }
    };
    Policy::from_table(DenseMatrix::from_rows(&rows)?)
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside [0, 1)")));
    }
    Ok(())
}

/// ε-greedy perturbation of a deterministic policy: the chosen action keeps
/// `1 − ε`, the others share `ε`.
pub fn epsilon_perturbation(policy: &Policy, epsilon: f64) -> Result<Policy> {
    check_epsilon(epsilon)?;
    let actions = policy
        .actions()
        .ok_or_else(|| Error::InvalidArgument("epsilon perturbation needs a deterministic policy".into()))?;
    let na = policy.num_actions();
    let rows: Vec<Vec<f64>> = actions.iter().map(|&a| epsilon_greedy_row(&[a], na, epsilon)).collect();
    Policy::from_table(DenseMatrix::from_rows(&rows)?)
}

/// State-action chain `[(s,a),(x,u)] = P(x|s,a) β(u|x)`, i.e. `P Π_β`.
pub fn chain_matrix(mdp: &Mdp, beta: &Policy) -> Result<DenseMatrix> {
    beta.check_against(mdp)?;
    Ok(mdp.transition.matmul(&beta.selection_matrix()))
}

/// Exact evaluation of a policy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyEvaluation {
    /// `Q^π` per state-action pair.
    pub q: Vec<f64>,
    /// `J(π)`: state average of `Σ_a π(a|s) Q^π(s,a)`.
    pub score: f64,
}

/// Solves `(I − γ P Π_π) Q = R`.
pub fn policy_q_values(mdp: &Mdp, pi: &Policy) -> Result<PolicyEvaluation> {
    let chain = chain_matrix(mdp, pi)?;
    let a = DenseMatrix::identity(mdp.num_pairs()).sub(&chain.scaled(mdp.gamma));
    let q = solve_linear(&a, &mdp.reward)?;
    let v = pi.selection_matrix().mul_vec(&q);
    let score = v.iter().sum::<f64>() / mdp.num_states as f64;
    Ok(PolicyEvaluation { q, score })
}

/// Optimal Q-function by value iteration until the sup-norm change drops
/// below `tol` or `max_sweeps` is reached.
pub fn value_iteration(mdp: &Mdp, tol: f64, max_sweeps: usize) -> Vec<f64> {
    let mut q = vec![0.0; mdp.num_pairs()];
    for _ in 0..max_sweeps {
        let next = bellman_optimality(mdp, &q);
        let diff = next.iter().zip(&q).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        q = next;
        if diff < tol {
            break;
        }
    }
    q
}

/// One application of the Bellman optimality operator to a tabular `Q`.
pub fn bellman_optimality(mdp: &Mdp, q: &[f64]) -> Vec<f64> {
    let v: Vec<f64> = q
        .chunks(mdp.num_actions)
        .map(|row| row.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let pv = mdp.transition.mul_vec(&v);
    mdp.reward.iter().zip(pv).map(|(r, x)| r + mdp.gamma * x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn tiny(rows: &[[f64; 2]], gamma: f64) -> Mdp {
        Mdp {
            num_states: 2,
            num_actions: 1,
            transition: DenseMatrix::from_rows(rows).unwrap(),
            reward: vec![0.0, 0.0],
            gamma,
        }
    }

    #[test]
    fn validation() {
        assert!(validate_mdp(&catalog::example1().mdp).is_ok());
        assert!(matches!(
            validate_mdp(&tiny(&[[0.5, 0.6], [0.5, 0.5]], 0.9)),
            Err(Error::NonStochasticRow { row: 0, .. })
        ));
        assert!(matches!(
            validate_mdp(&tiny(&[[1.5, -0.5], [0.5, 0.5]], 0.9)),
            Err(Error::NegativeProbability { row: 0, col: 1, .. })
        ));
        assert_eq!(validate_mdp(&tiny(&[[0.5, 0.5], [0.5, 0.5]], 1.0)), Err(Error::GammaOutOfRange(1.0)));
    }

    #[test]
    fn greedy_examples() {
        let phi = FeatureMatrix::tabular(2, 2);
        assert_eq!(greedy_policy(&phi, &[1.0, 0.0, 0.0, 2.0]).unwrap().actions().unwrap(), vec![0, 1]);
        assert_eq!(greedy_policy(&phi, &[0.0; 4]).unwrap().actions().unwrap(), vec![0, 0]);

        let ex3 = catalog::example3();
        assert_eq!(greedy_policy(&ex3.phi, &[-1.26, -0.27]).unwrap().actions().unwrap(), vec![0, 1]);
        assert_eq!(greedy_policy(&ex3.phi, &[-0.45, 0.98]).unwrap().actions().unwrap(), vec![1, 0]);
    }

    #[test]
    fn greedy_scores_oracle() {
        // Scores recomputed by hand from the feature rows of the third example.
        let ex3 = catalog::example3();
        let theta = [-1.26, -0.27];
        let dot = |r: [f64; 2]| r[0] * theta[0] + r[1] * theta[1];
        let q = [dot([0.13, 0.09]), dot([1.0, 0.84]), dot([-0.59, 0.64]), dot([-0.94, -0.28])];
        assert!(q[0] > q[1] && q[3] > q[2]);
        assert_eq!(ex3.phi.scores(&theta).len(), 4);
    }

    #[test]
    fn epsilon_greedy_rows() {
        let phi = FeatureMatrix::tabular(1, 2);
        let p = make_policy(&phi, &[1.0, 0.0], Exploration::EpsilonGreedy { epsilon: 0.2 }).unwrap();
        assert_eq!(p.table().row(0), &[0.8, 0.2]);
        let tie = make_policy(&phi, &[0.3, 0.3], Exploration::EpsilonGreedy { epsilon: 0.7 }).unwrap();
        assert_eq!(tie.table().row(0), &[0.5, 0.5]);
        let phi3 = FeatureMatrix::tabular(1, 3);
        let p3 = make_policy(&phi3, &[1.0, 1.0, 0.0], Exploration::EpsilonGreedy { epsilon: 0.3 }).unwrap();
        assert_eq!(p3.table().row(0), &[0.35, 0.35, 0.3]);
    }

    #[test]
    fn tamed_gibbs_temperature_branches() {
        assert_eq!(tamed_gibbs_temperature(&[2.0, 0.0], 1.0), 0.5);
        assert_eq!(tamed_gibbs_temperature(&[0.1, 0.1], 1.0), 0.5);
        assert_eq!(tamed_gibbs_temperature(&[0.0, 4.0], 2.0), 0.5);
        let phi = FeatureMatrix::tabular(1, 2);
        let p = make_policy(&phi, &[2.0, 0.0], Exploration::TamedGibbs { epsilon: 0.1, kappa0: 1.0 }).unwrap();
        // weights exp(-0.5 * 2) and exp(0)
        let expect = (-1.0f64).exp() / ((-1.0f64).exp() + 1.0);
        assert!((p.prob(0, 0) - expect).abs() < 1e-15);
    }

    #[test]
    fn softmax_prefers_high_scores() {
        let phi = FeatureMatrix::tabular(1, 2);
        let p = make_policy(&phi, &[1.0, 0.0], Exploration::Softmax { temperature: 2.0 }).unwrap();
        let expect = 1.0 / (1.0 + (-2.0f64).exp());
        assert!((p.prob(0, 0) - expect).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_exploration_parameters() {
        let phi = FeatureMatrix::tabular(1, 2);
        assert!(make_policy(&phi, &[0.0, 0.0], Exploration::EpsilonGreedy { epsilon: 1.0 }).is_err());
        assert!(make_policy(&phi, &[0.0, 0.0], Exploration::Softmax { temperature: 0.0 }).is_err());
        assert!(make_policy(&phi, &[0.0, 0.0], Exploration::TamedGibbs { epsilon: 0.1, kappa0: -1.0 }).is_err());
    }

    #[test]
    fn chain_examples() {
        let single = Mdp {
            num_states: 1,
            num_actions: 3,
            transition: DenseMatrix::from_rows(&[[1.0], [1.0], [1.0]]).unwrap(),
            reward: vec![0.0; 3],
            gamma: 0.5,
        };
        let beta = Policy::from_table(DenseMatrix::from_rows(&[[0.2, 0.3, 0.5]]).unwrap()).unwrap();
        let c = chain_matrix(&single, &beta).unwrap();
        for i in 0..3 {
            assert_eq!(c.row(i), &[0.2, 0.3, 0.5]);
        }

        let uniform = Mdp {
            num_states: 2,
            num_actions: 2,
            transition: DenseMatrix::from_rows(&[[0.5, 0.5]; 4]).unwrap(),
            reward: vec![0.0; 4],
            gamma: 0.5,
        };
        let beta = Policy::from_table(DenseMatrix::from_rows(&[[0.5, 0.5]; 2]).unwrap()).unwrap();
        let c = chain_matrix(&uniform, &beta).unwrap();
        for j in 0..4 {
            let col: f64 = (0..4).map(|i| c[(i, j)]).sum();
            assert!((col - 1.0).abs() < 1e-15);
        }

        let ex1 = catalog::example1();
        let c = chain_matrix(&ex1.mdp, &ex1.behavior).unwrap();
        assert_eq!((c.rows(), c.cols()), (4, 4));
        for i in 0..4 {
            assert!((c.row(i).iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn q_values_examples() {
        let one = Mdp {
            num_states: 1,
            num_actions: 1,
            transition: DenseMatrix::from_rows(&[[1.0]]).unwrap(),
            reward: vec![2.0],
            gamma: 0.75,
        };
        let pi = Policy::deterministic(&[0], 1).unwrap();
        let ev = policy_q_values(&one, &pi).unwrap();
        assert!((ev.q[0] - 8.0).abs() < 1e-12);

        let mut zero = catalog::example1().mdp;
        zero.reward = vec![0.0; 4];
        let ev = policy_q_values(&zero, &Policy::deterministic(&[1, 0], 2).unwrap()).unwrap();
        assert!(ev.q.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn suboptimal_fixed_point_in_third_example() {
        let ex3 = catalog::example3();
        let j1 = policy_q_values(&ex3.mdp, &greedy_policy(&ex3.phi, &[-1.26, -0.27]).unwrap()).unwrap();
        let j2 = policy_q_values(&ex3.mdp, &greedy_policy(&ex3.phi, &[-0.45, 0.98]).unwrap()).unwrap();
        assert!(j1.score < j2.score);
    }

    #[test]
    fn enumeration_order_and_index() {
        let all = deterministic_policies(2, 2, 4096).unwrap();
        let idx: Vec<usize> = all.iter().map(|p| p.index().unwrap()).collect();
        assert_eq!(idx, vec![1, 2, 3, 4]);
        assert_eq!(all[0].actions().unwrap(), vec![0, 0]);
        assert_eq!(all[3].actions().unwrap(), vec![1, 1]);
        assert!(matches!(deterministic_policies(13, 2, 4096), Err(Error::PolicySpaceTooLarge { count: 8192, .. })));
    }

    #[test]
    fn selection_matrix_layout() {
        let p = Policy::deterministic(&[1, 0], 2).unwrap();
        let s = p.selection_matrix();
        assert_eq!(s.row(0), &[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(s.row(1), &[0.0, 0.0, 1.0, 0.0]);
    }
}
