use rand::distributions::{Distribution as _, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Recorder, RunConfig, SamplerConfig, StepSchedule, Trajectory};
use crate::mdp::{Distribution, FeatureMatrix, Mdp, Theta};
use crate::numerics::vec_inf_norm;
use crate::pbe::Projection;
use crate::{parallel, Error, Result};

/// Single-sample update direction of stochastic linear Q-learning.
pub struct StochasticUpdate<'a> {
    mdp: &'a Mdp,
    phi: &'a FeatureMatrix,
    pairs: WeightedIndex<f64>,
    next_state: Vec<WeightedIndex<f64>>,
    noise: f64,
    rng: ChaCha8Rng,
}

impl<'a> StochasticUpdate<'a> {
    pub fn new(mdp: &'a Mdp, phi: &'a FeatureMatrix, sampler: &SamplerConfig) -> Result<Self> {
        phi.check_compatible(mdp)?;
        if sampler.d.len() != mdp.num_pairs() {
            return Err(Error::DimensionMismatch(format!(
                "sampling distribution over {} pairs, MDP has {}",
                sampler.d.len(),
                mdp.num_pairs()
            )));
        }
        if !(sampler.reward_noise_halfwidth >= 0.0 && sampler.reward_noise_halfwidth.is_finite()) {
            return Err(Error::InvalidArgument("reward noise halfwidth must be finite and non-negative".into()));
        }
        let weighted = |w: &[f64]| {
            WeightedIndex::new(w.iter().copied()).map_err(|e| Error::InvalidArgument(format!("sampling weights: {e}")))
        };
        let pairs = weighted(sampler.d.weights())?;
        let next_state = (0..mdp.num_pairs()).map(|i| weighted(mdp.transition.row(i))).collect::<Result<_>>()?;
        Ok(StochasticUpdate {
            mdp,
            phi,
            pairs,
            next_state,
            noise: sampler.reward_noise_halfwidth,
            rng: ChaCha8Rng::seed_from_u64(sampler.seed),
        })
    }

    /// Draws `(s, a, r, s′)` and returns `φ_i(s,a) (δ − η θ_i)` with
    /// `δ = r + γ max_a′ φ(s′,a′)ᵀθ − φ(s,a)ᵀθ`. The regularizer is scaled
    /// coordinatewise by the sampled feature.
    pub fn direction(&mut self, theta: &[f64], eta: f64) -> Vec<f64> {
        let mut out = vec![0.0; theta.len()];
        self.direction_into(theta, eta, &mut out);
        out
    }

    fn direction_into(&mut self, theta: &[f64], eta: f64, out: &mut [f64]) {
        let na = self.mdp.num_actions;
        let pair = self.pairs.sample(&mut self.rng);
        let next = self.next_state[pair].sample(&mut self.rng);
        let mut reward = self.mdp.reward[pair];
        if self.noise > 0.0 {
            reward += self.rng.gen_range(-self.noise..=self.noise);
        }
        let dot = |row: &[f64]| row.iter().zip(theta).map(|(a, b)| a * b).sum::<f64>();
        let feat = self.phi.phi.row(pair);
        let boot = (0..na).map(|a| dot(self.phi.row(next, a))).fold(f64::NEG_INFINITY, f64::max);
        let td = reward + self.mdp.gamma * boot - dot(feat);
        for ((o, &f), &t) in out.iter_mut().zip(feat).zip(theta) {
            *o = f * (td - eta * t);
        }
    }
}

fn check_theta0(phi: &FeatureMatrix, theta0: &[f64]) -> Result<()> {
    phi.check_theta(theta0)?;
    if theta0.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("initial theta".into()));
    }
    Ok(())
}

/// Stochastic linear Q-learning with i.i.d. samples from `sampler.d`.
///
/// Runs the full budget unless the iterate blows up. The recorded residual
/// is `‖F_η(θ, greedy(θ), d)‖∞`.
pub fn run_q_learning(
    mdp: &Mdp,
    phi: &FeatureMatrix,
    sampler: &SamplerConfig,
    schedule: StepSchedule,
    theta0: &[f64],
    cfg: RunConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    schedule.validate()?;
    check_theta0(phi, theta0)?;
    let mut update = StochasticUpdate::new(mdp, phi, sampler)?;
    let proj = Projection::new(mdp, phi, sampler.d.clone())?;
    let residual = |t: &[f64]| vec_inf_norm(&proj.greedy_residual(t, cfg.eta));

    let mut rec = Recorder::new(cfg, Some(sampler.seed));
    let mut theta: Theta = theta0.to_vec();
    let mut dir = vec![0.0; theta.len()];
    rec.classifier.push(&theta);
    rec.record(0, &theta, schedule.rate(0), residual(&theta), phi);
    let mut k = 0;
    while k < cfg.max_iter {
        let alpha = schedule.rate(k);
        update.direction_into(&theta, cfg.eta, &mut dir);
        theta.iter_mut().zip(&dir).for_each(|(t, d)| *t += alpha * d);
        k += 1;
        rec.classifier.push(&theta);
        if rec.classifier.blown_up() {
            break;
        }
        if k % cfg.stride == 0 {
            rec.record(k, &theta, schedule.rate(k), residual(&theta), phi);
        }
    }
    let r = residual(&theta);
    Ok(rec.finish(k, &theta, schedule.rate(k), r, phi))
}

/// Independent stochastic runs, one per seed, evaluated in parallel. The
/// seed of `sampler` is replaced by each entry of `seeds`.
pub fn run_q_learning_seeds(
    mdp: &Mdp,
    phi: &FeatureMatrix,
    sampler: &SamplerConfig,
    seeds: &[u64],
    schedule: StepSchedule,
    theta0: &[f64],
    cfg: RunConfig,
) -> Vec<Result<Trajectory>> {
    parallel::map(seeds, |&seed| {
        let sampler = SamplerConfig { seed, ..sampler.clone() };
        run_q_learning(mdp, phi, &sampler, schedule, theta0, cfg)
    })
}

/// Expected (mean-field) linear Q-learning:
/// `θ ← θ + α_k (ΦᵀDR + γΦᵀDPΠ_{greedy(θ)}Φθ − ΦᵀDΦθ − ηθ)`.
///
/// Stops once the last `window` steps moved less than `tol` and the
/// residual is below `tol`.
pub fn run_deterministic_q(
    mdp: &Mdp,
    phi: &FeatureMatrix,
    d: &Distribution,
    schedule: StepSchedule,
    theta0: &[f64],
    cfg: RunConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    schedule.validate()?;
    check_theta0(phi, theta0)?;
    let proj = Projection::new(mdp, phi, d.clone())?;

    let mut rec = Recorder::new(cfg, None);
    let mut theta: Theta = theta0.to_vec();
    let mut field = proj.greedy_residual(&theta, cfg.eta);
    rec.classifier.push(&theta);
    rec.record(0, &theta, schedule.rate(0), vec_inf_norm(&field), phi);
    let mut k = 0;
    while k < cfg.max_iter {
        let alpha = schedule.rate(k);
        theta.iter_mut().zip(&field).for_each(|(t, f)| *t += alpha * f);
        k += 1;
        field = proj.greedy_residual(&theta, cfg.eta);
        rec.classifier.push(&theta);
        if rec.classifier.blown_up() {
            break;
        }
        let r = vec_inf_norm(&field);
        if k % cfg.stride == 0 {
            rec.record(k, &theta, schedule.rate(k), r, phi);
        }
        if rec.classifier.settled() && r < cfg.tol {
            break;
        }
    }
    let r = vec_inf_norm(&field);
    Ok(rec.finish(k, &theta, schedule.rate(k), r, phi))
}
