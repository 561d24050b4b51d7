use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Empirical one-sided Lipschitz constant of `f` in the sup-norm.
///
/// Draws `num_pairs` seeded pairs uniformly from `[−radius, radius]^dim` and
/// returns the largest `[f(x)−f(y)]_i [x−y]_i / ‖x−y‖∞²` over coordinates
/// `i` attaining `‖x−y‖∞`.
pub fn one_sided_lipschitz_estimate<F>(f: F, dim: usize, num_pairs: usize, radius: f64, seed: u64) -> f64
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..num_pairs {
        let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect();
        let y: Vec<f64> = (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect();
        let gap = x.iter().zip(&y).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        if gap == 0.0 {
            continue;
        }
        let (fx, fy) = (f(&x), f(&y));
        for i in 0..dim {
            let d = x[i] - y[i];
            if d.abs() == gap {
                best = best.max((fx[i] - fy[i]) * d / (gap * gap));
            }
        }
    }
    best
}
