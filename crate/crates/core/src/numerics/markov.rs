use super::{solve_linear, DenseMatrix, TOL};
use crate::{Error, Result};

/// True when some power `chain^k` with `k ≤ (n−1)² + 1` is entrywise
/// positive (Wielandt's bound), i.e. the chain is irreducible and aperiodic.
pub fn is_primitive(chain: &DenseMatrix) -> bool {
    let n = chain.rows();
    if n == 0 || !chain.is_square() {
        return false;
    }
    let pattern: Vec<bool> = chain.as_slice().iter().map(|&x| x > 0.0).collect();
    let bound = (n - 1) * (n - 1) + 1;
    let mut power = pattern.clone();
    for _ in 1..bound {
        if power.iter().all(|&b| b) {
            return true;
        }
        power = bool_matmul(&power, &pattern, n);
    }
    power.iter().all(|&b| b)
}

fn bool_matmul(a: &[bool], b: &[bool], n: usize) -> Vec<bool> {
    let mut out = vec![false; n * n];
    for i in 0..n {
        for k in 0..n {
            if a[i * n + k] {
                for j in 0..n {
                    out[i * n + j] |= b[k * n + j];
                }
            }
        }
    }
    out
}

/// Unique invariant probability vector of a primitive row-stochastic chain.
///
/// Solves `(I − Pᵀ) μ = 0` with the last equation replaced by `Σ μ = 1`.
pub fn stationary_distribution(chain: &DenseMatrix) -> Result<Vec<f64>> {
    if !chain.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "chain must be square, got {}x{}",
            chain.rows(),
            chain.cols()
        )));
    }
    let n = chain.rows();
    for i in 0..n {
        for (j, &v) in chain.row(i).iter().enumerate() {
            if v < 0.0 {
                return Err(Error::NegativeProbability { row: i, col: j, value: v });
            }
        }
        let sum: f64 = chain.row(i).iter().sum();
        if (sum - 1.0).abs() > TOL.probability_sum * n.max(1) as f64 {
            return Err(Error::NonStochasticRow { row: i, sum });
        }
    }
    if !is_primitive(chain) {
        return Err(Error::NotPrimitive);
    }
    let mut a = DenseMatrix::identity(n).sub(&chain.transpose());
    a.row_mut(n - 1).iter_mut().for_each(|x| *x = 1.0);
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    let mut mu = solve_linear(&a, &b)?;
    // Clear round-off negatives and renormalize.
    mu.iter_mut().for_each(|x| *x = x.max(0.0));
    let total: f64 = mu.iter().sum();
    mu.iter_mut().for_each(|x| *x /= total);
    Ok(mu)
}
