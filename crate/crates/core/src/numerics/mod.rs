//! Dense linear algebra for the small matrices that appear in PBE analysis:
//! norms, pivoted solves, eigenvalues and stationary distributions.

mod eigen;
mod markov;
mod matrix;
mod solve;

pub use eigen::{eigenvalues, gershgorin_discs, Complex, EigenSpectrum, GershgorinDisc};
pub use markov::{is_primitive, stationary_distribution};
pub use matrix::{infinity_norm, vec_inf_norm, DenseMatrix};
pub use solve::{inverse, solve_linear, solve_linear_scaled, solve_matrix};

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of a probability row sum from 1.
    pub probability_sum: f64,
    /// Absolute slack when deciding argmax membership of action scores.
    pub argmax: f64,
    /// Smallest admissible row-scaled pivot in Gaussian elimination.
    pub pivot: f64,
    /// An eigenvalue counts as stable when its real part is below `-hurwitz`.
    pub hurwitz: f64,
    /// Imaginary parts below this are treated as zero when pairing conjugates.
    pub conjugate: f64,
    /// Iterates with a larger sup-norm are declared divergent.
    pub blowup: f64,
}

pub const TOL: Tolerances = Tolerances {
    probability_sum: 1e-12,
    argmax: 1e-9,
    pivot: 1e-12,
    hurwitz: 1e-10,
    conjugate: 1e-8,
    blowup: 1e12,
};
