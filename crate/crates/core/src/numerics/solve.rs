use super::{DenseMatrix, TOL};
use crate::{Error, Result};

/// LU factorization with scaled partial pivoting, stored in place.
struct Lu {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

fn factor(a: &DenseMatrix, row_scale: Option<&[f64]>) -> Result<Lu> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "solve needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut scale: Vec<f64> = match row_scale {
        Some(s) if s.len() == n => s.to_vec(),
        Some(s) => {
            return Err(Error::DimensionMismatch(format!("{} row scales for {n} equations", s.len())));
        }
        None => (0..n)
            .map(|i| lu.row(i).iter().fold(0.0_f64, |m, x| m.max(x.abs())))
            .collect(),
    };

    for k in 0..n {
        let mut best = k;
        let mut best_val = -1.0;
        for i in k..n {
            let v = if scale[i] > 0.0 { lu[(i, k)].abs() / scale[i] } else { 0.0 };
            if v > best_val {
                best_val = v;
                best = i;
            }
        }
        if best_val < TOL.pivot {
            return Err(Error::SingularSystem { column: k, pivot: best_val.max(0.0) });
        }
        if best != k {
            for j in 0..n {
                let t = lu[(k, j)];
                lu[(k, j)] = lu[(best, j)];
                lu[(best, j)] = t;
            }
            perm.swap(k, best);
            scale.swap(k, best);
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            if f != 0.0 {
                for j in k + 1..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= f * v;
                }
            }
        }
    }
    Ok(Lu { lu, perm })
}

impl Lu {
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let lower: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= lower;
        }
        for i in (0..n).rev() {
            let upper: f64 = (i + 1..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - upper) / self.lu[(i, i)];
        }
        x
    }
}

/// Solves `a x = b` by Gaussian elimination with row-scaled partial pivoting.
pub fn solve_linear(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows()
        )));
    }
    Ok(factor(a, None)?.solve(b))
}

/// Like [`solve_linear`], but pivots are measured against `row_scale`
/// instead of the largest entry of each row. Use it when `a` is a
/// difference of larger terms, so cancellation to zero is detected.
pub fn solve_linear_scaled(a: &DenseMatrix, b: &[f64], row_scale: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows()
        )));
    }
    Ok(factor(a, Some(row_scale))?.solve(b))
}

/// Solves `a X = b` column by column.
pub fn solve_matrix(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if b.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side with {} rows for {} equations",
            b.rows(),
            a.rows()
        )));
    }
    let lu = factor(a, None)?;
    let mut out = DenseMatrix::zeros(a.cols(), b.cols());
    for j in 0..b.cols() {
        let x = lu.solve(&b.column(j));
        for (i, v) in x.into_iter().enumerate() {
            out[(i, j)] = v;
        }
    }
    Ok(out)
}

pub fn inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    solve_matrix(a, &DenseMatrix::identity(a.rows()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::vec_inf_norm;

    #[test]
    fn identity_and_diagonal() {
        let b = [3.0, -1.0, 2.5];
        assert_eq!(solve_linear(&DenseMatrix::identity(3), &b).unwrap(), b.to_vec());
        let d = DenseMatrix::from_rows(&[[2.0, 0.0], [0.0, 4.0]]).unwrap();
        assert_eq!(solve_linear(&d, &[2.0, 8.0]).unwrap(), vec![1.0, 2.0]);
    }

    #[test]
    fn rank_deficient_is_singular() {
        let a = DenseMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert!(matches!(solve_linear(&a, &[1.0, 2.0]), Err(Error::SingularSystem { .. })));
        assert!(matches!(solve_linear(&a, &[0.0, 0.0]), Err(Error::SingularSystem { .. })));
    }

    #[test]
    fn needs_pivoting() {
        let a = DenseMatrix::from_rows(&[[0.0, 1.0, 2.0], [1.0, 0.0, 3.0], [4.0, -3.0, 8.0]]).unwrap();
        let b = [1.0, 2.0, 3.0];
        let x = solve_linear(&a, &b).unwrap();
        let r: Vec<f64> = a.mul_vec(&x).iter().zip(&b).map(|(p, q)| p - q).collect();
        assert!(vec_inf_norm(&r) < 1e-12);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = DenseMatrix::from_rows(&[[4.0, 7.0], [2.0, 6.0]]).unwrap();
        let inv = inverse(&a).unwrap();
        let prod = a.matmul(&inv);
        let err = prod.sub(&DenseMatrix::identity(2));
        assert!(crate::numerics::infinity_norm(&err) < 1e-14);
    }
}
