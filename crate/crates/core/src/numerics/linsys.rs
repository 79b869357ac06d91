//! Dense LU factorization with partial pivoting, plus a 1-norm condition
//! estimate (Hager's method) used to detect discretizations of resonant or
//! near-resonant problems.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Row-major dense matrix, factored in place as `P A = L U`.
pub(crate) struct Lu {
    a: Vec<f64>,
    piv: Vec<usize>,
    n: usize,
}

/// Exactly singular to working precision (a zero pivot column).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Singular;

pub(crate) fn lu_factor(mut a: Vec<f64>, n: usize) -> Result<Lu, Singular> {
    debug_assert_eq!(a.len(), n * n);
    let mut piv = vec![0usize; n];
    for col in 0..n {
        // partial pivoting: largest magnitude in the remaining column
        let mut best = col;
        let mut best_val = math::abs(a[col * n + col]);
        for row in col + 1..n {
            let v = math::abs(a[row * n + col]);
            if v > best_val {
                best = row;
                best_val = v;
            }
        }
        if best_val == 0.0 {
            return Err(Singular);
        }
        piv[col] = best;
        if best != col {
            for j in 0..n {
                a.swap(col * n + j, best * n + j);
            }
        }
        let inv_pivot = 1.0 / a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] * inv_pivot;
            a[row * n + col] = factor;
            if factor != 0.0 {
                for j in col + 1..n {
                    a[row * n + j] -= factor * a[col * n + j];
                }
            }
        }
    }
    Ok(Lu { a, piv, n })
}

impl Lu {
    /// Solves `A x = b` in place.
    pub(crate) fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        for col in 0..n {
            b.swap(col, self.piv[col]);
        }
        // forward: L y = P b (unit diagonal)
        for row in 1..n {
            let mut acc = b[row];
            for j in 0..row {
                acc -= self.a[row * n + j] * b[j];
            }
            b[row] = acc;
        }
        // backward: U x = y
        for row in (0..n).rev() {
            let mut acc = b[row];
            for j in row + 1..n {
                acc -= self.a[row * n + j] * b[j];
            }
            b[row] = acc / self.a[row * n + row];
        }
    }

    /// Solves `A^T x = b` in place (needed by the condition estimator).
    pub(crate) fn solve_transpose(&self, b: &mut [f64]) {
        let n = self.n;
        debug_assert_eq!(b.len(), n);
        // A^T = U^T L^T P, so: U^T y = b (forward), L^T z = y (backward),
        // then undo the row permutation.
        for row in 0..n {
            let mut acc = b[row];
            for j in 0..row {
                acc -= self.a[j * n + row] * b[j];
            }
            b[row] = acc / self.a[row * n + row];
        }
        for row in (0..n).rev() {
            let mut acc = b[row];
            for j in row + 1..n {
                acc -= self.a[j * n + row] * b[j];
            }
            b[row] = acc;
        }
        for col in (0..n).rev() {
            b.swap(col, self.piv[col]);
        }
    }

    /// Hager's estimate of `||A^{-1}||_1` (a convergent lower bound; in
    /// practice within a small factor of the truth).
    pub(crate) fn inverse_norm1_estimate(&self) -> f64 {
        let n = self.n;
        let mut x = vec![1.0 / n as f64; n];
        let mut est = 0.0;
        for _ in 0..5 {
            let mut y = x.clone();
            self.solve(&mut y);
            let y_norm1: f64 = y.iter().map(|v| math::abs(*v)).sum();
            est = f64::max(est, y_norm1);
            let mut xi: Vec<f64> = y
                .iter()
                .map(|v| if *v >= 0.0 { 1.0 } else { -1.0 })
                .collect();
            self.solve_transpose(&mut xi);
            let (mut j_best, mut z_best) = (0, 0.0);
            for (j, z) in xi.iter().enumerate() {
                if math::abs(*z) > z_best {
                    z_best = math::abs(*z);
                    j_best = j;
                }
            }
            let zx: f64 = xi.iter().zip(&x).map(|(z, xv)| z * xv).sum();
            if z_best <= math::abs(zx) {
                break;
            }
            x.iter_mut().for_each(|v| *v = 0.0);
            x[j_best] = 1.0;
        }
        est
    }
}

/// 1-norm (maximum absolute column sum) of a dense row-major matrix.
pub(crate) fn norm1(a: &[f64], n: usize) -> f64 {
    let mut best: f64 = 0.0;
    for col in 0..n {
        let mut sum = 0.0;
        for row in 0..n {
            sum += math::abs(a[row * n + col]);
        }
        best = f64::max(best, sum);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_small_system() {
        // A = [[2, 1], [1, 3]], b = [5, 10] -> x = [1, 3]
        let lu = lu_factor(vec![2.0, 1.0, 1.0, 3.0], 2).unwrap();
        let mut b = vec![5.0, 10.0];
        lu.solve(&mut b);
        assert!((b[0] - 1.0).abs() < 1e-14 && (b[1] - 3.0).abs() < 1e-14);
        let mut bt = vec![5.0, 10.0];
        lu.solve_transpose(&mut bt);
        // A^T x = b -> x = [1, 3] as well (A symmetric here)
        assert!((bt[0] - 1.0).abs() < 1e-14 && (bt[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn transpose_solve_matches_on_an_asymmetric_system() {
        let a = vec![4.0, -2.0, 1.0, 3.0, 6.0, -4.0, 2.0, 1.0, 8.0];
        let lu = lu_factor(a.clone(), 3).unwrap();
        let x_true = [1.0, -2.0, 0.5];
        // b = A^T x_true
        let mut b = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i] += a[j * 3 + i] * x_true[j];
            }
        }
        lu.solve_transpose(&mut b);
        for i in 0..3 {
            assert!((b[i] - x_true[i]).abs() < 1e-13, "{b:?}");
        }
    }

    #[test]
    fn condition_estimate_tracks_the_truth_for_a_diagonal_matrix() {
        // diag(1, 1e-6): ||A||_1 = 1, ||A^{-1}||_1 = 1e6
        let lu = lu_factor(vec![1.0, 0.0, 0.0, 1e-6], 2).unwrap();
        let est = lu.inverse_norm1_estimate();
        assert!(est >= 1e6 * 0.99 && est <= 1e6 * 1.01, "est = {est}");
    }

    #[test]
    fn singular_matrices_are_rejected() {
        assert!(lu_factor(vec![1.0, 2.0, 2.0, 4.0], 2).is_err());
    }
}
