//! Small dense solves for the least-squares fits.

use crate::scalar::Scalar;

/// Solves the symmetric positive semi-definite system `a x = b` in place
/// by Gaussian elimination with partial pivoting.
///
/// `a` is row-major `n x n`. Returns `None` when a pivot falls below
/// `sqrt(eps)` times the largest diagonal entry, i.e. the system is
/// numerically rank-deficient.
pub(crate) fn solve_symmetric<T: Scalar>(a: &mut [T], b: &mut [T], n: usize) -> Option<Vec<T>> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let scale = (0..n).map(|i| a[i * n + i].abs()).fold(T::zero(), T::max);
    if scale.is_nan() || scale <= T::zero() || !scale.is_finite() {
        return None;
    }
    let tol = T::epsilon().sqrt() * scale;

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| {
                a[r * n + col]
                    .abs()
                    .partial_cmp(&a[s * n + col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        let pivot = a[pivot_row * n + col].abs();
        if pivot.is_nan() || pivot <= tol {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / pivot;
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                a[row * n + k] = a[row * n + k] - factor * a[col * n + k];
            }
            b[row] = b[row] - factor * b[col];
        }
    }

    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc = acc - a[row * n + k] * x[k];
        }
        x[row] = acc / a[row * n + row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let mut a: Vec<f64> = vec![4.0, 2.0, 2.0, 3.0];
        let mut b = vec![2.0, 1.0];
        let x = solve_symmetric(&mut a, &mut b, 2).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-15);
        assert!(x[1].abs() < 1e-15);
    }

    #[test]
    fn detects_singular() {
        let mut a: Vec<f64> = vec![1.0, 2.0, 2.0, 4.0];
        let mut b = vec![1.0, 2.0];
        assert!(solve_symmetric(&mut a, &mut b, 2).is_none());
        let mut z = vec![0.0f32; 4];
        let mut bz = vec![0.0f32; 2];
        assert!(solve_symmetric(&mut z, &mut bz, 2).is_none());
    }
}
