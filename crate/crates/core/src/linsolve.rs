//! Dense Gaussian elimination with partial pivoting for small systems.

use crate::error::{Error, Result};

/// Pivots smaller than this (relative to the largest entry of the matrix) are
/// treated as zero.
const SINGULAR_TOLERANCE: f64 = 1e-13;

/// Solves `a * x = b` in place for an `N x N` system, returning `x`.
pub fn solve<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Result<[f64; N]> {
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::SingularSystem { column: 0, pivot: 0.0 });
    }

    for col in 0..N {
        let pivot_row = (col..N)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        let pivot = a[pivot_row][col];
        if pivot.abs() <= SINGULAR_TOLERANCE * scale {
            return Err(Error::SingularSystem { column: col, pivot });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);

        for row in col + 1..N {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            let pivot_row = a[col];
            for (v, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *v -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }

    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_system_needing_a_row_swap() {
        let a = [[0.0, 2.0, 1.0], [1.0, 1.0, 0.0], [3.0, 0.0, 1.0]];
        let x_true = [1.0, -2.0, 0.5];
        let b = core::array::from_fn(|i| (0..3).map(|k| a[i][k] * x_true[k]).sum());
        let x = solve(a, b).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_is_trivial() {
        let a = [[1.0, 0.0], [0.0, 1.0]];
        assert_eq!(solve(a, [3.0, -4.0]).unwrap(), [3.0, -4.0]);
    }

    #[test]
    fn singular_detected() {
        let a = [[1.0, 2.0], [2.0, 4.0]];
        assert!(matches!(solve(a, [1.0, 2.0]), Err(Error::SingularSystem { .. })));
        assert!(solve([[0.0; 2]; 2], [0.0; 2]).is_err());
    }
}
