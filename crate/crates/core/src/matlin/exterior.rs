//! Exterior powers with the lexicographic basis of k-subsets.

use crate::error::{Error, Result};
use crate::exactnum::FieldScalar;

use super::matrix::Matrix;

/// All k-subsets of `0..d` in lexicographic order.
pub fn k_subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            if d - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Position of the pair `{i, j}` (`i < j`) in the lexicographic basis of
/// `Λ²` of a rank-`d` module.
pub fn pair_index(d: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < d);
    i * (2 * d - i - 1) / 2 + (j - i - 1)
}

/// The induced map on `Λ^k`: entry `(I, J)` is the minor on rows `I` and
/// columns `J`.
pub fn exterior_power<T: FieldScalar>(a: &Matrix<T>, k: usize) -> Result<Matrix<T>> {
    if !a.is_square() {
        return Err(Error::domain("exterior power of a non-square matrix"));
    }
    let d = a.rows();
    if k == 0 || k > d {
        return Err(Error::domain(format!("exterior power degree {k} outside 1..={d}")));
    }
    let subsets = k_subsets(d, k);
    let n = subsets.len();
    let mut out = Matrix::zeros(n, n);
    for (r, rows) in subsets.iter().enumerate() {
        for (c, cols) in subsets.iter().enumerate() {
            out.set(r, c, a.select(rows, cols).det()?);
        }
    }
    Ok(out)
}
