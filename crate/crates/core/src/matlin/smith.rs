//! Smith and Hermite normal forms over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | …`, nonnegative, zeros last.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// The diagonal entries `d_1, …, d_min(rows, cols)`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.invariant_factors().iter().filter(|x| !x.is_zero()).count()
    }
}

fn add_row_multiple(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    for j in 0..m.cols() {
        let v = m.get(dst, j) + f * m.get(src, j);
        m.set(dst, j, v);
    }
}

fn add_col_multiple(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    for i in 0..m.rows() {
        let v = m.get(i, dst) + f * m.get(i, src);
        m.set(i, dst, v);
    }
}

fn negate_row(m: &mut IntMatrix, r: usize) {
    for j in 0..m.cols() {
        let v = -m.get(r, j).clone();
        m.set(r, j, v);
    }
}

pub fn smith_form(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = d.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithDecomposition { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = -d.get(i, t).div_floor(d.get(t, t));
                if !q.is_zero() {
                    add_row_multiple(&mut d, i, t, &q);
                    add_row_multiple(&mut u, i, t, &q);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                let q = -d.get(t, j).div_floor(d.get(t, t));
                if !q.is_zero() {
                    add_col_multiple(&mut d, j, t, &q);
                    add_col_multiple(&mut v, j, t, &q);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold a non-divisible row into the pivot row
            let p = d.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    add_row_multiple(&mut d, t, i, &one);
                    add_row_multiple(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
    }
    SmithDecomposition { u, d, v }
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `a`:
/// echelon form with positive pivots and entries above each pivot reduced
/// into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_rows(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let (rows, cols) = (h.rows(), h.cols());
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !h.get(i, c).is_zero())
                .min_by(|&x, &y| h.get(x, c).abs().cmp(&h.get(y, c).abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                let q = -h.get(i, c).div_floor(h.get(r, c));
                if !q.is_zero() {
                    add_row_multiple(&mut h, i, r, &q);
                }
                done &= h.get(i, c).is_zero();
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            negate_row(&mut h, r);
        }
        for i in 0..r {
            let q = -h.get(i, c).div_floor(h.get(r, c));
            if !q.is_zero() {
                add_row_multiple(&mut h, i, r, &q);
            }
        }
        pivots.push(c);
        r += 1;
    }
    h.block(0, r, 0, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let s = smith_form(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert!(s.u.det_int().unwrap().abs().is_one());
        assert!(s.v.det_int().unwrap().abs().is_one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[0].is_zero() && w[1].is_zero() || w[1].is_multiple_of(&w[0]));
        }
        s
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_examples() {
        let s = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
        assert_eq!(s.invariant_factors(), ints(&[2, 4]));
        let s = check(&IntMatrix::from_i64(&[&[2, 1], &[1, 1]]));
        assert_eq!(s.invariant_factors(), ints(&[1, 1]));
        let s = check(&IntMatrix::from_i64(&[&[1, 1], &[1, 1]]));
        assert_eq!(s.invariant_factors(), ints(&[1, 0]));
        let s = check(&IntMatrix::from_i64(&[&[4, 0], &[0, 6]]));
        assert_eq!(s.invariant_factors(), ints(&[2, 12]));
        let s = check(&IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.invariant_factors(), ints(&[2, 6, 12]));
        check(&IntMatrix::from_i64(&[&[0, 3], &[0, 0], &[5, 0]]));
        check(&IntMatrix::zeros(2, 3));
    }

    #[test]
    fn hermite_examples() {
        let h = hermite_rows(&IntMatrix::from_i64(&[&[-2, -4], &[3, 6]]));
        assert_eq!(h, IntMatrix::from_i64(&[&[1, 2]]));
        // reduction above the second pivot: (1,5,0) - 5 (0,1,1)
        let h = hermite_rows(&IntMatrix::from_i64(&[&[0, 1, 1], &[1, 5, 0]]));
        assert_eq!(h, IntMatrix::from_i64(&[&[1, 0, -5], &[0, 1, 1]]));
    }
}
