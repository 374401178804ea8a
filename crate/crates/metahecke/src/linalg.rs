//! Small exact linear algebra over Q.

use num::{BigInt, BigRational, Zero};

pub fn to_q(v: &[i64]) -> Vec<BigRational> {
    v.iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect()
}

/// Row-reduces in place and returns the pivot columns.
fn row_reduce(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (pivot_row, row_i) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in row_i.iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of the span of the given vectors.
pub fn rank(vectors: &[Vec<BigRational>]) -> usize {
    let mut m = vectors.to_vec();
    row_reduce(&mut m).len()
}

/// Coefficients c with Σ c_i·basis_i = target, for linearly independent
/// `basis`; `None` when target is outside the span.
pub fn solve_in_basis(
    basis: &[Vec<BigRational>],
    target: &[BigRational],
) -> Option<Vec<BigRational>> {
    let n = target.len();
    let k = basis.len();
    if k == 0 {
        return target.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    // Rows are coordinates; columns are basis vectors plus the target.
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut out = vec![BigRational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        out[c] = m[r][k].clone();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, qi};

    #[test]
    fn rank_and_solve() {
        let b = vec![to_q(&[1, -1]), to_q(&[0, 2])];
        assert_eq!(rank(&b), 2);
        assert_eq!(
            solve_in_basis(&b, &to_q(&[1, 0])),
            Some(vec![qi(1), q(1, 2)])
        );
        let line = vec![to_q(&[1, 1])];
        assert_eq!(solve_in_basis(&line, &to_q(&[1, 0])), None);
        assert_eq!(rank(&[to_q(&[1, 1]), to_q(&[2, 2])]), 1);
    }
}
