use num::{BigInt, One, Signed, Zero};

use super::SparseMat;

/// Rank by dense fraction-free (Bareiss) elimination over the integers,
/// after clearing denominators column by column. Used for small matrices
/// and as an independent oracle for the sparse elimination path.
pub fn rank_dense(m: &SparseMat) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); cols]; rows];
    for j in 0..cols {
        let mut lcm = BigInt::one();
        for (_, v) in m.col(j) {
            lcm = num::integer::lcm(lcm, v.denom().clone());
        }
        for (r, v) in m.col(j) {
            a[*r][j] = v.numer() * (&lcm / v.denom());
        }
    }
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let pivot_row = (row..rows).find(|&i| !a[i][col].is_zero());
        let Some(p) = pivot_row else { continue };
        a.swap(row, p);
        for i in (row + 1)..rows {
            for j in (col + 1)..cols {
                let t = &a[row][col] * &a[i][j] - &a[i][col] * &a[row][j];
                debug_assert!((&t % &prev).is_zero());
                a[i][j] = t / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[row][col].abs();
        rank += 1;
        row += 1;
    }
    rank
}
