//! Exact linear algebra over Q: sparse rational matrices, echelon bases,
//! kernels, and presented subquotient spaces. Every homology group computed
//! by the crate lives in a [`Subquotient`].

mod bareiss;
mod echelon;
mod sparse;
mod subquotient;

pub use echelon::{Echelon, ExprEchelon};
pub(crate) use sparse::add_scaled as sparse_add_scaled;
pub use sparse::{SparseMat, SparseVec};
pub use subquotient::{induced_map, Subquotient};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator (maintained by `num`).
pub type Rat = num::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// Renders a rational as `p` or `p/q`.
pub fn rat_str(x: &Rat) -> String {
    if x.denom() == &num::BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Column rank of `m` over Q. Dispatches to a dense fraction-free
/// (Bareiss) elimination for small matrices and to sparse rational
/// echelon elimination otherwise; the two agree (see property tests).
pub fn rank(m: &SparseMat) -> usize {
    if m.rows() < 64 && m.cols() < 64 {
        bareiss::rank_dense(m)
    } else {
        Echelon::of_matrix(m).rank()
    }
}

/// Canonical basis of ker(m): the reduced null-space basis in free-variable
/// form, one column per non-pivot column of `m`, ordered by that column index.
pub fn kernel_basis(m: &SparseMat) -> SparseMat {
    Echelon::kernel(m)
}

/// Solves `a * x = b` columnwise; errors with the offending column of `b`
/// if it is outside the column span of `a`.
pub fn solve(a: &SparseMat, b: &SparseMat) -> Result<SparseMat, usize> {
    Echelon::solve(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> SparseMat {
        SparseMat::from_triplets(
            rows,
            cols,
            entries.iter().map(|&(r, c, v)| (r, c, rat(v))),
        )
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(rank(&SparseMat::identity(3)), 3);
        assert_eq!(rank(&SparseMat::zero(2, 2)), 0);
    }

    #[test]
    fn rank_dependent_rows() {
        // [[1,2],[2,4]] has rank 1 (hand Gaussian elimination).
        let m = mat(2, 2, &[(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]);
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn kernel_cases() {
        assert_eq!(kernel_basis(&SparseMat::identity(4)).cols(), 0);
        let m = mat(1, 2, &[(0, 0, 1), (0, 1, 1)]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        // proportional to (1, -1)
        let v = k.col(0);
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].1, -v[1].1.clone());
        let z = kernel_basis(&SparseMat::zero(2, 2));
        assert_eq!(z.cols(), 2);
        assert_eq!(rank(&z), 2);
    }

    #[test]
    fn rank_nullity() {
        let m = mat(3, 4, &[(0, 0, 1), (0, 1, 2), (1, 2, 3), (2, 2, 1), (0, 3, 2)]);
        assert_eq!(rank(&m) + kernel_basis(&m).cols(), m.cols());
    }
}
