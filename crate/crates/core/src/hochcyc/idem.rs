//! Signed shuffle operators and Eulerian idempotents on tensor powers.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num::{One, Zero};

use crate::algebras::FinAlgebra;
use crate::exactlin::{rat, Rat, SparseMat};

use super::bar::{decode, encode, perm_sign, shuffles};

/// The total signed shuffle operator sh_n = Σ_{p+q=n, p,q>=1} sh_{p,q}
/// on the n internal tensor slots (a d^n-dimensional space, d = alphabet).
fn shuffle_operator(d: usize, n: usize) -> SparseMat {
    let dim = d.pow(n as u32);
    let mut triplets = Vec::new();
    for p in 1..n {
        let q = n - p;
        for sigma in shuffles(p, q) {
            let s = rat(perm_sign(&sigma));
            for j in 0..dim {
                let t = decode(j, d, n);
                let mut placed = vec![0usize; n];
                for (k, &x) in t.iter().enumerate() {
                    placed[sigma[k]] = x;
                }
                triplets.push((encode(&placed, d), j, s.clone()));
            }
        }
    }
    SparseMat::from_triplets(dim, dim, triplets)
}

/// sh_n acting on the internal slots of C_n(A) = A^{⊗(n+1)}; returned on
/// the n-fold tensor power of A itself (apply [`kron_id`] for the full
/// chain group).
pub fn signed_shuffle_operator(a: &FinAlgebra, n: usize) -> SparseMat {
    shuffle_operator(a.dim(), n)
}

type Cache = Mutex<BTreeMap<(usize, usize), Arc<Vec<SparseMat>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// The Eulerian idempotents e^{(1)}, .., e^{(n)} on the n-fold tensor
/// power of a d-dimensional space (`d` = alphabet size), as Lagrange
/// interpolation of the signed shuffle operator at the eigenvalues
/// 2^i - 2. They are orthogonal idempotents summing to the identity.
/// Results are cached per (alphabet, n).
pub fn eulerian_idempotents(alphabet: usize, n: usize) -> Arc<Vec<SparseMat>> {
    if let Some(v) = cache().lock().unwrap().get(&(alphabet, n)) {
        return v.clone();
    }
    let v = Arc::new(compute_idempotents(alphabet, n));
    cache().lock().unwrap().insert((alphabet, n), v.clone());
    v
}

fn compute_idempotents(d: usize, n: usize) -> Vec<SparseMat> {
    if n == 0 {
        return Vec::new();
    }
    let dim = d.pow(n as u32);
    let sh = shuffle_operator(d, n);
    let eig: Vec<Rat> = (1..=n as u32).map(|i| rat(2i64.pow(i) - 2)).collect();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut m = SparseMat::identity(dim);
        let mut denom = Rat::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            // m <- m (sh - eig_j)
            m = m.matmul(&sh).add(&m.scale(&-&eig[j]));
            denom *= &eig[i] - &eig[j];
        }
        debug_assert!(!denom.is_zero());
        out.push(m.scale(&denom.recip()));
    }
    out
}

/// id_{Q^outer} ⊗ E, in the big-endian tensor encoding where the outer
/// factor is the most significant digit.
pub fn kron_id(outer: usize, e: &SparseMat) -> SparseMat {
    let (r, c) = (e.rows(), e.cols());
    let mut cols = Vec::with_capacity(outer * c);
    for s in 0..outer {
        for j in 0..c {
            cols.push(
                e.col(j)
                    .iter()
                    .map(|(i, v)| (s * r + i, v.clone()))
                    .collect(),
            );
        }
    }
    SparseMat::from_cols(outer * r, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idempotents_resolve_identity() {
        for n in 1..=3usize {
            let es = eulerian_idempotents(2, n);
            assert_eq!(es.len(), n);
            let dim = 2usize.pow(n as u32);
            let mut sum = SparseMat::zero(dim, dim);
            for e in es.iter() {
                assert_eq!(e.matmul(e), *e, "idempotent, n={n}");
                sum = sum.add(e);
            }
            assert_eq!(sum, SparseMat::identity(dim), "partition of unity, n={n}");
            for a in 0..n {
                for b in 0..n {
                    if a != b {
                        assert!(es[a].matmul(&es[b]).is_zero(), "orthogonal, n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn shuffle_operator_eigen_relation() {
        // sh satisfies Π_i (sh - (2^i - 2)) = 0 for n = 2:
        // sh (sh - 2) = 0
        let sh = shuffle_operator(2, 2);
        let shifted = sh.add(&SparseMat::identity(4).scale(&rat(-2)));
        assert!(sh.matmul(&shifted).is_zero());
    }

    #[test]
    fn e1_on_letters_n2() {
        // e^(1) on two slots sends x⊗y to (x⊗y - y⊗x)/2 + symmetric part
        // with eigenvalue structure: (sh-2)/(0-2) where sh(x⊗y) = x⊗y ... :
        // check the known matrix for d=2, n=2 directly on a basis vector.
        let es = eulerian_idempotents(2, 2);
        // column for (0,1): sh sends it to -(1,0); e1 = (sh-2I)/(-2)
        let col = es[0].col(encode(&[0, 1], 2));
        assert_eq!(
            col,
            &vec![
                (encode(&[0, 1], 2), crate::exactlin::ratio(1, 2)),
                (encode(&[1, 0], 2), crate::exactlin::ratio(1, 2)),
            ]
        );
    }

    #[test]
    fn kron_id_blocks() {
        let e = SparseMat::from_triplets(2, 2, [(0, 1, rat(5))]);
        let k = kron_id(2, &e);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.col(1), &vec![(0, rat(5))]);
        assert_eq!(k.col(3), &vec![(2, rat(5))]);
    }
}
