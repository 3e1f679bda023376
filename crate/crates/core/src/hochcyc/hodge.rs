//! Hodge (weight) decompositions of Hochschild and relative cyclic /
//! negative cyclic homology via Eulerian idempotents, and the resulting
//! Adams and lambda operations.

use num::BigInt;

use crate::algebras::{FinAlgebra, IdealSpan};
use crate::complexes::{homology, ConnesTotal};
use crate::exactlin::induced_map;
use crate::error::{Error, Result};
use crate::exactlin::{rank, rat, solve, Rat, SparseMat};

use super::bar::{bar_mixed_with_budget, DEFAULT_BUDGET};
use super::cyclic::{relative_total_with_budget, RelativeTotal};
use super::idem::{eulerian_idempotents, kron_id};

/// The homology theories carrying a weight decomposition here.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Theory {
    HH,
    HCRel,
    HNRel,
    /// recorded for the convention table only; not computed by this crate
    K,
}

impl Theory {
    pub fn name(&self) -> &'static str {
        match self {
            Theory::HH => "HH",
            Theory::HCRel => "HC_rel",
            Theory::HNRel => "HN_rel",
            Theory::K => "K",
        }
    }
}

/// Fixed operation conventions, versioned so reports can cite them.
pub struct ConventionTable {
    pub version: &'static str,
    pub notes: &'static [&'static str],
}

impl ConventionTable {
    /// The Adams operation psi^k acts on the weight-i piece by k^e with
    /// this exponent e.
    pub fn psi_exponent(&self, theory: Theory, weight: i64) -> i64 {
        match theory {
            Theory::HH | Theory::K => weight,
            Theory::HCRel | Theory::HNRel => weight + 1,
        }
    }
}

pub const CONVENTIONS: ConventionTable = ConventionTable {
    version: "1",
    notes: &[
        "psi^k acts by k^i on the weight-i piece of HH and of K",
        "psi^k acts by k^{i+1} on the weight-i piece of HC_rel and HN_rel",
        "lambda^k = (-1)^{k-1} psi^k / k",
        "weights shift by one under HN_rel(n) = HC_rel(n-1)",
    ],
};

/// A weight decomposition of a single homology group: orthogonal
/// idempotent projectors on the canonical homology basis, one per weight,
/// summing to the identity (validated at construction).
pub struct HodgeDecomp {
    pub theory: Theory,
    pub degree: i64,
    pub dim: usize,
    /// (weight, projector matrix), weights strictly increasing
    pub pieces: Vec<(i64, SparseMat)>,
}

impl HodgeDecomp {
    pub fn new(
        theory: Theory,
        degree: i64,
        dim: usize,
        pieces: Vec<(i64, SparseMat)>,
    ) -> Result<Self> {
        let mut sum = SparseMat::zero(dim, dim);
        for (w, p) in &pieces {
            if p.rows() != dim || p.cols() != dim {
                return Err(Error::Invariant(format!(
                    "weight {w} projector has shape {}x{}, expected {dim}x{dim}",
                    p.rows(),
                    p.cols()
                )));
            }
            if &p.matmul(p) != p {
                return Err(Error::Invariant(format!(
                    "weight {w} projector is not idempotent"
                )));
            }
            sum = sum.add(p);
        }
        for (wa, pa) in &pieces {
            for (wb, pb) in &pieces {
                if wa != wb && !pa.matmul(pb).is_zero() {
                    return Err(Error::Invariant(format!(
                        "weight {wa} and {wb} projectors are not orthogonal"
                    )));
                }
            }
        }
        if sum != SparseMat::identity(dim) {
            return Err(Error::Invariant(
                "weight projectors do not sum to the identity".into(),
            ));
        }
        Ok(HodgeDecomp { theory, degree, dim, pieces })
    }

    pub fn projector(&self, weight: i64) -> Option<&SparseMat> {
        self.pieces.iter().find(|(w, _)| *w == weight).map(|(_, p)| p)
    }

    /// (weight, rank of its projector) for every stored weight.
    pub fn weight_dims(&self) -> Vec<(i64, usize)> {
        self.pieces.iter().map(|(w, p)| (*w, rank(p))).collect()
    }
}

/// Weight decomposition of HH_n(A) from the Eulerian idempotents acting
/// on the internal slots of the unnormalized complex.
pub fn hodge_hh(a: &FinAlgebra, n: i64) -> Result<HodgeDecomp> {
    hodge_hh_with_budget(a, n, DEFAULT_BUDGET)
}

pub fn hodge_hh_with_budget(a: &FinAlgebra, n: i64, budget: u128) -> Result<HodgeDecomp> {
    assert!(n >= 0);
    let bar = bar_mixed_with_budget(a, n + 1, budget)?;
    let h = homology(bar.complex(), n);
    let mut pieces = Vec::new();
    if n == 0 {
        pieces.push((0, SparseMat::identity(h.dim())));
    } else {
        let es = eulerian_idempotents(a.dim(), n as usize);
        for i in 1..=n {
            let p = kron_id(a.dim(), &es[i as usize - 1]);
            pieces.push((i, induced_map(&p, &h, &h)?));
        }
    }
    HodgeDecomp::new(Theory::HH, n, h.dim(), pieces)
}

/// The weight-i projector on Tot_k of the normalized (b, B) totalization:
/// on the component in column j with inner degree q it is e^{(i-j)} on the
/// internal slots (identity for q = 0, i = j; zero outside 0 <= i-j <= q).
fn weight_projector_on_total(total: &ConnesTotal, d: usize, k: i64, i: i64) -> SparseMat {
    let dim = total.complex.dim(k);
    let mut triplets = Vec::new();
    let empty = Vec::new();
    for &(j, q, off) in total.layout.get(&k).unwrap_or(&empty) {
        let w = i - j;
        let blk = if q == 0 {
            if w == 0 {
                Some(SparseMat::identity(d))
            } else {
                None
            }
        } else if w >= 1 && w <= q {
            let es = eulerian_idempotents(d - 1, q as usize);
            Some(kron_id(d, &es[w as usize - 1]))
        } else {
            None
        };
        if let Some(blk) = blk {
            for c in 0..blk.cols() {
                for (r, v) in blk.col(c) {
                    triplets.push((off + r, off + c, v.clone()));
                }
            }
        }
    }
    SparseMat::from_triplets(dim, dim, triplets)
}

/// Weight decomposition of HC_n(A, I) (nilpotent I): the total-complex
/// weight projectors restrict to the relative subcomplex and descend to
/// homology.
pub fn hodge_hc_rel(a: &FinAlgebra, ideal: &IdealSpan, n: i64) -> Result<HodgeDecomp> {
    hodge_hc_rel_with_budget(a, ideal, n, DEFAULT_BUDGET)
}

pub fn hodge_hc_rel_with_budget(
    a: &FinAlgebra,
    ideal: &IdealSpan,
    n: i64,
    budget: u128,
) -> Result<HodgeDecomp> {
    let rel = relative_total_with_budget(a, ideal, n, budget)?;
    hodge_on_relative(a, &rel, n, Theory::HCRel, 0)
}

fn hodge_on_relative(
    a: &FinAlgebra,
    rel: &RelativeTotal,
    n: i64,
    theory: Theory,
    weight_shift: i64,
) -> Result<HodgeDecomp> {
    let h = homology(&rel.kernel, n);
    let kmat = rel.inclusion.map(n);
    let mut pieces = Vec::new();
    for i in 0..=n {
        let p_tot = weight_projector_on_total(&rel.src_total, a.dim(), n, i);
        let pk = solve(&kmat, &p_tot.matmul(&kmat)).map_err(|col| {
            Error::Invariant(format!(
                "weight {i} projector does not preserve the relative subcomplex \
                 (column {col})"
            ))
        })?;
        pieces.push((i + weight_shift, induced_map(&pk, &h, &h)?));
    }
    HodgeDecomp::new(theory, n, h.dim(), pieces)
}

/// Weight decomposition of HN_n(A, I): HC_{n-1}(A, I) with every weight
/// raised by one.
pub fn hodge_hn_rel(a: &FinAlgebra, ideal: &IdealSpan, n: i64) -> Result<HodgeDecomp> {
    hodge_hn_rel_with_budget(a, ideal, n, DEFAULT_BUDGET)
}

pub fn hodge_hn_rel_with_budget(
    a: &FinAlgebra,
    ideal: &IdealSpan,
    n: i64,
    budget: u128,
) -> Result<HodgeDecomp> {
    if n < 1 {
        return HodgeDecomp::new(Theory::HNRel, n, 0, Vec::new());
    }
    let rel = relative_total_with_budget(a, ideal, n - 1, budget)?;
    hodge_on_relative(a, &rel, n - 1, Theory::HNRel, 1).map(|mut d| {
        d.degree = n;
        d
    })
}

fn int_pow(k: i64, e: i64) -> Rat {
    assert!(e >= 0);
    Rat::from_integer(BigInt::from(k).pow(e as u32))
}

/// The Adams operation psi^k on the decomposed group, in the canonical
/// homology basis.
pub fn adams(d: &HodgeDecomp, k: i64) -> SparseMat {
    assert!(k >= 1);
    let mut out = SparseMat::zero(d.dim, d.dim);
    for (w, p) in &d.pieces {
        let e = CONVENTIONS.psi_exponent(d.theory, *w);
        out = out.add(&p.scale(&int_pow(k, e)));
    }
    out
}

/// The lambda operation lambda^k = (-1)^{k-1} psi^k / k.
pub fn lambda_op(d: &HodgeDecomp, k: i64) -> SparseMat {
    assert!(k >= 1);
    let sign = if k % 2 == 1 { rat(1) } else { rat(-1) };
    let mut out = SparseMat::zero(d.dim, d.dim);
    for (w, p) in &d.pieces {
        let e = CONVENTIONS.psi_exponent(d.theory, *w);
        let c = &sign * int_pow(k, e) / rat(k);
        out = out.add(&p.scale(&c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::SparseVec;
    use crate::hochcyc::{hc_rel, hkr, hn_rel};
    use num::{One, Zero};

    fn lambda_alg(m: usize) -> FinAlgebra {
        let mut f = vec![Rat::zero(); m + 2];
        f[m + 1] = Rat::one();
        FinAlgebra::univariate_quotient("x", &f).unwrap()
    }

    #[test]
    fn hodge_hh_validates_and_fills() {
        let a = lambda_alg(2);
        for n in 0..=3i64 {
            let d = hodge_hh(&a, n).unwrap();
            let total: usize = d.weight_dims().iter().map(|(_, r)| r).sum();
            assert_eq!(total, d.dim, "n = {n}");
        }
    }

    #[test]
    fn top_weight_contains_forms() {
        // antisymmetrized 2-forms land in the weight-2 part of HH_2
        let a = FinAlgebra::monomial_quotient(
            &["x".into(), "y".into()],
            &[vec![2, 0], vec![0, 2]],
        )
        .unwrap();
        let n = 2i64;
        let bar = bar_mixed_with_budget(&a, n + 1, DEFAULT_BUDGET).unwrap();
        let h = homology(bar.complex(), n);
        let classes = h.coords_mat(&hkr(&a, 2).unwrap()).unwrap();
        let d = hodge_hh(&a, n).unwrap();
        let p2 = d.projector(2).unwrap();
        let p1 = d.projector(1).unwrap();
        assert_eq!(p2.matmul(&classes), classes);
        assert!(p1.matmul(&classes).is_zero());
    }

    #[test]
    fn adams_composes_multiplicatively() {
        let a = lambda_alg(2);
        let d = hodge_hh(&a, 2).unwrap();
        let p2 = adams(&d, 2);
        let p3 = adams(&d, 3);
        assert_eq!(p2.matmul(&p3), adams(&d, 6));
        assert_eq!(adams(&d, 1), SparseMat::identity(d.dim));
    }

    #[test]
    fn lambda_against_adams() {
        let a = lambda_alg(1);
        let d = hodge_hh(&a, 1).unwrap();
        // lambda^2 = -psi^2/2
        assert_eq!(lambda_op(&d, 2), adams(&d, 2).scale(&crate::exactlin::ratio(-1, 2)));
    }

    #[test]
    fn hodge_hc_rel_fills_group() {
        for m in [1usize, 2] {
            let a = lambda_alg(m);
            let x: SparseVec = vec![(1, Rat::one())];
            let ideal = IdealSpan::generated(a.clone(), &[x]).unwrap();
            for n in 0..=2i64 {
                let d = hodge_hc_rel(&a, &ideal, n).unwrap();
                let total: usize = d.weight_dims().iter().map(|(_, r)| r).sum();
                assert_eq!(total, d.dim, "m = {m}, n = {n}");
                assert_eq!(d.dim, hc_rel(&a, &ideal, n).unwrap().dim());
            }
        }
    }

    #[test]
    fn hodge_hn_rel_shifts_weights() {
        let a = lambda_alg(1);
        let x: SparseVec = vec![(1, Rat::one())];
        let ideal = IdealSpan::generated(a.clone(), &[x]).unwrap();
        let dn = hodge_hn_rel(&a, &ideal, 2).unwrap();
        assert_eq!(dn.dim, hn_rel(&a, &ideal, 2).unwrap().dim());
        let dc = hodge_hc_rel(&a, &ideal, 1).unwrap();
        let wn: Vec<(i64, usize)> =
            dn.weight_dims().into_iter().filter(|(_, r)| *r > 0).collect();
        let wc: Vec<(i64, usize)> = dc
            .weight_dims()
            .into_iter()
            .filter(|(_, r)| *r > 0)
            .map(|(w, r)| (w + 1, r))
            .collect();
        assert_eq!(wn, wc);
    }

    #[test]
    fn convention_table_exponents() {
        assert_eq!(CONVENTIONS.version, "1");
        assert_eq!(CONVENTIONS.psi_exponent(Theory::HH, 2), 2);
        assert_eq!(CONVENTIONS.psi_exponent(Theory::HCRel, 2), 3);
        assert_eq!(CONVENTIONS.psi_exponent(Theory::HNRel, 2), 3);
        assert_eq!(CONVENTIONS.psi_exponent(Theory::K, 2), 2);
    }
}
