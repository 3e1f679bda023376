//! Cyclic homology via the (b, B) totalization, and relative cyclic /
//! negative cyclic homology of a nilpotent ideal via the degreewise kernel
//! of the totalized quotient map.

use std::collections::BTreeMap;

use num::Zero;

use crate::algebras::{quotient_algebra, AlgMap, FinAlgebra, IdealSpan};
use crate::complexes::{
    connes_total, homology, ChainComplex, ChainMap, ConnesTotal, TotalMode,
};
use crate::error::Result;
use crate::exactlin::{Rat, SparseMat, Subquotient};

use super::bar::{
    ndecode, nencode, normalized_mixed_with_budget, NormalizedMixed, DEFAULT_BUDGET,
};

/// HC_n(A), computed from the normalized (b, B) total complex.
pub fn hc(a: &FinAlgebra, n: i64) -> Result<Subquotient> {
    hc_with_budget(a, n, DEFAULT_BUDGET)
}

pub fn hc_with_budget(a: &FinAlgebra, n: i64, budget: u128) -> Result<Subquotient> {
    assert!(n >= 0);
    let nm = normalized_mixed_with_budget(a, n + 2, budget)?;
    let total = connes_total(nm.mixed(), TotalMode::HC, n)?;
    Ok(homology(&total.complex, n))
}

/// The induced map on normalized chains C̄_q(A) -> C̄_q(B) of an algebra
/// map: apply f in every slot and drop unit components in internal slots.
pub(crate) fn normalized_level_map(f: &AlgMap, q: usize) -> SparseMat {
    let (da, db) = (f.source().dim(), f.target().dim());
    let ndim = |d: usize, q: usize| -> usize {
        if q == 0 {
            d
        } else if d == 1 {
            0
        } else {
            d * (d - 1).pow(q as u32)
        }
    };
    let (rows, cols) = (ndim(db, q), ndim(da, q));
    let mut out_cols = Vec::with_capacity(cols);
    for j in 0..cols {
        let t = ndecode(j, da, q);
        let mut acc: Vec<(Vec<usize>, Rat)> = f
            .matrix()
            .col(t[0])
            .iter()
            .map(|(i, c)| (vec![*i], c.clone()))
            .collect();
        for &slot in &t[1..] {
            let mut next = Vec::new();
            for (pre, c) in &acc {
                for (i, ci) in f.matrix().col(slot) {
                    if *i == 0 {
                        continue; // degenerate: unit in an internal slot
                    }
                    let mut p = pre.clone();
                    p.push(*i);
                    next.push((p, c * ci));
                }
            }
            acc = next;
        }
        let mut col: Vec<(usize, Rat)> = Vec::new();
        for (tuple, c) in acc {
            let idx = nencode(&tuple, db);
            match col.iter_mut().find(|(i, _)| *i == idx) {
                Some((_, v)) => *v += &c,
                None => col.push((idx, c)),
            }
        }
        col.retain(|(_, c)| !c.is_zero());
        col.sort_by_key(|e| e.0);
        out_cols.push(col);
    }
    SparseMat::from_cols(rows, out_cols)
}

/// Block map Tot(A) -> Tot(B) assembled from [`normalized_level_map`],
/// matching components by (column, inner degree).
fn total_level_map(
    f: &AlgMap,
    src: &ConnesTotal,
    dst: &ConnesTotal,
    k: i64,
) -> SparseMat {
    let rows = dst.complex.dim(k);
    let cols = src.complex.dim(k);
    let empty = Vec::new();
    let tgt: BTreeMap<(i64, i64), usize> = dst
        .layout
        .get(&k)
        .unwrap_or(&empty)
        .iter()
        .map(|&(j, q, o)| ((j, q), o))
        .collect();
    let mut triplets = Vec::new();
    for &(j, q, off) in src.layout.get(&k).unwrap_or(&empty) {
        if let Some(&to) = tgt.get(&(j, q)) {
            let blk = normalized_level_map(f, q as usize);
            for c in 0..blk.cols() {
                for (r, v) in blk.col(c) {
                    triplets.push((to + r, off + c, v.clone()));
                }
            }
        }
    }
    SparseMat::from_triplets(rows, cols, triplets)
}

/// The relative (b, B) total complex of a nilpotent ideal I in A: the
/// degreewise kernel of Tot(A) -> Tot(A/I) near degree `n`, with all the
/// intermediate data.
pub struct RelativeTotal {
    pub quotient: FinAlgebra,
    pub projection: AlgMap,
    pub src_norm: NormalizedMixed,
    pub dst_norm: NormalizedMixed,
    pub src_total: ConnesTotal,
    pub dst_total: ConnesTotal,
    pub total_map: ChainMap,
    pub kernel: ChainComplex,
    pub inclusion: ChainMap,
}

pub fn relative_total(a: &FinAlgebra, ideal: &IdealSpan, n: i64) -> Result<RelativeTotal> {
    relative_total_with_budget(a, ideal, n, DEFAULT_BUDGET)
}

pub fn relative_total_with_budget(
    a: &FinAlgebra,
    ideal: &IdealSpan,
    n: i64,
    budget: u128,
) -> Result<RelativeTotal> {
    assert!(n >= 0);
    ideal.nilpotency_index()?; // relative theory requires a nilpotent ideal
    let (b, projection) = quotient_algebra(a, ideal)?;
    let src_norm = normalized_mixed_with_budget(a, n + 2, budget)?;
    let dst_norm = normalized_mixed_with_budget(&b, n + 2, budget)?;
    let src_total = connes_total(src_norm.mixed(), TotalMode::HC, n)?;
    let dst_total = connes_total(dst_norm.mixed(), TotalMode::HC, n)?;
    let lo = src_total.complex.lo();
    let maps: Vec<SparseMat> = (lo..=src_total.complex.hi())
        .map(|k| total_level_map(&projection, &src_total, &dst_total, k))
        .collect();
    let total_map = ChainMap::new(
        src_total.complex.clone(),
        dst_total.complex.clone(),
        lo,
        maps,
    )?;
    let (kernel, inclusion) = crate::complexes::kernel_complex(&total_map)?;
    Ok(RelativeTotal {
        quotient: b,
        projection,
        src_norm,
        dst_norm,
        src_total,
        dst_total,
        total_map,
        kernel,
        inclusion,
    })
}

/// HC_n(A, I) for a nilpotent ideal I.
pub fn hc_rel(a: &FinAlgebra, ideal: &IdealSpan, n: i64) -> Result<Subquotient> {
    hc_rel_with_budget(a, ideal, n, DEFAULT_BUDGET)
}

pub fn hc_rel_with_budget(
    a: &FinAlgebra,
    ideal: &IdealSpan,
    n: i64,
    budget: u128,
) -> Result<Subquotient> {
    let rel = relative_total_with_budget(a, ideal, n, budget)?;
    Ok(homology(&rel.kernel, n))
}

/// HN_n(A, I) for a nilpotent ideal I. The relative periodic theory of a
/// nilpotent ideal vanishes rationally, so HN_n(A, I) = HC_{n-1}(A, I).
pub fn hn_rel(a: &FinAlgebra, ideal: &IdealSpan, n: i64) -> Result<Subquotient> {
    hn_rel_with_budget(a, ideal, n, DEFAULT_BUDGET)
}

pub fn hn_rel_with_budget(
    a: &FinAlgebra,
    ideal: &IdealSpan,
    n: i64,
    budget: u128,
) -> Result<Subquotient> {
    if n < 1 {
        return Ok(Subquotient::full(0));
    }
    hc_rel_with_budget(a, ideal, n - 1, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{induced_map, kernel_basis, rat, SparseVec};

    fn lambda(m: usize) -> FinAlgebra {
        let mut f = vec![Rat::zero(); m + 2];
        f[m + 1] = Rat::one();
        FinAlgebra::univariate_quotient("x", &f).unwrap()
    }

    use num::One;

    #[test]
    fn hc_of_ground_field() {
        let q = FinAlgebra::ground();
        let dims: Vec<usize> = (0..4).map(|n| hc(&q, n).unwrap().dim()).collect();
        assert_eq!(dims, vec![1, 0, 1, 0]);
    }

    #[test]
    fn hc_zero_is_the_algebra() {
        assert_eq!(hc(&lambda(2), 0).unwrap().dim(), 3);
    }

    /// Independent oracle over Q: Connes' lambda-complex
    /// C^λ_n = A^{⊗(n+1)} / im(1 - t) with the induced b computes HC_n.
    fn hc_dim_via_lambda_complex(a: &FinAlgebra, n: i64) -> usize {
        use super::super::bar::{decode, encode};
        let d = a.dim();
        let top = (n + 1) as usize;
        let mut quots: Vec<Subquotient> = Vec::new();
        for q in 0..=top {
            let dim = d.pow(q as u32 + 1);
            let sign = if q % 2 == 0 { rat(1) } else { rat(-1) };
            let mut cols = Vec::with_capacity(dim);
            for j in 0..dim {
                let t = decode(j, d, q + 1);
                let mut rot = Vec::with_capacity(q + 1);
                rot.push(t[q]);
                rot.extend_from_slice(&t[..q]);
                let mut col: SparseVec =
                    vec![(j, Rat::one()), (encode(&rot, d), -sign.clone())];
                col.sort_by_key(|e| e.0);
                if col[0].0 == col[1].0 {
                    let c = &col[0].1 + &col[1].1;
                    col = if c.is_zero() { vec![] } else { vec![(col[0].0, c)] };
                }
                cols.push(col);
            }
            let im = SparseMat::from_cols(dim, cols);
            quots.push(Subquotient::quotient(dim, im).unwrap());
        }
        let bar = super::super::bar::bar_mixed(a, n + 1).unwrap();
        let mut dims = Vec::new();
        let mut diffs = Vec::new();
        for q in 0..=top {
            dims.push(quots[q].dim());
            if q > 0 {
                let b = bar.complex().d(q as i64);
                diffs.push(induced_map(&b, &quots[q], &quots[q - 1]).unwrap());
            }
        }
        let c = ChainComplex::new(0, dims, diffs).unwrap();
        homology(&c, n).dim()
    }

    #[test]
    fn hc_matches_lambda_complex_oracle() {
        for a in [lambda(1), lambda(2)] {
            for n in 0..=3i64 {
                assert_eq!(
                    hc(&a, n).unwrap().dim(),
                    hc_dim_via_lambda_complex(&a, n),
                    "n = {n}"
                );
            }
        }
        let qi = FinAlgebra::univariate_quotient("x", &[rat(1), rat(0), rat(1)]).unwrap();
        for n in 0..=3i64 {
            assert_eq!(hc(&qi, n).unwrap().dim(), hc_dim_via_lambda_complex(&qi, n));
        }
    }

    #[test]
    fn relative_hc_is_reduced_part() {
        // for the augmentation ideal of Λ_m, HC(A, I) is the kernel of
        // HC(A) -> HC(Q), so its dimension is dim HC_n(A) minus 1 in even
        // degrees and equal in odd degrees
        for m in [1usize, 2] {
            let a = lambda(m);
            let x: SparseVec = vec![(1, Rat::one())];
            let ideal = IdealSpan::generated(a.clone(), &[x]).unwrap();
            for n in 0..=3i64 {
                let whole = hc(&a, n).unwrap().dim();
                let ground = if n % 2 == 0 { 1 } else { 0 };
                assert_eq!(
                    hc_rel(&a, &ideal, n).unwrap().dim(),
                    whole - ground,
                    "m = {m}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn relative_hn_shifts() {
        let a = lambda(1);
        let x: SparseVec = vec![(1, Rat::one())];
        let ideal = IdealSpan::generated(a.clone(), &[x]).unwrap();
        assert_eq!(hn_rel(&a, &ideal, 0).unwrap().dim(), 0);
        assert_eq!(
            hn_rel(&a, &ideal, 2).unwrap().dim(),
            hc_rel(&a, &ideal, 1).unwrap().dim()
        );
    }

    #[test]
    fn non_nilpotent_ideal_rejected() {
        // the unit ideal is not nilpotent
        let a = lambda(1);
        let one: SparseVec = vec![(0, Rat::one())];
        let ideal = IdealSpan::generated(a.clone(), &[one]).unwrap();
        assert!(matches!(
            hc_rel(&a, &ideal, 1),
            Err(crate::Error::NonNilpotent)
        ));
    }

    #[test]
    fn kernel_basis_consistency() {
        // totalized quotient map is surjective with kernel of complementary
        // dimension in each stored degree
        let a = lambda(1);
        let x: SparseVec = vec![(1, Rat::one())];
        let ideal = IdealSpan::generated(a.clone(), &[x]).unwrap();
        let rel = relative_total(&a, &ideal, 1).unwrap();
        for k in rel.kernel.lo()..=rel.kernel.hi() {
            assert_eq!(
                rel.kernel.dim(k),
                rel.src_total.complex.dim(k) - rel.dst_total.complex.dim(k)
            );
            assert_eq!(
                kernel_basis(&rel.total_map.map(k)).cols(),
                rel.kernel.dim(k)
            );
        }
    }
}
