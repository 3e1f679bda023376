//! Comparison maps between the Hochschild complex and differential forms:
//! the antisymmetrization map from p-forms into p-chains, and the
//! divided-derivative map e from n-chains onto n-forms. Together they
//! split forms off the Hochschild complex: e ∘ hkr = id.

use itertools::Itertools;
use num::{One, Zero};

use crate::algebras::{de_rham_mixed, kaehler, FinAlgebra, OmegaModule};
use crate::complexes::{ChainMap, MixedComplex};
use crate::error::{Error, Result};
use crate::exactlin::{rat, sparse_add_scaled, Rat, SparseMat, SparseVec};

use super::bar::{bar_mixed_with_budget, decode, perm_sign, BarMixed, DEFAULT_BUDGET};

/// Expands a tensor tuple whose slots are given as sparse A-vectors into
/// encoded chain coordinates.
fn expand_tuple(d: usize, slots: &[SparseVec], coeff: &Rat) -> SparseVec {
    let mut acc: Vec<(usize, Rat)> = vec![(0, coeff.clone())];
    for s in slots {
        let mut next = Vec::with_capacity(acc.len() * s.len());
        for (idx, c) in &acc {
            for (i, ci) in s {
                next.push((idx * d + i, c * ci));
            }
        }
        acc = next;
    }
    acc.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::new();
    for (i, c) in acc {
        if let Some(last) = out.last_mut() {
            if last.0 == i {
                last.1 += &c;
                continue;
            }
        }
        out.push((i, c));
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// The antisymmetrization map Ω^p -> C_p, sending m dx_{i_1}∧..∧dx_{i_p}
/// (with i_1 < .. < i_p) to Σ_π sgn(π) m ⊗ x_{i_π(1)} ⊗ .. ⊗ x_{i_π(p)}.
/// Columns are indexed by the canonical basis of Ω^p; its image consists
/// of Hochschild cycles.
pub fn hkr(a: &FinAlgebra, p: usize) -> Result<SparseMat> {
    let omega = kaehler(a, p)?;
    hkr_with_omega(a, &omega)
}

pub(crate) fn hkr_with_omega(a: &FinAlgebra, omega: &OmegaModule) -> Result<SparseMat> {
    let d = a.dim();
    let p = omega.p();
    let nv = a.vars().len();
    let vars: Vec<SparseVec> = (0..nv)
        .map(|l| {
            let mut e = vec![0u32; nv];
            e[l] = 1;
            a.reduce_monomial(&e)
        })
        .collect();
    let reps = omega.space().reps();
    let mut cols = Vec::with_capacity(reps.cols());
    for j in 0..reps.cols() {
        let mut col: SparseVec = Vec::new();
        for (idx, c) in reps.col(j) {
            let (s, i) = (idx / d, idx % d);
            let subset = &omega.subsets()[s];
            let head: SparseVec = vec![(i, Rat::one())];
            for perm in (0..p).permutations(p) {
                let sgn = rat(perm_sign(&perm));
                let mut slots = Vec::with_capacity(p + 1);
                slots.push(head.clone());
                for &k in &perm {
                    slots.push(vars[subset[k]].clone());
                }
                let term = expand_tuple(d, &slots, &(c * &sgn));
                col = sparse_add_scaled(&col, &term, &Rat::one());
            }
        }
        col.retain(|(_, c)| !c.is_zero());
        cols.push(col);
    }
    Ok(SparseMat::from_cols(d.pow(p as u32 + 1), cols))
}

/// The map e and the two complexes it connects: e_n sends
/// a_0 ⊗ .. ⊗ a_n to (1/n!) a_0 da_1 ∧ .. ∧ da_n. Construction verifies
/// that e kills the Hochschild boundary (e ∘ b = 0) and intertwines the
/// degree-raising operators (e ∘ B = d ∘ e), and that e ∘ hkr = id.
pub struct EMapData {
    pub bar: BarMixed,
    pub de_rham: MixedComplex,
    pub omegas: Vec<OmegaModule>,
    /// e_n in canonical coordinates, for n = 0..=n_top
    pub maps: Vec<SparseMat>,
}

pub fn e_map(a: &FinAlgebra, n_top: i64) -> Result<EMapData> {
    e_map_with_budget(a, n_top, DEFAULT_BUDGET)
}

pub fn e_map_with_budget(a: &FinAlgebra, n_top: i64, budget: u128) -> Result<EMapData> {
    assert!(n_top >= 0);
    let bar = bar_mixed_with_budget(a, n_top, budget)?;
    let (de_rham, omegas) = de_rham_mixed(a)?;
    let d = a.dim();
    let nv = a.vars().len();
    let mut maps = Vec::with_capacity(n_top as usize + 1);
    let mut factorial = Rat::one();
    for n in 0..=n_top as usize {
        if n > 0 {
            factorial *= rat(n as i64);
        }
        if n >= omegas.len() {
            maps.push(SparseMat::zero(0, d.pow(n as u32 + 1)));
            continue;
        }
        let omega = &omegas[n];
        let inv_fact = factorial.recip();
        let cols_n = d.pow(n as u32 + 1);
        let mut cols = Vec::with_capacity(cols_n);
        for j in 0..cols_n {
            let t = decode(j, d, n + 1);
            let exps: Vec<&[u32]> = t.iter().map(|&i| a.basis_exps(i)).collect();
            let mut ambient: SparseVec = Vec::new();
            // choose one variable per internal slot
            let mut choice = vec![0usize; n];
            'choices: loop {
                // compute the term for the current choice
                let mut coeff = inv_fact.clone();
                let mut total = exps[0].to_vec();
                let mut ok = true;
                for (slot, &l) in choice.iter().enumerate() {
                    let e = exps[slot + 1];
                    if e[l] == 0 {
                        ok = false;
                        break;
                    }
                    coeff *= rat(e[l] as i64);
                    for (v, &x) in total.iter_mut().zip(e) {
                        *v += x;
                    }
                    total[l] -= 1;
                }
                if ok {
                    let mut wedge: Vec<usize> = choice.clone();
                    let sgn = perm_sign(&wedge);
                    wedge.sort_unstable();
                    let distinct = wedge.windows(2).all(|w| w[0] != w[1]);
                    if distinct {
                        let s = omega
                            .subsets()
                            .iter()
                            .position(|x| x == &wedge)
                            .expect("sorted distinct subset present");
                        coeff *= rat(sgn);
                        let monos = a.reduce_monomial(&total);
                        let term: SparseVec = monos
                            .iter()
                            .map(|(i, c)| (omega.ambient_index(s, *i), c * &coeff))
                            .collect();
                        ambient = sparse_add_scaled(&ambient, &term, &Rat::one());
                    }
                }
                // next choice
                for k in 0..n {
                    choice[k] += 1;
                    if choice[k] < nv {
                        continue 'choices;
                    }
                    choice[k] = 0;
                }
                break;
            }
            ambient.retain(|(_, c)| !c.is_zero());
            let coords = omega.coords(&ambient)?;
            cols.push(
                coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect(),
            );
        }
        maps.push(SparseMat::from_cols(omega.dim(), cols));
    }
    // e ∘ b = 0 in every degree (the target differential is zero)
    let chain = ChainMap::new(
        bar.complex().clone(),
        de_rham.underlying().clone(),
        0,
        maps.clone(),
    )?;
    // e ∘ B = d ∘ e
    for n in 0..n_top {
        let lhs = chain.map(n + 1).matmul(&bar.mixed().b_map(n));
        let rhs = de_rham.b_map(n).matmul(&chain.map(n));
        if lhs != rhs {
            return Err(Error::Invariant(format!(
                "e does not intertwine B with d in degree {n}"
            )));
        }
    }
    // e ∘ hkr = id on forms up to the stored degree
    for (p, omega) in omegas.iter().enumerate() {
        if p > n_top as usize {
            break;
        }
        let h = hkr_with_omega(a, omega)?;
        if maps[p].matmul(&h) != SparseMat::identity(omega.dim()) {
            return Err(Error::Invariant(format!(
                "e ∘ hkr != id on {p}-forms"
            )));
        }
    }
    Ok(EMapData { bar, de_rham, omegas, maps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::homology;
    use crate::exactlin::rank;

    fn lambda(m: usize) -> FinAlgebra {
        let mut f = vec![Rat::zero(); m + 2];
        f[m + 1] = Rat::one();
        FinAlgebra::univariate_quotient("x", &f).unwrap()
    }

    #[test]
    fn e_map_identities_univariate() {
        // construction verifies e∘b = 0, e∘B = d∘e, e∘hkr = id
        let data = e_map(&lambda(2), 3).unwrap();
        assert_eq!(data.maps.len(), 4);
        // Ω^0 = A (dim 3), Ω^1 = A/(3x²) dx (dim 2)
        assert_eq!(data.omegas[0].dim(), 3);
        assert_eq!(data.omegas[1].dim(), 2);
    }

    #[test]
    fn e_map_identities_two_variables() {
        let a = FinAlgebra::monomial_quotient(
            &["x".into(), "y".into()],
            &[vec![2, 0], vec![0, 2]],
        )
        .unwrap();
        let data = e_map(&a, 2).unwrap();
        assert_eq!(data.omegas.len(), 3);
        assert!(data.omegas[2].dim() > 0);
    }

    #[test]
    fn hkr_lands_in_cycles() {
        let a = lambda(2);
        let bar = bar_mixed_with_budget(&a, 3, DEFAULT_BUDGET).unwrap();
        for p in 1..=2i64 {
            let h = hkr(&a, p as usize).unwrap();
            assert!(bar.complex().d(p).matmul(&h).is_zero(), "p = {p}");
        }
    }

    #[test]
    fn hkr_classes_independent_in_hh1() {
        // for Λ_2 the 1-forms (dim 2) inject into HH_1 (dim 2)
        let a = lambda(2);
        let h = hkr(&a, 1).unwrap();
        let hh1 = homology(&bar_mixed_with_budget(&a, 2, DEFAULT_BUDGET).unwrap().complex().clone(), 1);
        let classes = hh1.coords_mat(&h).unwrap();
        assert_eq!(rank(&classes), 2);
    }
}
