//! Finite-dimensional Lie algebras over Q: gl_n of a finite algebra,
//! triangular-mod-ideal subalgebras, Chevalley–Eilenberg chain complexes,
//! the summed complex x_n(A, I), the generalized-trace chain map into the
//! cyclic quotient complex, exterior-power Lie operations, and the
//! compatibility report between the two.

use std::collections::BTreeMap;

use itertools::Itertools;
use num::{One, Zero};

use crate::algebras::{quotient_algebra, FinAlgebra, IdealSpan};
use crate::complexes::{
    connes_total, homology, kernel_complex, ChainComplex, ChainMap, ConnesTotal,
    TotalMode,
};
use crate::error::{Error, Result};
use crate::exactlin::{
    induced_map, rank, rat, solve, sparse_add_scaled, Echelon, ExprEchelon,
    Rat, SparseMat, SparseVec, Subquotient,
};
use crate::hochcyc::{
    bar_mixed_with_budget, decode, encode, hodge_hc_rel_with_budget, lambda_op,
    nencode, perm_sign, tensor_power_map, DEFAULT_BUDGET,
};

/// A finite-dimensional Lie algebra over Q given by structure constants.
/// Antisymmetry and the Jacobi identity are verified exhaustively on the
/// basis at construction.
#[derive(Clone)]
pub struct FinLieAlgebra {
    labels: Vec<String>,
    /// bracket[i * dim + j] = [e_i, e_j]
    bracket: Vec<SparseVec>,
}

impl FinLieAlgebra {
    pub fn new(labels: Vec<String>, bracket: Vec<SparseVec>) -> Result<Self> {
        let dim = labels.len();
        assert_eq!(bracket.len(), dim * dim, "need one bracket per basis pair");
        let g = FinLieAlgebra { labels, bracket };
        for i in 0..dim {
            if !g.bracket[i * dim + i].is_empty() {
                return Err(Error::Invariant(format!("[e{i}, e{i}] != 0")));
            }
            for j in 0..i {
                let mut s = g.bracket[i * dim + j].clone();
                for (idx, c) in &g.bracket[j * dim + i] {
                    s = sparse_add_scaled(&s, &vec![(*idx, Rat::one())], c);
                }
                s.retain(|(_, c)| !c.is_zero());
                if !s.is_empty() {
                    return Err(Error::Invariant(format!(
                        "antisymmetry fails on basis pair ({j}, {i})"
                    )));
                }
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in (j + 1)..dim {
                    let mut s = g.bracket_vec(g.bracket_basis(i, j), &unit(k));
                    let t = g.bracket_vec(g.bracket_basis(j, k), &unit(i));
                    let u = g.bracket_vec(g.bracket_basis(k, i), &unit(j));
                    for (idx, c) in t.iter().chain(u.iter()) {
                        s = sparse_add_scaled(&s, &vec![(*idx, Rat::one())], c);
                    }
                    s.retain(|(_, c)| !c.is_zero());
                    if !s.is_empty() {
                        return Err(Error::Invariant(format!(
                            "Jacobi identity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.bracket[i * self.dim() + j]
    }

    /// Bilinear extension of the bracket.
    pub fn bracket_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out: SparseVec = Vec::new();
        for (i, ci) in x {
            for (j, cj) in y {
                let c = ci * cj;
                out = sparse_add_scaled(&out, self.bracket_basis(*i, *j), &c);
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().all(|b| b.is_empty())
    }
}

fn unit(i: usize) -> SparseVec {
    vec![(i, Rat::one())]
}

/// Basis index of the matrix `a_t E_{pq}` inside gl_n(A).
fn gl_index(n: usize, da: usize, p: usize, q: usize, t: usize) -> usize {
    (p * n + q) * da + t
}

fn gl_decode(n: usize, da: usize, idx: usize) -> (usize, usize, usize) {
    let t = idx % da;
    let pq = idx / da;
    (pq / n, pq % n, t)
}

/// gl_n(A) with the matrix commutator bracket; dim = n² · dim A.
pub fn gl(a: &FinAlgebra, n: usize) -> Result<FinLieAlgebra> {
    let da = a.dim();
    let dim = n * n * da;
    let mut labels = Vec::with_capacity(dim);
    for p in 0..n {
        for q in 0..n {
            for t in 0..da {
                labels.push(format!("{}·E{}{}", a.label(t), p + 1, q + 1));
            }
        }
    }
    let mut bracket = vec![SparseVec::new(); dim * dim];
    for i in 0..dim {
        let (p1, q1, t1) = gl_decode(n, da, i);
        for j in 0..dim {
            let (p2, q2, t2) = gl_decode(n, da, j);
            let prod = a.mul_basis(t1, t2);
            let mut out: SparseVec = Vec::new();
            if q1 == p2 {
                for (t, c) in prod {
                    out = sparse_add_scaled(
                        &out,
                        &unit(gl_index(n, da, p1, q2, *t)),
                        c,
                    );
                }
            }
            if q2 == p1 {
                for (t, c) in prod {
                    out = sparse_add_scaled(
                        &out,
                        &vec![(gl_index(n, da, p2, q1, *t), rat(-1))],
                        c,
                    );
                }
            }
            out.retain(|(_, c)| !c.is_zero());
            bracket[i * dim + j] = out;
        }
    }
    FinLieAlgebra::new(labels, bracket)
}

/// A Lie subalgebra of gl_n(A) presented by its own basis together with the
/// embedding columns into gl coordinates.
pub struct TriangularLie {
    pub lie: FinLieAlgebra,
    /// gl_n(A)-coordinates of the subalgebra basis, one column each
    pub embedding: SparseMat,
}

/// The triangular-mod-I subalgebra for a total order σ: entry (σi, σj) is
/// unrestricted in A when i < j and constrained to I when i >= j. Bracket
/// closure is verified exactly.
pub fn t_sigma(
    a: &FinAlgebra,
    ideal: &IdealSpan,
    n: usize,
    sigma: &[usize],
) -> Result<TriangularLie> {
    let mut seen = vec![false; n];
    if sigma.len() != n || sigma.iter().any(|&s| s >= n || std::mem::replace(&mut seen[s], true)) {
        return Err(Error::Input(format!("σ = {sigma:?} is not a permutation of 0..{n}")));
    }
    ideal.nilpotency_index()?;
    let da = a.dim();
    let gl_dim = n * n * da;
    let glie = gl(a, n)?;
    let mut labels = Vec::new();
    let mut cols: Vec<SparseVec> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (r, c) = (sigma[i], sigma[j]);
            if i < j {
                for t in 0..da {
                    labels.push(format!("{}·E{}{}", a.label(t), r + 1, c + 1));
                    cols.push(unit(gl_index(n, da, r, c, t)));
                }
            } else {
                let span = ideal.span();
                for v in 0..span.cols() {
                    labels.push(format!("i{}·E{}{}", v + 1, r + 1, c + 1));
                    cols.push(
                        span.col(v)
                            .iter()
                            .map(|(t, cv)| (gl_index(n, da, r, c, *t), cv.clone()))
                            .collect(),
                    );
                }
            }
        }
    }
    let embedding = SparseMat::from_cols(gl_dim, cols);
    let mut solver = ExprEchelon::new(gl_dim);
    for j in 0..embedding.cols() {
        let enlarged = solver.insert(embedding.col(j));
        debug_assert!(enlarged, "triangular basis columns are independent");
    }
    let dim = embedding.cols();
    let mut bracket = vec![SparseVec::new(); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let w = glie.bracket_vec(embedding.col(i), embedding.col(j));
            let expr = solver.express(&w).ok_or_else(|| {
                Error::Invariant(format!(
                    "triangular subalgebra not closed under bracket at pair ({i}, {j})"
                ))
            })?;
            bracket[i * dim + j] = expr;
        }
    }
    let lie = FinLieAlgebra::new(labels, bracket)?;
    Ok(TriangularLie { lie, embedding })
}

/// Lexicographically ordered k-element subsets of 0..n.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    (0..n).combinations(k).collect()
}

/// Index of a sorted subset in the lex-ordered list.
fn subset_index(subs: &[Vec<usize>], s: &[usize]) -> usize {
    subs.binary_search_by(|probe| probe.as_slice().cmp(s)).expect("subset in range")
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// The Chevalley–Eilenberg chain complex of `lie` through degree `top`:
/// C_q = Λ^q(lie) on the lex-ordered subset basis, with
/// d(x_0∧…∧x_{q-1}) = Σ_{r<s} (−1)^{r+s} [x_r, x_s] ∧ (the rest).
pub struct CEComplex {
    pub lie: FinLieAlgebra,
    pub top: usize,
    pub complex: ChainComplex,
    subsets: Vec<Vec<Vec<usize>>>,
}

impl CEComplex {
    /// The lex-ordered subset basis of Λ^q.
    pub fn basis(&self, q: usize) -> &[Vec<usize>] {
        &self.subsets[q]
    }
}

pub fn ce_complex(g: &FinLieAlgebra, top: usize) -> Result<CEComplex> {
    ce_complex_with_budget(g, top, DEFAULT_BUDGET)
}

pub fn ce_complex_with_budget(g: &FinLieAlgebra, top: usize, budget: u128) -> Result<CEComplex> {
    let dim = g.dim();
    for q in 0..=top {
        let required = binom(dim, q);
        if required > budget {
            return Err(Error::Budget { required, budget });
        }
    }
    let subsets: Vec<Vec<Vec<usize>>> = (0..=top).map(|q| k_subsets(dim, q)).collect();
    let dims: Vec<usize> = subsets.iter().map(|s| s.len()).collect();
    let mut diffs = Vec::with_capacity(top);
    for q in 1..=top {
        let mut cols = Vec::with_capacity(subsets[q].len());
        for s in &subsets[q] {
            cols.push(ce_diff_column(g, s, &subsets[q - 1]));
        }
        diffs.push(SparseMat::from_cols(subsets[q - 1].len(), cols));
    }
    let complex = ChainComplex::new(0, dims, diffs)?;
    Ok(CEComplex { lie: g.clone(), top, complex, subsets })
}

fn ce_diff_column(g: &FinLieAlgebra, s: &[usize], lower: &[Vec<usize>]) -> SparseVec {
    let q = s.len();
    let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
    for r in 0..q {
        for t in (r + 1)..q {
            let sign = if (r + t) % 2 == 0 { rat(1) } else { rat(-1) };
            let rest: Vec<usize> =
                s.iter().enumerate().filter(|&(i, _)| i != r && i != t).map(|(_, &x)| x).collect();
            for (m, c) in g.bracket_basis(s[r], s[t]) {
                if rest.contains(m) {
                    continue;
                }
                let pos = rest.iter().filter(|&&x| x < *m).count();
                let ins_sign = if pos % 2 == 0 { rat(1) } else { rat(-1) };
                let mut out = rest.clone();
                out.insert(pos, *m);
                let idx = subset_index(lower, &out);
                *acc.entry(idx).or_insert_with(Rat::zero) += c * &sign * &ins_sign;
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Expands a wedge v_0 ∧ … ∧ v_{q-1} of ambient vectors into subset-basis
/// coordinates of Λ^q.
fn wedge_vectors(vs: &[&SparseVec], subs: &[Vec<usize>]) -> SparseVec {
    let mut acc: Vec<(Vec<usize>, Rat)> = vec![(Vec::new(), Rat::one())];
    for v in vs {
        let mut next = Vec::new();
        for (pre, c) in &acc {
            for (i, ci) in v.iter() {
                if pre.contains(i) {
                    continue;
                }
                let mut p = pre.clone();
                p.push(*i);
                next.push((p, c * ci));
            }
        }
        acc = next;
    }
    let mut out: BTreeMap<usize, Rat> = BTreeMap::new();
    for (tuple, c) in acc {
        let mut inv = 0usize;
        for i in 0..tuple.len() {
            for j in (i + 1)..tuple.len() {
                if tuple[i] > tuple[j] {
                    inv += 1;
                }
            }
        }
        let mut sorted = tuple;
        sorted.sort_unstable();
        let idx = subset_index(subs, &sorted);
        let signed = if inv % 2 == 0 { c } else { -c };
        *out.entry(idx).or_insert_with(Rat::zero) += signed;
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// The summed complex x_n(A, I) = Σ_σ Λ^*(𝔱ₙ^σ(A, I)) inside the
/// Chevalley–Eilenberg complex of gl_n(A), with the restricted
/// differential; d-closure is verified exactly.
pub struct XComplex {
    pub ambient: CEComplex,
    pub complex: ChainComplex,
    pub inclusion: ChainMap,
}

pub fn x_complex(a: &FinAlgebra, ideal: &IdealSpan, n: usize, top: usize) -> Result<XComplex> {
    x_complex_with_budget(a, ideal, n, top, DEFAULT_BUDGET)
}

pub fn x_complex_with_budget(
    a: &FinAlgebra,
    ideal: &IdealSpan,
    n: usize,
    top: usize,
    budget: u128,
) -> Result<XComplex> {
    ideal.nilpotency_index()?;
    let ambient = ce_complex_with_budget(&gl(a, n)?, top, budget)?;
    let mut spans: Vec<Echelon> =
        (0..=top).map(|q| Echelon::new(ambient.subsets[q].len())).collect();
    for sigma in (0..n).permutations(n) {
        let t = t_sigma(a, ideal, n, &sigma)?;
        for q in 0..=top {
            for s in k_subsets(t.lie.dim(), q) {
                let vs: Vec<&SparseVec> = s.iter().map(|&i| t.embedding.col(i)).collect();
                spans[q].insert(wedge_vectors(&vs, &ambient.subsets[q]));
            }
        }
    }
    let bases: Vec<SparseMat> = spans.iter().map(|e| e.basis()).collect();
    let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
    let mut diffs = Vec::with_capacity(top);
    for q in 1..=top {
        let img = ambient.complex.d(q as i64).matmul(&bases[q]);
        let dq = solve(&bases[q - 1], &img).map_err(|col| {
            Error::Invariant(format!(
                "x complex not closed under d in degree {q} at column {col}"
            ))
        })?;
        diffs.push(dq);
    }
    let complex = ChainComplex::new(0, dims, diffs)?;
    let inclusion = ChainMap::new(complex.clone(), ambient.complex.clone(), 0, bases)?;
    Ok(XComplex { ambient, complex, inclusion })
}

/// C^λ_q(A) = A^{⊗(q+1)} / im(1 − t) with the signed cyclic rotation t.
fn lambda_quotient(a: &FinAlgebra, q: usize) -> Subquotient {
    let d = a.dim();
    let dim = d.pow(q as u32 + 1);
    let sign = if q % 2 == 0 { rat(1) } else { rat(-1) };
    let mut cols = Vec::with_capacity(dim);
    for j in 0..dim {
        let t = decode(j, d, q + 1);
        let mut rot = Vec::with_capacity(q + 1);
        rot.push(t[q]);
        rot.extend_from_slice(&t[..q]);
        let mut col: SparseVec = vec![(j, Rat::one()), (encode(&rot, d), -sign.clone())];
        col.sort_by_key(|e| e.0);
        if col.len() == 2 && col[0].0 == col[1].0 {
            let c = &col[0].1 + &col[1].1;
            col = if c.is_zero() { vec![] } else { vec![(col[0].0, c)] };
        }
        cols.push(col);
    }
    Subquotient::quotient(dim, SparseMat::from_cols(dim, cols)).unwrap()
}

/// The generalized-trace chain map θ from the Chevalley–Eilenberg complex
/// of gl_n(A) to the cyclic quotient complex placed in degree q ↦ C^λ_{q−1}.
///
/// On a wedge u_0 ∧ … ∧ u_{q−1} of scalar matrices,
/// θ = (−1)^{q−1} Σ_σ sgn(σ) (trace cycle of u_0, u_{σ(1)}, …, u_{σ(q−1)}),
/// keeping only arrangements whose matrix indices close up into a single
/// cycle. The global sign is fixed by the chain-map identity θ∘d = b∘θ,
/// which is verified exactly at construction.
pub struct LodayQuillen {
    pub ce: CEComplex,
    /// C^λ_q(A) for q = 0 .. top−1
    pub lambda: Vec<Subquotient>,
    /// target complex: degree q carries C^λ_{q−1} (zero in degree 0)
    pub target: ChainComplex,
    pub theta: ChainMap,
}

pub fn loday_quillen(a: &FinAlgebra, n: usize, top: usize) -> Result<LodayQuillen> {
    loday_quillen_with_budget(a, n, top, DEFAULT_BUDGET)
}

pub fn loday_quillen_with_budget(
    a: &FinAlgebra,
    n: usize,
    top: usize,
    budget: u128,
) -> Result<LodayQuillen> {
    assert!(top >= 1);
    let da = a.dim();
    let ce = ce_complex_with_budget(&gl(a, n)?, top, budget)?;
    let bar = bar_mixed_with_budget(a, top as i64, budget)?;
    let lambda: Vec<Subquotient> = (0..top).map(|q| lambda_quotient(a, q)).collect();
    let mut dims = vec![0usize];
    dims.extend(lambda.iter().map(|l| l.dim()));
    let mut diffs = vec![SparseMat::zero(0, lambda[0].dim())];
    for k in 2..=top {
        let b = bar.complex().d(k as i64 - 1);
        diffs.push(induced_map(&b, &lambda[k - 1], &lambda[k - 2])?);
    }
    let target = ChainComplex::new(0, dims, diffs)?;
    let mut maps = vec![SparseMat::zero(0, 1)];
    for k in 1..=top {
        let sign = if k % 2 == 0 { rat(-1) } else { rat(1) };
        let mut cols = Vec::with_capacity(ce.subsets[k].len());
        for s in &ce.subsets[k] {
            let us: Vec<(usize, usize, usize)> =
                s.iter().map(|&g| gl_decode(n, da, g)).collect();
            let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
            for tail in (1..k).permutations(k - 1) {
                let mut arr = vec![0usize];
                arr.extend(tail);
                let closes = (0..k).all(|j| us[arr[j]].1 == us[arr[(j + 1) % k]].0);
                if !closes {
                    continue;
                }
                let sgn = perm_sign(&arr);
                let tuple: Vec<usize> = arr.iter().map(|&j| us[j].2).collect();
                let idx = encode(&tuple, da);
                let c = if sgn > 0 { sign.clone() } else { -sign.clone() };
                *acc.entry(idx).or_insert_with(Rat::zero) += c;
            }
            let raw: SparseVec = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            let coords = lambda[k - 1].coords(&raw)?;
            cols.push(
                coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect(),
            );
        }
        maps.push(SparseMat::from_cols(lambda[k - 1].dim(), cols));
    }
    let theta = ChainMap::new(ce.complex.clone(), target.clone(), 0, maps)?;
    Ok(LodayQuillen { ce, lambda, target, theta })
}

/// A Lie algebra morphism given by its matrix on the chosen bases; bracket
/// preservation is verified on all basis pairs at construction.
pub struct LieMorphism {
    pub source: FinLieAlgebra,
    pub target: FinLieAlgebra,
    pub matrix: SparseMat,
}

/// The k-th exterior-power operation gl_n(A) → gl_{binom(n,k)}(A): a matrix
/// X acts as a derivation on Λ^k(Aⁿ) in the lex-ordered k-subset basis.
/// Bracket preservation is verified on all basis pairs, and the image of
/// the identity-order triangular subalgebra is verified to land in the
/// identity-order triangular subalgebra of the target.
pub fn exterior_power_lie(
    a: &FinAlgebra,
    ideal: &IdealSpan,
    n: usize,
    k: usize,
) -> Result<LieMorphism> {
    if k < 1 || k > n {
        return Err(Error::Input(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let da = a.dim();
    let source = gl(a, n)?;
    let subs = k_subsets(n, k);
    let nn = subs.len();
    let target = gl(a, nn)?;
    let mut cols = Vec::with_capacity(source.dim());
    for p in 0..n {
        for q in 0..n {
            for t in 0..da {
                // aE_{pq} acts by e_q ↦ a e_p on A^n; extend as a derivation
                let mut col: SparseVec = Vec::new();
                for (si, s) in subs.iter().enumerate() {
                    for (r, &j) in s.iter().enumerate() {
                        if j != q {
                            continue;
                        }
                        let rest: Vec<usize> = s
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != r)
                            .map(|(_, &x)| x)
                            .collect();
                        if rest.contains(&p) {
                            continue;
                        }
                        let pos = rest.iter().filter(|&&x| x < p).count();
                        // move the replacement from slot r to its sorted slot
                        let sgn = if (r + pos) % 2 == 0 { rat(1) } else { rat(-1) };
                        let mut out = rest.clone();
                        out.insert(pos, p);
                        let ti = subset_index(&subs, &out);
                        col = sparse_add_scaled(
                            &col,
                            &unit(gl_index(nn, da, ti, si, t)),
                            &sgn,
                        );
                    }
                }
                col.retain(|(_, c)| !c.is_zero());
                cols.push(col);
            }
        }
    }
    let matrix = SparseMat::from_cols(target.dim(), cols);
    for i in 0..source.dim() {
        for j in 0..source.dim() {
            let lhs = matrix.apply(source.bracket_basis(i, j));
            let rhs = target.bracket_vec(matrix.col(i), matrix.col(j));
            if !vec_eq(&lhs, &rhs) {
                return Err(Error::Invariant(format!(
                    "exterior power does not preserve the bracket at pair ({i}, {j})"
                )));
            }
        }
    }
    let id_sigma: Vec<usize> = (0..n).collect();
    let id_sigma_t: Vec<usize> = (0..nn).collect();
    let t_src = t_sigma(a, ideal, n, &id_sigma)?;
    let t_tgt = t_sigma(a, ideal, nn, &id_sigma_t)?;
    let tgt_span = Echelon::of_matrix(&t_tgt.embedding);
    for j in 0..t_src.embedding.cols() {
        let w = matrix.apply(t_src.embedding.col(j));
        if !tgt_span.contains(&w) {
            return Err(Error::Invariant(format!(
                "exterior power leaves the triangular subalgebra at column {j}"
            )));
        }
    }
    Ok(LieMorphism { source, target, matrix })
}

fn vec_eq(x: &SparseVec, y: &SparseVec) -> bool {
    let mut s = x.clone();
    for (i, c) in y {
        let neg = -c.clone();
        s = sparse_add_scaled(&s, &vec![(*i, Rat::one())], &neg);
    }
    s.iter().all(|(_, c)| c.is_zero())
}

/// Λ^m of a linear map on wedge bases.
fn exterior_matrix(f: &SparseMat, m: usize, src_dim: usize, tgt_dim: usize) -> SparseMat {
    let src_subs = k_subsets(src_dim, m);
    let tgt_subs = k_subsets(tgt_dim, m);
    let mut cols = Vec::with_capacity(src_subs.len());
    for s in &src_subs {
        let vs: Vec<&SparseVec> = s.iter().map(|&i| f.col(i)).collect();
        cols.push(wedge_vectors(&vs, &tgt_subs));
    }
    SparseMat::from_cols(tgt_subs.len(), cols)
}

/// Evidence report for the compatibility of θ with the exterior-power /
/// lambda operations in homology degree m: the two composite matrices
/// H_m(x_n(A,I)) → HC_{m−1}(A, I) together with their per-weight
/// comparison. No equality verdict is asserted; the assembled operator on
/// the Lie side is compared piece by piece as evidence.
pub struct ThetaLambdaReport {
    pub n: usize,
    pub k: usize,
    pub m: i64,
    /// dim H_m(x_n(A, I))
    pub hx_dim: usize,
    /// dim H_m(x_{binom(n,k)}(A, I))
    pub hx_target_dim: usize,
    /// dim HC_{m−1}(A, I)
    pub hc_rel_dim: usize,
    /// θ_* ∘ (Λ^k)_*, in HC_{m−1}(A, I) coordinates
    pub theta_after_power: SparseMat,
    /// λ^k ∘ θ_*, in HC_{m−1}(A, I) coordinates
    pub power_after_theta: SparseMat,
    /// per Hodge weight: (weight, the two projected matrices agree)
    pub piece_comparison: Vec<(i64, bool)>,
    pub matrices_equal: bool,
    /// observed rank of θ_* : H_m(x_n) → HC_{m−1}(A, I)
    pub theta_rank: usize,
}

/// The relative cyclic-quotient model: degreewise kernel of
/// C^λ(A) → C^λ(A/I), with its inclusion.
struct RelativeLambda {
    quotient: FinAlgebra,
    projection: crate::algebras::AlgMap,
    kernel: ChainComplex,
    inclusion: ChainMap,
    spaces: Vec<Subquotient>,
}

fn relative_lambda(a: &FinAlgebra, ideal: &IdealSpan, top: usize, budget: u128) -> Result<RelativeLambda> {
    let (abar, projection) = quotient_algebra(a, ideal)?;
    let bar_a = bar_mixed_with_budget(a, top as i64 + 1, budget)?;
    let bar_b = bar_mixed_with_budget(&abar, top as i64 + 1, budget)?;
    let la: Vec<Subquotient> = (0..=top).map(|q| lambda_quotient(a, q)).collect();
    let lb: Vec<Subquotient> = (0..=top).map(|q| lambda_quotient(&abar, q)).collect();
    let build = |l: &[Subquotient], bar: &crate::hochcyc::BarMixed| -> Result<ChainComplex> {
        let dims: Vec<usize> = l.iter().map(|s| s.dim()).collect();
        let mut diffs = Vec::new();
        for q in 1..=top {
            diffs.push(induced_map(&bar.complex().d(q as i64), &l[q], &l[q - 1])?);
        }
        ChainComplex::new(0, dims, diffs)
    };
    let ca = build(&la, &bar_a)?;
    let cb = build(&lb, &bar_b)?;
    let mut maps = Vec::new();
    for q in 0..=top {
        let f = tensor_power_map(projection.matrix(), q + 1);
        maps.push(induced_map(&f, &la[q], &lb[q])?);
    }
    let cm = ChainMap::new(ca, cb, 0, maps)?;
    let (kernel, inclusion) = kernel_complex(&cm)?;
    Ok(RelativeLambda { quotient: abar, projection, kernel, inclusion, spaces: la })
}

/// Block matrix of the projection Tot_k → C_k (top column) followed by the
/// cyclic quotient, in total-complex coordinates.
fn total_to_lambda(tot: &ConnesTotal, lam: &[Subquotient], k: i64) -> Result<SparseMat> {
    let rows = if k >= 0 && (k as usize) < lam.len() { lam[k as usize].dim() } else { 0 };
    let cols = tot.complex.dim(k);
    let empty = Vec::new();
    let mut out_cols = vec![SparseVec::new(); cols];
    for &(j, q, off) in tot.layout.get(&k).unwrap_or(&empty) {
        if j != 0 {
            continue;
        }
        debug_assert_eq!(q, k);
        let l = &lam[q as usize];
        for c in 0..l.ambient_dim() {
            let coords = l.coords(&unit(c))?;
            out_cols[off + c] = coords
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect();
        }
    }
    Ok(SparseMat::from_cols(rows, out_cols))
}

/// The normalization projection C_q → C̄_q: kill tuples with a unit
/// component in an internal slot.
fn normalization_projection(a: &FinAlgebra, q: usize) -> SparseMat {
    let d = a.dim();
    let cols = d.pow(q as u32 + 1);
    let rows = if q == 0 {
        d
    } else if d == 1 {
        0
    } else {
        d * (d - 1).pow(q as u32)
    };
    let mut out = Vec::with_capacity(cols);
    for j in 0..cols {
        let t = decode(j, d, q + 1);
        if t[1..].iter().any(|&x| x == 0) {
            out.push(SparseVec::new());
        } else {
            out.push(unit(nencode(&t, d)));
        }
    }
    SparseMat::from_cols(rows, out)
}

/// Blockwise map between two Connes totals, given per-inner-degree blocks.
fn blockwise_total_map(
    src: &ConnesTotal,
    dst: &ConnesTotal,
    k: i64,
    block: &dyn Fn(usize) -> SparseMat,
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
            let blk = block(q as usize);
            for c in 0..blk.cols() {
                for (r, v) in blk.col(c) {
                    triplets.push((to + r, off + c, v.clone()));
                }
            }
        }
    }
    SparseMat::from_triplets(rows, cols, triplets)
}

/// Classes of the columns of `chains` (in complex coordinates at degree
/// `deg`) in the canonical homology basis; `src` supplies the domain
/// subquotient for validation of cycles and boundaries.
fn into_homology(
    chains: &SparseMat,
    src: &Subquotient,
    dst: &Subquotient,
) -> Result<SparseMat> {
    induced_map(chains, src, dst)
}

pub fn theta_lambda_report(
    a: &FinAlgebra,
    ideal: &IdealSpan,
    n: usize,
    k: usize,
    m: i64,
) -> Result<ThetaLambdaReport> {
    theta_lambda_report_with_budget(a, ideal, n, k, m, DEFAULT_BUDGET)
}

pub fn theta_lambda_report_with_budget(
    a: &FinAlgebra,
    ideal: &IdealSpan,
    n: usize,
    k: usize,
    m: i64,
    budget: u128,
) -> Result<ThetaLambdaReport> {
    if m < 1 {
        return Err(Error::Input("homology degree m must be >= 1".into()));
    }
    let top = m as usize + 1;
    let nn = binom(n, k) as usize;

    // Lie side: x complexes, their homology at m, and the exterior power.
    let xn = x_complex_with_budget(a, ideal, n, top, budget)?;
    let hx = homology(&xn.complex, m);
    let xnn = x_complex_with_budget(a, ideal, nn, top, budget)?;
    let hx_t = homology(&xnn.complex, m);
    let phi = exterior_power_lie(a, ideal, n, k)?;
    let lam_m = exterior_matrix(&phi.matrix, m as usize, phi.source.dim(), phi.target.dim());
    // Λ^m φ carries x_n chains into x_{binom(n,k)}: express in its basis.
    let carried = lam_m.matmul(&xn.inclusion.map(m));
    let in_x = solve(&xnn.inclusion.map(m), &carried).map_err(|col| {
        Error::Invariant(format!(
            "exterior power leaves the summed complex at column {col}"
        ))
    })?;
    let power_star = into_homology(&in_x, &hx, &hx_t)?;

    // Cyclic side: relative lambda model and the two theta maps.
    let rl = relative_lambda(a, ideal, top, budget)?;
    let h_lambda_rel = homology(&rl.kernel, m - 1);
    let theta_into_rel = |x: &XComplex, lq: &LodayQuillen| -> Result<SparseMat> {
        let chains = lq.theta.map(m).matmul(&x.inclusion.map(m));
        solve(&rl.inclusion.map(m - 1), &chains).map_err(|col| {
            Error::Invariant(format!(
                "theta image is not relative to the ideal at column {col}"
            ))
        })
    };
    let lq_n = loday_quillen_with_budget(a, n, top, budget)?;
    let lq_t = loday_quillen_with_budget(a, nn, top, budget)?;
    let theta_n = into_homology(&theta_into_rel(&xn, &lq_n)?, &hx, &h_lambda_rel)?;
    let theta_t = into_homology(&theta_into_rel(&xnn, &lq_t)?, &hx_t, &h_lambda_rel)?;

    // Transfer from the lambda model to the relative (b, B) model, through
    // the unnormalized total complex which maps to both.
    let rel = crate::hochcyc::relative_total_with_budget(a, ideal, m - 1, budget)?;
    let hc_rel = homology(&rel.kernel, m - 1);
    let ubar_a = bar_mixed_with_budget(a, m + 1, budget)?;
    let ubar_b = bar_mixed_with_budget(&rl.quotient, m + 1, budget)?;
    let utot_a = connes_total(ubar_a.mixed(), TotalMode::HC, m - 1)?;
    let utot_b = connes_total(ubar_b.mixed(), TotalMode::HC, m - 1)?;
    let lo = utot_a.complex.lo();
    let proj = rl.projection.matrix().clone();
    let umaps: Vec<SparseMat> = (lo..=utot_a.complex.hi())
        .map(|kk| {
            blockwise_total_map(&utot_a, &utot_b, kk, &|q| tensor_power_map(&proj, q + 1))
        })
        .collect();
    let utot_map = ChainMap::new(utot_a.complex.clone(), utot_b.complex.clone(), lo, umaps)?;
    let (ku, incl_ku) = kernel_complex(&utot_map)?;
    let h_ku = homology(&ku, m - 1);
    // unnormalized total -> lambda model (top column, then cyclic quotient)
    let to_lambda_chain = |kk: i64| -> Result<SparseMat> {
        let pl = total_to_lambda(&utot_a, &rl.spaces, kk)?;
        let chains = pl.matmul(&incl_ku.map(kk));
        solve(&rl.inclusion.map(kk), &chains).map_err(|col| {
            Error::Invariant(format!(
                "total-to-lambda image is not relative at degree {kk} column {col}"
            ))
        })
    };
    // chain-level commutation of the comparison, where both sides exist
    for kk in (m - 1).max(ku.lo() + 1)..=m.min(ku.hi()) {
        let lhs = rl.kernel.d(kk).matmul(&to_lambda_chain(kk)?);
        let rhs = to_lambda_chain(kk - 1)?.matmul(&ku.d(kk));
        if lhs != rhs {
            return Err(Error::Invariant(format!(
                "lambda comparison does not commute with d in degree {kk}"
            )));
        }
    }
    let phi1 = into_homology(&to_lambda_chain(m - 1)?, &h_ku, &h_lambda_rel)?;
    // unnormalized total -> normalized total (blockwise normalization)
    let nmaps: Vec<SparseMat> = (lo..=utot_a.complex.hi())
        .map(|kk| {
            blockwise_total_map(&utot_a, &rel.src_total, kk, &|q| {
                normalization_projection(a, q)
            })
        })
        .collect();
    let norm_map = ChainMap::new(
        utot_a.complex.clone(),
        rel.src_total.complex.clone(),
        lo,
        nmaps,
    )?;
    let to_norm_kernel = |kk: i64| -> Result<SparseMat> {
        let chains = norm_map.map(kk).matmul(&incl_ku.map(kk));
        solve(&rel.inclusion.map(kk), &chains).map_err(|col| {
            Error::Invariant(format!(
                "normalization image is not relative at degree {kk} column {col}"
            ))
        })
    };
    for kk in (m - 1).max(ku.lo() + 1)..=m.min(ku.hi()) {
        let lhs = rel.kernel.d(kk).matmul(&to_norm_kernel(kk)?);
        let rhs = to_norm_kernel(kk - 1)?.matmul(&ku.d(kk));
        if lhs != rhs {
            return Err(Error::Invariant(format!(
                "normalization comparison does not commute with d in degree {kk}"
            )));
        }
    }
    let phi2 = into_homology(&to_norm_kernel(m - 1)?, &h_ku, &hc_rel)?;
    // invert phi1 (quasi-isomorphism on these finite truncations)
    if phi1.rows() != phi1.cols() {
        return Err(Error::Invariant(format!(
            "lambda comparison is not square: {}x{}",
            phi1.rows(),
            phi1.cols()
        )));
    }
    let phi1_inv = solve(&phi1, &SparseMat::identity(phi1.rows())).map_err(|_| {
        Error::Invariant("lambda comparison is not invertible on homology".into())
    })?;
    let psi = phi2.matmul(&phi1_inv);

    // The two composites into HC_{m-1}(A, I) coordinates.
    let theta_star = psi.matmul(&theta_n);
    let theta_after_power = psi.matmul(&theta_t.matmul(&power_star));
    let hodge = hodge_hc_rel_with_budget(a, ideal, m - 1, budget)?;
    let lam_k = lambda_op(&hodge, k as i64);
    let power_after_theta = lam_k.matmul(&theta_star);
    let mut piece_comparison = Vec::new();
    for (w, _) in hodge.weight_dims() {
        if let Some(p) = hodge.projector(w) {
            piece_comparison
                .push((w, p.matmul(&theta_after_power) == p.matmul(&power_after_theta)));
        }
    }
    let matrices_equal = theta_after_power == power_after_theta;
    let theta_rank = rank(&theta_star);
    Ok(ThetaLambdaReport {
        n,
        k,
        m,
        hx_dim: hx.dim(),
        hx_target_dim: hx_t.dim(),
        hc_rel_dim: hc_rel.dim(),
        theta_after_power,
        power_after_theta,
        piece_comparison,
        matrices_equal,
        theta_rank,
    })
}
