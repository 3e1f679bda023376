//! Finite-dimensional commutative Q-algebras: truncated polynomial rings,
//! monomial quotients, tensor products, ideals and truncation towers,
//! Kähler differentials and the de Rham mixed complex.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::{One, Zero};

use crate::complexes::{ChainComplex, MixedComplex};
use crate::error::{Error, Result};
use crate::exactlin::{rat, Echelon, Rat, SparseMat, SparseVec, Subquotient};

/// A polynomial as (coefficient, exponent vector) terms.
pub type Poly = Vec<(Rat, Vec<u32>)>;

/// Degree-lexicographic order on exponent vectors: lower total degree
/// first; within a degree, higher power of an earlier variable first.
fn deglex(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
    da.cmp(&db).then_with(|| b.cmp(a))
}

fn monomial_label(vars: &[String], exps: &[u32]) -> String {
    let mut parts = Vec::new();
    for (v, &e) in vars.iter().zip(exps) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn divisible(exps: &[u32], gen: &[u32]) -> bool {
    exps.iter().zip(gen).all(|(e, g)| e >= g)
}

/// How the algebra was presented; drives normal-form reduction and the
/// Kähler differential construction.
#[derive(Clone)]
pub enum Presentation {
    /// Q[x]/(f) with monic f; `relation` holds the coefficients of f in
    /// ascending degree (length deg f + 1, leading coefficient 1).
    Univariate { relation: Vec<Rat> },
    /// Q[vars]/(monomial ideal).
    Monomial { gens: Vec<Vec<u32>> },
    /// Tensor product of two presented algebras on disjoint variables.
    Tensor { left: Box<FinAlgebra>, right: Box<FinAlgebra> },
}

/// A finite-dimensional commutative unital Q-algebra with a monomial basis.
/// Unitality, commutativity and associativity are verified exhaustively at
/// construction.
#[derive(Clone)]
pub struct FinAlgebra {
    vars: Vec<String>,
    /// exponent vectors in deglex order; index 0 is the unit monomial
    basis: Vec<Vec<u32>>,
    labels: Vec<String>,
    index: BTreeMap<Vec<u32>, usize>,
    /// mult[i][j] = coordinates of basis_i * basis_j
    mult: Vec<Vec<SparseVec>>,
    presentation: Option<Presentation>,
}

impl FinAlgebra {
    /// The ground field Q as an algebra (no variables).
    pub fn ground() -> Self {
        FinAlgebra::monomial_quotient(&[], &[]).unwrap()
    }

    /// Q[var]/(f) for monic f of degree >= 1; `relation` lists the
    /// coefficients of f in ascending degree.
    pub fn univariate_quotient(var: &str, relation: &[Rat]) -> Result<Self> {
        let d = relation.len().saturating_sub(1);
        if d == 0 {
            return Err(Error::Input("relation must have degree >= 1".into()));
        }
        if relation[d] != Rat::one() {
            return Err(Error::Input("relation must be monic".into()));
        }
        let vars = vec![var.to_string()];
        let basis: Vec<Vec<u32>> = (0..d as u32).map(|k| vec![k]).collect();
        let pres = Presentation::Univariate { relation: relation.to_vec() };
        FinAlgebra::assemble(vars, basis, Some(pres))
    }

    /// Q[vars]/(monomial ideal generated by `gens`). Finite-dimensionality
    /// requires a pure power of every variable among the generators.
    pub fn monomial_quotient(vars: &[String], gens: &[Vec<u32>]) -> Result<Self> {
        let nv = vars.len();
        for g in gens {
            if g.len() != nv {
                return Err(Error::Input("generator arity mismatch".into()));
            }
            if g.iter().all(|&e| e == 0) {
                return Err(Error::Input("unit generator collapses the quotient".into()));
            }
        }
        // finiteness: each variable needs a pure-power generator
        let mut bounds = vec![None; nv];
        for g in gens {
            if let Some(l) = pure_power_var(g) {
                let b = bounds[l].get_or_insert(g[l]);
                *b = (*b).min(g[l]);
            }
        }
        let mut exp_bounds = Vec::with_capacity(nv);
        for (l, b) in bounds.iter().enumerate() {
            match b {
                Some(b) => exp_bounds.push(*b),
                None => return Err(Error::Infinite { var: vars[l].clone() }),
            }
        }
        // standard monomials inside the bounding box
        let mut basis = Vec::new();
        let mut cur = vec![0u32; nv];
        loop {
            if gens.iter().all(|g| !divisible(&cur, g)) {
                basis.push(cur.clone());
            }
            // odometer over the box
            let mut i = 0;
            loop {
                if i == nv {
                    break;
                }
                cur[i] += 1;
                if cur[i] < exp_bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
            if i == nv {
                break;
            }
        }
        basis.sort_by(|a, b| deglex(a, b));
        let pres = Presentation::Monomial { gens: gens.to_vec() };
        FinAlgebra::assemble(vars.to_vec(), basis, Some(pres))
    }

    /// Tensor product over Q; variable names must be disjoint.
    pub fn tensor(a: &FinAlgebra, b: &FinAlgebra) -> Result<Self> {
        if a.presentation.is_none() || b.presentation.is_none() {
            return Err(Error::Input("tensor factors must carry presentations".into()));
        }
        for v in &a.vars {
            if b.vars.contains(v) {
                return Err(Error::Input(format!("tensor factors share variable {v}")));
            }
        }
        let mut vars = a.vars.clone();
        vars.extend(b.vars.iter().cloned());
        let mut basis = Vec::new();
        for ea in &a.basis {
            for eb in &b.basis {
                let mut e = ea.clone();
                e.extend(eb.iter().copied());
                basis.push(e);
            }
        }
        basis.sort_by(|x, y| deglex(x, y));
        let pres = Presentation::Tensor {
            left: Box::new(a.clone()),
            right: Box::new(b.clone()),
        };
        FinAlgebra::assemble(vars, basis, Some(pres))
    }

    /// Builds an algebra directly from structure constants (no
    /// presentation); the same checks run as for the other constructors.
    pub fn from_structure_constants(
        labels: Vec<String>,
        mult: Vec<Vec<SparseVec>>,
    ) -> Result<Self> {
        let dim = labels.len();
        let basis: Vec<Vec<u32>> = (0..dim).map(|_| Vec::new()).collect();
        let alg = FinAlgebra {
            vars: Vec::new(),
            basis,
            labels,
            index: BTreeMap::new(),
            mult,
            presentation: None,
        };
        alg.validate()?;
        Ok(alg)
    }

    fn assemble(
        vars: Vec<String>,
        basis: Vec<Vec<u32>>,
        presentation: Option<Presentation>,
    ) -> Result<Self> {
        let labels = basis.iter().map(|e| monomial_label(&vars, e)).collect();
        let index: BTreeMap<Vec<u32>, usize> =
            basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let mut alg = FinAlgebra {
            vars,
            basis,
            labels,
            index,
            mult: Vec::new(),
            presentation,
        };
        let dim = alg.basis.len();
        let mut mult = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut row = Vec::with_capacity(dim);
            for j in 0..dim {
                let sum: Vec<u32> = alg.basis[i]
                    .iter()
                    .zip(&alg.basis[j])
                    .map(|(a, b)| a + b)
                    .collect();
                row.push(alg.reduce_monomial(&sum));
            }
            mult.push(row);
        }
        alg.mult = mult;
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if dim == 0 {
            return Err(Error::Invariant("zero algebra has no unit".into()));
        }
        for j in 0..dim {
            if self.mul_basis(0, j) != &unit_col(j) {
                return Err(Error::Invariant(format!(
                    "unit axiom fails on basis element {}",
                    self.labels[j]
                )));
            }
        }
        for i in 0..dim {
            for j in 0..i {
                if self.mul_basis(i, j) != self.mul_basis(j, i) {
                    return Err(Error::Invariant(format!(
                        "commutativity fails on ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let ij_k = self.mul_vec(self.mul_basis(i, j), &unit_col(k));
                    let i_jk = self.mul_vec(&unit_col(i), self.mul_basis(j, k));
                    if ij_k != i_jk {
                        return Err(Error::Invariant(format!(
                            "associativity fails on ({}, {}, {})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_exps(&self, i: usize) -> &[u32] {
        &self.basis[i]
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    /// Coordinates of 1 (always basis index 0).
    pub fn unit_vec(&self) -> SparseVec {
        unit_col(0)
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i][j]
    }

    pub fn mul_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (i, ca) in a {
            for (j, cb) in b {
                let c = ca * cb;
                acc = crate::exactlin::sparse_add_scaled(&acc, &self.mult[*i][*j], &c);
            }
        }
        acc
    }

    /// Normal form of an arbitrary monomial in the algebra's variables.
    pub fn reduce_monomial(&self, exps: &[u32]) -> SparseVec {
        match &self.presentation {
            None => panic!("reduction requires a presentation"),
            Some(Presentation::Univariate { relation }) => {
                let d = relation.len() - 1;
                let k = exps[0] as usize;
                let mut coeffs = vec![Rat::zero(); d];
                if k < d {
                    coeffs[k] = Rat::one();
                } else {
                    // iterated x * (previous power), substituting
                    // x^d = -(f - x^d)
                    coeffs[d - 1] = Rat::one();
                    for _ in d - 1..k {
                        let lead = coeffs[d - 1].clone();
                        for idx in (1..d).rev() {
                            coeffs[idx] = coeffs[idx - 1].clone();
                        }
                        coeffs[0] = Rat::zero();
                        if !lead.is_zero() {
                            for idx in 0..d {
                                coeffs[idx] -= &lead * &relation[idx];
                            }
                        }
                    }
                }
                coeffs
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect()
            }
            Some(Presentation::Monomial { gens }) => {
                if gens.iter().any(|g| divisible(exps, g)) {
                    Vec::new()
                } else {
                    vec![(self.index[exps], Rat::one())]
                }
            }
            Some(Presentation::Tensor { left, right }) => {
                let nl = left.vars.len();
                let lv = left.reduce_monomial(&exps[..nl]);
                let rv = right.reduce_monomial(&exps[nl..]);
                let mut out: SparseVec = Vec::new();
                for (i, ci) in &lv {
                    for (j, cj) in &rv {
                        let mut e = left.basis[*i].clone();
                        e.extend(right.basis[*j].iter().copied());
                        let idx = self.index[&e];
                        let c = ci * cj;
                        out = crate::exactlin::sparse_add_scaled(
                            &out,
                            &vec![(idx, c)],
                            &Rat::one(),
                        );
                    }
                }
                out.sort_by_key(|e| e.0);
                out
            }
        }
    }

    /// Normal form of a polynomial.
    pub fn reduce_poly(&self, p: &Poly) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (c, exps) in p {
            let t = self.reduce_monomial(exps);
            acc = crate::exactlin::sparse_add_scaled(&acc, &t, c);
        }
        acc
    }

    /// Generators of the defining ideal as polynomials, when presented.
    pub fn relation_polys(&self) -> Option<Vec<Poly>> {
        let nv = self.vars.len();
        match &self.presentation {
            None => None,
            Some(Presentation::Univariate { relation }) => {
                let f: Poly = relation
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (c.clone(), vec![k as u32]))
                    .collect();
                Some(vec![f])
            }
            Some(Presentation::Monomial { gens }) => Some(
                gens.iter().map(|g| vec![(Rat::one(), g.clone())]).collect(),
            ),
            Some(Presentation::Tensor { left, right }) => {
                let nl = left.vars.len();
                let mut out = Vec::new();
                for g in left.relation_polys()? {
                    out.push(
                        g.into_iter()
                            .map(|(c, mut e)| {
                                e.resize(nv, 0);
                                (c, e)
                            })
                            .collect(),
                    );
                }
                for g in right.relation_polys()? {
                    out.push(
                        g.into_iter()
                            .map(|(c, e)| {
                                let mut full = vec![0u32; nl];
                                full.extend(e);
                                (c, full)
                            })
                            .collect(),
                    );
                }
                Some(out)
            }
        }
    }

    /// Partial derivative of basis monomial `i` with respect to variable
    /// `l`: (coefficient, basis index of the divided monomial), or None.
    pub fn basis_partial(&self, i: usize, l: usize) -> Option<(Rat, usize)> {
        let e = self.basis[i][l];
        if e == 0 {
            return None;
        }
        let mut exps = self.basis[i].clone();
        exps[l] -= 1;
        let idx = self.index[&exps];
        Some((rat(e as i64), idx))
    }
}

fn pure_power_var(g: &[u32]) -> Option<usize> {
    let mut hit = None;
    for (l, &e) in g.iter().enumerate() {
        if e > 0 {
            if hit.is_some() {
                return None;
            }
            hit = Some(l);
        }
    }
    hit
}

fn unit_col(i: usize) -> SparseVec {
    vec![(i, Rat::one())]
}

/// A Q-subspace of an algebra that is an ideal: closed under
/// multiplication by every basis element (verified).
#[derive(Clone)]
pub struct IdealSpan {
    parent: FinAlgebra,
    span: SparseMat,
    ech: Echelon,
}

impl IdealSpan {
    /// Wraps an explicit spanning set, verifying ideal closure.
    pub fn new(parent: FinAlgebra, span: SparseMat) -> Result<Self> {
        assert_eq!(span.rows(), parent.dim());
        let ech = Echelon::of_matrix(&span);
        for i in 0..parent.dim() {
            for j in 0..span.cols() {
                let prod = parent.mul_vec(&unit_col(i), span.col(j));
                if !ech.contains(&prod) {
                    return Err(Error::Invariant(format!(
                        "span not an ideal: {} * column {j} escapes",
                        parent.label(i)
                    )));
                }
            }
        }
        Ok(IdealSpan { parent, span, ech })
    }

    /// The ideal generated by the given elements: closes the span under
    /// multiplication by all basis elements.
    pub fn generated(parent: FinAlgebra, gens: &[SparseVec]) -> Result<Self> {
        let mut ech = Echelon::new(parent.dim());
        let mut queue: Vec<SparseVec> = Vec::new();
        for g in gens {
            if ech.insert(g.clone()).is_some() {
                queue.push(g.clone());
            }
        }
        while let Some(v) = queue.pop() {
            for i in 0..parent.dim() {
                let prod = parent.mul_vec(&unit_col(i), &v);
                if ech.insert(prod.clone()).is_some() {
                    queue.push(prod);
                }
            }
        }
        let span = ech.basis();
        Ok(IdealSpan { ech, span, parent })
    }

    /// The zero ideal.
    pub fn zero(parent: FinAlgebra) -> Self {
        let dim = parent.dim();
        IdealSpan {
            parent,
            span: SparseMat::zero(dim, 0),
            ech: Echelon::new(dim),
        }
    }

    pub fn parent(&self) -> &FinAlgebra {
        &self.parent
    }

    pub fn span(&self) -> &SparseMat {
        &self.span
    }

    pub fn dim(&self) -> usize {
        self.span.cols()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.ech.contains(v)
    }

    /// Least r with I^r = 0; errors if the ideal is not nilpotent.
    pub fn nilpotency_index(&self) -> Result<usize> {
        let mut cur = self.span.clone();
        let mut r = 1;
        loop {
            if cur.cols() == 0 {
                return Ok(r);
            }
            let mut next = Echelon::new(self.parent.dim());
            for i in 0..self.span.cols() {
                for j in 0..cur.cols() {
                    next.insert(self.parent.mul_vec(self.span.col(i), cur.col(j)));
                }
            }
            if next.rank() == cur.cols() {
                return Err(Error::NonNilpotent);
            }
            cur = next.basis();
            r += 1;
        }
    }
}

/// A unital multiplicative map of algebras, stored as a matrix on the
/// monomial bases and verified on all basis pairs.
#[derive(Clone)]
pub struct AlgMap {
    source: FinAlgebra,
    target: FinAlgebra,
    matrix: SparseMat,
}

impl AlgMap {
    pub fn new(source: FinAlgebra, target: FinAlgebra, matrix: SparseMat) -> Result<Self> {
        assert_eq!(matrix.rows(), target.dim());
        assert_eq!(matrix.cols(), source.dim());
        if matrix.col(0) != &target.unit_vec() {
            return Err(Error::Invariant("algebra map does not preserve the unit".into()));
        }
        for i in 0..source.dim() {
            for j in 0..=i {
                let lhs = matrix.apply(source.mul_basis(i, j));
                let rhs = target.mul_vec(matrix.col(i), matrix.col(j));
                if lhs != rhs {
                    return Err(Error::Invariant(format!(
                        "algebra map not multiplicative on ({}, {})",
                        source.label(i),
                        source.label(j)
                    )));
                }
            }
        }
        Ok(AlgMap { source, target, matrix })
    }

    /// The map sending each source basis monomial to its normal form in
    /// the target (both algebras on the same variable list).
    pub fn by_monomial_reduction(source: FinAlgebra, target: FinAlgebra) -> Result<Self> {
        assert_eq!(source.vars(), target.vars());
        let cols = (0..source.dim())
            .map(|i| target.reduce_monomial(source.basis_exps(i)))
            .collect();
        let m = SparseMat::from_cols(target.dim(), cols);
        AlgMap::new(source, target, m)
    }

    /// Tensor product of two algebra maps.
    pub fn tensor(f: &AlgMap, g: &AlgMap) -> Result<Self> {
        let src = FinAlgebra::tensor(&f.source, &g.source)?;
        let tgt = FinAlgebra::tensor(&f.target, &g.target)?;
        let mut cols = Vec::with_capacity(src.dim());
        for i in 0..src.dim() {
            let exps = src.basis_exps(i);
            let nl = f.source.vars().len();
            let li = f.source.index_of(&exps[..nl]).unwrap();
            let ri = g.source.index_of(&exps[nl..]).unwrap();
            let lv = f.matrix.col(li);
            let rv = g.matrix.col(ri);
            let mut out: SparseVec = Vec::new();
            for (a, ca) in lv {
                for (b, cb) in rv {
                    let mut e = f.target.basis_exps(*a).to_vec();
                    e.extend(g.target.basis_exps(*b).iter().copied());
                    let idx = tgt.index_of(&e).unwrap();
                    out.push((idx, ca * cb));
                }
            }
            out.sort_by_key(|e| e.0);
            cols.push(out);
        }
        let m = SparseMat::from_cols(tgt.dim(), cols);
        AlgMap::new(src, tgt, m)
    }

    pub fn identity(a: &FinAlgebra) -> Self {
        AlgMap {
            source: a.clone(),
            target: a.clone(),
            matrix: SparseMat::identity(a.dim()),
        }
    }

    pub fn source(&self) -> &FinAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FinAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &SparseMat {
        &self.matrix
    }
}

/// The quotient algebra A/I with the projection map. The quotient carries
/// no presentation (its basis is the canonical coset basis).
pub fn quotient_algebra(a: &FinAlgebra, ideal: &IdealSpan) -> Result<(FinAlgebra, AlgMap)> {
    let q = Subquotient::quotient(a.dim(), ideal.span().clone())?;
    let dim = q.dim();
    // multiplication on coset representatives
    let mut mult = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for j in 0..dim {
            let prod = a.mul_vec(q.reps().col(i), q.reps().col(j));
            let c = q.coords(&prod)?;
            row.push(
                c.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect::<SparseVec>(),
            );
        }
        mult.push(row);
    }
    // reorder so that the coset of 1 is basis index 0
    let unit_coords = q.coords(&a.unit_vec())?;
    let unit_pos = unit_coords
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::Input("unit lies in the ideal".into()))?;
    if unit_coords[unit_pos] != Rat::one()
        || unit_coords.iter().enumerate().any(|(k, c)| k != unit_pos && !c.is_zero())
    {
        // normalize: replace rep basis so the unit coset is a basis vector
        return quotient_with_unit_basis(a, &q);
    }
    let mut order: Vec<usize> = (0..dim).collect();
    order.swap(0, unit_pos);
    let relabeled = permute_structure(&mult, &order);
    let labels: Vec<String> = (0..dim).map(|k| format!("q{k}")).collect();
    let alg = FinAlgebra::from_structure_constants(labels, relabeled)?;
    let proj = q.coords_mat(&SparseMat::identity(a.dim()))?;
    let proj = permute_rows(&proj, &order);
    let map = AlgMap::new(a.clone(), alg.clone(), proj)?;
    Ok((alg, map))
}

/// Fallback for the (rare) case where the coset of 1 is not a canonical
/// basis vector: change basis so it becomes one.
fn quotient_with_unit_basis(a: &FinAlgebra, q: &Subquotient) -> Result<(FinAlgebra, AlgMap)> {
    let dim = q.dim();
    let unit = q.coords(&a.unit_vec())?;
    // basis: unit coset followed by canonical cosets completing it
    let mut cols: Vec<SparseVec> = vec![unit
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()];
    let mut ech = Echelon::new(dim);
    ech.insert(cols[0].clone());
    for k in 0..dim {
        let v = unit_col(k);
        if ech.insert(v.clone()).is_some() {
            cols.push(v);
        }
    }
    let basis = SparseMat::from_cols(dim, cols); // new basis in old coords
    let new_reps = q.reps().matmul(&basis);
    let mut mult = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut row = Vec::with_capacity(dim);
        for j in 0..dim {
            let prod = a.mul_vec(new_reps.col(i), new_reps.col(j));
            let coset = q.coords(&prod)?;
            let coset_vec: SparseVec = coset
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            // express coset in the new basis
            let sol = crate::exactlin::solve(
                &basis,
                &SparseMat::from_cols(dim, vec![coset_vec]),
            )
            .map_err(|_| Error::Invariant("quotient basis change failed".into()))?;
            row.push(sol.col(0).clone());
        }
        mult.push(row);
    }
    let labels: Vec<String> = (0..dim).map(|k| format!("q{k}")).collect();
    let alg = FinAlgebra::from_structure_constants(labels, mult)?;
    let coset_of_all = q.coords_mat(&SparseMat::identity(a.dim()))?;
    let proj = crate::exactlin::solve(&basis, &coset_of_all)
        .map_err(|_| Error::Invariant("quotient basis change failed".into()))?;
    let map = AlgMap::new(a.clone(), alg.clone(), proj)?;
    Ok((alg, map))
}

fn permute_structure(mult: &[Vec<SparseVec>], order: &[usize]) -> Vec<Vec<SparseVec>> {
    let dim = order.len();
    let mut inv = vec![0usize; dim];
    for (new, &old) in order.iter().enumerate() {
        inv[old] = new;
    }
    let mut out = vec![vec![SparseVec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut v: SparseVec =
                mult[order[i]][order[j]].iter().map(|(k, c)| (inv[*k], c.clone())).collect();
            v.sort_by_key(|e| e.0);
            out[i][j] = v;
        }
    }
    out
}

fn permute_rows(m: &SparseMat, order: &[usize]) -> SparseMat {
    let mut inv = vec![0usize; order.len()];
    for (new, &old) in order.iter().enumerate() {
        inv[old] = new;
    }
    let mut cols = Vec::with_capacity(m.cols());
    for j in 0..m.cols() {
        let mut v: SparseVec = m.col(j).iter().map(|(r, c)| (inv[*r], c.clone())).collect();
        v.sort_by_key(|e| e.0);
        cols.push(v);
    }
    SparseMat::from_cols(order.len(), cols)
}

/// Specification of a truncation tower {S/I^m}.
#[derive(Clone)]
pub enum TowerSpec {
    /// S = Q[var], I = (f) with monic f (ascending coefficients).
    Univariate { var: String, relation: Vec<Rat> },
    /// S = Q[vars], I = monomial ideal.
    Monomial { vars: Vec<String>, gens: Vec<Vec<u32>> },
}

/// Levels m = 1..m_max of S/I^m with the canonical truncation surjections
/// (level m+1 -> level m), each verified to be a surjective algebra map.
#[derive(Clone)]
pub struct AlgebraTower {
    levels: Vec<FinAlgebra>,
    maps: Vec<AlgMap>,
}

impl AlgebraTower {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Level m (1-based): S/I^m.
    pub fn level(&self, m: usize) -> &FinAlgebra {
        &self.levels[m - 1]
    }

    /// Transition from level m+1 down to level m.
    pub fn transition(&self, m: usize) -> &AlgMap {
        &self.maps[m - 1]
    }
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    out
}

pub fn truncation_tower(spec: &TowerSpec, m_max: usize) -> Result<AlgebraTower> {
    assert!(m_max >= 1);
    let mut levels = Vec::with_capacity(m_max);
    match spec {
        TowerSpec::Univariate { var, relation } => {
            let mut fm = relation.clone();
            for _ in 0..m_max {
                levels.push(FinAlgebra::univariate_quotient(var, &fm)?);
                fm = poly_mul(&fm, relation);
            }
        }
        TowerSpec::Monomial { vars, gens } => {
            let mut power: Vec<Vec<u32>> = gens.clone();
            for _ in 0..m_max {
                levels.push(FinAlgebra::monomial_quotient(vars, &power)?);
                let mut next = Vec::new();
                for g in &power {
                    for h in gens {
                        let s: Vec<u32> = g.iter().zip(h).map(|(a, b)| a + b).collect();
                        if !next.contains(&s) {
                            next.push(s);
                        }
                    }
                }
                power = next;
            }
        }
    }
    let mut maps = Vec::with_capacity(m_max - 1);
    for m in 1..m_max {
        maps.push(AlgMap::by_monomial_reduction(
            levels[m].clone(),
            levels[m - 1].clone(),
        )?);
    }
    Ok(AlgebraTower { levels, maps })
}

/// The Kähler p-forms of a presented algebra: the free module on
/// basis-monomial x p-subset-of-variables symbols, modulo the relations
/// m * dg ∧ dx_T for ideal generators g, together with canonical coset
/// coordinates.
#[derive(Clone)]
pub struct OmegaModule {
    parent: FinAlgebra,
    p: usize,
    /// p-subsets of variable indices, lexicographic
    subsets: Vec<Vec<usize>>,
    ambient_labels: Vec<String>,
    space: Subquotient,
}

impl OmegaModule {
    pub fn parent(&self) -> &FinAlgebra {
        &self.parent
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn ambient_labels(&self) -> &[String] {
        &self.ambient_labels
    }

    pub fn space(&self) -> &Subquotient {
        &self.space
    }

    /// Ambient coordinate of basis monomial `i` times dx_{subset s}.
    pub fn ambient_index(&self, s: usize, i: usize) -> usize {
        s * self.parent.dim() + i
    }

    /// Coordinates of an ambient vector in the canonical quotient basis.
    pub fn coords(&self, v: &SparseVec) -> Result<Vec<Rat>> {
        self.space.coords(v)
    }
}

fn subsets_of(n: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < left {
                break;
            }
            cur.push(i);
            rec(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(0, n, p, &mut cur, &mut out);
    out
}

/// Sign and position of inserting variable `l` into the sorted subset `t`;
/// None if `l` already occurs.
fn insert_var(t: &[usize], l: usize) -> Option<(i64, Vec<usize>)> {
    if t.contains(&l) {
        return None;
    }
    let pos = t.iter().filter(|&&x| x < l).count();
    let mut out = t.to_vec();
    out.insert(pos, l);
    let sign = if pos % 2 == 0 { 1 } else { -1 };
    Some((sign, out))
}

/// The relation subspace of the ambient p-form module.
fn omega_relations(a: &FinAlgebra, p: usize, subsets: &[Vec<usize>]) -> Result<SparseMat> {
    let nv = a.vars().len();
    let dim = a.dim();
    let ambient = subsets.len() * dim;
    if p == 0 {
        return Ok(SparseMat::zero(ambient, 0));
    }
    let gens = a
        .relation_polys()
        .ok_or_else(|| Error::Input("Kähler forms require a presentation".into()))?;
    let sub_index: BTreeMap<&[usize], usize> =
        subsets.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let smaller = subsets_of(nv, p - 1);
    let mut cols = Vec::new();
    for g in &gens {
        // dg = sum_l (dg/dx_l) dx_l as polynomials
        let mut partials: Vec<Poly> = vec![Vec::new(); nv];
        for (c, exps) in g {
            for l in 0..nv {
                if exps[l] > 0 {
                    let mut e = exps.clone();
                    e[l] -= 1;
                    partials[l].push((c * rat(exps[l] as i64), e));
                }
            }
        }
        for m in 0..dim {
            for t in &smaller {
                let mut col: SparseVec = Vec::new();
                for (l, part) in partials.iter().enumerate() {
                    if part.is_empty() {
                        continue;
                    }
                    let Some((sign, full)) = insert_var(t, l) else { continue };
                    let s = sub_index[full.as_slice()];
                    // m * dg/dx_l reduced to normal form
                    let shifted: Poly = part
                        .iter()
                        .map(|(c, e)| {
                            let sum: Vec<u32> = e
                                .iter()
                                .zip(a.basis_exps(m))
                                .map(|(x, y)| x + y)
                                .collect();
                            (c.clone(), sum)
                        })
                        .collect();
                    let coef = a.reduce_poly(&shifted);
                    let term: SparseVec = coef
                        .iter()
                        .map(|(i, c)| (s * dim + i, c * rat(sign)))
                        .collect();
                    col = crate::exactlin::sparse_add_scaled(&col, &term, &Rat::one());
                }
                col.sort_by_key(|e| e.0);
                if !col.is_empty() {
                    cols.push(col);
                }
            }
        }
    }
    Ok(SparseMat::from_cols(ambient, cols))
}

/// The ambient de Rham differential d: (A ⊗ Λ^p) -> (A ⊗ Λ^{p+1}) on
/// monomial lifts (divisors of standard monomials are standard, so no
/// reduction occurs and d² = 0 exactly).
fn omega_ambient_d(
    a: &FinAlgebra,
    subsets_p: &[Vec<usize>],
    subsets_p1: &[Vec<usize>],
) -> SparseMat {
    let dim = a.dim();
    let rows = subsets_p1.len() * dim;
    let cols = subsets_p.len() * dim;
    let sub_index: BTreeMap<&[usize], usize> =
        subsets_p1.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let mut triplets = Vec::new();
    for (s, t) in subsets_p.iter().enumerate() {
        for i in 0..dim {
            for l in 0..a.vars().len() {
                let Some((c, div)) = a.basis_partial(i, l) else { continue };
                let Some((sign, full)) = insert_var(t, l) else { continue };
                let s1 = sub_index[full.as_slice()];
                triplets.push((s1 * dim + div, s * dim + i, c * rat(sign)));
            }
        }
    }
    SparseMat::from_triplets(rows, cols, triplets)
}

/// Builds Ω^p with its canonical coset basis. Ω^0 = A; Ω^p = 0 for p
/// beyond the number of variables.
pub fn kaehler(a: &FinAlgebra, p: usize) -> Result<OmegaModule> {
    let nv = a.vars().len();
    if a.presentation().is_none() {
        return Err(Error::Input("Kähler forms require a presentation".into()));
    }
    let subsets = subsets_of(nv, p);
    let dim = a.dim();
    let ambient_labels: Vec<String> = subsets
        .iter()
        .flat_map(|s| {
            (0..dim).map(move |i| {
                let ds: Vec<String> =
                    s.iter().map(|&l| format!("d{}", a.vars()[l])).collect();
                if ds.is_empty() {
                    a.label(i).to_string()
                } else {
                    format!("{}·{}", a.label(i), ds.join("∧"))
                }
            })
        })
        .collect();
    let rel = omega_relations(a, p, &subsets)?;
    let space = Subquotient::quotient(subsets.len() * dim, rel)?;
    Ok(OmegaModule { parent: a.clone(), p, subsets, ambient_labels, space })
}

/// The de Rham mixed complex (Ω_A, b = 0, B = d), genuinely bounded, plus
/// the underlying form modules. The differential on coset coordinates is
/// induced from the ambient d (well-definedness verified).
pub fn de_rham_mixed(a: &FinAlgebra) -> Result<(MixedComplex, Vec<OmegaModule>)> {
    let nv = a.vars().len();
    let omegas: Vec<OmegaModule> =
        (0..=nv).map(|p| kaehler(a, p)).collect::<Result<_>>()?;
    let dims: Vec<usize> = omegas.iter().map(|o| o.dim()).collect();
    let zero_diffs: Vec<SparseMat> = (1..=nv).map(|p| SparseMat::zero(dims[p - 1], dims[p])).collect();
    let complex = ChainComplex::new(0, dims.clone(), zero_diffs)?;
    let mut b_ops = Vec::with_capacity(nv + 1);
    for p in 0..=nv {
        if p == nv {
            b_ops.push(SparseMat::zero(0, dims[p]));
        } else {
            let amb = omega_ambient_d(a, omegas[p].subsets(), omegas[p + 1].subsets());
            let induced = crate::exactlin::induced_map(
                &amb,
                omegas[p].space(),
                omegas[p + 1].space(),
            )?;
            b_ops.push(induced);
        }
    }
    // pad the top: B out of Ω^nv is zero (already shaped 0 x dims[nv])
    let fixed: Vec<SparseMat> = b_ops
        .iter()
        .enumerate()
        .map(|(p, m)| {
            if p == nv {
                SparseMat::zero(0, dims[p])
            } else {
                m.clone()
            }
        })
        .collect();
    let mixed = MixedComplex::new(complex, fixed, true)?;
    Ok((mixed, omegas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ratio;

    pub(crate) fn lambda(m: usize) -> FinAlgebra {
        // Λ_m = Q[x]/(x^{m+1})
        let mut f = vec![Rat::zero(); m + 2];
        f[m + 1] = Rat::one();
        FinAlgebra::univariate_quotient("x", &f).unwrap()
    }

    #[test]
    fn univariate_cases() {
        assert_eq!(lambda(2).dim(), 3);
        // Q(i): x^2 + 1
        let qi =
            FinAlgebra::univariate_quotient("x", &[rat(1), rat(0), rat(1)]).unwrap();
        assert_eq!(qi.dim(), 2);
        // x*x = -1
        assert_eq!(qi.mul_basis(1, 1), &vec![(0, rat(-1))]);
        // x^2 - x: idempotent generator, Q x Q
        let qq =
            FinAlgebra::univariate_quotient("x", &[rat(0), rat(-1), rat(1)]).unwrap();
        assert_eq!(qq.mul_basis(1, 1), &vec![(1, rat(1))]);
        // Chinese remainder: e = x and 1 - x are orthogonal idempotents
        let e = vec![(1usize, rat(1))];
        let f = vec![(0usize, rat(1)), (1usize, rat(-1))];
        assert_eq!(qq.mul_vec(&e, &f), vec![]);
        assert!(FinAlgebra::univariate_quotient("x", &[rat(2)]).is_err());
        assert!(FinAlgebra::univariate_quotient("x", &[rat(1), rat(2)]).is_err());
    }

    #[test]
    fn monomial_cases() {
        let v = |s: &str| s.to_string();
        let a = FinAlgebra::monomial_quotient(&[v("x"), v("y")], &[vec![2, 0], vec![0, 2]])
            .unwrap();
        assert_eq!(a.dim(), 4);
        let b = FinAlgebra::monomial_quotient(&[v("x")], &[vec![4]]).unwrap();
        assert_eq!(b.dim(), 4);
        // (x, y; x^3, xy, y^2) -> basis 1, x, x^2, y
        let c = FinAlgebra::monomial_quotient(
            &[v("x"), v("y")],
            &[vec![3, 0], vec![1, 1], vec![0, 2]],
        )
        .unwrap();
        assert_eq!(c.dim(), 4);
        let labels: Vec<&str> = c.labels().iter().map(|s| s.as_str()).collect();
        assert_eq!(labels, vec!["1", "x", "y", "x^2"]);
        // infinite quotient flagged with the unbounded variable
        match FinAlgebra::monomial_quotient(&[v("x"), v("y")], &[vec![2, 0]]) {
            Err(Error::Infinite { var }) => assert_eq!(var, "y"),
            _ => panic!("expected finiteness error"),
        }
    }

    #[test]
    fn tensor_cases() {
        let a = lambda(2);
        let ground = FinAlgebra::ground();
        assert_eq!(FinAlgebra::tensor(&a, &ground).unwrap().dim(), 3);
        let l1 = lambda(1);
        let mut f = vec![Rat::zero(); 3];
        f[2] = Rat::one();
        let r = FinAlgebra::univariate_quotient("y", &f).unwrap(); // Q[y]/(y^2)
        assert_eq!(FinAlgebra::tensor(&l1, &r).unwrap().dim(), 4);
        // Λ_m ⊗ R has dim 2(m+1)
        for m in 1..=3 {
            assert_eq!(FinAlgebra::tensor(&lambda(m), &r).unwrap().dim(), 2 * (m + 1));
        }
        // shared variable rejected
        assert!(FinAlgebra::tensor(&l1, &lambda(2)).is_err());
    }

    #[test]
    fn truncation_tower_cases() {
        let t = truncation_tower(
            &TowerSpec::Univariate { var: "x".into(), relation: vec![rat(0), rat(1)] },
            3,
        )
        .unwrap();
        assert_eq!((t.level(1).dim(), t.level(2).dim(), t.level(3).dim()), (1, 2, 3));
        // (Q[x], (x^2)) level 2 = Q[x]/(x^4)
        let t2 = truncation_tower(
            &TowerSpec::Univariate {
                var: "x".into(),
                relation: vec![rat(0), rat(0), rat(1)],
            },
            2,
        )
        .unwrap();
        assert_eq!(t2.level(2).dim(), 4);
        // (Q[x,y], (x,y)) level 2: monomials of degree < 2
        let t3 = truncation_tower(
            &TowerSpec::Monomial {
                vars: vec!["x".into(), "y".into()],
                gens: vec![vec![1, 0], vec![0, 1]],
            },
            2,
        )
        .unwrap();
        assert_eq!(t3.level(2).dim(), 3);
    }

    #[test]
    fn nilpotency_cases() {
        let a = lambda(2);
        let x = vec![(1usize, rat(1))];
        let i = IdealSpan::generated(a.clone(), &[x]).unwrap();
        assert_eq!(i.nilpotency_index().unwrap(), 3);
        assert_eq!(IdealSpan::zero(a).nilpotency_index().unwrap(), 1);
        let v = |s: &str| s.to_string();
        let b = FinAlgebra::monomial_quotient(&[v("x"), v("y")], &[vec![2, 0], vec![0, 2]])
            .unwrap();
        let gens = vec![
            vec![(b.index_of(&[1, 0]).unwrap(), rat(1))],
            vec![(b.index_of(&[0, 1]).unwrap(), rat(1))],
        ];
        let j = IdealSpan::generated(b.clone(), &gens).unwrap();
        assert_eq!(j.nilpotency_index().unwrap(), 3);
        // unit ideal is not nilpotent
        let u = IdealSpan::generated(b, &[vec![(0usize, rat(1))]]).unwrap();
        assert!(matches!(u.nilpotency_index(), Err(Error::NonNilpotent)));
    }

    #[test]
    fn kaehler_cases() {
        let a = lambda(2);
        assert_eq!(kaehler(&a, 0).unwrap().dim(), 3); // Ω^0 = A
        // Ω^1 = Λ_2 dx / (3x^2 dx): dim 2
        assert_eq!(kaehler(&a, 1).unwrap().dim(), 2);
        assert_eq!(kaehler(&a, 2).unwrap().dim(), 0); // single variable
    }

    #[test]
    fn de_rham_cases() {
        let (m, om) = de_rham_mixed(&FinAlgebra::ground()).unwrap();
        assert_eq!(om.len(), 1);
        assert_eq!(m.underlying().dim(0), 1);

        let (m2, om2) = de_rham_mixed(&lambda(2)).unwrap();
        assert_eq!((om2[0].dim(), om2[1].dim()), (3, 2));
        // B = d: d(x^k) = k x^{k-1} dx
        assert_eq!(m2.b_map(0).cols(), 3);

        let v = |s: &str| s.to_string();
        let b = FinAlgebra::monomial_quotient(&[v("x"), v("y")], &[vec![2, 0], vec![0, 2]])
            .unwrap();
        let (_, om3) = de_rham_mixed(&b).unwrap();
        assert_eq!(om3.len(), 3);
        assert!(om3[2].dim() > 0);
    }

    #[test]
    fn leibniz_on_omega_zero_to_one() {
        // d(ab) = a db + b da on basis pairs, checked on Λ_2
        let a = lambda(2);
        let (mixed, om) = de_rham_mixed(&a).unwrap();
        let d0 = mixed.b_map(0);
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let prod = a.mul_basis(i, j);
                let lhs = d0.apply(prod);
                // a db: multiply the coefficient of db_j (ambient) by basis_i
                let mut amb: SparseVec = Vec::new();
                for &(bi, other) in &[(i, j), (j, i)] {
                    if let Some((c, div)) = a.basis_partial(bi, 0) {
                        let coef = a.mul_vec(&vec![(other, Rat::one())], &vec![(div, c)]);
                        amb = crate::exactlin::sparse_add_scaled(&amb, &coef, &Rat::one());
                    }
                }
                let rhs_coords = om[1].coords(&amb).unwrap();
                let rhs: SparseVec = rhs_coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                assert_eq!(lhs, rhs, "Leibniz fails on ({i}, {j})");
            }
        }
    }

    #[test]
    fn quotient_algebra_cases() {
        let a = lambda(2);
        let x = vec![(1usize, rat(1))];
        let i = IdealSpan::generated(a.clone(), &[x]).unwrap();
        let (q, proj) = quotient_algebra(&a, &i).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(proj.matrix().rows(), 1);
        let _ = ratio(1, 2);
    }
}
