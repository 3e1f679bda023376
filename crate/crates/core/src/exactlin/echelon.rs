use std::collections::BTreeMap;

use num::{One, Zero};

use super::sparse::{add_scaled, scale, SparseMat, SparseVec};
use super::Rat;

/// Reduced column-echelon basis of a column space.
///
/// Every basis column has leading entry 1 at its pivot row and zeros at the
/// pivot rows of all other basis columns, so the basis is the (unique)
/// reduced echelon basis of the span, independent of insertion order.
#[derive(Clone)]
pub struct Echelon {
    rows: usize,
    cols: Vec<SparseVec>,
    /// pivot row of each basis column
    pivots: Vec<usize>,
    /// pivot row -> basis column index
    by_row: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(rows: usize) -> Self {
        Echelon { rows, cols: Vec::new(), pivots: Vec::new(), by_row: BTreeMap::new() }
    }

    pub fn of_matrix(m: &SparseMat) -> Self {
        let mut e = Echelon::new(m.rows());
        for j in 0..m.cols() {
            e.insert(m.col(j).clone());
        }
        e
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// Writes `v` as (combination of basis columns) + remainder, where the
    /// remainder vanishes at every pivot row. Returns (coefficients per
    /// basis column, remainder). The remainder is canonical for the span.
    pub fn reduce(&self, v: &SparseVec) -> (Vec<Rat>, SparseVec) {
        let mut coeffs = vec![Rat::zero(); self.cols.len()];
        let mut rem = v.clone();
        // Because the basis is fully reduced, the coefficient at each pivot
        // row can be read off directly.
        loop {
            let mut changed = false;
            let hits: Vec<(usize, Rat)> = rem
                .iter()
                .filter_map(|(r, c)| self.by_row.get(r).map(|&k| (k, c.clone())))
                .collect();
            for (k, c) in hits {
                coeffs[k] += &c;
                let neg = -c;
                rem = add_scaled(&rem, &self.cols[k], &neg);
                changed = true;
            }
            if !changed {
                return (coeffs, rem);
            }
        }
    }

    /// Inserts `v` into the span. Returns the new basis column index if `v`
    /// enlarged the span, with the basis kept fully reduced.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let (_, rem) = self.reduce(&v);
        self.insert_reduced(rem)
    }

    fn insert_reduced(&mut self, rem: SparseVec) -> Option<usize> {
        if rem.is_empty() {
            return None;
        }
        let (pivot, lead) = (rem[0].0, rem[0].1.clone());
        let inv = Rat::one() / lead;
        let newcol = scale(&rem, &inv);
        // back-reduce existing columns at the new pivot row
        for col in self.cols.iter_mut() {
            if let Ok(i) = col.binary_search_by_key(&pivot, |e| e.0) {
                let c = -col[i].1.clone();
                *col = add_scaled(col, &newcol, &c);
            }
        }
        let idx = self.cols.len();
        self.cols.push(newcol);
        self.pivots.push(pivot);
        self.by_row.insert(pivot, idx);
        Some(idx)
    }

    /// True iff `v` lies in the span.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).1.is_empty()
    }

    /// Basis columns ordered by pivot row (the canonical order).
    pub fn basis(&self) -> SparseMat {
        let order: Vec<usize> = self.by_row.values().copied().collect();
        SparseMat::from_cols(self.rows, order.iter().map(|&k| self.cols[k].clone()).collect())
    }

    /// Basis column by internal index (insertion order of span-enlarging
    /// columns), fully reduced against the current basis.
    pub fn basis_col(&self, idx: usize) -> &SparseVec {
        &self.cols[idx]
    }

    pub fn pivot_rows(&self) -> Vec<usize> {
        self.by_row.keys().copied().collect()
    }

    /// Canonical kernel basis of `m` in free-variable form: one column per
    /// non-pivot column of `m`, carrying coefficient 1 at that column.
    pub fn kernel(m: &SparseMat) -> SparseMat {
        let mut ech = Echelon::new(m.rows());
        // expression of each basis column in terms of original columns
        let mut exprs: Vec<SparseVec> = Vec::new();
        let mut kernel_cols: Vec<SparseVec> = Vec::new();
        for j in 0..m.cols() {
            let (coeffs, rem) = ech.reduce(m.col(j));
            let mut expr: SparseVec = vec![(j, Rat::one())];
            for (k, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    let neg = -c.clone();
                    expr = add_scaled(&expr, &exprs[k], &neg);
                }
            }
            if rem.is_empty() {
                kernel_cols.push(expr);
            } else {
                let lead = rem[0].1.clone();
                let inv = Rat::one() / lead;
                let pivot = rem[0].0;
                let newcol = scale(&rem, &inv);
                let newexpr = scale(&expr, &inv);
                for (col, ex) in ech.cols.iter_mut().zip(exprs.iter_mut()) {
                    if let Ok(i) = col.binary_search_by_key(&pivot, |e| e.0) {
                        let c = -col[i].1.clone();
                        *col = add_scaled(col, &newcol, &c);
                        *ex = add_scaled(ex, &newexpr, &c);
                    }
                }
                let idx = ech.cols.len();
                ech.cols.push(newcol);
                ech.pivots.push(pivot);
                ech.by_row.insert(pivot, idx);
                exprs.push(newexpr);
            }
        }
        SparseMat::from_cols(m.cols(), kernel_cols)
    }

    /// Solves `a * x = b` columnwise, expressing each column of `b` as a
    /// combination of the columns of `a` (coefficients indexed by original
    /// column position of `a`). Errors with the offending column index of
    /// `b` if it lies outside the column span of `a`.
    pub fn solve(a: &SparseMat, b: &SparseMat) -> Result<SparseMat, usize> {
        assert_eq!(a.rows(), b.rows());
        let mut ech = ExprEchelon::new(a.rows());
        for j in 0..a.cols() {
            ech.insert(a.col(j));
        }
        let mut out = Vec::with_capacity(b.cols());
        for j in 0..b.cols() {
            out.push(ech.express(b.col(j)).ok_or(j)?);
        }
        Ok(SparseMat::from_cols(a.cols(), out))
    }

    /// Solves `basis * x = v` for each column of `v` against the canonical
    /// (pivot-row-sorted) reduced basis; errors if some column is outside
    /// the span (returns the offending column index).
    pub fn solve_in_span(&self, v: &SparseMat) -> Result<SparseMat, usize> {
        assert_eq!(v.rows(), self.rows);
        // coefficients are indexed by internal column order; re-express in
        // canonical (pivot-row-sorted) order to match `basis()`.
        let order: Vec<usize> = self.by_row.values().copied().collect();
        let mut inv_order = vec![0usize; order.len()];
        for (canonical, &internal) in order.iter().enumerate() {
            inv_order[internal] = canonical;
        }
        let mut cols = Vec::with_capacity(v.cols());
        for j in 0..v.cols() {
            let (coeffs, rem) = self.reduce(v.col(j));
            if !rem.is_empty() {
                return Err(j);
            }
            let mut col: SparseVec = coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (inv_order[k], c))
                .collect();
            col.sort_by_key(|e| e.0);
            cols.push(col);
        }
        Ok(SparseMat::from_cols(self.rank(), cols))
    }
}

/// An echelon basis that remembers how each internal basis column is
/// expressed in the originally inserted columns, so vectors in the span can
/// be written in terms of those original columns.
///
/// Unlike reading coefficients off a back-reduced [`Echelon`] (whose basis
/// columns drift away from the inserted generators), the tracked
/// expressions stay valid under back-reduction.
#[derive(Clone)]
pub struct ExprEchelon {
    ech: Echelon,
    /// expression of each internal basis column in original column indices
    exprs: Vec<SparseVec>,
    inserted: usize,
}

impl ExprEchelon {
    pub fn new(rows: usize) -> Self {
        ExprEchelon { ech: Echelon::new(rows), exprs: Vec::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    /// Inserts the next original column; returns true iff it enlarged the
    /// span. Dependent columns still consume an original index.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let j = self.inserted;
        self.inserted += 1;
        let (coeffs, rem) = self.ech.reduce(v);
        if rem.is_empty() {
            return false;
        }
        let mut expr: SparseVec = vec![(j, Rat::one())];
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let neg = -c.clone();
                expr = add_scaled(&expr, &self.exprs[k], &neg);
            }
        }
        let lead = rem[0].1.clone();
        let inv = Rat::one() / lead;
        let pivot = rem[0].0;
        let newcol = scale(&rem, &inv);
        let newexpr = scale(&expr, &inv);
        for (col, ex) in self.ech.cols.iter_mut().zip(self.exprs.iter_mut()) {
            if let Ok(i) = col.binary_search_by_key(&pivot, |e| e.0) {
                let c = -col[i].1.clone();
                *col = add_scaled(col, &newcol, &c);
                *ex = add_scaled(ex, &newexpr, &c);
            }
        }
        let idx = self.ech.cols.len();
        self.ech.cols.push(newcol);
        self.ech.pivots.push(pivot);
        self.ech.by_row.insert(pivot, idx);
        self.exprs.push(newexpr);
        true
    }

    /// Writes `v` as a combination of the original columns (sparse, indexed
    /// by insertion order); None if `v` is outside the span.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let (coeffs, rem) = self.ech.reduce(v);
        if !rem.is_empty() {
            return None;
        }
        let mut x: SparseVec = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                x = add_scaled(&x, &self.exprs[k], c);
            }
        }
        Some(x)
    }
}
