use std::fmt;

use num::Zero;

use super::{rat_str, Rat};

/// Sparse vector: (index, value) pairs, sorted by index, no stored zeros.
pub type SparseVec = Vec<(usize, Rat)>;

/// `out = a + c * b` on sparse vectors.
pub(crate) fn add_scaled(a: &SparseVec, b: &SparseVec, c: &Rat) -> SparseVec {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = c * &b[j].1;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub(crate) fn scale(a: &SparseVec, c: &Rat) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, v)| (*i, v * c)).collect()
}

/// Immutable sparse rational matrix in column-major form.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMat {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let cols = (0..n).map(|i| vec![(i, Rat::from_integer(1.into()))]).collect();
        SparseMat { rows: n, cols }
    }

    pub fn from_triplets<I: IntoIterator<Item = (usize, usize, Rat)>>(
        rows: usize,
        cols: usize,
        it: I,
    ) -> Self {
        let mut data: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); cols];
        for (r, c, v) in it {
            assert!(r < rows && c < cols, "triplet index out of range");
            if !v.is_zero() {
                data[c].push((r, v));
            }
        }
        let cols = data
            .into_iter()
            .map(|mut col| {
                col.sort_by_key(|e| e.0);
                let mut out: SparseVec = Vec::with_capacity(col.len());
                for (r, v) in col {
                    match out.last_mut() {
                        Some((lr, lv)) if *lr == r => *lv += v,
                        _ => out.push((r, v)),
                    }
                }
                out.retain(|(_, v)| !v.is_zero());
                out
            })
            .collect();
        SparseMat { rows, cols }
    }

    pub fn from_cols(rows: usize, cols: Vec<SparseVec>) -> Self {
        for c in &cols {
            debug_assert!(c.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(c.iter().all(|(r, v)| *r < rows && !v.is_zero()));
        }
        SparseMat { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        self.cols[c]
            .binary_search_by_key(&r, |e| e.0)
            .map(|i| self.cols[c][i].1.clone())
            .unwrap_or_else(|_| Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn transpose(&self) -> SparseMat {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                data[*r].push((j, v.clone()));
            }
        }
        // entries pushed in increasing column order per row already
        SparseMat { rows: self.cols.len(), cols: data }
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        assert!(v.last().map_or(true, |e| e.0 < self.cols()));
        let mut acc: SparseVec = Vec::new();
        for (j, c) in v {
            acc = add_scaled(&acc, &self.cols[*j], c);
        }
        acc
    }

    pub fn matmul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.cols(), other.rows(), "shape mismatch in matmul");
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        SparseMat { rows: self.rows, cols }
    }

    pub fn add(&self, other: &SparseMat) -> SparseMat {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        let one = Rat::from_integer(1.into());
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| add_scaled(a, b, &one))
            .collect();
        SparseMat { rows: self.rows, cols }
    }

    pub fn sub(&self, other: &SparseMat) -> SparseMat {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        let neg = -Rat::from_integer(1.into());
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| add_scaled(a, b, &neg))
            .collect();
        SparseMat { rows: self.rows, cols }
    }

    pub fn scale(&self, c: &Rat) -> SparseMat {
        SparseMat { rows: self.rows, cols: self.cols.iter().map(|v| scale(v, c)).collect() }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        SparseMat { rows: self.rows, cols }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> SparseMat {
        SparseMat { rows: self.rows, cols: idx.iter().map(|&j| self.cols[j].clone()).collect() }
    }

    /// Dense row dump, for reports and tests.
    pub fn to_dense(&self) -> Vec<Vec<Rat>> {
        let mut out = vec![vec![Rat::zero(); self.cols()]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (r, v) in col {
                out[*r][j] = v.clone();
            }
        }
        out
    }
}

impl fmt::Debug for SparseMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMat {}x{} [", self.rows, self.cols())?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(rat_str).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}
