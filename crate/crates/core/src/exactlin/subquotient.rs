use num::Zero;

use crate::error::{Error, Result};

use super::echelon::{Echelon, ExprEchelon};
use super::sparse::{add_scaled, SparseMat, SparseVec};
use super::{rat_str, Rat};

/// A presented quotient space Z/B inside an ambient Q-vector space:
/// `cycles` spans Z, `boundaries` spans B, with B contained in Z.
///
/// A canonical coset basis is selected deterministically: the reduced
/// echelon basis of Z is inserted, in ascending pivot order, on top of the
/// reduced echelon basis of B; the columns that enlarge the span become the
/// coset representatives.
#[derive(Clone)]
pub struct Subquotient {
    ambient: usize,
    cycles: SparseMat,
    boundaries: SparseMat,
    cycle_ech: Echelon,
    boundary_ech: Echelon,
    /// expression solver over [boundary basis | reps]: writes any cycle as
    /// boundary part + rep part, keeping the two kinds separate
    solver: ExprEchelon,
    /// number of boundary basis columns fed to the solver before the reps
    nb: usize,
    reps: SparseMat,
}

impl Subquotient {
    /// Builds Z/B, verifying span(boundaries) is contained in span(cycles).
    pub fn new(cycles: SparseMat, boundaries: SparseMat) -> Result<Self> {
        assert_eq!(cycles.rows(), boundaries.rows(), "ambient dimension mismatch");
        let ambient = cycles.rows();
        let cycle_ech = Echelon::of_matrix(&cycles);
        let boundary_ech = Echelon::of_matrix(&boundaries);
        for j in 0..boundaries.cols() {
            if !cycle_ech.contains(boundaries.col(j)) {
                return Err(Error::Containment { column: j });
            }
        }
        // canonical representatives: reduce the cycle RREF basis against the
        // boundary basis; the span-enlarging remainders are the reps
        let mut extended = boundary_ech.clone();
        let mut reps = Vec::new();
        let zbasis = cycle_ech.basis();
        for j in 0..zbasis.cols() {
            let (_, rem) = extended.reduce(zbasis.col(j));
            if extended.insert(rem.clone()).is_some() {
                reps.push(rem);
            }
        }
        let reps = SparseMat::from_cols(ambient, reps);
        debug_assert_eq!(reps.cols(), cycle_ech.rank() - boundary_ech.rank());
        // expression solver: boundary basis first, then the reps, so coset
        // coordinates of any cycle can be read off the rep coefficients
        let bbasis = boundary_ech.basis();
        let nb = bbasis.cols();
        let mut solver = ExprEchelon::new(ambient);
        for j in 0..nb {
            solver.insert(bbasis.col(j));
        }
        for j in 0..reps.cols() {
            let enlarged = solver.insert(reps.col(j));
            debug_assert!(enlarged);
        }
        Ok(Subquotient {
            ambient,
            cycles,
            boundaries,
            cycle_ech,
            boundary_ech,
            solver,
            nb,
            reps,
        })
    }

    /// The full space Q^n (cycles = identity, boundaries = 0).
    pub fn full(n: usize) -> Self {
        Subquotient::new(SparseMat::identity(n), SparseMat::zero(n, 0)).unwrap()
    }

    /// A quotient Q^n / span(boundaries).
    pub fn quotient(n: usize, boundaries: SparseMat) -> Result<Self> {
        Subquotient::new(SparseMat::identity(n), boundaries)
    }

    /// A subspace span(cycles) of Q^n with zero boundaries.
    pub fn subspace(cycles: SparseMat) -> Self {
        let n = cycles.rows();
        Subquotient::new(cycles, SparseMat::zero(n, 0)).unwrap()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn cycles(&self) -> &SparseMat {
        &self.cycles
    }

    pub fn boundaries(&self) -> &SparseMat {
        &self.boundaries
    }

    pub fn cycle_rank(&self) -> usize {
        self.cycle_ech.rank()
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundary_ech.rank()
    }

    /// Canonical coset representatives, one ambient column per basis coset.
    pub fn reps(&self) -> &SparseMat {
        &self.reps
    }

    /// Coordinates of the coset of `v` in the canonical basis. Errors if
    /// `v` does not lie in span(cycles).
    pub fn coords(&self, v: &SparseVec) -> Result<Vec<Rat>> {
        if !self.cycle_ech.contains(v) {
            return Err(Error::NotWellDefined { witness: fmt_vec(v) });
        }
        let expr = self.solver.express(v).expect("cycle lies in solver span");
        let mut out = vec![Rat::zero(); self.reps.cols()];
        for (idx, c) in expr {
            if idx >= self.nb {
                out[idx - self.nb] = c;
            }
        }
        Ok(out)
    }

    /// Applies `coords` to every column of `m`.
    pub fn coords_mat(&self, m: &SparseMat) -> Result<SparseMat> {
        let mut cols = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            let c = self.coords(m.col(j))?;
            let col: SparseVec = c
                .into_iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .collect();
            cols.push(col);
        }
        Ok(SparseMat::from_cols(self.dim(), cols))
    }

    /// Lifts coset coordinates back to a canonical ambient representative.
    pub fn lift(&self, coords: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (k, c) in coords {
            out = add_scaled(&out, self.reps.col(*k), c);
        }
        out
    }
}

fn fmt_vec(v: &SparseVec) -> String {
    let parts: Vec<String> = v.iter().map(|(i, c)| format!("{}*e{}", rat_str(c), i)).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Matrix of the map induced by `f` on canonical coset bases.
///
/// Verifies that `f` maps src cycles into dst cycles and src boundaries
/// into dst boundaries; either failure is reported with a witness.
pub fn induced_map(f: &SparseMat, src: &Subquotient, dst: &Subquotient) -> Result<SparseMat> {
    assert_eq!(f.cols(), src.ambient_dim());
    assert_eq!(f.rows(), dst.ambient_dim());
    for j in 0..src.boundaries.cols() {
        let w = f.apply(src.boundaries.col(j));
        if !dst.boundary_ech.contains(&w) {
            return Err(Error::NotWellDefined { witness: fmt_vec(src.boundaries.col(j)) });
        }
    }
    let zbasis = src.cycle_ech.basis();
    for j in 0..zbasis.cols() {
        let w = f.apply(zbasis.col(j));
        if !dst.cycle_ech.contains(&w) {
            return Err(Error::NotWellDefined { witness: fmt_vec(zbasis.col(j)) });
        }
    }
    let mut cols = Vec::with_capacity(src.dim());
    for k in 0..src.dim() {
        let w = f.apply(src.reps.col(k));
        let c = dst.coords(&w)?;
        let col: SparseVec = c.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        cols.push(col);
    }
    Ok(SparseMat::from_cols(dst.dim(), cols))
}
