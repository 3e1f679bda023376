//! Bounded chain complexes, chain maps, mixed complexes, Connes-type
//! bicomplex totalizations, and strict towers with pro-zero /
//! pro-isomorphism certification.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::{induced_map, kernel_basis, rank, solve, SparseMat, Subquotient};

/// A bounded chain complex of Q-vector spaces. `d(n): C_n -> C_{n-1}`;
/// dimensions and differentials outside `[lo, hi]` are zero.
#[derive(Clone)]
pub struct ChainComplex {
    lo: i64,
    hi: i64,
    dims: BTreeMap<i64, usize>,
    d: BTreeMap<i64, SparseMat>,
}

impl ChainComplex {
    /// Builds a complex from dimensions `dims[i] = dim C_{lo+i}` and
    /// differentials `d[i]: C_{lo+i+1} -> C_{lo+i}`. Verifies shapes and
    /// d^2 = 0.
    pub fn new(lo: i64, dims: Vec<usize>, diffs: Vec<SparseMat>) -> Result<Self> {
        assert!(!dims.is_empty());
        assert_eq!(diffs.len() + 1, dims.len(), "need one differential per adjacent pair");
        let hi = lo + dims.len() as i64 - 1;
        let mut dmap = BTreeMap::new();
        let mut dimmap = BTreeMap::new();
        for (i, &dim) in dims.iter().enumerate() {
            dimmap.insert(lo + i as i64, dim);
        }
        for (i, m) in diffs.into_iter().enumerate() {
            let n = lo + i as i64 + 1;
            if m.rows() != dims[i] || m.cols() != dims[i + 1] {
                return Err(Error::Invariant(format!(
                    "differential in degree {n} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[i],
                    dims[i + 1]
                )));
            }
            dmap.insert(n, m);
        }
        let c = ChainComplex { lo, hi, dims: dimmap, d: dmap };
        for n in lo..hi {
            if !c.d(n + 1).matmul(&c.d(n + 2)).is_zero() {
                return Err(Error::Invariant(format!("d^2 != 0 at degree {}", n + 2)));
            }
        }
        Ok(c)
    }

    /// The zero complex.
    pub fn zero() -> Self {
        ChainComplex::new(0, vec![0], vec![]).unwrap()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    /// The differential `C_n -> C_{n-1}` (zero matrix outside the range).
    pub fn d(&self, n: i64) -> SparseMat {
        self.d
            .get(&n)
            .cloned()
            .unwrap_or_else(|| SparseMat::zero(self.dim(n - 1), self.dim(n)))
    }
}

/// A degreewise linear map commuting with the differentials.
#[derive(Clone)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    maps: BTreeMap<i64, SparseMat>,
}

impl ChainMap {
    /// Builds a chain map from `maps[i]: C^src_{lo+i} -> C^tgt_{lo+i}`,
    /// verifying shapes and commutation with the differentials.
    pub fn new(
        source: ChainComplex,
        target: ChainComplex,
        lo: i64,
        maps: Vec<SparseMat>,
    ) -> Result<Self> {
        let mut mm = BTreeMap::new();
        for (i, m) in maps.into_iter().enumerate() {
            let n = lo + i as i64;
            if m.rows() != target.dim(n) || m.cols() != source.dim(n) {
                return Err(Error::Invariant(format!(
                    "chain map in degree {n} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(n),
                    source.dim(n)
                )));
            }
            mm.insert(n, m);
        }
        let f = ChainMap { source, target, maps: mm };
        let lo = f.source.lo.min(f.target.lo);
        let hi = f.source.hi.max(f.target.hi);
        for n in lo..=hi + 1 {
            let lhs = f.target.d(n).matmul(&f.map(n));
            let rhs = f.map(n - 1).matmul(&f.source.d(n));
            if lhs != rhs {
                return Err(Error::Invariant(format!(
                    "chain map does not commute with d in degree {n}"
                )));
            }
        }
        Ok(f)
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let maps = (c.lo..=c.hi).map(|n| SparseMat::identity(c.dim(n))).collect();
        ChainMap::new(c.clone(), c.clone(), c.lo, maps).unwrap()
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    /// The component in degree `n` (zero matrix where unspecified).
    pub fn map(&self, n: i64) -> SparseMat {
        self.maps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| SparseMat::zero(self.target.dim(n), self.source.dim(n)))
    }

    /// Degreewise composition `self ∘ g`.
    pub fn compose(&self, g: &ChainMap) -> Result<ChainMap> {
        let lo = g.source.lo;
        let maps = (lo..=g.source.hi).map(|n| self.map(n).matmul(&g.map(n))).collect();
        ChainMap::new(g.source.clone(), self.target.clone(), lo, maps)
    }
}

/// A chain complex with differential `b` together with a degree +1 operator
/// `B` satisfying B^2 = 0 and bB + Bb = 0.
#[derive(Clone)]
pub struct MixedComplex {
    underlying: ChainComplex,
    b_op: BTreeMap<i64, SparseMat>,
    /// true iff the complex is genuinely bounded above (not a truncation of
    /// an unbounded complex), so HN/HP totalizations are meaningful
    genuinely_bounded: bool,
}

impl MixedComplex {
    /// Builds a mixed complex from `b_ops[i]: C_{lo+i} -> C_{lo+i+1}`.
    /// Verifies B^2 = 0 and bB + Bb = 0 within the stored range.
    pub fn new(
        underlying: ChainComplex,
        b_ops: Vec<SparseMat>,
        genuinely_bounded: bool,
    ) -> Result<Self> {
        let lo = underlying.lo;
        let mut bm = BTreeMap::new();
        for (i, m) in b_ops.into_iter().enumerate() {
            let n = lo + i as i64;
            if m.rows() != underlying.dim(n + 1) || m.cols() != underlying.dim(n) {
                return Err(Error::Invariant(format!(
                    "B in degree {n} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    underlying.dim(n + 1),
                    underlying.dim(n)
                )));
            }
            bm.insert(n, m);
        }
        let mc = MixedComplex { underlying, b_op: bm, genuinely_bounded };
        let (lo, hi) = (mc.underlying.lo, mc.underlying.hi);
        for n in lo..hi {
            if !mc.b_map(n + 1).matmul(&mc.b_map(n)).is_zero() {
                return Err(Error::Invariant(format!("B^2 != 0 at degree {n}")));
            }
            let anti = mc
                .underlying
                .d(n + 1)
                .matmul(&mc.b_map(n))
                .add(&mc.b_map(n - 1).matmul(&mc.underlying.d(n)));
            if !anti.is_zero() {
                return Err(Error::Invariant(format!("bB + Bb != 0 at degree {n}")));
            }
        }
        Ok(mc)
    }

    pub fn underlying(&self) -> &ChainComplex {
        &self.underlying
    }

    /// The degree-raising operator `B: C_n -> C_{n+1}` (zero where absent).
    pub fn b_map(&self, n: i64) -> SparseMat {
        self.b_op
            .get(&n)
            .cloned()
            .unwrap_or_else(|| SparseMat::zero(self.underlying.dim(n + 1), self.underlying.dim(n)))
    }

    pub fn genuinely_bounded(&self) -> bool {
        self.genuinely_bounded
    }
}

/// `ker d(n) / im d(n+1)` with canonical basis.
pub fn homology(c: &ChainComplex, n: i64) -> Subquotient {
    let cycles = kernel_basis(&c.d(n));
    let boundaries = c.d(n + 1);
    Subquotient::new(cycles, boundaries).expect("d^2 = 0 guarantees containment")
}

/// Matrix of `H_n(f)` in the canonical homology bases.
pub fn induced_on_homology(f: &ChainMap, n: i64) -> Result<SparseMat> {
    let src = homology(f.source(), n);
    let dst = homology(f.target(), n);
    induced_map(&f.map(n), &src, &dst)
}

/// Degreewise kernels of a degreewise-surjective chain map, with the
/// restricted differentials and the inclusion into the source.
pub fn kernel_complex(f: &ChainMap) -> Result<(ChainComplex, ChainMap)> {
    let src = f.source();
    let (lo, hi) = (src.lo, src.hi);
    let mut kernels: Vec<SparseMat> = Vec::new();
    for n in lo..=hi {
        let m = f.map(n);
        if rank(&m) != f.target().dim(n) {
            return Err(Error::NotSurjective { degree: n });
        }
        kernels.push(kernel_basis(&m));
    }
    let dims: Vec<usize> = kernels.iter().map(|k| k.cols()).collect();
    let mut diffs = Vec::new();
    for i in 0..kernels.len() - 1 {
        let n = lo + i as i64 + 1;
        let imgs = src.d(n).matmul(&kernels[i + 1]);
        let dk = solve(&kernels[i], &imgs).map_err(|col| {
            Error::Invariant(format!(
                "kernel not closed under d in degree {n} at column {col}"
            ))
        })?;
        diffs.push(dk);
    }
    let kc = ChainComplex::new(lo, dims, diffs)?;
    let incl = ChainMap::new(kc.clone(), src.clone(), lo, kernels)?;
    Ok((kc, incl))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TotalMode {
    HC,
    HN,
    HP,
}

/// A finite totalization of the (b, B) double complex, with the layout of
/// its components: in total degree k, column j carries C_{k-2j}.
pub struct ConnesTotal {
    pub complex: ChainComplex,
    /// total degree -> list of (column j, inner degree q, offset in Tot_k)
    pub layout: BTreeMap<i64, Vec<(i64, i64, usize)>>,
}

/// Totalizes the (b, B) double complex of `m` near degree `n`.
///
/// Mode HC keeps columns 0 ..= ceil((n+1)/2)+1 — a genuine subcomplex,
/// since b preserves the column and B lowers it — which suffices for the
/// homology in degrees n-1, n, n+1. Modes HN (columns j <= 0) and HP (all
/// columns) require a genuinely bounded mixed complex.
pub fn connes_total(m: &MixedComplex, mode: TotalMode, n: i64) -> Result<ConnesTotal> {
    connes_total_cols(m, mode, n, hc_jmax(n))
}

/// Default HC column truncation bound for degree `n`.
pub fn hc_jmax(n: i64) -> i64 {
    (n + 2).div_euclid(2) + 1
}

/// As [`connes_total`] with an explicit HC column bound (for the
/// truncation-stability check).
pub fn connes_total_cols(
    m: &MixedComplex,
    mode: TotalMode,
    n: i64,
    jmax: i64,
) -> Result<ConnesTotal> {
    if mode != TotalMode::HC && !m.genuinely_bounded() {
        return Err(Error::Input(
            "HN/HP totalization requires a genuinely bounded mixed complex; \
             for a nilpotent ideal use the relative cyclic route (relative HN \
             is relative HC shifted by one)"
                .into(),
        ));
    }
    let (qlo, qhi) = (m.underlying().lo, m.underlying().hi);
    let (klo, khi) = match mode {
        TotalMode::HC => ((n - 2).max(0), n + 2),
        _ => (n - 2, n + 2),
    };
    let mut layout: BTreeMap<i64, Vec<(i64, i64, usize)>> = BTreeMap::new();
    let mut dims: Vec<usize> = Vec::new();
    for k in klo..=khi {
        let mut comps = Vec::new();
        let mut off = 0usize;
        // ascending column index j; q = k - 2j must lie in [qlo, qhi]
        let j_from = (k - qhi).div_euclid(2) + i64::from((k - qhi).rem_euclid(2) != 0);
        let j_to = (k - qlo).div_euclid(2);
        for j in j_from..=j_to {
            let keep = match mode {
                TotalMode::HC => (0..=jmax).contains(&j),
                TotalMode::HN => j <= 0,
                TotalMode::HP => true,
            };
            if !keep {
                continue;
            }
            let q = k - 2 * j;
            let dim = m.underlying().dim(q);
            if dim == 0 {
                continue;
            }
            comps.push((j, q, off));
            off += dim;
        }
        layout.insert(k, comps);
        dims.push(off);
    }
    let mut diffs = Vec::new();
    for k in klo + 1..=khi {
        let rows = dims[(k - 1 - klo) as usize];
        let cols = dims[(k - klo) as usize];
        let tgt: BTreeMap<i64, usize> =
            layout[&(k - 1)].iter().map(|&(j, _, o)| (j, o)).collect();
        let mut triplets = Vec::new();
        for &(j, q, off) in &layout[&k] {
            // b: column j, inner degree q -> q-1
            if let Some(&to) = tgt.get(&j) {
                let blk = m.underlying().d(q);
                for c in 0..blk.cols() {
                    for (r, v) in blk.col(c) {
                        triplets.push((to + r, off + c, v.clone()));
                    }
                }
            }
            // B: column j -> j-1, inner degree q -> q+1
            if let Some(&to) = tgt.get(&(j - 1)) {
                let blk = m.b_map(q);
                for c in 0..blk.cols() {
                    for (r, v) in blk.col(c) {
                        triplets.push((to + r, off + c, v.clone()));
                    }
                }
            }
        }
        diffs.push(SparseMat::from_triplets(rows, cols, triplets));
    }
    let complex = ChainComplex::new(klo, dims, diffs)?;
    Ok(ConnesTotal { complex, layout })
}

/// A tower of subquotients, levels m = 1, 2, ..., with transition matrices
/// in the canonical bases: `transitions[i]` maps level i+2 to level i+1.
#[derive(Clone)]
pub struct SubqTower {
    levels: Vec<Subquotient>,
    transitions: Vec<SparseMat>,
}

impl SubqTower {
    pub fn new(levels: Vec<Subquotient>, transitions: Vec<SparseMat>) -> Self {
        assert_eq!(transitions.len() + 1, levels.len());
        for (i, t) in transitions.iter().enumerate() {
            assert_eq!(t.rows(), levels[i].dim());
            assert_eq!(t.cols(), levels[i + 1].dim());
        }
        SubqTower { levels, transitions }
    }

    /// A tower of plain vector spaces given by dimension.
    pub fn from_dims(dims: Vec<usize>, transitions: Vec<SparseMat>) -> Self {
        SubqTower::new(dims.into_iter().map(Subquotient::full).collect(), transitions)
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Level m (1-based).
    pub fn level(&self, m: usize) -> &Subquotient {
        &self.levels[m - 1]
    }

    /// Transition from level m+1 down to level m (1-based m).
    pub fn transition(&self, m: usize) -> &SparseMat {
        &self.transitions[m - 1]
    }
}

/// A levelwise map of towers, strict: every square commutes exactly.
#[derive(Clone)]
pub struct TowerMap {
    source: SubqTower,
    target: SubqTower,
    maps: Vec<SparseMat>,
}

impl TowerMap {
    pub fn new(source: SubqTower, target: SubqTower, maps: Vec<SparseMat>) -> Result<Self> {
        assert_eq!(maps.len(), source.len());
        assert_eq!(source.len(), target.len());
        for (i, f) in maps.iter().enumerate() {
            assert_eq!(f.rows(), target.levels[i].dim());
            assert_eq!(f.cols(), source.levels[i].dim());
        }
        for m in 1..source.len() {
            let lhs = maps[m - 1].matmul(source.transition(m));
            let rhs = target.transition(m).matmul(&maps[m]);
            if lhs != rhs {
                return Err(Error::NotStrict { level: m });
            }
        }
        Ok(TowerMap { source, target, maps })
    }

    pub fn source(&self) -> &SubqTower {
        &self.source
    }

    pub fn target(&self) -> &SubqTower {
        &self.target
    }

    pub fn map(&self, m: usize) -> &SparseMat {
        &self.maps[m - 1]
    }
}

/// Witnesses that a tower is pro-zero: for each level m, the least j_m with
/// the composite transition j_m -> m equal to zero (j_m = m is allowed when
/// level m is itself zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProZeroResult {
    Certified { witnesses: Vec<(usize, usize)> },
    /// No witness within the search bound at the reported level; this is
    /// inconclusive, not a refutation.
    Inconclusive { level: usize, search_bound: usize },
}

impl ProZeroResult {
    pub fn is_certified(&self) -> bool {
        matches!(self, ProZeroResult::Certified { .. })
    }
}

/// Searches, for each level m, the least j <= search_bound whose composite
/// transition to level m is the zero matrix. The tower must store enough
/// levels for the witnesses to exist; see
/// [`pro_zero_certificate_upto`] to certify only an initial segment.
pub fn pro_zero_certificate(t: &SubqTower, search_bound: usize) -> ProZeroResult {
    pro_zero_certificate_upto(t, t.len(), search_bound)
}

/// As [`pro_zero_certificate`], but only levels 1..=m_max need witnesses;
/// the levels above m_max serve as search room.
pub fn pro_zero_certificate_upto(
    t: &SubqTower,
    m_max: usize,
    search_bound: usize,
) -> ProZeroResult {
    let mut witnesses = Vec::new();
    for m in 1..=m_max.min(t.len()) {
        let mut acc = SparseMat::identity(t.level(m).dim());
        let mut found = None;
        let top = search_bound.min(t.len());
        for j in m..=top {
            if j > m {
                acc = acc.matmul(t.transition(j - 1));
            }
            if acc.is_zero() {
                found = Some(j);
                break;
            }
        }
        match found {
            Some(j) => witnesses.push((m, j)),
            None => return ProZeroResult::Inconclusive { level: m, search_bound },
        }
    }
    ProZeroResult::Certified { witnesses }
}

/// Pro-zero certificates for the kernel and cokernel towers of a strict
/// tower map: both certified means the map is a pro-isomorphism up to the
/// searched bounds.
#[derive(Clone, Debug)]
pub struct ProIsoResult {
    pub kernel: ProZeroResult,
    pub cokernel: ProZeroResult,
}

impl ProIsoResult {
    pub fn is_certified(&self) -> bool {
        self.kernel.is_certified() && self.cokernel.is_certified()
    }
}

/// The kernel tower of a strict tower map (levelwise kernels with the
/// restricted transitions).
pub fn kernel_tower(f: &TowerMap) -> Result<SubqTower> {
    let n = f.source.len();
    let kernels: Vec<SparseMat> = (1..=n).map(|m| kernel_basis(f.map(m))).collect();
    let mut trans = Vec::new();
    for m in 1..n {
        let imgs = f.source.transition(m).matmul(&kernels[m]);
        let t = solve(&kernels[m - 1], &imgs).map_err(|col| {
            Error::Invariant(format!(
                "transition does not preserve kernels at level {m}, column {col}"
            ))
        })?;
        trans.push(t);
    }
    Ok(SubqTower::from_dims(kernels.iter().map(|k| k.cols()).collect(), trans))
}

/// The cokernel tower of a strict tower map (levelwise cokernels with the
/// induced transitions).
pub fn cokernel_tower(f: &TowerMap) -> Result<SubqTower> {
    let n = f.source.len();
    let mut levels = Vec::new();
    for m in 1..=n {
        levels.push(Subquotient::quotient(f.target.level(m).dim(), f.map(m).clone())?);
    }
    let mut trans = Vec::new();
    for m in 1..n {
        trans.push(induced_map(f.target.transition(m), &levels[m], &levels[m - 1])?);
    }
    Ok(SubqTower::new(levels, trans))
}

/// Certifies a strict tower map as a pro-isomorphism by certifying its
/// kernel and cokernel towers pro-zero.
pub fn pro_iso_certificate(f: &TowerMap, search_bound: usize) -> Result<ProIsoResult> {
    pro_iso_certificate_upto(f, f.source().len(), search_bound)
}

/// As [`pro_iso_certificate`], requiring witnesses only for levels
/// 1..=m_max.
pub fn pro_iso_certificate_upto(
    f: &TowerMap,
    m_max: usize,
    search_bound: usize,
) -> Result<ProIsoResult> {
    let ker = kernel_tower(f)?;
    let coker = cokernel_tower(f)?;
    Ok(ProIsoResult {
        kernel: pro_zero_certificate_upto(&ker, m_max, search_bound),
        cokernel: pro_zero_certificate_upto(&coker, m_max, search_bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    fn two_step() -> ChainComplex {
        // C_1 = Q^2 --d--> C_0 = Q^2 with d = [[0,1],[0,0]]
        let d = SparseMat::from_triplets(2, 2, [(0, 1, rat(1))]);
        ChainComplex::new(0, vec![2, 2], vec![d]).unwrap()
    }

    #[test]
    fn homology_identity_and_zero_differential() {
        // 0 -> Q -> Q -> 0 with d = identity: homology vanishes
        let c = ChainComplex::new(0, vec![1, 1], vec![SparseMat::identity(1)]).unwrap();
        assert_eq!(homology(&c, 0).dim(), 0);
        assert_eq!(homology(&c, 1).dim(), 0);
        // zero differentials: H_n = C_n
        let z = ChainComplex::new(0, vec![2, 3], vec![SparseMat::zero(2, 3)]).unwrap();
        assert_eq!(homology(&z, 0).dim(), 2);
        assert_eq!(homology(&z, 1).dim(), 3);
    }

    #[test]
    fn homology_two_step() {
        let c = two_step();
        assert_eq!(homology(&c, 0).dim(), 1);
        assert_eq!(homology(&c, 1).dim(), 1);
    }

    #[test]
    fn d_squared_checked() {
        // two identical identity differentials: d^2 = id != 0
        let bad = ChainComplex::new(
            0,
            vec![1, 1, 1],
            vec![SparseMat::identity(1), SparseMat::identity(1)],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn induced_identity_and_zero() {
        let c = two_step();
        let id = ChainMap::identity(&c);
        assert_eq!(induced_on_homology(&id, 0).unwrap(), SparseMat::identity(1));
        let zero =
            ChainMap::new(c.clone(), c.clone(), 0, vec![SparseMat::zero(2, 2); 2]).unwrap();
        assert!(induced_on_homology(&zero, 1).unwrap().is_zero());
    }

    #[test]
    fn kernel_complex_cases() {
        let c = two_step();
        // f = identity -> zero kernel complex
        let (k, _) = kernel_complex(&ChainMap::identity(&c)).unwrap();
        assert_eq!(k.dim(0) + k.dim(1), 0);
        // f: C -> 0 -> C itself
        let zero = ChainComplex::new(0, vec![0, 0], vec![SparseMat::zero(0, 0)]).unwrap();
        let f =
            ChainMap::new(c.clone(), zero, 0, vec![SparseMat::zero(0, 2); 2]).unwrap();
        let (k, _) = kernel_complex(&f).unwrap();
        assert_eq!((k.dim(0), k.dim(1)), (2, 2));
        assert_eq!(homology(&k, 0).dim(), 1);
        // non-surjective map reports the degree
        let g = ChainMap::new(
            c.clone(),
            c.clone(),
            0,
            vec![SparseMat::zero(2, 2), SparseMat::zero(2, 2)],
        )
        .unwrap();
        match kernel_complex(&g) {
            Err(Error::NotSurjective { degree }) => assert_eq!(degree, 0),
            _ => panic!("expected non-surjectivity error"),
        }
    }

    fn ground_field_mixed() -> MixedComplex {
        // Q in degree 0, b = B = 0
        let c = ChainComplex::new(0, vec![1], vec![]).unwrap();
        MixedComplex::new(c, vec![], true).unwrap()
    }

    #[test]
    fn connes_hc_ground_field() {
        let tot = connes_total(&ground_field_mixed(), TotalMode::HC, 2).unwrap();
        assert_eq!(homology(&tot.complex, 2).dim(), 1);
    }

    #[test]
    fn connes_hc_b_zero_splits() {
        // B = 0: HC total homology in degree n = direct sum of H_{n-2j}
        let d = SparseMat::from_triplets(2, 2, [(0, 1, rat(1))]);
        let c = ChainComplex::new(0, vec![2, 2, 2], vec![d.clone(), SparseMat::zero(2, 2)])
            .unwrap();
        let m = MixedComplex::new(
            c.clone(),
            vec![SparseMat::zero(2, 2), SparseMat::zero(2, 2)],
            true,
        )
        .unwrap();
        let tot = connes_total(&m, TotalMode::HC, 2).unwrap();
        let expect: usize =
            (0..=1).map(|j| homology(&c, 2 - 2 * j).dim()).sum();
        assert_eq!(homology(&tot.complex, 2).dim(), expect);
    }

    #[test]
    fn connes_hn_requires_bounded() {
        let c = ChainComplex::new(0, vec![1], vec![]).unwrap();
        let m = MixedComplex::new(c, vec![], false).unwrap();
        assert!(connes_total(&m, TotalMode::HN, 0).is_err());
        assert!(connes_total(&ground_field_mixed(), TotalMode::HN, 0).is_ok());
    }

    #[test]
    fn connes_truncation_stability() {
        let m = ground_field_mixed();
        for n in 0..=3 {
            let a = connes_total_cols(&m, TotalMode::HC, n, hc_jmax(n)).unwrap();
            let b = connes_total_cols(&m, TotalMode::HC, n, hc_jmax(n) + 1).unwrap();
            assert_eq!(homology(&a.complex, n).dim(), homology(&b.complex, n).dim());
        }
    }

    fn const_tower(dim: usize, levels: usize, trans: SparseMat) -> SubqTower {
        SubqTower::from_dims(vec![dim; levels], vec![trans; levels - 1])
    }

    #[test]
    fn pro_zero_all_transitions_zero() {
        let t = const_tower(1, 4, SparseMat::zero(1, 1));
        match pro_zero_certificate_upto(&t, 3, 8) {
            ProZeroResult::Certified { witnesses } => {
                assert_eq!(witnesses, vec![(1, 2), (2, 3), (3, 4)]);
            }
            _ => panic!("expected certificate"),
        }
    }

    #[test]
    fn pro_zero_constant_identity_fails() {
        let t = const_tower(1, 4, SparseMat::identity(1));
        match pro_zero_certificate(&t, 8) {
            ProZeroResult::Inconclusive { level, .. } => assert_eq!(level, 1),
            _ => panic!("expected inconclusive"),
        }
    }

    #[test]
    fn pro_zero_monotone_in_bound() {
        let t = const_tower(1, 5, SparseMat::zero(1, 1));
        let a = pro_zero_certificate_upto(&t, 4, 5);
        let b = pro_zero_certificate_upto(&t, 4, 9);
        assert_eq!(a, b);
    }

    #[test]
    fn pro_iso_identity_tower_map() {
        let t = const_tower(1, 3, SparseMat::zero(1, 1));
        let f =
            TowerMap::new(t.clone(), t.clone(), vec![SparseMat::identity(1); 3]).unwrap();
        let cert = pro_iso_certificate(&f, 8).unwrap();
        assert!(cert.is_certified());
    }

    #[test]
    fn pro_iso_kernel_fails_for_projection_to_zero() {
        // levelwise Q -> 0 with identity transitions: cokernel trivial,
        // kernel tower is the constant Q tower and fails
        let src = const_tower(1, 3, SparseMat::identity(1));
        let dst = const_tower(0, 3, SparseMat::zero(0, 0));
        let f = TowerMap::new(src, dst, vec![SparseMat::zero(0, 1); 3]).unwrap();
        let cert = pro_iso_certificate(&f, 8).unwrap();
        assert!(cert.cokernel.is_certified());
        assert!(!cert.kernel.is_certified());
    }

    #[test]
    fn non_strict_tower_map_rejected() {
        let src = const_tower(1, 2, SparseMat::identity(1));
        let dst = const_tower(1, 2, SparseMat::zero(1, 1));
        match TowerMap::new(src, dst, vec![SparseMat::identity(1); 2]) {
            Err(Error::NotStrict { level }) => assert_eq!(level, 1),
            _ => panic!("expected strictness error"),
        }
    }
}
