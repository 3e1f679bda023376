//! Shared fixtures for the benchmarks.

use cychom::algebras::FinAlgebra;
use cychom::exactlin::Rat;
use num::{One, Zero};

/// k[x]/(x^{m+1})
pub fn lambda(m: usize) -> FinAlgebra {
    let mut f = vec![Rat::zero(); m + 2];
    f[m + 1] = Rat::one();
    FinAlgebra::univariate_quotient("x", &f).expect("truncated polynomial algebra")
}
