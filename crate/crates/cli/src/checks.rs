//! Named invariant suites for `cychom check --suite <name>`. Each suite
//! runs a list of exact assertions and reports one line per assertion;
//! the first failure aborts the suite with an error naming it.

use cychom::algebras::{AlgMap, FinAlgebra};
use cychom::complexes::MixedComplex;
use cychom::exactlin::{rat, Rat, SparseMat};
use cychom::hochcyc::{
    bar_mixed_with_budget, e_map_with_budget, eulerian_idempotents, hh_map_with_budget, hkr,
    kron_id, normalized_mixed_with_budget, signed_shuffle_operator,
};
use cychom::prohkr::{build_hkr_tower_with_budget, certify_pro_hkr};
use cychom::volodin::{ce_complex_with_budget, gl, loday_quillen_with_budget,
    exterior_power_lie, theta_lambda_report_with_budget};
use cychom::{Error, Result};
use num::{One, Zero};

use crate::doc::{algebra_from_doc, parse_ideal};

pub const SUITES: &[&str] = &["mixed-identities", "idempotents", "ce", "towers", "all"];

struct Log {
    lines: Vec<String>,
}

impl Log {
    fn check(&mut self, name: &str, ok: bool) -> Result<()> {
        if ok {
            self.lines.push(format!("ok   {name}"));
            Ok(())
        } else {
            self.lines.push(format!("FAIL {name}"));
            Err(Error::Invariant(format!("check failed: {name}")))
        }
    }
}

fn lambda(m: usize) -> FinAlgebra {
    let mut f = vec![Rat::zero(); m + 2];
    f[m + 1] = Rat::one();
    FinAlgebra::univariate_quotient("x", &f).expect("truncated polynomial algebra")
}

fn mixed_identities_on(log: &mut Log, tag: &str, mx: &MixedComplex, top: i64) -> Result<()> {
    for n in 0..=top {
        let c = mx.underlying();
        log.check(
            &format!("{tag}: b∘b = 0 in degree {n}"),
            c.d(n - 1).matmul(&c.d(n)).is_zero(),
        )?;
        log.check(
            &format!("{tag}: B∘B = 0 in degree {n}"),
            mx.b_map(n + 1).matmul(&mx.b_map(n)).is_zero(),
        )?;
        let anti = c.d(n + 1).matmul(&mx.b_map(n)).add(&mx.b_map(n - 1).matmul(&c.d(n)));
        log.check(&format!("{tag}: bB + Bb = 0 in degree {n}"), anti.is_zero())?;
    }
    Ok(())
}

fn suite_mixed(log: &mut Log, budget: u128) -> Result<()> {
    for m in [1usize, 2] {
        let a = lambda(m);
        // one degree of headroom so bB + Bb can be evaluated at degree 5
        let bm = bar_mixed_with_budget(&a, 6, budget)?;
        mixed_identities_on(log, &format!("bar complex of k[x]/(x^{})", m + 1), bm.mixed(), 5)?;
        let nm = normalized_mixed_with_budget(&a, 6, budget)?;
        mixed_identities_on(
            log,
            &format!("normalized complex of k[x]/(x^{})", m + 1),
            nm.mixed(),
            5,
        )?;
    }
    for m in [1usize, 2] {
        let a = lambda(m);
        let top = 3i64;
        let ed = e_map_with_budget(&a, top, budget)?;
        let bar = ed.bar.complex();
        for n in 1..=top as usize {
            log.check(
                &format!("e∘b = 0 on k[x]/(x^{}) in degree {n}", m + 1),
                ed.maps[n - 1].matmul(&bar.d(n as i64)).is_zero(),
            )?;
        }
        for n in 0..top as usize {
            let lhs = ed.maps[n + 1].matmul(&ed.bar.mixed().b_map(n as i64));
            let rhs = ed.de_rham.b_map(n as i64).matmul(&ed.maps[n]);
            log.check(
                &format!("e∘B = d∘e on k[x]/(x^{}) in degree {n}", m + 1),
                lhs == rhs,
            )?;
        }
        for p in 0..ed.omegas.len().min(top as usize + 1) {
            let h = hkr(&a, p)?;
            log.check(
                &format!("e∘hkr = id on {p}-forms of k[x]/(x^{})", m + 1),
                ed.maps[p].matmul(&h) == SparseMat::identity(ed.omegas[p].dim()),
            )?;
        }
    }
    Ok(())
}

fn suite_idempotents(log: &mut Log, _budget: u128) -> Result<()> {
    for m in [1usize, 2] {
        let a = lambda(m);
        let d = a.dim();
        for n in 1..=4usize {
            let es = eulerian_idempotents(d, n);
            let dim = d.pow(n as u32);
            let mut sum = SparseMat::zero(dim, dim);
            for e in es.iter() {
                sum = sum.add(e);
            }
            log.check(
                &format!("sum of idempotents = id on slots (d={d}, n={n})"),
                sum == SparseMat::identity(dim),
            )?;
            for (i, ei) in es.iter().enumerate() {
                for (j, ej) in es.iter().enumerate() {
                    let prod = ei.matmul(ej);
                    let ok = if i == j { &prod == ei } else { prod.is_zero() };
                    log.check(
                        &format!("orthogonality e({})e({}) (d={d}, n={n})", i + 1, j + 1),
                        ok,
                    )?;
                }
            }
            let sh = signed_shuffle_operator(&a, n);
            for (i, ei) in es.iter().enumerate() {
                let eig = rat(2i64.pow(i as u32 + 1) - 2);
                let lhs = sh.matmul(ei).sub(&ei.scale(&eig));
                log.check(
                    &format!("(sh - (2^{} - 2))e({}) = 0 (d={d}, n={n})", i + 1, i + 1),
                    lhs.is_zero(),
                )?;
            }
            if n >= 2 {
                // b-equivariance on the chain group C_n(A) = A ⊗ A^{⊗n}
                let bm = bar_mixed_with_budget(&a, n as i64, u128::MAX)?;
                let b = bm.complex().d(n as i64);
                let es_lo = eulerian_idempotents(d, n - 1);
                for i in 0..n - 1 {
                    let lhs = b.matmul(&kron_id(d, &es[i]));
                    let rhs = kron_id(d, &es_lo[i]).matmul(&b);
                    log.check(
                        &format!("b-equivariance of e({}) on C_{n} (d={d})", i + 1),
                        lhs == rhs,
                    )?;
                }
                // the top idempotent e^{(n)} has no degree n-1 partner:
                // b must annihilate its image
                let lhs = b.matmul(&kron_id(d, &es[n - 1]));
                log.check(
                    &format!("b kills the image of e({n}) on C_{n} (d={d})"),
                    lhs.is_zero(),
                )?;
            }
        }
    }
    Ok(())
}

fn qeps() -> (FinAlgebra, cychom::algebras::IdealSpan) {
    let a = lambda(1);
    let i = parse_ideal(&a, "x").expect("principal ideal");
    (a, i)
}

fn suite_ce(log: &mut Log, budget: u128) -> Result<()> {
    let (a, ideal) = qeps();
    let g = gl(&a, 2)?;
    let ce = ce_complex_with_budget(&g, 4, budget)?;
    for q in 1..=4i64 {
        log.check(
            &format!("d∘d = 0 on the exterior algebra of gl_2 in degree {q}"),
            ce.complex.d(q - 1).matmul(&ce.complex.d(q)).is_zero(),
        )?;
    }
    let lq = loday_quillen_with_budget(&a, 2, 3, budget)?;
    for q in 1..=3i64 {
        let lhs = lq.theta.map(q - 1).matmul(&lq.ce.complex.d(q));
        let rhs = lq.target.d(q).matmul(&lq.theta.map(q));
        log.check(&format!("theta chain-map identity in degree {q}"), lhs == rhs)?;
    }
    let rep = theta_lambda_report_with_budget(&a, &ideal, 2, 1, 1, budget)?;
    log.check(
        "theta degree-1 surjectivity onto the ideal",
        rep.hc_rel_dim == 1 && rep.theta_rank == 1,
    )?;
    log.check("k = 1 exterior-power square commutes", rep.matrices_equal)?;
    for (n, k) in [(2usize, 1usize), (2, 2), (3, 2)] {
        let sigma: Vec<usize> = (0..n).collect();
        let lam = exterior_power_lie(&a, &ideal, n, k);
        log.check(
            &format!("exterior power Lie map defined for (n,k) = ({n},{k})"),
            lam.is_ok(),
        )?;
        let _ = sigma;
    }
    Ok(())
}

fn suite_towers(log: &mut Log, budget: u128) -> Result<()> {
    // vanishing transitions HH_n(Λ_M) → HH_n(Λ_m)
    for (m, big, degrees) in [(1usize, 3usize, vec![2i64, 3]), (2, 5, vec![2])] {
        let src = lambda(big);
        let dst = lambda(m);
        let f = AlgMap::by_monomial_reduction(src, dst)?;
        for n in degrees {
            let mat = hh_map_with_budget(&f, n, budget)?;
            log.check(
                &format!(
                    "HH_{n} transition k[x]/(x^{}) -> k[x]/(x^{}) vanishes",
                    big + 1,
                    m + 1
                ),
                mat.is_zero(),
            )?;
        }
    }
    // pro-isomorphism certificates for the truncation tower of k[x], (x)
    let spec = cychom::algebras::TowerSpec::Univariate {
        var: "x".into(),
        relation: vec![Rat::zero(), Rat::from_integer(1.into())],
    };
    for p in [0usize, 1] {
        let t = build_hkr_tower_with_budget(&spec, p, 6, budget)?;
        let cert = certify_pro_hkr(&t, 2)?;
        log.check(
            &format!("pro-HKR certificate for p = {p}, m_max = 2"),
            cert.is_certified(),
        )?;
    }
    Ok(())
}

/// Runs the named suite. `fixture` is an optional extra input document
/// validated at the end of the `all` suite (intended as a negative
/// control with corrupted structure constants).
pub fn run_suite(name: &str, fixture: Option<&str>, budget: u128) -> (Vec<String>, Result<()>) {
    let mut log = Log { lines: Vec::new() };
    let res = (|| -> Result<()> {
        match name {
            "mixed-identities" => suite_mixed(&mut log, budget),
            "idempotents" => suite_idempotents(&mut log, budget),
            "ce" => suite_ce(&mut log, budget),
            "towers" => suite_towers(&mut log, budget),
            "all" => {
                suite_mixed(&mut log, budget)?;
                suite_idempotents(&mut log, budget)?;
                suite_ce(&mut log, budget)?;
                suite_towers(&mut log, budget)?;
                if let Some(text) = fixture {
                    let ok = algebra_from_doc(text).is_ok();
                    log.check("fixture document is a valid algebra", ok)?;
                }
                Ok(())
            }
            other => Err(Error::Input(format!(
                "unknown suite '{other}' (expected one of {})",
                SUITES.join(", ")
            ))),
        }
    })();
    (log.lines, res)
}
