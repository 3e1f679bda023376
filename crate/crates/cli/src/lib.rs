//! Command-line interface: parses algebra and tower documents, dispatches
//! homology computations, runs invariant suites, and emits byte-deterministic
//! reports in JSON or plain-table form.
//!
//! Exit codes: 0 success, 2 input error, 3 budget exceeded, 4 invariant
//! failure. Timing goes to stderr so reports stay byte-identical across runs.

pub mod checks;
pub mod doc;
pub mod json;
pub mod poly;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use cychom::algebras::AlgMap;
use cychom::complexes::ProZeroResult;
use cychom::exactlin::rank;
use cychom::hochcyc::{
    hc_with_budget, hh_map_with_budget, hh_with_budget, hodge_hc_rel_with_budget,
    hodge_hh_with_budget, hodge_hn_rel_with_budget, CONVENTIONS, DEFAULT_BUDGET, HodgeDecomp,
    hc_rel_with_budget, hn_rel_with_budget,
};
use cychom::prohkr::{build_hkr_tower_with_budget, certify_pro_hkr};
use cychom::volodin::theta_lambda_report_with_budget;
use cychom::Error;
use sha2::{Digest, Sha256};

use json::J;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Parser)]
#[command(
    name = "cychom",
    version,
    about = "Exact Hochschild / cyclic homology computations over the rationals"
)]
struct Cli {
    /// Output format for reports
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Cell budget for chain-group sizes (total basis elements per complex)
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hochschild homology of an algebra document
    Hh {
        /// Algebra document (JSON)
        file: PathBuf,
        /// Homology degree n
        #[arg(long)]
        degree: i64,
        /// Include the Hodge (weight) piece table
        #[arg(long)]
        hodge: bool,
        /// Also emit the induced map HH_n(source) -> HH_n(target document)
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Cyclic homology, optionally relative to an ideal
    Hc {
        /// Algebra document (JSON)
        file: PathBuf,
        /// Homology degree n
        #[arg(long)]
        degree: i64,
        /// Comma-separated polynomial generators of a nilpotent ideal
        #[arg(long)]
        relative: Option<String>,
        /// Include the Hodge (weight) piece table
        #[arg(long)]
        hodge: bool,
        /// Report relative negative cyclic homology HN_n = HC_{n-1}[1]
        #[arg(long)]
        as_hn: bool,
    },
    /// Pro-HKR tower certificate for a truncation tower document
    Prohkr {
        /// Tower document (JSON, kind "tower")
        file: PathBuf,
        /// Form degree p
        #[arg(long)]
        p: usize,
        /// Certify pro-vanishing up to this tower level
        #[arg(long)]
        m_max: usize,
        /// Number of tower levels to build and search for witnesses
        #[arg(long)]
        search_max: usize,
    },
    /// Loday-Quillen theta versus exterior-power operations
    Volodin {
        /// Algebra document (JSON)
        file: PathBuf,
        /// Comma-separated polynomial generators of a nilpotent ideal
        #[arg(long)]
        ideal: String,
        /// Matrix size n of the triangular Lie algebras
        #[arg(long)]
        n: usize,
        /// Exterior-power operation index k
        #[arg(long)]
        k: usize,
        /// Homology degree m
        #[arg(long)]
        m: i64,
    },
    /// Run a named invariant suite
    Check {
        /// Suite: mixed-identities, idempotents, ce, towers, all
        #[arg(long)]
        suite: String,
        /// Optional extra document validated by the "all" suite
        fixture: Option<PathBuf>,
    },
}

/// A command failure carrying the process exit code.
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::Input(_) | Error::Infinite { .. } | Error::NonNilpotent => 2,
            Error::Budget { .. } => 3,
            _ => 4,
        };
        Failure { code, message: format!("error: {e}") }
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn fingerprint(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    format!("{:x}", h.finalize())
}

fn report(command: String, fp: String, result: J) -> J {
    J::Obj(vec![
        ("command".into(), J::Str(command)),
        ("input_fingerprint".into(), J::Str(fp)),
        ("convention_version".into(), J::Str(CONVENTIONS.version.to_string())),
        ("result".into(), result),
    ])
}

fn hodge_json(h: &HodgeDecomp) -> J {
    let pieces = h
        .weight_dims()
        .into_iter()
        .map(|(w, d)| {
            J::Obj(vec![
                ("weight".into(), J::Int(w)),
                ("dim".into(), J::uint(d)),
            ])
        })
        .collect();
    J::Obj(vec![
        ("theory".into(), J::Str(h.theory.name().to_string())),
        ("degree".into(), J::Int(h.degree)),
        ("dim".into(), J::uint(h.dim)),
        ("pieces".into(), J::Arr(pieces)),
    ])
}

fn pro_zero_json(r: &ProZeroResult) -> J {
    match r {
        ProZeroResult::Certified { witnesses } => J::Obj(vec![
            ("status".into(), J::Str("certified".into())),
            (
                "witnesses".into(),
                J::Arr(
                    witnesses
                        .iter()
                        .map(|&(m, c)| J::Arr(vec![J::uint(m), J::uint(c)]))
                        .collect(),
                ),
            ),
        ]),
        ProZeroResult::Inconclusive { level, search_bound } => J::Obj(vec![
            ("status".into(), J::Str("inconclusive".into())),
            ("level".into(), J::uint(*level)),
            ("search_bound".into(), J::uint(*search_bound)),
        ]),
    }
}

/// Renders a report as an indented `path = value` table.
fn render_table(j: &J) -> String {
    fn leaf(j: &J) -> Option<String> {
        match j {
            J::Null => Some("null".into()),
            J::Bool(b) => Some(b.to_string()),
            J::Int(v) => Some(v.to_string()),
            J::Str(s) => Some(s.clone()),
            J::Arr(items) => {
                let parts: Option<Vec<String>> = items.iter().map(leaf).collect();
                parts.map(|p| format!("[{}]", p.join(", ")))
            }
            J::Obj(_) => None,
        }
    }
    fn walk(j: &J, path: &str, out: &mut String) {
        if let Some(v) = leaf(j) {
            out.push_str(path);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
            return;
        }
        match j {
            J::Obj(fields) => {
                for (k, v) in fields {
                    let sub = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                    walk(v, &sub, out);
                }
            }
            J::Arr(items) => {
                for (i, v) in items.iter().enumerate() {
                    walk(v, &format!("{path}[{i}]"), out);
                }
            }
            _ => unreachable!(),
        }
    }
    let mut out = String::new();
    walk(j, "", &mut out);
    out
}

fn render(format: Format, j: &J) -> String {
    match format {
        Format::Json => {
            let mut s = j.render();
            s.push('\n');
            s
        }
        Format::Table => render_table(j),
    }
}

/// Parses and runs a full command line (including the binary name),
/// returning the stdout payload or a failure with an exit code.
pub fn execute<I, T>(argv: I) -> Result<String, Failure>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(e.to_string()),
                _ => Err(Failure::input(e.to_string())),
            };
        }
    };
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    let started = std::time::Instant::now();
    let out = run(cli.cmd, cli.format, budget);
    eprintln!("elapsed: {:?}", started.elapsed());
    out
}

fn run(cmd: Cmd, format: Format, budget: u128) -> Result<String, Failure> {
    match cmd {
        Cmd::Hh { file, degree, hodge, map } => {
            let text = read_file(&file)?;
            let a = doc::algebra_from_doc(&text)?;
            let h = hh_with_budget(&a, degree, budget)?;
            let mut result = vec![
                ("theory".into(), J::Str("HH".into())),
                ("algebra_dim".into(), J::uint(a.dim())),
                ("degree".into(), J::Int(degree)),
                ("dim".into(), J::uint(h.dim())),
            ];
            if hodge {
                let d = hodge_hh_with_budget(&a, degree, budget)?;
                result.push(("hodge".into(), hodge_json(&d)));
            }
            if let Some(target) = map {
                let ttext = read_file(&target)?;
                let b = doc::algebra_from_doc(&ttext)?;
                let f = AlgMap::by_monomial_reduction(a.clone(), b)?;
                let mat = hh_map_with_budget(&f, degree, budget)?;
                result.push(("map_rank".into(), J::uint(rank(&mat))));
                result.push(("map".into(), json::matrix(&mat)));
            }
            let cmd_echo = format!("hh {} --degree {degree}", file.display());
            Ok(render(format, &report(cmd_echo, fingerprint(text.as_bytes()), J::Obj(result))))
        }
        Cmd::Hc { file, degree, relative, hodge, as_hn } => {
            let text = read_file(&file)?;
            let a = doc::algebra_from_doc(&text)?;
            let theory = if as_hn { "HN_rel" } else if relative.is_some() { "HC_rel" } else { "HC" };
            if as_hn && relative.is_none() {
                return Err(Failure::input("--as-hn requires --relative <ideal>"));
            }
            let mut result = vec![
                ("theory".into(), J::Str(theory.into())),
                ("algebra_dim".into(), J::uint(a.dim())),
                ("degree".into(), J::Int(degree)),
            ];
            let dim = match &relative {
                None => hc_with_budget(&a, degree, budget)?.dim(),
                Some(spec) => {
                    let ideal = doc::parse_ideal(&a, spec)?;
                    result.push(("ideal_dim".into(), J::uint(ideal.dim())));
                    if as_hn {
                        hn_rel_with_budget(&a, &ideal, degree, budget)?.dim()
                    } else {
                        hc_rel_with_budget(&a, &ideal, degree, budget)?.dim()
                    }
                }
            };
            result.push(("dim".into(), J::uint(dim)));
            if hodge {
                let spec = relative.as_ref().ok_or_else(|| {
                    Failure::input("--hodge for cyclic homology requires --relative <ideal>")
                })?;
                let ideal = doc::parse_ideal(&a, spec)?;
                let d = if as_hn {
                    hodge_hn_rel_with_budget(&a, &ideal, degree, budget)?
                } else {
                    hodge_hc_rel_with_budget(&a, &ideal, degree, budget)?
                };
                result.push(("hodge".into(), hodge_json(&d)));
            }
            let cmd_echo = format!("hc {} --degree {degree}", file.display());
            Ok(render(format, &report(cmd_echo, fingerprint(text.as_bytes()), J::Obj(result))))
        }
        Cmd::Prohkr { file, p, m_max, search_max } => {
            let text = read_file(&file)?;
            let spec = doc::tower_from_doc(&text)?;
            if search_max == 0 {
                return Err(Failure::input("--search-max must be at least 1"));
            }
            let tower = build_hkr_tower_with_budget(&spec, p, search_max, budget)?;
            let cert = certify_pro_hkr(&tower, m_max.min(tower.levels()))?;
            let levels: Vec<J> = (0..tower.levels())
                .map(|i| {
                    J::Obj(vec![
                        ("level".into(), J::uint(i + 1)),
                        ("omega_dim".into(), J::uint(tower.omega_tower.level(i + 1).dim())),
                        ("hh_dim".into(), J::uint(tower.hh_tower.level(i + 1).dim())),
                    ])
                })
                .collect();
            let result = J::Obj(vec![
                ("p".into(), J::uint(p)),
                ("m_max".into(), J::uint(m_max)),
                ("search_max".into(), J::uint(search_max)),
                ("levels".into(), J::Arr(levels)),
                ("kernel".into(), pro_zero_json(&cert.kernel)),
                ("cokernel".into(), pro_zero_json(&cert.cokernel)),
                ("certified".into(), J::Bool(cert.is_certified())),
            ]);
            let cmd_echo = format!(
                "prohkr {} --p {p} --m-max {m_max} --search-max {search_max}",
                file.display()
            );
            Ok(render(format, &report(cmd_echo, fingerprint(text.as_bytes()), result)))
        }
        Cmd::Volodin { file, ideal, n, k, m } => {
            let text = read_file(&file)?;
            let a = doc::algebra_from_doc(&text)?;
            let i = doc::parse_ideal(&a, &ideal)?;
            let rep = theta_lambda_report_with_budget(&a, &i, n, k, m, budget)?;
            let pieces = rep
                .piece_comparison
                .iter()
                .map(|&(w, ok)| J::Arr(vec![J::Int(w), J::Bool(ok)]))
                .collect();
            let result = J::Obj(vec![
                ("n".into(), J::uint(rep.n)),
                ("k".into(), J::uint(rep.k)),
                ("m".into(), J::Int(rep.m)),
                ("hx_dim".into(), J::uint(rep.hx_dim)),
                ("hx_target_dim".into(), J::uint(rep.hx_target_dim)),
                ("hc_rel_dim".into(), J::uint(rep.hc_rel_dim)),
                ("theta_rank".into(), J::uint(rep.theta_rank)),
                ("theta_after_power".into(), json::matrix(&rep.theta_after_power)),
                ("power_after_theta".into(), json::matrix(&rep.power_after_theta)),
                ("piece_comparison".into(), J::Arr(pieces)),
                ("matrices_equal".into(), J::Bool(rep.matrices_equal)),
            ]);
            let cmd_echo = format!("volodin {} --ideal {ideal} --n {n} --k {k} --m {m}", file.display());
            Ok(render(format, &report(cmd_echo, fingerprint(text.as_bytes()), result)))
        }
        Cmd::Check { suite, fixture } => {
            let fixture_text = match &fixture {
                Some(path) => Some(read_file(path)?),
                None => None,
            };
            let (lines, res) = checks::run_suite(&suite, fixture_text.as_deref(), budget);
            let mut out = lines.join("\n");
            if !out.is_empty() {
                out.push('\n');
            }
            match res {
                Ok(()) => {
                    out.push_str(&format!("suite {suite}: all {} assertions hold\n", lines.len()));
                    Ok(out)
                }
                Err(e) => {
                    let first_fail = lines
                        .iter()
                        .rev()
                        .find(|l| l.starts_with("FAIL"))
                        .cloned()
                        .unwrap_or_else(|| format!("error: {e}"));
                    let mut f = Failure::from(e);
                    f.message = format!("{out}suite {suite} failed: {first_fail}\n{}", f.message);
                    Err(f)
                }
            }
        }
    }
}
