//! The `dstar` command-line front end.
//!
//! Exit codes: 0 on success, 1 for domain and validation errors, 2 for
//! parse errors (reported with line and column).

use crate::charset::{
    charset_complete, closure_step_witness, ClosureVerdict, ClosureWitness, Rejection,
};
use crate::dalgebra::{validate_algebra, AlgebraError, AlgebraSpec, Builtin, DAlgebra};
use crate::expr::{
    parse_polynomial, parse_polynomial_list, parse_variable, scan_max_indeterminate, ParseError,
};
use crate::operators::apply_composition;
use crate::ordering::{MultiIndex, Ranking};
use crate::par::Execution;
use crate::poly::{DPolynomial, PolyRing};
use crate::reduction::{reduce, FormatError};
use clap::{Parser, Subcommand};
use std::cmp::Ordering;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Parser, Debug)]
#[command(
    name = "dstar",
    version,
    about = "Polynomials with commuting Hasse-Schmidt operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate an algebra and print its depth tables.
    AlgebraCheck {
        /// JSON file or builtin name (dual, fields:m, hs:n, dd:n,m).
        algebra: String,
    },
    /// Compare two variables under the sequential ranking.
    Rank {
        #[arg(long)]
        algebra: String,
        v1: String,
        v2: String,
    },
    /// Apply an operator or composition, e.g. `d1.1`, `s1 d1.1` or `theta=[1,2]`.
    Apply {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        op: String,
        expr: String,
    },
    /// Reduce an expression by the polynomials in a file.
    Reduce {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        set: PathBuf,
        expr: String,
        /// Write the certificate as JSON to this path.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Compute a characteristic set of the generators in a file.
    Charset {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        trace: bool,
    },
    /// Check a closure witness against a generator file.
    ClosureCheck {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
}

enum Failure {
    Domain(String),
    Parse(String),
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::Parse { .. } => Failure::Parse(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

fn parse_failure(origin: &str, e: ParseError) -> Failure {
    Failure::Parse(format!("{origin}: {e}"))
}

fn format_failure(origin: &Path, e: FormatError) -> Failure {
    Failure::Parse(format!("{}: {e}", origin.display()))
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

/// A file path if it exists, otherwise a builtin name.
fn load_algebra(arg: &str) -> Result<DAlgebra, Failure> {
    let path = Path::new(arg);
    let spec = if path.is_file() {
        AlgebraSpec::from_json(&read(path)?).map_err(|e| match e {
            AlgebraError::Parse { .. } => Failure::Parse(format!("{arg}: {e}")),
            other => other.into(),
        })?
    } else {
        Builtin::parse(arg)
            .map_err(|_| Failure::Domain(format!("{arg}: no such file or builtin algebra")))?
            .spec()
    };
    Ok(validate_algebra(&spec)?)
}

/// A ring with as many indeterminates as the inputs mention (at least one).
fn ring_for(algebra: DAlgebra, inputs: &[(&str, &str)]) -> Result<Arc<PolyRing>, Failure> {
    let mut n = 1;
    for (origin, text) in inputs {
        n = n.max(scan_max_indeterminate(text).map_err(|e| parse_failure(origin, e))?);
    }
    Ok(PolyRing::new(Arc::new(algebra), n, Ranking::Sequential))
}

fn parse_op(op: &str, algebra: &DAlgebra) -> Result<MultiIndex, Failure> {
    let slots = algebra.slot_count();
    let bad = |m: String| Failure::Parse(format!("--op: {m}"));
    if let Some(body) = op.trim().strip_prefix("theta=") {
        let inner = body
            .trim()
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| bad(format!("`{body}` is not of the form [a,b,..]")))?;
        let entries = inner
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(e.to_string()))?;
        if entries.len() != slots {
            return Err(Failure::Domain(format!(
                "--op: {} entries for {slots} slots",
                entries.len()
            )));
        }
        return Ok(MultiIndex::new(entries));
    }
    let mut theta = MultiIndex::zero(slots);
    let names = op
        .split(|c: char| c.is_whitespace() || c == '*')
        .filter(|s| !s.is_empty());
    let mut any = false;
    for name in names {
        let slot = algebra
            .op_names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| {
                bad(format!(
                    "unknown operator `{name}`; expected one of {}",
                    algebra.op_names().join(" ")
                ))
            })?;
        theta = theta.add_slot(slot);
        any = true;
    }
    if !any {
        return Err(bad("empty operator".into()));
    }
    Ok(theta)
}

fn algebra_check(arg: &str, out: &mut dyn Write) -> Result<(), Failure> {
    let alg = load_algebra(arg)?;
    let io = |e: std::io::Error| domain(e);
    let t = alg.block_count();
    writeln!(
        out,
        "valid: {t} block{}, {} slots",
        if t == 1 { "" } else { "s" },
        alg.slot_count()
    )
    .map_err(io)?;
    writeln!(out, "operators: {}", alg.op_names().join(" ")).map_err(io)?;
    for b in 1..=t {
        let names = alg.basis_names(b);
        writeln!(out, "block {b}: basis {}", names.join(" ")).map_err(io)?;
        for j in 1..names.len() {
            let gamma = alg.gamma(b, j)?;
            let pairs: Vec<String> = gamma.iter().map(|(p, q)| format!("({p},{q})")).collect();
            writeln!(
                out,
                "  {j} {} nu={} gamma={{{}}}",
                names[j],
                alg.nu(b, j)?,
                pairs.join(",")
            )
            .map_err(io)?;
        }
    }
    Ok(())
}

fn run_command(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    let io = |e: std::io::Error| domain(e);
    match cmd {
        Command::AlgebraCheck { algebra } => algebra_check(&algebra, out),
        Command::Rank { algebra, v1, v2 } => {
            let ring = ring_for(load_algebra(&algebra)?, &[("V1", &v1), ("V2", &v2)])?;
            let a = parse_variable(&ring, &v1).map_err(|e| parse_failure("V1", e))?;
            let b = parse_variable(&ring, &v2).map_err(|e| parse_failure("V2", e))?;
            let word = match ring.ranking().cmp_vars(&a, &b) {
                Ordering::Less => "LESS",
                Ordering::Equal => "EQUAL",
                Ordering::Greater => "GREATER",
            };
            writeln!(out, "{word}").map_err(io)
        }
        Command::Apply { algebra, op, expr } => {
            let alg = load_algebra(&algebra)?;
            let theta = parse_op(&op, &alg)?;
            let ring = ring_for(alg, &[("EXPR", &expr)])?;
            let f = parse_polynomial(&ring, &expr).map_err(|e| parse_failure("EXPR", e))?;
            let g = apply_composition(&theta, &f).map_err(domain)?;
            writeln!(out, "{g}").map_err(io)
        }
        Command::Reduce {
            algebra,
            set,
            expr,
            cert,
        } => {
            let set_text = read(&set)?;
            let origin = set.display().to_string();
            let ring = ring_for(
                load_algebra(&algebra)?,
                &[(&origin, &set_text), ("EXPR", &expr)],
            )?;
            let members =
                parse_polynomial_list(&ring, &set_text).map_err(|e| parse_failure(&origin, e))?;
            let g = parse_polynomial(&ring, &expr).map_err(|e| parse_failure("EXPR", e))?;
            let c = reduce(&g, &members).map_err(domain)?;
            let h = c.multiplier(&members).map_err(domain)?;
            writeln!(out, "remainder: {}", c.remainder).map_err(io)?;
            writeln!(out, "H: {h}").map_err(io)?;
            if let Some(path) = cert {
                std::fs::write(&path, c.to_json(Some(&h)))
                    .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
            }
            Ok(())
        }
        Command::Charset {
            algebra,
            gens,
            trace,
        } => {
            let text = read(&gens)?;
            let origin = gens.display().to_string();
            let ring = ring_for(load_algebra(&algebra)?, &[(&origin, &text)])?;
            let fs = parse_polynomial_list(&ring, &text).map_err(|e| parse_failure(&origin, e))?;
            let res = charset_complete(&fs, Execution::default()).map_err(domain)?;
            if trace {
                let join = |ps: &[DPolynomial]| {
                    if ps.is_empty() {
                        "none".to_string()
                    } else {
                        ps.iter()
                            .map(ToString::to_string)
                            .collect::<Vec<_>>()
                            .join("; ")
                    }
                };
                for r in &res.trace {
                    writeln!(out, "# round {} selected: {}", r.round, join(&r.selected))
                        .map_err(io)?;
                    writeln!(out, "# round {} added: {}", r.round, join(&r.added)).map_err(io)?;
                }
            }
            for m in res.charset.members() {
                writeln!(out, "{m}").map_err(io)?;
            }
            Ok(())
        }
        Command::ClosureCheck {
            algebra,
            gens,
            witness,
        } => {
            let text = read(&gens)?;
            let wtext = read(&witness)?;
            let origin = gens.display().to_string();
            let wmax = ClosureWitness::max_indeterminate(&wtext)
                .map_err(|e| format_failure(&witness, e))?;
            let mut ring = ring_for(load_algebra(&algebra)?, &[(&origin, &text)])?;
            if wmax > ring.nvars() {
                ring = PolyRing::new(ring.algebra_arc().clone(), wmax, Ranking::Sequential);
            }
            let fs = parse_polynomial_list(&ring, &text).map_err(|e| parse_failure(&origin, e))?;
            let w = ClosureWitness::from_json(&ring, &wtext)
                .map_err(|e| format_failure(&witness, e))?;
            match closure_step_witness(&fs, &w) {
                ClosureVerdict::Accept(a) => writeln!(out, "Accept {a}").map_err(io),
                ClosureVerdict::Reject(Rejection::BadWitness { difference }) => {
                    writeln!(out, "Reject BadWitness: difference {difference}").map_err(io)?;
                    Err(Failure::Domain(
                        "BadWitness: the combination does not match the product".into(),
                    ))
                }
                ClosureVerdict::Reject(Rejection::Malformed(m)) => {
                    writeln!(out, "Reject Malformed: {m}").map_err(io)?;
                    Err(Failure::Domain(format!("Malformed: {m}")))
                }
            }
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match run_command(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Domain(m)) => {
            let _ = writeln!(err, "{m}");
            1
        }
        Err(Failure::Parse(m)) => {
            let _ = writeln!(err, "{m}");
            2
        }
    }
}
