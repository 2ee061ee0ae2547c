//! The `kx` command line.
//!
//! Every run prints a header line `# sig=… seed=…`, then the result. Errors
//! go to stderr as `error: <code>: <message>` with exit status 2 (usage),
//! 3 (limit exceeded) or 4 (mathematical precondition).

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::axioms::{self, Theory};
use crate::diagram::TypeSignature;
use crate::endo::{self, SymElement};
use crate::eval::{self, Structure};
use crate::hilbert;
use crate::parse;
use crate::reptheory::Partition;
use crate::{fmt_q, limits, verify, Error, Result};

#[derive(Parser, Debug)]
#[command(name = "kx", version, about = "Exact invariants of algebraic structures via string diagrams")]
struct Cli {
    /// Type signature as `p1 q1 p2 q2 …`.
    #[arg(long, global = true, default_value = "1 1")]
    sig: String,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Bound on group elements enumerated in one scan.
    #[arg(long, global = true, env = "KX_ENUM_LIMIT")]
    enum_limit: Option<u64>,
    /// Bound on dense tensor entries.
    #[arg(long, global = true, env = "KX_TENSOR_LIMIT")]
    tensor_limit: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical form and automorphism order of a closed diagram.
    Canon { diagram: String },
    /// Product of two elements.
    Mul { a: String, b: String },
    /// Coproduct dual to direct sums.
    Delta { a: String },
    /// Coproduct dual to tensor products.
    DeltaTensor { a: String },
    Antipode { a: String },
    /// Inner product of two elements.
    Inner { a: String, b: String },
    /// Dimension of one graded piece.
    Hilbert(HilbertArgs),
    /// Evaluate an element on a structure file.
    Eval {
        #[arg(long)]
        structure: String,
        element: String,
    },
    /// Rank of evaluations on random structures.
    Rank {
        #[arg(long)]
        deg: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 30)]
        samples: usize,
    },
    /// Generators of the dimension ideal in one graded piece.
    IdGens {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        deg: String,
    },
    /// Symmetric functions for a single endomorphism.
    Endo {
        #[command(subcommand)]
        command: EndoCommand,
    },
    /// Theories and models.
    Axioms {
        #[command(subcommand)]
        command: AxiomsCommand,
    },
    /// Run a self-check suite.
    Verify {
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 30)]
        samples: usize,
    },
}

#[derive(Args, Debug)]
struct HilbertArgs {
    /// Multidegree `n1,n2,…`.
    #[arg(long)]
    deg: String,
    /// Quotient by the dimension ideal `I_d`.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::All)]
    method: Method,
    #[arg(long, default_value_t = 30)]
    samples: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    All,
    Burnside,
    Formula,
    Rank,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Suite {
    Psh,
    Hilbert,
    Endo,
}

#[derive(Subcommand, Debug)]
enum EndoCommand {
    /// `{λ}` in power sums.
    SchurExpand { partition: String },
    /// Jacobi–Trudi expansion of `{λ}`.
    JacobiTrudi { partition: String },
    /// Whether `{λ}` (or `p_λ` with `--power-sum`) lies in `I_d`.
    InIdeal {
        partition: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        power_sum: bool,
    },
    /// `{λ}{μ}` in the Schur basis.
    Product { lambda: String, mu: String },
}

#[derive(Subcommand, Debug)]
enum AxiomsCommand {
    /// Whether a structure satisfies every axiom.
    CheckModel {
        #[arg(long)]
        theory: String,
        #[arg(long)]
        structure: String,
    },
    /// Close axiom `k` (1-based) against an open diagram.
    Pair {
        #[arg(long)]
        theory: String,
        #[arg(long, default_value_t = 1)]
        axiom: usize,
        complement: String,
    },
    /// Closed relations from complements with at most `bound` boxes.
    Gens {
        #[arg(long)]
        theory: String,
        #[arg(long, default_value_t = 1)]
        bound: usize,
        /// Also report whether they vanish on this structure.
        #[arg(long)]
        structure: Option<String>,
    },
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = writeln!(err, "error: usage: {}", text.lines().next().unwrap_or("").trim_start_matches("error: "));
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", e.code(), e.detail());
            e.exit_code()
        }
    }
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn multidegree(s: &str, sig: &TypeSignature) -> Result<Vec<usize>> {
    let md = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("multidegree entry {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if md.len() != sig.len() {
        return Err(Error::Parse(format!("multidegree needs {} entries for {sig}", sig.len())));
    }
    Ok(md)
}

fn partition(s: &str) -> Result<Partition> {
    parse::parse_partition(s)
}

/// `matrix:N`, `diagonal:N`, or a structure file.
fn load_structure(source: &str, sig: &TypeSignature) -> Result<Structure> {
    let builtin = |name: &str| source.strip_prefix(name).map(|n| n.parse::<usize>().map_err(|_| Error::Parse(format!("bad size in {source:?}"))));
    let s = if let Some(n) = builtin("matrix:") {
        axioms::matrix_algebra(n?)?
    } else if let Some(n) = builtin("diagonal:") {
        axioms::diagonal_algebra(n?)?
    } else {
        Structure::parse(&std::fs::read_to_string(source)?)?
    };
    sig.check_same(s.signature())?;
    Ok(s)
}

/// `unital-associative`, `commutative`, or a theory file.
fn load_theory(source: &str, sig: &TypeSignature) -> Result<Theory> {
    let t = match source {
        "unital-associative" => axioms::unital_associative_theory()?,
        "commutative" => axioms::commutative_theory()?,
        path => parse::parse_theory(Some(sig), &std::fs::read_to_string(path)?)?,
    };
    sig.check_same(t.signature())?;
    Ok(t)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    limits::set_enumeration_limit(cli.enum_limit.unwrap_or(limits::DEFAULT_ENUMERATION_LIMIT));
    limits::set_tensor_limit(cli.tensor_limit.unwrap_or(limits::DEFAULT_TENSOR_LIMIT));
    let sig: TypeSignature = cli.sig.parse()?;
    let element = |s: &str| parse::parse_element(&sig, s);
    let mut lines: Vec<String> = Vec::new();
    match &cli.command {
        Command::Canon { diagram } => {
            let d = parse::parse_closed(&sig, diagram)?;
            lines.push(d.to_string());
            lines.push(format!("aut {}", d.aut_order()));
        }
        Command::Mul { a, b } => lines.push(element(a)?.multiply(&element(b)?)?.to_string()),
        Command::Delta { a } => lines.push(element(a)?.coproduct_sum()?.to_string()),
        Command::DeltaTensor { a } => lines.push(element(a)?.coproduct_tensor().to_string()),
        Command::Antipode { a } => lines.push(element(a)?.antipode().to_string()),
        Command::Inner { a, b } => lines.push(fmt_q(&element(a)?.inner_product(&element(b)?)?)),
        Command::Hilbert(h) => {
            let md = multidegree(&h.deg, &sig)?;
            if h.method == Method::Burnside && h.dim.is_some() {
                return Err(Error::Invalid("burnside counts K[X] itself; drop --dim".into()));
            }
            let want = |m: Method| h.method == Method::All || h.method == m;
            let mut parts = Vec::new();
            let mut answer = None;
            if want(Method::Burnside) && h.dim.is_none() {
                let v = hilbert::dim_burnside(&sig, &md)?;
                answer.get_or_insert(v);
                parts.push(format!("burnside {v}"));
            }
            if want(Method::Formula) {
                let v = match h.dim {
                    Some(d) => hilbert::quotient_dim(&sig, &md, d)?,
                    None => hilbert::dim_formula(&sig, &md, None)?,
                };
                answer.get_or_insert(v);
                parts.push(format!("formula {v}"));
            }
            if want(Method::Rank) {
                let (n, _) = sig.string_counts(&md);
                let d = h.dim.unwrap_or(n);
                let v = eval::evaluation_rank(&sig, &md, d, h.samples, cli.seed)? as u128;
                answer.get_or_insert(v);
                parts.push(format!("rank {v} (d={d}, samples {})", h.samples));
            }
            lines.push(answer.expect("some method ran").to_string());
            lines.push(parts.join(", "));
        }
        Command::Eval { structure, element: e } => {
            let s = load_structure(structure, &sig)?;
            lines.push(fmt_q(&eval::evaluate_element(&element(e)?, &s)?));
        }
        Command::Rank { deg, dim, samples } => {
            let md = multidegree(deg, &sig)?;
            lines.push(eval::evaluation_rank(&sig, &md, *dim, *samples, cli.seed)?.to_string());
        }
        Command::IdGens { dim, deg } => {
            let md = multidegree(deg, &sig)?;
            for g in hilbert::id_generators(*dim, &sig, &md)? {
                lines.push(g.to_string());
            }
        }
        Command::Endo { command } => match command {
            EndoCommand::SchurExpand { partition: p } => lines.push(endo::schur_to_powersum(&partition(p)?).to_string()),
            EndoCommand::JacobiTrudi { partition: p } => lines.push(endo::jacobi_trudi(&partition(p)?).to_string()),
            EndoCommand::InIdeal { partition: p, dim, power_sum } => {
                let p = partition(p)?;
                let a = if *power_sum { SymElement::power_sum(&p) } else { SymElement::schur(&p) };
                lines.push(endo::in_ideal_id(&a, *dim).to_string());
            }
            EndoCommand::Product { lambda, mu } => lines.push(endo::schur_product(&partition(lambda)?, &partition(mu)?).to_string()),
        },
        Command::Axioms { command } => match command {
            AxiomsCommand::CheckModel { theory, structure } => {
                let t = load_theory(theory, &sig)?;
                let s = load_structure(structure, &sig)?;
                lines.push(axioms::is_model(&t, &s)?.to_string());
            }
            AxiomsCommand::Pair { theory, axiom, complement } => {
                let t = load_theory(theory, &sig)?;
                let a = t
                    .axioms()
                    .get(axiom.wrapping_sub(1))
                    .ok_or_else(|| Error::Invalid(format!("theory has {} axioms", t.axioms().len())))?;
                let y = parse::parse_open(&sig, complement)?;
                lines.push(axioms::pair(a.terms(), &y)?.to_string());
            }
            AxiomsCommand::Gens { theory, bound, structure } => {
                let t = load_theory(theory, &sig)?;
                let gens = axioms::ideal_generators_upto(&t, *bound)?;
                lines.extend(gens.iter().map(ToString::to_string));
                if let Some(s) = structure {
                    let s = load_structure(s, &sig)?;
                    lines.push(format!("vanish {}", axioms::all_vanish(&gens, &s)?));
                }
            }
        },
        Command::Verify { suite, max_n, samples } => {
            let report = match suite {
                Suite::Psh => verify::psh(*max_n)?,
                Suite::Hilbert => verify::hilbert(*max_n, *samples, cli.seed)?,
                Suite::Endo => verify::endo_suite(cli.seed)?,
            };
            lines.push(report.to_string());
            if !report.passed() {
                write_lines(out, &sig, cli.seed, &lines)?;
                return Err(Error::Invalid("verification failed".into()));
            }
        }
    }
    write_lines(out, &sig, cli.seed, &lines)
}

fn write_lines(out: &mut dyn Write, sig: &TypeSignature, seed: u64, lines: &[String]) -> Result<()> {
    writeln!(out, "# sig={sig} seed={seed}")?;
    for l in lines {
        writeln!(out, "{l}")?;
    }
    Ok(())
}
