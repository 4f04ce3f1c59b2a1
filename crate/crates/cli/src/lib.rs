//! The `wrr` command-line tool.
//!
//! Every number printed is exact. `--decimal <digits>` appends an
//! approximation after each exact value without replacing it. Vertex indices
//! on the command line and in files start at 1.
//!
//! Exit codes: 0 success, 1 an identity failed or a check found a
//! discrepancy, 2 an internal consistency check failed, 64 bad usage,
//! 65 bad input.

pub mod format;
pub mod fuzz;
pub mod scan;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_traits::Signed;
use wrr_core::jacobian::{jacobian_at, reduced_determinant};
use wrr_core::oracle::{brute_h0_int, brute_linsys_empty_int, two_vertex_h0};
use wrr_core::rational::{format_decimal, format_rational, parse_rational};
use wrr_core::{
    decompose_principal, dhar_burn, h0, h0_int, linsys_nonempty_int, q_reduce, rank_bn,
    rr_report, spanning_tree_count, Divisor, Error as CoreError, IntDivisor, Multigraph,
    Rational, WeightedGraph,
};

use crate::format::{parse_divisor, parse_graph, reproducer, serialize_divisor};
use crate::fuzz::FuzzConfig;
use crate::scan::{render_csv, scan2v, ScanConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INPUT: i32 = 65;

#[derive(Debug, Parser)]
#[command(name = "wrr", version, about = "Exact divisor theory on rationally weighted graphs")]
pub struct Cli {
    /// Also print decimal approximations with this many digits.
    #[arg(long, global = true, value_name = "DIGITS")]
    pub decimal: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

/// A graph and divisors, given positionally (graph first) or by flag.
#[derive(Debug, Args)]
pub struct Inputs {
    #[arg(long = "graph", value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Inline list such as "1/2 0 -1", or a file holding one. Repeatable.
    #[arg(long = "divisor", value_name = "LIST|FILE", allow_hyphen_values = true)]
    pub divisor: Vec<String>,
    #[arg(value_name = "GRAPH_AND_DIVISORS")]
    pub positional: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vertices, edges, genus and canonical divisor.
    Info(Inputs),
    /// h0(D).
    H0(Inputs),
    /// Baker-Norine rank r(D) = h0(D) - 1 (integer graphs and divisors).
    Rank(Inputs),
    /// Whether two divisors are linearly equivalent, with a firing script.
    Equiv {
        #[command(flatten)]
        inputs: Inputs,
        /// Vertex whose column is dropped from the edge matrix.
        #[arg(long)]
        k: Option<usize>,
    },
    /// The q-reduced divisor equivalent to D (integer graphs and divisors).
    Reduce {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 1)]
        q: usize,
    },
    /// Both sides of h0(D) - h0(K - D) = deg(D) + 1 - g.
    RrCheck(Inputs),
    /// Invariant factors of the Jacobian of an integer graph.
    Jacobian {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Compare the engine with brute force or the two-vertex closed form.
    OracleVerify(Inputs),
    /// CSV of h0 over a grid of divisors on the two-vertex graph.
    Scan2v {
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        p: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "-3")]
        lo: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "3")]
        hi: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "1/4")]
        step: Rational,
        /// Recompute every row with the general pipeline and compare.
        #[arg(long)]
        verify: bool,
    },
    /// Seeded random cross-checks.
    Fuzz {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(i64).range(1..))]
        max_weight_num: i64,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(i64).range(1..))]
        max_weight_den: i64,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(i64).range(0..))]
        max_coeff_num: i64,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(i64).range(1..))]
        max_coeff_den: i64,
    },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim()).map_err(|e| e.to_string())
}

/// No flag starts with `-<digit>`, so such a token is a value like "-1 2".
/// A leading space keeps clap from reading it as an option; every consumer
/// trims or splits on whitespace.
fn protect_negative(arg: OsString) -> OsString {
    match arg.to_str() {
        Some(s) if s.len() > 1 && s.starts_with('-') && s.as_bytes()[1].is_ascii_digit() => {
            format!(" {s}").into()
        }
        _ => arg,
    }
}

/// Why a command stopped early; maps onto the exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Internal(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::SingularMatrix { .. }
            | CoreError::NotAnIntegralScale(_)
            | CoreError::NegativeAwayFromQ { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Report {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

struct Ctx {
    decimal: Option<usize>,
}

impl Ctx {
    fn show(&self, r: &Rational) -> String {
        match self.decimal {
            Some(d) => format!("{} {}", format_rational(r), format_decimal(r, d)),
            None => format_rational(r),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = args.into_iter().map(|a| protect_negative(a.into()));
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let ctx = Ctx {
        decimal: cli.decimal,
    };
    let (code, stdout, stderr) = match dispatch(&ctx, &cli.command) {
        Ok(r) => (r.code, r.stdout, r.stderr),
        Err(Failure::Usage(m)) => (EXIT_USAGE, String::new(), format!("error: {m}\n")),
        Err(Failure::Input(m)) => (EXIT_INPUT, String::new(), format!("error: {m}\n")),
        Err(Failure::Internal(m)) => (
            EXIT_INTERNAL,
            String::new(),
            format!("internal error: {m}\n"),
        ),
    };
    let _ = out.write_all(stdout.as_bytes());
    let _ = err.write_all(stderr.as_bytes());
    code
}

fn dispatch(ctx: &Ctx, command: &Command) -> Result<Report, Failure> {
    match command {
        Command::Info(inputs) => info(ctx, inputs),
        Command::H0(inputs) => {
            let (g, d) = graph_and_divisor(inputs)?;
            Ok(Report::ok(format!("{}\n", ctx.show(&h0(&g, &d)?))))
        }
        Command::Rank(inputs) => {
            let (g, d) = graph_and_divisor(inputs)?;
            let (m, d) = integer_instance(&g, &d)?;
            Ok(Report::ok(format!("{}\n", rank_bn(&m, &d)?)))
        }
        Command::Equiv { inputs, k } => equiv(inputs, *k),
        Command::Reduce { inputs, q } => reduce(inputs, *q),
        Command::RrCheck(inputs) => rr_check(ctx, inputs),
        Command::Jacobian { inputs, k } => jacobian(inputs, *k),
        Command::OracleVerify(inputs) => oracle_verify(inputs),
        Command::Scan2v {
            p,
            lo,
            hi,
            step,
            verify,
        } => scan(ScanConfig {
                p: p.clone(),
                lo: lo.clone(),
                hi: hi.clone(),
                step: step.clone(),
                verify: *verify,
                decimal: ctx.decimal,
            }),
        Command::Fuzz {
            seed,
            trials,
            max_n,
            max_weight_num,
            max_weight_den,
            max_coeff_num,
            max_coeff_den,
        } => {
            let summary = fuzz::fuzz(&FuzzConfig {
                seed: *seed,
                trials: *trials,
                max_n: *max_n,
                max_weight_num: *max_weight_num,
                max_weight_den: *max_weight_den,
                max_coeff_num: *max_coeff_num,
                max_coeff_den: *max_coeff_den,
            });
            let code = if summary.discrepancies() == 0 {
                EXIT_OK
            } else {
                EXIT_FINDING
            };
            Ok(Report {
                code,
                stdout: summary.render(),
                stderr: String::new(),
            })
        }
    }
}

fn load_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// An existing file is read; anything else is parsed as an inline list.
fn load_divisor(spec: &str, n: usize) -> Result<Divisor, Failure> {
    let spec = spec.trim();
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("{spec}: {e}")))?;
        return parse_divisor(&text, n).map_err(|e| Failure::Input(format!("{spec}: {e}")));
    }
    parse_divisor(spec, n).map_err(|e| match e {
        format::ParseError::Syntax { message, .. } | format::ParseError::Semantic { message, .. } => {
            Failure::Input(format!("divisor `{spec}`: {message}"))
        }
    })
}

/// The graph and all divisors, in command-line order.
fn resolve(inputs: &Inputs) -> Result<(WeightedGraph, Vec<Divisor>), Failure> {
    let mut rest = inputs.positional.iter();
    let graph = match &inputs.graph {
        Some(path) => load_graph(path)?,
        None => {
            let first = rest
                .next()
                .ok_or_else(|| Failure::Usage("missing graph file".into()))?;
            load_graph(Path::new(first))?
        }
    };
    let divisors = inputs
        .divisor
        .iter()
        .chain(rest)
        .map(|s| load_divisor(s, graph.n()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((graph, divisors))
}

fn graph_only(inputs: &Inputs) -> Result<WeightedGraph, Failure> {
    let (g, ds) = resolve(inputs)?;
    if !ds.is_empty() {
        return Err(Failure::Usage("this command takes no divisor".into()));
    }
    Ok(g)
}

fn graph_and_divisor(inputs: &Inputs) -> Result<(WeightedGraph, Divisor), Failure> {
    let (g, mut ds) = resolve(inputs)?;
    if ds.len() != 1 {
        return Err(Failure::Usage(format!("expected one divisor, got {}", ds.len())));
    }
    Ok((g, ds.remove(0)))
}

fn integer_instance(g: &WeightedGraph, d: &Divisor) -> Result<(Multigraph, IntDivisor), Failure> {
    Ok((Multigraph::from_graph(g)?, IntDivisor::from_divisor(d)?))
}

/// 1-based index from the command line to 0-based.
fn vertex_arg(name: &str, v: usize, n: usize) -> Result<usize, Failure> {
    if v == 0 || v > n {
        return Err(Failure::Input(format!("--{name} {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

fn join(values: impl IntoIterator<Item = impl ToString>) -> String {
    values
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn internal(g: &WeightedGraph, d: &Divisor, what: &str) -> Report {
    Report {
        code: EXIT_INTERNAL,
        stdout: String::new(),
        stderr: format!("internal error: {what}\n{}", reproducer(g, d, None)),
    }
}

fn info(ctx: &Ctx, inputs: &Inputs) -> Result<Report, Failure> {
    let g = graph_only(inputs)?;
    let mut out = format!("vertices={}\nedges={}\n", g.n(), g.edges().len());
    let degrees: Vec<String> = (0..g.n()).map(|v| format_rational(&g.vertex_degree(v))).collect();
    out.push_str(&format!("degrees={}\n", degrees.join(" ")));
    out.push_str(&format!("genus={}\n", ctx.show(&g.genus())));
    out.push_str(&format!("canonical={}\n", serialize_divisor(&g.canonical_divisor())));
    out.push_str(&format!("integral={}\n", g.is_integral()));
    out.push_str(&format!("spanning_tree_weight={}\n", ctx.show(&spanning_tree_count(&g))));
    Ok(Report::ok(out))
}

fn equiv(inputs: &Inputs, k: Option<usize>) -> Result<Report, Failure> {
    let (g, ds) = resolve(inputs)?;
    let [d1, d2] = ds.as_slice() else {
        return Err(Failure::Usage(format!("expected two divisors, got {}", ds.len())));
    };
    let k = vertex_arg("k", k.unwrap_or(g.n()), g.n())?;
    let diff = d1 - d2;
    match decompose_principal(&g, &diff, k)? {
        Some(cert) => {
            if cert.principal(&g) != diff {
                return Ok(internal(&g, d1, "equivalence certificate does not reproduce D1 - D2"));
            }
            Ok(Report::ok(format!(
                "equivalent\nscript={}\n",
                join(cert.m.iter())
            )))
        }
        None => Ok(Report {
            code: EXIT_FINDING,
            stdout: "not equivalent\n".into(),
            stderr: String::new(),
        }),
    }
}

fn reduce(inputs: &Inputs, q: usize) -> Result<Report, Failure> {
    let (g, d) = graph_and_divisor(inputs)?;
    let q = vertex_arg("q", q, g.n())?;
    let (m, id) = integer_instance(&g, &d)?;
    let r = q_reduce(&m, &id, q)?;
    let reduced_ok = (0..g.n()).all(|v| v == q || r.divisor.0[v] >= 0)
        && dhar_burn(&m, &r.divisor, q)?.is_empty();
    if !reduced_ok || m.apply_script(&id, &r.script) != r.divisor {
        return Ok(internal(&g, &d, "q_reduce output is not q-reduced or not equivalent"));
    }
    let nonempty = linsys_nonempty_int(&m, &id, q)?;
    Ok(Report::ok(format!(
        "reduced={}\nscript={}\nnonempty={}\n",
        join(r.divisor.0.iter()),
        join(r.script.iter()),
        nonempty
    )))
}

fn rr_check(ctx: &Ctx, inputs: &Inputs) -> Result<Report, Failure> {
    let (g, d) = graph_and_divisor(inputs)?;
    let r = rr_report(&g, &d)?;
    let mut out = String::new();
    out.push_str(&format!("h0(D)={}\n", ctx.show(&r.h0_d)));
    out.push_str(&format!("h0(K-D)={}\n", ctx.show(&r.h0_k_minus_d)));
    out.push_str(&format!("deg(D)={}\n", ctx.show(&r.deg_d)));
    out.push_str(&format!("genus={}\n", ctx.show(&r.genus)));
    out.push_str(&format!("lhs={}\n", ctx.show(&r.lhs)));
    out.push_str(&format!("rhs={}\n", ctx.show(&r.rhs)));
    out.push_str(&format!("scale={}\n", r.scale_used));
    if r.holds() {
        out.push_str("holds\n");
        return Ok(Report::ok(out));
    }
    out.push_str("FAILS\n");
    Ok(Report {
        code: EXIT_FINDING,
        stdout: out,
        stderr: reproducer(&g, &d, None),
    })
}

fn jacobian(inputs: &Inputs, k: Option<usize>) -> Result<Report, Failure> {
    let g = graph_only(inputs)?;
    let k = vertex_arg("k", k.unwrap_or(g.n()), g.n())?;
    let j = jacobian_at(&g, k)?;
    let order = Rational::from_integer(j.order.clone());
    if reduced_determinant(&g, k)? != order || spanning_tree_count(&g) != order {
        return Ok(internal(
            &g,
            &Divisor::zero(g.n()),
            "Jacobian order, det(P_k) and spanning-tree count disagree",
        ));
    }
    Ok(Report::ok(format!(
        "{j}\norder={}\ninvariant_factors={}\n",
        j.order,
        join(j.invariant_factors.iter())
    )))
}

fn oracle_verify(inputs: &Inputs) -> Result<Report, Failure> {
    let (g, d) = graph_and_divisor(inputs)?;
    let pipeline = h0(&g, &d)?;
    let mut out = format!("pipeline h0={pipeline}\n");
    let mut agree = true;
    let mut compared = false;
    if g.is_integral() && d.is_integral() {
        let (m, id) = integer_instance(&g, &d)?;
        let engine = h0_int(&m, &id)?;
        let brute = brute_h0_int(&g, &d)?;
        let engine_empty = !linsys_nonempty_int(&m, &id, 0)?;
        let brute_empty = brute_linsys_empty_int(&g, &d)?;
        out.push_str(&format!("engine h0={engine}\nbrute h0={brute}\n"));
        out.push_str(&format!("engine empty={engine_empty}\nbrute empty={brute_empty}\n"));
        agree &= engine == brute
            && engine_empty == brute_empty
            && pipeline == Rational::from_integer(engine.into());
        compared = true;
    }
    if g.n() == 2 {
        let closed = two_vertex_h0(d.get(0), d.get(1), g.weight(0, 1))?;
        out.push_str(&format!("closed-form h0={closed}\n"));
        agree &= closed == pipeline;
        compared = true;
    }
    if !compared {
        return Err(Failure::Input(
            "oracle-verify needs integer weights and divisor, or a two-vertex graph".into(),
        ));
    }
    if agree {
        out.push_str("agree\n");
        return Ok(Report::ok(out));
    }
    out.push_str("DISAGREE\n");
    Ok(Report {
        code: EXIT_FINDING,
        stdout: out,
        stderr: reproducer(&g, &d, None),
    })
}

fn scan(config: ScanConfig) -> Result<Report, Failure> {
    if !config.step.is_positive() {
        return Err(Failure::Usage("--step must be positive".into()));
    }
    if !config.p.is_positive() {
        return Err(Failure::Usage("--p must be positive".into()));
    }
    let result = scan2v(&config)?;
    let stdout = render_csv(&result.rows, config.decimal);
    match result.mismatches.first() {
        None => Ok(Report::ok(stdout)),
        Some((d, what)) => Ok(Report {
            code: EXIT_FINDING,
            stdout,
            stderr: format!(
                "{} grid points disagree; first: {what}\n{}",
                result.mismatches.len(),
                reproducer(&result.graph, d, None)
            ),
        }),
    }
}
