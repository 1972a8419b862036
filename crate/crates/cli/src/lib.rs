//! The `qnp` command line.
//!
//! [`run`] parses arguments, runs one subcommand and writes its data to `out`
//! and its diagnostics to `err`. The return value is the process exit code:
//! 0 for success or a passing verdict, 1 for a failing (or undecided)
//! verdict, 2 for usage, input and computation errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use qnp::graph::{compare_walks_with_formula, degree_warnings};
use qnp::io::{format_ideal, parse_ideal, IdealDocument};
use qnp::{
    base_set, check_d1_d2, check_exchange, check_linear_quotients, cm_report, edge_ideal,
    enumerate_walk_monomials, find_linear_quotients_order, generalized_graph_ideal, log_set,
    power_via_compositions, CmStatus, ExchangeScope, ExchangeVerdict, LinearQuotients, Monomial,
    MonomialIdeal, MonomialPrime, OrderSearch, PolymatroidVerdict, StrongQuasiGraph, WalkPolicy,
};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: qnp::Error },
    #[error(transparent)]
    Core(#[from] qnp::Error),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "qnp",
    version,
    about = "Monomial ideals of strong quasi-n-partite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the generalized graph ideal I_t(G), or an ideal file in canonical form.
    Ideal(SourceArgs),
    /// Print the edge ideal I(G), loops included.
    EdgeIdeal(GraphArgs),
    /// Print the k-th power of an ideal.
    Power(PowerArgs),
    /// Print the colon ideal I : u.
    Colon(ColonArgs),
    /// Print the monomial localization of an ideal at a monomial prime.
    Localize(LocalizeArgs),
    /// Run one of the structural checkers.
    Check {
        #[command(subcommand)]
        check: Check,
    },
    /// Vertex covers, height, dimension and the Cohen-Macaulay verdict.
    Cm(CmArgs),
    /// Enumerate walk monomials and optionally compare them with I_{L+1}.
    Walks(WalksArgs),
    /// Print the log set (exponent vectors) of an ideal's generators.
    Log(SourceArgs),
}

#[derive(Debug, Subcommand)]
enum Check {
    /// Exchange property of the minimal generators.
    Exchange {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum, default_value_t = ScopeArg::Any)]
        scope: ScopeArg,
    },
    /// Discrete polymatroid axioms D1 and D2 on the subvector closure.
    D1d2 {
        #[command(flatten)]
        source: SourceArgs,
        /// Largest subvector closure that will be materialized.
        #[arg(long, default_value_t = 20_000)]
        closure_cap: usize,
    },
    /// Linear quotients, for the canonical order or by search.
    LinearQuotients {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum, default_value_t = OrderArg::Canonical)]
        order: OrderArg,
        /// Node budget of the order search.
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScopeArg {
    Any,
    Block,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderArg {
    Canonical,
    Search,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ViaArg {
    Formula,
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Trail,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

/// Where the ideal comes from: `--graph` with `--t`, or `--ideal-file`.
#[derive(Debug, Args)]
struct SourceArgs {
    /// Graph spec such as "shape=2,2,2;edges=complete".
    #[arg(long, conflicts_with = "ideal_file")]
    graph: Option<String>,
    /// Degree t of the generalized graph ideal.
    #[arg(long, requires = "graph")]
    t: Option<u32>,
    /// Per-variable exponent cap of the Veronese-type factors.
    #[arg(long, default_value_t = qnp::DEFAULT_CAP)]
    cap: u32,
    /// Read the ideal from a file in the text ideal format.
    #[arg(long)]
    ideal_file: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct PowerArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    k: u32,
    /// Use the composition formula (needs --graph/--t) or repeated products.
    #[arg(long, value_enum, default_value_t = ViaArg::Naive)]
    via: ViaArg,
}

#[derive(Debug, Args)]
struct ColonArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Monomial u, such as "x[1,1]^2*x[2,1]".
    #[arg(long)]
    by: String,
}

#[derive(Debug, Args)]
struct LocalizeArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Variables of the prime, such as "x[1,1],x[2,1]".
    #[arg(long)]
    prime: String,
}

#[derive(Debug, Args)]
struct CmArgs {
    /// Analyse the edge ideal of this graph.
    #[arg(long, conflicts_with = "ideal_file")]
    graph: Option<String>,
    /// Analyse the ideal in this file instead.
    #[arg(long)]
    ideal_file: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct WalksArgs {
    #[arg(long)]
    graph: String,
    /// Walk length L; monomials have degree L + 1.
    #[arg(long)]
    length: usize,
    #[arg(long, value_enum, default_value_t = PolicyArg::Trail)]
    policy: PolicyArg,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    monotone: Switch,
    /// Compare against the generators of I_{L+1}.
    #[arg(long)]
    compare_formula: bool,
    #[arg(long, default_value_t = qnp::DEFAULT_CAP)]
    cap: u32,
    #[arg(long)]
    json: bool,
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Context {
        out,
        err,
        warnings: Vec::new(),
    };
    match ctx.dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            2
        }
    }
}

struct Context<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    warnings: Vec<String>,
}

fn parse_graph(spec: &str) -> CliResult<StrongQuasiGraph> {
    spec.parse()
        .map_err(|e| CliError::Usage(format!("bad --graph {spec:?}: {e}")))
}

fn read_ideal(path: &PathBuf) -> CliResult<MonomialIdeal> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.clone(),
        source,
    })?;
    parse_ideal(&text).map_err(|source| CliError::File {
        path: path.clone(),
        source,
    })
}

#[derive(Serialize)]
struct ExchangeJson {
    verdict: &'static str,
    scope: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    u: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    v: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    at: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'static str>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct D1d2Json {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closure_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<String>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct LinearQuotientsJson {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failing_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    colon: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    complete: Option<bool>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct CmJson {
    height: usize,
    variables: usize,
    dimension: usize,
    verdict: &'static str,
    basis: &'static str,
    covers: Vec<Vec<String>>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct WalksJson {
    length: usize,
    trail: bool,
    monotone: bool,
    walk_monomials: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    formula: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    only_walks: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    only_formula: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct LogJson {
    shape: Vec<usize>,
    vectors: Vec<Vec<u32>>,
}

fn names(ms: &[Monomial]) -> Vec<String> {
    ms.iter().map(|m| m.to_string()).collect()
}

fn vectors(ms: &[Monomial]) -> Vec<Vec<u32>> {
    ms.iter().map(|m| m.exponents().to_vec()).collect()
}

impl Context<'_> {
    fn warn(&mut self, message: String) -> CliResult<()> {
        writeln!(self.err, "warning: {message}")?;
        self.warnings.push(message);
        Ok(())
    }

    fn load(&mut self, source: &SourceArgs) -> CliResult<MonomialIdeal> {
        match (&source.graph, &source.ideal_file) {
            (Some(spec), None) => {
                let graph = parse_graph(spec)?;
                let t = source
                    .t
                    .ok_or_else(|| CliError::Usage("--graph needs --t".into()))?;
                for w in degree_warnings(graph.shape(), t, source.cap) {
                    self.warn(w)?;
                }
                Ok(generalized_graph_ideal(&graph, t, source.cap)?)
            }
            (None, Some(path)) => read_ideal(path),
            _ => Err(CliError::Usage(
                "give either --graph with --t, or --ideal-file".into(),
            )),
        }
    }

    fn emit_ideal(&mut self, ideal: &MonomialIdeal, json: bool) -> CliResult<i32> {
        if json {
            let doc = IdealDocument::new(ideal, std::mem::take(&mut self.warnings));
            let text = serde_json::to_string(&doc).expect("ideal serializes");
            writeln!(self.out, "{text}")?;
        } else {
            self.out.write_all(format_ideal(ideal).as_bytes())?;
        }
        Ok(0)
    }

    fn emit_json<T: Serialize>(&mut self, value: &T) -> CliResult<()> {
        let text = serde_json::to_string(value).expect("report serializes");
        writeln!(self.out, "{text}")?;
        Ok(())
    }

    fn dispatch(&mut self, command: Command) -> CliResult<i32> {
        match command {
            Command::Ideal(source) => {
                let ideal = self.load(&source)?;
                if ideal.is_zero() {
                    self.warn("the ideal is zero".into())?;
                }
                self.emit_ideal(&ideal, source.json)
            }
            Command::EdgeIdeal(args) => {
                let graph = parse_graph(&args.graph)?;
                self.emit_ideal(&edge_ideal(&graph), args.json)
            }
            Command::Power(args) => self.power(args),
            Command::Colon(args) => {
                let ideal = self.load(&args.source)?;
                let u = Monomial::parse(ideal.shape(), &args.by)
                    .map_err(|e| CliError::Usage(format!("bad --by {:?}: {e}", args.by)))?;
                self.emit_ideal(&ideal.colon(&u)?, args.source.json)
            }
            Command::Localize(args) => {
                let ideal = self.load(&args.source)?;
                let prime = MonomialPrime::parse(ideal.shape(), &args.prime)
                    .map_err(|e| CliError::Usage(format!("bad --prime {:?}: {e}", args.prime)))?;
                self.emit_ideal(&ideal.localize(&prime)?, args.source.json)
            }
            Command::Check { check } => match check {
                Check::Exchange { source, scope } => self.check_exchange(&source, scope),
                Check::D1d2 {
                    source,
                    closure_cap,
                } => self.check_d1d2(&source, closure_cap),
                Check::LinearQuotients {
                    source,
                    order,
                    budget,
                } => self.check_linear_quotients(&source, order, budget),
            },
            Command::Cm(args) => self.cm(args),
            Command::Walks(args) => self.walks(args),
            Command::Log(source) => self.log(&source),
        }
    }

    fn power(&mut self, args: PowerArgs) -> CliResult<i32> {
        if args.k == 0 {
            return Err(CliError::Usage("--k must be at least 1".into()));
        }
        let result = match args.via {
            ViaArg::Naive => self.load(&args.source)?.power(args.k)?,
            ViaArg::Formula => {
                let (Some(spec), Some(t)) = (&args.source.graph, args.source.t) else {
                    return Err(CliError::Usage(
                        "--via formula needs --graph and --t".into(),
                    ));
                };
                let graph = parse_graph(spec)?;
                for w in degree_warnings(graph.shape(), t, args.source.cap) {
                    self.warn(w)?;
                }
                power_via_compositions(&graph, t, args.k, args.source.cap)?
            }
        };
        self.emit_ideal(&result, args.source.json)
    }

    fn check_exchange(&mut self, source: &SourceArgs, scope: ScopeArg) -> CliResult<i32> {
        let ideal = self.load(source)?;
        let scope = match scope {
            ScopeArg::Any => ExchangeScope::AnyVariable,
            ScopeArg::Block => ExchangeScope::SameBlock,
        };
        let verdict = check_exchange(&ideal, scope)?;
        let mut report = ExchangeJson {
            verdict: if verdict.passed() { "PASS" } else { "FAIL" },
            scope: scope.to_string(),
            u: None,
            v: None,
            at: None,
            reason: None,
            warnings: Vec::new(),
        };
        let line = match &verdict {
            ExchangeVerdict::Pass => "PASS".to_string(),
            ExchangeVerdict::Violation(w) => {
                report.u = Some(w.u.to_string());
                report.v = Some(w.v.to_string());
                report.at = Some(w.from.to_string());
                report.reason = Some("exchange");
                format!("FAIL u={} v={} at={}", w.u, w.v, w.from)
            }
            ExchangeVerdict::NotEquigenerated { low, high } => {
                report.u = Some(low.to_string());
                report.v = Some(high.to_string());
                report.reason = Some("degree");
                format!("FAIL u={low} v={high} reason=degree")
            }
        };
        if source.json {
            report.warnings = std::mem::take(&mut self.warnings);
            self.emit_json(&report)?;
        } else {
            writeln!(self.out, "{line}")?;
        }
        Ok(if verdict.passed() { 0 } else { 1 })
    }

    fn check_d1d2(&mut self, source: &SourceArgs, cap: usize) -> CliResult<i32> {
        let ideal = self.load(source)?;
        let bases = base_set(&ideal)?;
        let verdict = check_d1_d2(&bases, cap)?;
        let mut report = D1d2Json {
            verdict: if verdict.is_valid() { "PASS" } else { "FAIL" },
            rank: None,
            closure_size: None,
            a: None,
            b: None,
            warnings: Vec::new(),
        };
        let line = match &verdict {
            PolymatroidVerdict::Valid { rank, closure_size } => {
                report.rank = Some(*rank);
                report.closure_size = Some(*closure_size);
                format!("PASS rank={rank} closure={closure_size}")
            }
            PolymatroidVerdict::D2Violation { a, b } => {
                report.a = Some(a.to_vector_string());
                report.b = Some(b.to_vector_string());
                format!(
                    "FAIL a={} b={} axiom=D2",
                    a.to_vector_string(),
                    b.to_vector_string()
                )
            }
        };
        if source.json {
            report.warnings = std::mem::take(&mut self.warnings);
            self.emit_json(&report)?;
        } else {
            writeln!(self.out, "{line}")?;
        }
        Ok(if verdict.is_valid() { 0 } else { 1 })
    }

    fn check_linear_quotients(
        &mut self,
        source: &SourceArgs,
        order: OrderArg,
        budget: usize,
    ) -> CliResult<i32> {
        let ideal = self.load(source)?;
        if !ideal.is_equigenerated() {
            self.warn("the ideal is not generated in a single degree".into())?;
        }
        let mut report = LinearQuotientsJson {
            verdict: "PASS",
            order: None,
            failing_index: None,
            colon: None,
            nodes: None,
            complete: None,
            warnings: Vec::new(),
        };
        let mut lines = Vec::new();
        let code = match order {
            OrderArg::Canonical => match check_linear_quotients(&ideal, ideal.generators())? {
                LinearQuotients::Linear => {
                    lines.push("PASS".to_string());
                    0
                }
                LinearQuotients::Fails { index, colon } => {
                    report.verdict = "FAIL";
                    report.failing_index = Some(index);
                    report.colon = Some(names(colon.generators()));
                    lines.push(format!(
                        "FAIL at={index} colon={}",
                        names(colon.generators()).join(",")
                    ));
                    1
                }
            },
            OrderArg::Search => match find_linear_quotients_order(&ideal, budget)? {
                OrderSearch::Found { order, nodes } => {
                    report.order = Some(names(&order));
                    report.nodes = Some(nodes);
                    lines.push(format!("PASS nodes={nodes}"));
                    lines.extend(names(&order));
                    0
                }
                OrderSearch::Exhausted { complete, nodes } => {
                    report.nodes = Some(nodes);
                    report.complete = Some(complete);
                    if complete {
                        report.verdict = "FAIL";
                        lines.push(format!("FAIL no order exists nodes={nodes}"));
                    } else {
                        report.verdict = "UNKNOWN";
                        lines.push(format!("UNKNOWN budget exhausted nodes={nodes}"));
                    }
                    1
                }
            },
        };
        if source.json {
            report.warnings = std::mem::take(&mut self.warnings);
            self.emit_json(&report)?;
        } else {
            for l in lines {
                writeln!(self.out, "{l}")?;
            }
        }
        Ok(code)
    }

    fn cm(&mut self, args: CmArgs) -> CliResult<i32> {
        let ideal = match (&args.graph, &args.ideal_file) {
            (Some(spec), None) => edge_ideal(&parse_graph(spec)?),
            (None, Some(path)) => read_ideal(path)?,
            _ => {
                return Err(CliError::Usage(
                    "give either --graph or --ideal-file".into(),
                ))
            }
        };
        let report = cm_report(&ideal)?;
        let (verdict, basis) = match report.status {
            CmStatus::CohenMacaulay => ("CM", "dimension zero: depth = dim = 0"),
            CmStatus::Undetermined => (
                "UNDETERMINED",
                "CM status not determined by this tool (positive dimension)",
            ),
        };
        let covers: Vec<Vec<String>> = report
            .covers
            .iter()
            .map(|c| c.members.iter().map(|v| v.to_string()).collect())
            .collect();
        if args.json {
            let doc = CmJson {
                height: report.height,
                variables: report.variables,
                dimension: report.dimension,
                verdict,
                basis,
                covers,
                warnings: std::mem::take(&mut self.warnings),
            };
            self.emit_json(&doc)?;
        } else {
            writeln!(self.out, "height: {}", report.height)?;
            writeln!(self.out, "variables: {}", report.variables)?;
            writeln!(self.out, "dimension: {}", report.dimension)?;
            writeln!(self.out, "verdict: {verdict}")?;
            writeln!(self.out, "basis: {basis}")?;
            for c in covers {
                writeln!(self.out, "cover: {}", c.join(","))?;
            }
        }
        Ok(0)
    }

    fn walks(&mut self, args: WalksArgs) -> CliResult<i32> {
        let graph = parse_graph(&args.graph)?;
        let policy = WalkPolicy {
            trail: args.policy == PolicyArg::Trail,
            monotone: args.monotone == Switch::On,
        };
        let mut doc = WalksJson {
            length: args.length,
            trail: policy.trail,
            monotone: policy.monotone,
            walk_monomials: Vec::new(),
            formula: None,
            only_walks: None,
            only_formula: None,
            agree: None,
            warnings: Vec::new(),
        };
        let mut lines = Vec::new();
        if args.compare_formula {
            let cmp = compare_walks_with_formula(&graph, args.length, policy, args.cap)?;
            if !cmp.agree() {
                self.warn(format!(
                    "walk monomials and I_{} disagree ({} only from walks, {} only from the formula)",
                    args.length + 1,
                    cmp.only_walks.len(),
                    cmp.only_formula.len()
                ))?;
            }
            lines.push(format!("walk monomials: {}", cmp.walk_monomials.len()));
            lines.extend(names(&cmp.walk_monomials));
            lines.push(format!("formula generators: {}", cmp.formula.len()));
            lines.push(format!("only in walks: {}", cmp.only_walks.len()));
            lines.extend(names(&cmp.only_walks));
            lines.push(format!("only in formula: {}", cmp.only_formula.len()));
            lines.extend(names(&cmp.only_formula));
            lines.push(format!("agree: {}", if cmp.agree() { "yes" } else { "no" }));
            doc.walk_monomials = vectors(&cmp.walk_monomials);
            doc.formula = Some(vectors(cmp.formula.generators()));
            doc.only_walks = Some(vectors(&cmp.only_walks));
            doc.only_formula = Some(vectors(&cmp.only_formula));
            doc.agree = Some(cmp.agree());
        } else {
            let found = enumerate_walk_monomials(&graph, args.length, policy)?;
            lines.push(format!("walk monomials: {}", found.len()));
            lines.extend(names(&found));
            doc.walk_monomials = vectors(&found);
        }
        if args.json {
            doc.warnings = std::mem::take(&mut self.warnings);
            self.emit_json(&doc)?;
        } else {
            for l in lines {
                writeln!(self.out, "{l}")?;
            }
        }
        Ok(0)
    }

    fn log(&mut self, source: &SourceArgs) -> CliResult<i32> {
        let ideal = self.load(source)?;
        let set = log_set(ideal.generators())?;
        // Descending, to match the canonical generator order.
        let ordered: Vec<Vec<u32>> = set.into_iter().rev().collect();
        if source.json {
            self.emit_json(&LogJson {
                shape: ideal.shape().block_sizes().to_vec(),
                vectors: ordered,
            })?;
        } else {
            for v in ordered {
                let m = Monomial::from_exponents(ideal.shape(), v)?;
                writeln!(self.out, "{}", m.to_vector_string())?;
            }
        }
        Ok(0)
    }
}
