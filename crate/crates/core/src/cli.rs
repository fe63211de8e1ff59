//! Command-line front end. [`run`] returns the process exit code so the
//! whole pipeline can be driven from tests.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::Value;

use crate::dot::network_dot;
use crate::error::{Error, Result};
use crate::io::{
    boundary_system_json, diagnosis_json, network_json, parse_boundary_system, parse_json, parse_metric_graph,
    read_header, to_pretty, Arithmetic, DocumentKind,
};
use crate::netcompile::{compile, flow_checks, Compilation, MetricGraphProblem};
use crate::realize::{
    check_assumptions, realize, BoundarySystem, Diagnosis, RealizeOptions, RealizeOutcome, RealizedNetwork, SinkPolicy,
    DEFAULT_BUDGET,
};
use crate::roundtrip::{roundtrip, RoundTripOutcome};
use crate::scalar::Scalar;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "graph-realize", version, about = "Graph realizability of hyperbolic boundary systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the structural assumptions (and, for graph inputs, flow connectivity).
    Check(CommonArgs),
    /// Reconstruct a graph from a boundary system.
    Realize(CommonArgs),
    /// Compile a metric-graph problem into a boundary system.
    Compile(CommonArgs),
    /// Compile, realize and compare with the input graph.
    Roundtrip(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Input JSON document.
    pub file: PathBuf,
    /// Zero threshold for coefficients (defaults: 0 exact, 1e-12 float).
    #[arg(long)]
    pub tol: Option<String>,
    /// Maximum number of sink groupings to try.
    #[arg(long, env = "GRAPH_REALIZE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Group sink arcs in any partition instead of pairs only.
    #[arg(long)]
    pub all_partitions: bool,
    /// Write the realized network as DOT.
    #[arg(long, value_name = "PATH")]
    pub dot: Option<PathBuf>,
    /// Write the JSON result (network, diagnosis or boundary system).
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Omit the timestamp line from the report.
    #[arg(long)]
    pub no_timestamp: bool,
}

/// Parses `args` (including the program name) and runs the command,
/// writing the report to `out` and errors to `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (name, args) = match &cli.command {
        Command::Check(a) => ("check", a),
        Command::Realize(a) => ("realize", a),
        Command::Compile(a) => ("compile", a),
        Command::Roundtrip(a) => ("roundtrip", a),
    };
    match execute(&cli.command, args) {
        Ok((code, report)) => {
            let mut text = String::new();
            let _ = writeln!(text, "graph-realize {name} {}", args.file.display());
            if !args.no_timestamp {
                let _ = writeln!(text, "generated: {}", chrono::Utc::now().to_rfc3339());
            }
            text.push_str(&report);
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn execute(command: &Command, args: &CommonArgs) -> Result<(i32, String)> {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| Error::Input { location: args.file.display().to_string(), message: e.to_string() })?;
    let doc = parse_json(&text)?;
    let header = read_header(&doc)?;
    match header.arithmetic {
        Arithmetic::Exact => dispatch::<BigRational>(command, args, &doc, header.kind),
        Arithmetic::Float => dispatch::<f64>(command, args, &doc, header.kind),
    }
}

fn dispatch<T: Scalar>(command: &Command, args: &CommonArgs, doc: &Value, kind: DocumentKind) -> Result<(i32, String)> {
    let tol = match &args.tol {
        None => T::default_tolerance(),
        Some(s) => T::from_decimal_str(s)
            .filter(|t| !t.is_negative())
            .ok_or_else(|| Error::Input { location: "--tol".into(), message: format!("bad tolerance \"{s}\"") })?,
    };
    let opts = RealizeOptions {
        tol,
        budget: args.budget,
        policy: if args.all_partitions { SinkPolicy::AnyPartition } else { SinkPolicy::Pairs },
        collect_all: false,
    };
    let expect = |want: DocumentKind, what: &str| -> Result<()> {
        if kind == want {
            Ok(())
        } else {
            Err(Error::Input {
                location: "kind".into(),
                message: format!("{what} expects a {} document", kind_name(want)),
            })
        }
    };
    match command {
        Command::Check(_) => match kind {
            DocumentKind::BoundarySystem => check_system(&parse_boundary_system::<T>(doc)?, &opts),
            DocumentKind::MetricGraph => check_graph(&parse_metric_graph::<T>(doc)?, &opts),
        },
        Command::Realize(_) => {
            expect(DocumentKind::BoundarySystem, "realize")?;
            realize_system(&parse_boundary_system::<T>(doc)?, &opts, args)
        }
        Command::Compile(_) => {
            expect(DocumentKind::MetricGraph, "compile")?;
            compile_graph(&parse_metric_graph::<T>(doc)?, &opts, args)
        }
        Command::Roundtrip(_) => {
            expect(DocumentKind::MetricGraph, "roundtrip")?;
            roundtrip_graph(&parse_metric_graph::<T>(doc)?, &opts, args)
        }
    }
}

fn kind_name(k: DocumentKind) -> &'static str {
    match k {
        DocumentKind::BoundarySystem => "boundary_system",
        DocumentKind::MetricGraph => "metric_graph",
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::Input { location: path.display().to_string(), message: e.to_string() })
}

fn check_system<T: Scalar>(bs: &BoundarySystem<T>, opts: &RealizeOptions<T>) -> Result<(i32, String)> {
    let report = check_assumptions(bs, &opts.tol)?;
    let mut text = String::new();
    for line in report.summary_lines().into_iter().chain(report.describe_failures()) {
        let _ = writeln!(text, "{line}");
    }
    let code = if report.all_passed() { EXIT_OK } else { EXIT_NEGATIVE };
    let _ = writeln!(text, "verdict: {}", if code == EXIT_OK { "all assumptions hold" } else { "assumption failure" });
    Ok((code, text))
}

fn compile_table<T: Scalar>(p: &MetricGraphProblem<T>, c: &Compilation<T>, text: &mut String) {
    let _ = writeln!(text, "vertex  role       k_v  conditions");
    for (v, vc) in c.vertices.iter().enumerate() {
        let verdict = match &vc.wellposed {
            None => "none (sink)".to_string(),
            Some(w) if w.passed() => format!("well posed (det {})", w.det),
            Some(w) => format!("ILL POSED (det {})", w.det),
        };
        let _ = writeln!(text, "{:<7} {:<10} {:<4} {verdict}", p.vertex_names[v], vc.role.to_string(), vc.assembly.k_v);
    }
}

fn check_graph<T: Scalar>(p: &MetricGraphProblem<T>, opts: &RealizeOptions<T>) -> Result<(i32, String)> {
    let c = compile(p, &opts.tol)?;
    let mut text = String::new();
    compile_table(p, &c, &mut text);
    let mut ok = c.ill_posed().is_empty();
    for f in flow_checks(&c, &opts.tol)? {
        let name = &p.vertex_names[f.vertex];
        let verdict = |pass: bool| if pass { "PASS" } else { "FAIL" };
        let _ = writeln!(text, "{name}: ass1: {}", verdict(f.ass1.is_none()));
        if let Some(full) = &f.full {
            let _ = writeln!(text, "{name}: sfC: {}", verdict(full.passed()));
        }
        if let Some(irr) = &f.irreducible {
            let _ = writeln!(text, "{name}: assirr: {}", verdict(irr.passed()));
        }
        if let Some(w) = &f.witness {
            let _ = writeln!(text, "{name}: {w}");
        }
        ok &= f.passed();
    }
    if let Some(bs) = &c.system {
        let report = check_assumptions(bs, &opts.tol)?;
        for line in report.summary_lines().into_iter().chain(report.describe_failures()) {
            let _ = writeln!(text, "{line}");
        }
        ok &= report.all_passed();
    }
    let _ = writeln!(text, "verdict: {}", if ok { "all assumptions hold" } else { "assumption failure" });
    Ok((if ok { EXIT_OK } else { EXIT_NEGATIVE }, text))
}

fn network_report<T: Scalar>(net: &RealizedNetwork<T>, text: &mut String) {
    let _ = writeln!(text, "vertices:");
    for (v, x) in net.vertices.iter().enumerate() {
        let _ = writeln!(text, "  v{} {} rows {} out {} in {}", v + 1, x.role, x.rows, x.out_arcs, x.in_arcs);
    }
    let _ = writeln!(text, "edges:");
    for (k, e) in net.edges.iter().enumerate() {
        let _ = writeln!(
            text,
            "  e_{}: ({},{}) [{}] x0=v{} x1=v{}",
            k + 1,
            e.components.0 + 1,
            e.components.1 + 1,
            e.kind,
            e.x0 + 1,
            e.x1 + 1
        );
    }
    let _ = writeln!(text, "vertex systems:");
    for s in &net.systems {
        let _ = writeln!(
            text,
            "  v{} rows {} out {} in {}: xi_out {} xi_in {}",
            s.vertex + 1,
            s.rows,
            s.out_cols,
            s.in_cols,
            s.xi_out,
            s.xi_in
        );
    }
}

fn diagnosis_report(d: &Diagnosis, text: &mut String) {
    let tags: Vec<String> = d.tags.iter().map(ToString::to_string).collect();
    let _ = writeln!(text, "tags: {}", if tags.is_empty() { "none".to_string() } else { tags.join(", ") });
    for line in d.assumptions.summary_lines().into_iter().chain(d.describe()) {
        let _ = writeln!(text, "{line}");
    }
}

fn realize_system<T: Scalar>(
    bs: &BoundarySystem<T>,
    opts: &RealizeOptions<T>,
    args: &CommonArgs,
) -> Result<(i32, String)> {
    let mut text = String::new();
    match realize(bs, opts)? {
        RealizeOutcome::Realizable(r) => {
            let _ = writeln!(text, "verdict: realizable");
            let _ = writeln!(
                text,
                "sink groupings tried: {}{}",
                r.tried,
                if r.complete { "" } else { " (search stopped at the first success)" }
            );
            network_report(&r.network, &mut text);
            if let Some(path) = &args.json {
                write_file(path, &to_pretty(&network_json(&r.network)))?;
            }
            if let Some(path) = &args.dot {
                write_file(path, &network_dot(&r.network))?;
            }
            Ok((EXIT_OK, text))
        }
        RealizeOutcome::NotRealizable(d) => {
            let _ = writeln!(text, "verdict: not realizable");
            diagnosis_report(&d, &mut text);
            if let Some(path) = &args.json {
                write_file(path, &to_pretty(&diagnosis_json(&d)))?;
            }
            Ok((EXIT_NEGATIVE, text))
        }
        RealizeOutcome::BudgetExhausted { tried, diagnosis } => {
            let _ = writeln!(text, "verdict: budget exhausted after {tried} sink groupings");
            diagnosis_report(&diagnosis, &mut text);
            if let Some(path) = &args.json {
                write_file(path, &to_pretty(&diagnosis_json(&diagnosis)))?;
            }
            Ok((EXIT_BUDGET, text))
        }
    }
}

fn compile_graph<T: Scalar>(
    p: &MetricGraphProblem<T>,
    opts: &RealizeOptions<T>,
    args: &CommonArgs,
) -> Result<(i32, String)> {
    let c = compile(p, &opts.tol)?;
    let mut text = String::new();
    compile_table(p, &c, &mut text);
    let Some(bs) = &c.system else {
        let _ = writeln!(text, "verdict: ill-posed vertex conditions");
        return Ok((EXIT_NEGATIVE, text));
    };
    let _ = writeln!(text, "verdict: compiled {} components", bs.size());
    let doc = to_pretty(&boundary_system_json(bs));
    match &args.json {
        Some(path) => write_file(path, &doc)?,
        None => text.push_str(&doc),
    }
    Ok((EXIT_OK, text))
}

fn roundtrip_graph<T: Scalar>(
    p: &MetricGraphProblem<T>,
    opts: &RealizeOptions<T>,
    args: &CommonArgs,
) -> Result<(i32, String)> {
    let mut text = String::new();
    match roundtrip(p, opts)? {
        RoundTripOutcome::Match { realizations, matched, .. } => {
            let net = &realizations[matched];
            let _ = writeln!(
                text,
                "verdict: round trip reproduces the input graph (realization {} of {})",
                matched + 1,
                realizations.len()
            );
            network_report(net, &mut text);
            if let Some(path) = &args.json {
                write_file(path, &to_pretty(&network_json(net)))?;
            }
            if let Some(path) = &args.dot {
                write_file(path, &network_dot(net))?;
            }
            Ok((EXIT_OK, text))
        }
        RoundTripOutcome::Failed { stage, reason } => {
            let _ = writeln!(text, "verdict: round trip failed at the {stage} stage");
            for line in reason {
                let _ = writeln!(text, "{stage}: {line}");
            }
            Ok((EXIT_NEGATIVE, text))
        }
    }
}
