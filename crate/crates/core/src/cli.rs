//! Command-line front end. [`run`] parses arguments, writes the requested
//! document and returns the process exit code: 0 on success, 1 when a
//! verification fails, 2 on usage errors and poles.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::cartan::CartanData;
use crate::coeffring::{BaseScalar, QuantumScalar};
use crate::exactnum::{lcm, parse_rational, Cyclotomic};
use crate::isocheck::{self, IsoError, RootVerdict};
use crate::mckay::{self, GroupLabel, LinearMap};
use crate::resolve;
use crate::ringtables::{self, render_latex, render_text, ProductTable, TableError};

#[derive(Debug, Parser)]
#[command(
    name = "crepant",
    version,
    about = "Exact cohomology rings of transversal A_n orbifolds and their crepant resolutions"
)]
struct Cli {
    /// Write the document to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableChoice {
    Cr,
    Cup,
    Qc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a product table.
    Table {
        kind: TableChoice,
        #[arg(long)]
        n: usize,
        /// Evaluation point for the quantum table, e.g. `e:1/3,e:1/3`.
        #[arg(long)]
        q: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Re-read the emitted JSON and compare with the table in memory.
        #[arg(long)]
        check_roundtrip: bool,
    },
    /// Check whether a linear map is a ring isomorphism at a point.
    Verify {
        #[arg(long)]
        n: usize,
        /// `bgp:M`, `chtd`, `identity` or `file:PATH`.
        #[arg(long)]
        map: String,
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Solve for isomorphisms in rank 1 or 2.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Test the candidate map at every primitive root of unity.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// McKay graph from characters (A_n) or reference data (D_n, E_6-8).
    Mckay {
        #[arg(long, conflicts_with = "group")]
        n: Option<u32>,
        /// Group label such as `D5` or `E6`.
        #[arg(long)]
        group: Option<String>,
        /// Keep the trivial representation.
        #[arg(long)]
        full: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: GraphFormat,
        /// Exit 1 unless the graph equals the blow-up resolution graph.
        #[arg(long)]
        compare_resolution: bool,
    },
    /// Resolve the A_n singularity by blow-ups.
    Resolve {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: GraphFormat,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Pole(String),
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<TableError> for CliError {
    fn from(e: TableError) -> Self {
        match e {
            TableError::Pole { .. } => CliError::Pole(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Outcome of a command: the document and whether checks passed.
struct Outcome {
    document: String,
    ok: bool,
}

impl Outcome {
    fn ok(document: String) -> Self {
        Outcome { document, ok: true }
    }
}

/// Parses `e:j/k` literals, meaning `exp(2πi j/k)`.
pub fn parse_q_point(text: &str) -> Result<Vec<(i64, u64)>, String> {
    text.split(',')
        .map(|item| {
            let item = item.trim();
            let body = item
                .strip_prefix("e:")
                .ok_or_else(|| format!("expected e:j/k, got {item:?}"))?;
            let r = parse_rational(body).map_err(|e| e.to_string())?;
            let k = u64::try_from(r.denom().clone())
                .map_err(|_| format!("denominator too large in {item:?}"))?;
            let j = i64::try_from(r.numer().clone())
                .map_err(|_| format!("numerator too large in {item:?}"))?;
            Ok((j, k))
        })
        .collect()
}

/// The point as cyclotomic numbers in the session conductor
/// `lcm(4(n+1), denominators)`.
fn session_point(n: usize, text: &str) -> Result<Vec<Cyclotomic>, CliError> {
    let parts = parse_q_point(text).map_err(CliError::Usage)?;
    if parts.len() != n {
        return Err(CliError::Usage(format!(
            "expected {n} q-values, got {}",
            parts.len()
        )));
    }
    let conductor = parts
        .iter()
        .fold(4 * (n as u64 + 1), |acc, (_, k)| lcm(acc, *k));
    Ok(parts
        .iter()
        .map(|&(j, k)| Cyclotomic::zeta(k, j).lift(conductor))
        .collect())
}

fn check_rank(n: usize) -> Result<(), CliError> {
    if (1..=16).contains(&n) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("rank must be in 1..=16, got {n}")))
    }
}

fn emit_table<C>(
    table: &ProductTable<C>,
    format: Format,
    roundtrip: bool,
) -> Result<Outcome, CliError>
where
    C: crate::coeffring::Coefficient
        + ringtables::ToLatex
        + Serialize
        + serde::de::DeserializeOwned,
{
    let json = table.to_json();
    let ok = if roundtrip {
        ProductTable::<C>::from_json(&json)
            .map(|t| &t == table)
            .unwrap_or(false)
    } else {
        true
    };
    let document = match format {
        Format::Json => json + "\n",
        Format::Text => render_text(table),
        Format::Latex => render_latex(table),
    };
    Ok(Outcome { document, ok })
}

fn cmd_table(
    kind: TableChoice,
    n: usize,
    q: Option<&str>,
    format: Format,
    roundtrip: bool,
) -> Result<Outcome, CliError> {
    check_rank(n)?;
    let cd = CartanData::build(n);
    match (kind, q) {
        (TableChoice::Cr, None) => emit_table(&ringtables::cr_table(n), format, roundtrip),
        (TableChoice::Cup, None) => emit_table(&ringtables::cup_table(&cd), format, roundtrip),
        (TableChoice::Qc, None) => {
            emit_table::<QuantumScalar>(&ringtables::qc_table(&cd), format, roundtrip)
        }
        (TableChoice::Qc, Some(text)) => {
            let point = session_point(n, text)?;
            let table = ringtables::qc_eval(&ringtables::qc_table(&cd), &point)?;
            emit_table::<BaseScalar>(&table, format, roundtrip)
        }
        (_, Some(_)) => Err(CliError::Usage("--q applies only to the qc table".into())),
    }
}

fn load_map(n: usize, source: &str) -> Result<LinearMap, CliError> {
    let map = if let Some(m) = source.strip_prefix("bgp:") {
        let m: i64 = m
            .parse()
            .map_err(|_| CliError::Usage(format!("bad root index {m:?}")))?;
        mckay::bgp_map(n, m).map_err(|e| CliError::Usage(e.to_string()))?
    } else if source == "chtd" {
        mckay::chtd_map(n)
    } else if source == "identity" {
        LinearMap::identity(n)
    } else if let Some(path) = source.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        let parsed: LinearMap =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
        LinearMap::from_matrix(parsed.matrix().to_vec())
            .map_err(|e| CliError::Usage(e.to_string()))?
    } else {
        return Err(CliError::Usage(format!("unknown map {source:?}")));
    };
    if map.rank() != n {
        return Err(CliError::Usage(format!(
            "map has rank {}, expected {n}",
            map.rank()
        )));
    }
    Ok(map)
}

fn cmd_verify(n: usize, map: &str, q: &str, format: Format) -> Result<Outcome, CliError> {
    check_rank(n)?;
    let map = load_map(n, map)?;
    let point = session_point(n, q)?;
    let report = isocheck::verify_at(&map, &point).map_err(|e| match e {
        IsoError::Table(t) => CliError::from(t),
        other => other.into(),
    })?;
    let document = match format {
        Format::Json => report.to_json() + "\n",
        _ => {
            let mut s = String::new();
            for e in &report.entries {
                if e.pass() {
                    s.push_str(&format!("E{}*E{}: ok\n", e.i, e.j));
                } else {
                    let mut diff = vec![format!("s: {}", e.diff.s_coeff())];
                    for (k, c) in e.diff.basis_coeffs().iter().enumerate() {
                        diff.push(format!("e{}: {c}", k + 1));
                    }
                    s.push_str(&format!(
                        "E{}*E{}: differs ({})\n",
                        e.i,
                        e.j,
                        diff.join(", ")
                    ));
                }
            }
            s.push_str(if report.pass() { "pass\n" } else { "fail\n" });
            s
        }
    };
    Ok(Outcome {
        document,
        ok: report.pass(),
    })
}

#[derive(Serialize)]
struct SolutionDoc {
    n: usize,
    solutions: Vec<serde_json::Value>,
}

fn show(c: &Cyclotomic) -> String {
    format!("{c} (≈ {})", c.to_decimal_string())
}

fn cmd_solve(n: usize, format: Format) -> Result<Outcome, CliError> {
    let (json, text): (Vec<serde_json::Value>, Vec<String>) = match n {
        1 => isocheck::solve_a1()?
            .into_iter()
            .map(|s| {
                (
                    serde_json::json!({ "t": s.t, "q": s.q }),
                    format!("t = {}, q = {}", show(&s.t), show(&s.q)),
                )
            })
            .unzip(),
        2 => isocheck::solve_a2()?
            .into_iter()
            .map(|s| {
                (
                    serde_json::json!({ "a": s.a, "b": s.b, "q1": s.q1, "q2": s.q2 }),
                    format!(
                        "a = {}, b = {}, q1 = {}, q2 = {}",
                        show(&s.a),
                        show(&s.b),
                        show(&s.q1),
                        show(&s.q2)
                    ),
                )
            })
            .unzip(),
        _ => return Err(CliError::Usage("solve supports n = 1 or n = 2".into())),
    };
    let document = match format {
        Format::Json => {
            serde_json::to_string_pretty(&SolutionDoc { n, solutions: json }).expect("serializable")
                + "\n"
        }
        _ => text.join("\n") + "\n",
    };
    Ok(Outcome::ok(document))
}

fn cmd_scan(n: usize, format: Format) -> Result<Outcome, CliError> {
    check_rank(n)?;
    let scan = isocheck::conjecture_scan(n)?;
    let document = match format {
        Format::Json => serde_json::to_string_pretty(&scan).expect("serializable") + "\n",
        _ => scan
            .roots
            .iter()
            .map(|r| {
                let verdict = match &r.verdict {
                    RootVerdict::Pass => "pass".to_string(),
                    RootVerdict::Fail { failing_entries } => {
                        let pairs: Vec<String> = failing_entries
                            .iter()
                            .map(|(i, j)| format!("E{i}*E{j}"))
                            .collect();
                        format!("fail at {}", pairs.join(", "))
                    }
                    RootVerdict::Undefined { mu, nu } => format!("undefined (pole at δ{mu}{nu})"),
                };
                format!("m = {}, q = {}: {verdict}\n", r.m_root, r.q)
            })
            .collect(),
    };
    Ok(Outcome::ok(document))
}

fn cmd_mckay(
    n: Option<u32>,
    group: Option<&str>,
    full: bool,
    format: GraphFormat,
    compare: bool,
) -> Result<Outcome, CliError> {
    let label = match (n, group) {
        (Some(n), None) if n >= 1 => GroupLabel::A(n),
        (None, Some(g)) => g
            .parse()
            .map_err(|e: mckay::McKayError| CliError::Usage(e.to_string()))?,
        _ => {
            return Err(CliError::Usage(
                "give --n N (N >= 1) or --group LABEL".into(),
            ))
        }
    };
    let graph = mckay::mckay_graph(label, !full).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut ok = true;
    let mut document = match format {
        GraphFormat::Json => serde_json::to_string_pretty(&graph).expect("serializable") + "\n",
        GraphFormat::Dot => graph.to_dot(),
        GraphFormat::Text => {
            let mut s = format!(
                "McKay graph of {label}, automorphisms {}\n",
                mckay::aut_gamma(label)
            );
            for (v, row) in graph.vertices.iter().zip(&graph.adjacency) {
                let row: Vec<String> = row.iter().map(u32::to_string).collect();
                s.push_str(&format!(
                    "{} (dim {}): {}\n",
                    v.name,
                    v.degree,
                    row.join(" ")
                ));
            }
            s
        }
    };
    if compare {
        let GroupLabel::A(n) = label else {
            return Err(CliError::Usage(
                "--compare-resolution needs an A_n graph".into(),
            ));
        };
        if full {
            return Err(CliError::Usage(
                "--compare-resolution uses the reduced graph".into(),
            ));
        }
        let res = resolve::resolve_an(n).map_err(|e| CliError::Usage(e.to_string()))?;
        ok = res.matches_mckay();
        if format == GraphFormat::Text {
            document.push_str(if ok {
                "matches resolution graph\n"
            } else {
                "differs from resolution graph\n"
            });
        }
    }
    Ok(Outcome { document, ok })
}

fn cmd_resolve(n: u32, format: GraphFormat) -> Result<Outcome, CliError> {
    if !(1..=64).contains(&n) {
        return Err(CliError::Usage(format!("rank must be in 1..=64, got {n}")));
    }
    let g = resolve::resolve_an(n).map_err(|e| CliError::Usage(e.to_string()))?;
    let document = match format {
        GraphFormat::Json => g.to_json() + "\n",
        GraphFormat::Dot => g.to_dot(),
        GraphFormat::Text => {
            let mut s = String::new();
            for (round, charts) in g.history.iter().enumerate() {
                s.push_str(&format!("blow-up {}:\n", round + 1));
                for c in charts {
                    s.push_str(&format!(
                        "  {}: {} = 0 ({})\n",
                        c.name, c.equation, c.singularity
                    ));
                }
            }
            let order = g.chain_order().unwrap_or_default();
            let names: Vec<String> = order.iter().map(|id| format!("C{id}")).collect();
            s.push_str(&format!(
                "chain: {} (all self-intersections -2)\n",
                names.join(" - ")
            ));
            s
        }
    };
    Ok(Outcome::ok(document))
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Table {
            kind,
            n,
            q,
            format,
            check_roundtrip,
        } => cmd_table(*kind, *n, q.as_deref(), *format, *check_roundtrip),
        Command::Verify { n, map, q, format } => cmd_verify(*n, map, q, *format),
        Command::Solve { n, format } => cmd_solve(*n, *format),
        Command::Scan { n, format } => cmd_scan(*n, *format),
        Command::Mckay {
            n,
            group,
            full,
            format,
            compare_resolution,
        } => cmd_mckay(*n, group.as_deref(), *full, *format, *compare_resolution),
        Command::Resolve { n, format } => cmd_resolve(*n, *format),
    }
}

/// Runs the tool on `args` (including the program name).
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
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &outcome.document),
        None => out.write_all(outcome.document.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    if !outcome.ok {
        let _ = writeln!(err, "check failed");
        return 1;
    }
    0
}
