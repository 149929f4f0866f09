//! The `matdecomp` command line.
//!
//! Exit codes: 0 success, 1 invalid user data or a failed check, 2 usage, 3 internal error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::acceptance;
use crate::canonical::{canonicalize_with, catalog, catalog_entry, scramble, CanonLabel, CanonOptions};
use crate::error::{Error, Result};
use crate::ffsearch::{sample_search, search, SearchReport, DEFAULT_BUDGET};
use crate::field::FieldDescriptor;
use crate::fingerprint::{fingerprint, separation_report};
use crate::io::{self, DecompositionDoc, SCHEMA};
use crate::rota::{rb_from_splitting, rb_violations, RBOperator};
use crate::subalg::MLabel;

#[derive(Parser, Debug)]
#[command(
    name = "matdecomp",
    version,
    about = "Nonunital direct decompositions of the 3x3 matrix algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Dims {
    #[value(name = "63")]
    D63,
    #[value(name = "54")]
    D54,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the catalog of canonical decompositions.
    Catalog {
        #[arg(long, value_parser = parse_label)]
        label: Option<CanonLabel>,
        #[arg(long)]
        json: bool,
    },
    /// Check closure, dimensions, directness and nonunitality of a decomposition file.
    Verify { file: PathBuf },
    /// Reduce a decomposition to its canonical form.
    Canonicalize {
        file: PathBuf,
        /// Fail instead of adjoining a square root.
        #[arg(long)]
        no_extend: bool,
    },
    /// Move a catalog entry by a random automorphism preserving its M.
    Scramble {
        #[arg(long, value_parser = parse_label)]
        label: CanonLabel,
        #[arg(long)]
        seed: u64,
    },
    /// Orbit invariants of the S half of a decomposition.
    Fingerprint {
        #[arg(required_unless_present = "label", conflicts_with = "label")]
        file: Option<PathBuf>,
        #[arg(long, value_parser = parse_label)]
        label: Option<CanonLabel>,
    },
    /// Compare fingerprints of all catalog entries sharing an M.
    Separate {
        #[arg(long)]
        json: bool,
    },
    /// Rota-Baxter operators induced by catalog splittings.
    Rb {
        #[arg(long, value_parser = parse_label, required_unless_present = "all")]
        label: Option<CanonLabel>,
        /// Rational weight, nonzero.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        weight: String,
        #[arg(long)]
        all: bool,
    },
    /// Enumerate or sample complements over a prime field.
    Search {
        #[arg(long, value_enum)]
        dims: Dims,
        #[arg(long)]
        p: u64,
        #[arg(long, value_parser = parse_m)]
        m: Option<MLabel>,
        /// Sample this many random candidates instead of a full scan.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Print a histogram table instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Restrict to these criteria.
        #[arg(long)]
        only: Vec<u8>,
    },
}

fn parse_label(s: &str) -> std::result::Result<CanonLabel, String> {
    CanonLabel::parse(s).map_err(|e| e.to_string())
}

fn parse_m(s: &str) -> std::result::Result<MLabel, String> {
    MLabel::parse(s).map_err(|e| e.to_string())
}

/// Failure of a command, carrying its exit code.
struct Exit(i32, String);

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = if e.is_internal() { 3 } else { 1 };
        Exit(code, e.to_string())
    }
}

fn read(path: &PathBuf) -> std::result::Result<String, Exit> {
    std::fs::read_to_string(path).map_err(|e| Exit(1, format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<'a, I, T>(argv: I, out: &'a mut dyn Write, err: &'a mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let sink = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Exit(0, _)) => 0,
        Err(Exit(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> std::result::Result<i32, Exit> {
    let q = FieldDescriptor::Rational;
    let mut emit = |s: String| {
        writeln!(out, "{s}").map_err(|e| match e.kind() {
            std::io::ErrorKind::BrokenPipe => Exit(0, String::new()),
            _ => Exit(1, e.to_string()),
        })
    };
    match cmd {
        Command::Catalog { label, json } => {
            let entries: Vec<_> = match label {
                Some(l) => vec![(l, catalog_entry(l, &q))],
                None => catalog(&q),
            };
            if json {
                let docs: Vec<Value> = entries.iter().map(|(_, d)| io::decomposition_to_json(d)).collect();
                emit(pretty(&if label.is_some() {
                    docs[0].clone()
                } else {
                    Value::Array(docs)
                }))?;
            } else {
                for (l, d) in entries {
                    let s: Vec<String> = d.s().basis().iter().map(|m| m.to_string()).collect();
                    emit(format!("{l}: S = span{{{}}}, M = {}", s.join(", "), l.m_label()))?;
                }
            }
            Ok(0)
        }
        Command::Verify { file } => {
            let doc = DecompositionDoc::parse(&read(&file)?)?;
            let report = match doc.report() {
                Ok(r) => r,
                Err(e @ Error::NotClosed { .. }) => {
                    emit(pretty(
                        &json!({"schema": SCHEMA, "valid": false, "error": e.to_string()}),
                    ))?;
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            };
            let mut v = serde_json::to_value(&report).expect("serializable");
            v["schema"] = json!(SCHEMA);
            v["valid"] = json!(report.is_valid());
            emit(pretty(&v))?;
            Ok(if report.is_valid() { 0 } else { 1 })
        }
        Command::Canonicalize { file, no_extend } => {
            let d = io::decomposition_from_json(&read(&file)?)?;
            let r = canonicalize_with(&d, CanonOptions { extend: !no_extend })?;
            emit(pretty(&io::canon_result_to_json(&r)))?;
            Ok(0)
        }
        Command::Scramble { label, seed } => {
            let (d, a) = scramble(label, seed);
            let mut doc = DecompositionDoc::from_decomposition(&d);
            doc.automorphism = Some(io::autospec_to_json(&a));
            emit(pretty(&serde_json::to_value(doc).expect("serializable")))?;
            Ok(0)
        }
        Command::Fingerprint { file, label } => {
            let (d, label) = match (file, label) {
                (_, Some(l)) => (catalog_entry(l, &q), Some(l)),
                (Some(f), None) => {
                    let d = io::decomposition_from_json(&read(&f)?)?;
                    let l = d.label_hint();
                    (d, l)
                }
                (None, None) => return Err(Exit(2, "give a file or --label".into())),
            };
            let fp = fingerprint(d.s())?;
            emit(pretty(&io::fingerprint_to_json(&fp, label)))?;
            Ok(0)
        }
        Command::Separate { json } => {
            let r = separation_report(&CanonLabel::ALL)?;
            if json {
                emit(pretty(&r.to_json()))?;
            } else {
                emit(r.to_string())?;
            }
            Ok(if r.all_distinct() && r.all_checks_hold() { 0 } else { 1 })
        }
        Command::Rb { label, weight, all } => {
            let w = q.parse(&weight)?;
            let labels: Vec<CanonLabel> = match (all, label) {
                (true, _) => CanonLabel::ALL.to_vec(),
                (false, Some(l)) => vec![l],
                (false, None) => return Err(Exit(2, "give --label or --all".into())),
            };
            let ops: Vec<RBOperator> = labels
                .iter()
                .map(|&l| rb_from_splitting(&catalog_entry(l, &q), &w))
                .collect::<Result<_>>()?;
            let mut ok = true;
            let docs: Vec<Value> = ops
                .iter()
                .map(|r| {
                    let good = rb_violations(r).is_empty();
                    ok &= good;
                    io::rb_to_json(r, Some(good))
                })
                .collect();
            if all {
                emit(pretty(
                    &json!({"schema": SCHEMA, "weight": w.to_string(), "operators": docs}),
                ))?;
            } else {
                emit(pretty(&docs[0]))?;
            }
            // catalog operators failing the identity would be a defect here
            Ok(if ok { 0 } else { 3 })
        }
        Command::Search {
            dims,
            p,
            m,
            samples,
            seed,
            budget,
            table,
        } => {
            let m = match (dims, m) {
                (Dims::D63, None | Some(MLabel::M6)) => MLabel::M6,
                (Dims::D54, Some(m @ (MLabel::M5a | MLabel::M5b))) => m,
                (Dims::D54, None) => return Err(Exit(2, "--dims 54 needs --m M5a or --m M5b".into())),
                (_, Some(m)) => return Err(Exit(2, format!("--m {m} does not match --dims"))),
            };
            let report = match samples {
                Some(n) => sample_search(p, m, n, seed)?,
                None => search(p, m, budget)?,
            };
            if table {
                emit(render_table(&report))?;
            } else {
                emit(pretty(&io::search_report_to_json(&report)))?;
            }
            Ok(if report.is_clean() { 0 } else { 1 })
        }
        Command::Selftest { only } => {
            let outcomes = acceptance::run(&only);
            for o in &outcomes {
                emit(o.to_string())?;
            }
            Ok(if outcomes.iter().all(|o| o.passed) { 0 } else { 1 })
        }
    }
}

fn render_table(r: &SearchReport) -> String {
    let mut s = format!(
        "field {} / {}: {} candidates, {} valid, {} unital skipped\n",
        r.field, r.m_label, r.candidates_scanned, r.valid_decompositions, r.unital_skipped
    );
    for (l, c) in &r.label_histogram {
        s.push_str(&format!("  {l:<3} {c:>8}\n"));
    }
    s.push_str(&format!("  ext {:>8}", r.extension_required));
    for (l, c) in &r.extension_resolved {
        s.push_str(&format!(" ({l}: {c})"));
    }
    s.push_str(&format!("\n  failures {}", r.failures.len()));
    s
}
