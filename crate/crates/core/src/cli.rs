//! Command-line front end. All machine output is JSON on stdout.
//!
//! Exit codes: 0 success, 1 negative verdict (not isomorphic, ineligible,
//! axiom failure), 2 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::aut::automorphism_group;
use crate::classify::{
    are_isomorphic, count_cyclic, count_family, enumerate_family, exhaustive_enumerate_bounded,
    explicit_iso_to_c, EnumFilter, IsoCertificate, DEFAULT_EXHAUSTIVE_BOUND,
};
use crate::arith::largest_square_divisor_root;
use crate::construct::{build_c, build_nonabelian_example, CParams};
use crate::perm::PermGroup;
use crate::retract::{mpl, retraction_chain};
use crate::solution::{verify_table, Solution, SolutionJson};

#[derive(Debug, Parser)]
#[command(name = "ybe-lab", version, about = "Involutive Yang-Baxter solutions of level at most 2 with abelian permutation group")]
pub struct Cli {
    /// Human-readable summaries on stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the solution C(N1, N2, R).
    Construct { n1: u64, n2: u64, r: u64 },
    /// Check every solution axiom on a table.
    Verify { file: String },
    /// Recover (n1, n2, r) and an explicit isomorphism.
    Classify { file: String },
    /// Decide isomorphism of two solutions.
    Iso { file1: String, file2: String },
    /// Automorphism group of a solution.
    Aut {
        file: String,
        /// Also list every automorphism.
        #[arg(long)]
        elements: bool,
    },
    /// Number of family members on N points.
    Count {
        n: u64,
        /// Count only members with cyclic permutation group.
        #[arg(long)]
        cyclic: bool,
    },
    /// List family parameters, or search all tables with --exhaustive.
    Enumerate {
        n: u64,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, value_name = "BOUND")]
        max_n: Option<usize>,
        /// Comma-separated subset of indecomposable,abelian,mpl2 (or "none").
        #[arg(long, value_name = "LIST")]
        filter: Option<String>,
    },
    /// Built-in example solutions.
    Example { kind: ExampleKind, n: u64 },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ExampleKind {
    Nonabelian,
}

struct Outcome {
    value: Value,
    code: i32,
    summary: Option<String>,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, code: 0, summary: None }
    }

    fn negative(value: Value) -> Self {
        Outcome { value, code: 1, summary: None }
    }

    fn with_summary(mut self, s: String) -> Self {
        self.summary = Some(s);
        self
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(outcome) => {
            let _ = writeln!(out, "{}", outcome.value);
            if cli.verbose {
                if let Some(s) = outcome.summary {
                    let _ = writeln!(err, "{s}");
                }
            }
            outcome.code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn read_source(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

fn read_table(path: &str) -> Result<SolutionJson, String> {
    let text = read_source(path)?;
    serde_json::from_str(&text).map_err(|e| format!("parsing {path}: {e}"))
}

/// Loads a solution; axiom failures become a negative verdict, not an error.
fn load(path: &str) -> Result<Result<Solution, Outcome>, String> {
    let table = read_table(path)?;
    Ok(Solution::try_from(table).map_err(|e| {
        Outcome::negative(json!({"valid": false, "file": path, "reason": e.to_string()}))
    }))
}

fn parse_filter(list: &str) -> Result<EnumFilter, String> {
    let mut f = EnumFilter::default();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item {
            "indecomposable" => f.indecomposable = true,
            "abelian" => f.abelian = true,
            "mpl2" => f.mpl2 = true,
            "none" => {}
            other => return Err(format!("unknown filter {other:?}")),
        }
    }
    Ok(f)
}

fn dispatch(cmd: &Command) -> Result<Outcome, String> {
    match cmd {
        Command::Construct { n1, n2, r } => {
            let p = CParams::new(*n1, *n2, *r).map_err(|e| e.to_string())?;
            let s = build_c(&p).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(json!(s)).with_summary(format!("{p}: {} points", s.size())))
        }
        Command::Verify { file } => {
            let t = read_table(file)?;
            let report = verify_table(t.n, t.sigma);
            let valid = report.is_solution();
            let value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
            let summary = format!("solution axioms {}", if valid { "hold" } else { "fail" });
            let o = if valid { Outcome::ok(value) } else { Outcome::negative(value) };
            Ok(o.with_summary(summary))
        }
        Command::Classify { file } => {
            let s = match load(file)? {
                Ok(s) => s,
                Err(o) => return Ok(o),
            };
            match explicit_iso_to_c(&s) {
                Ok(c) => Ok(Outcome::ok(json!({
                    "n1": c.params.n1,
                    "n2": c.params.n2,
                    "r": c.params.r,
                    "phi": c.phi,
                }))
                .with_summary(format!("isomorphic to {}", c.params))),
                Err(e) => Ok(Outcome::negative(json!({"eligible": false, "reason": e.to_string()}))
                    .with_summary(format!("ineligible: {e}"))),
            }
        }
        Command::Iso { file1, file2 } => {
            let (a, b) = match (load(file1)?, load(file2)?) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(o), _) | (_, Err(o)) => return Ok(o),
            };
            match are_isomorphic(&a, &b) {
                IsoCertificate::Present(phi) => {
                    Ok(Outcome::ok(json!({"isomorphic": true, "phi": phi}))
                        .with_summary(format!("isomorphic via {phi}")))
                }
                IsoCertificate::Absent => Ok(Outcome::negative(json!({"isomorphic": false}))
                    .with_summary("not isomorphic".to_string())),
            }
        }
        Command::Aut { file, elements } => {
            let s = match load(file)? {
                Ok(s) => s,
                Err(o) => return Ok(o),
            };
            let aut = automorphism_group(&s).map_err(|e| e.to_string())?;
            let factors = aut.group.invariant_factors().ok();
            let mut value = json!({
                "order": aut.order(),
                "invariant_factors": factors,
                "cyclic": aut.is_cyclic(),
            });
            if *elements {
                value["elements"] = json!(aut.elements());
            }
            Ok(Outcome::ok(value).with_summary(format!("|Aut| = {}", aut.order())))
        }
        Command::Count { n, cyclic } => {
            if *n == 0 {
                return Err("N must be positive".to_string());
            }
            let count = if *cyclic { count_cyclic(*n) } else { count_family(*n) };
            Ok(Outcome::ok(json!({
                "n": n,
                "k": largest_square_divisor_root(*n),
                "count": count,
            })))
        }
        Command::Enumerate { n, exhaustive, max_n, filter } => {
            if *n == 0 {
                return Err("N must be positive".to_string());
            }
            if !exhaustive {
                if max_n.is_some() || filter.is_some() {
                    return Err("--max-n and --filter require --exhaustive".to_string());
                }
                let list = enumerate_family(*n);
                let summary = list.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                return Ok(Outcome::ok(json!(list)).with_summary(summary));
            }
            let f = match filter {
                Some(list) => parse_filter(list)?,
                None => EnumFilter::ALL,
            };
            let bound = max_n.unwrap_or(DEFAULT_EXHAUSTIVE_BOUND);
            let found = exhaustive_enumerate_bounded(*n as usize, f, bound).map_err(|e| e.to_string())?;
            let summary = found
                .iter()
                .map(|s| {
                    let level = mpl(s).ok().flatten().map_or("-".to_string(), |m| m.to_string());
                    let chain = retraction_chain(s).unwrap_or_default();
                    let order = PermGroup::closure(s.rows()).map(|g| g.order()).unwrap_or(0);
                    format!("{:?} |G|={order} mpl={level} chain={chain:?}", s.table())
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::ok(json!(found)).with_summary(summary))
        }
        Command::Example { kind: ExampleKind::Nonabelian, n } => {
            let s = build_nonabelian_example(*n).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(json!(s)).with_summary(format!("non-abelian witness on {} points", s.size())))
        }
    }
}
