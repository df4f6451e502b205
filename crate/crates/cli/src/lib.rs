//! Command-line front end. [`run`] parses an argument vector and returns the
//! exit code together with everything that should go to stdout and stderr,
//! so the binary is a thin wrapper and tests can call it in-process.
//!
//! Exit codes: 0 on success, 1 when a consistency check fails, 2 on
//! malformed or out-of-domain input.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use superspecial::arith::primes_up_to;
use superspecial::count::{
    count_superspecial, count_via_genus_sum, deuring_hprime, eichler_h, Branch,
};
use superspecial::hecke::hecke_orbit_report;
use superspecial::modclass::{decompose, split, DecompInvariants, TwoAdicModule};
use superspecial::qform::{class_number, class_number_dirichlet, Disc, FormClassGroup};
use superspecial::Error;

mod selftest;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(name = "superspecial", version, about = "Superspecial counts, class groups and 2-adic module classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of superspecial varieties with π² = -p in dimension g.
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        json: bool,
    },
    /// One row per prime up to pmax.
    Table {
        #[arg(long)]
        pmax: u64,
        #[arg(long)]
        g: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Class number of a negative discriminant.
    Classnum {
        #[arg(long, allow_negative_numbers = true)]
        disc: i64,
        /// Also evaluate the character-sum formula and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// Reduced forms of a discriminant with their orders in the class group.
    Classgroup {
        #[arg(long, allow_negative_numbers = true)]
        disc: i64,
    },
    /// Classify a module given as a JSON document {p, k, n, entries}.
    Decompose {
        #[arg(long)]
        file: PathBuf,
        /// Also emit a splitting basis (columns).
        #[arg(long)]
        split: bool,
    },
    /// Localized Picard groups and the guaranteed Hecke orbit count.
    Hecke {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        ell: u64,
    },
    /// Eichler class number h, Deuring h' and type number t for 3 < p <= pmax.
    Deuring {
        #[arg(long)]
        pmax: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the built-in invariant suite.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

enum Failure {
    Input(String),
    Check(String),
    /// A check failed after a document was produced; the document is still emitted.
    Partial { stdout: String, msg: String },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Check(e.to_string())
        }
    }
}

type CmdResult = Result<String, Failure>;

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output::ok(text)
            };
        }
    };
    let result = match cli.command {
        Command::Count { p, g, json } => cmd_count(p, g, json),
        Command::Table { pmax, g, format } => cmd_table(pmax, g, format),
        Command::Classnum { disc, oracle } => cmd_classnum(disc, oracle),
        Command::Classgroup { disc } => cmd_classgroup(disc),
        Command::Decompose { file, split } => cmd_decompose(&file, split),
        Command::Hecke { p, g, ell } => cmd_hecke(p, g, ell),
        Command::Deuring { pmax, format } => cmd_deuring(pmax, format),
        Command::Selftest { seed } => return selftest::run(seed),
    };
    match result {
        Ok(stdout) => Output::ok(stdout),
        Err(Failure::Input(msg)) => Output {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Check(msg)) => Output {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Partial { stdout, msg }) => Output {
            code: 1,
            stdout,
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_count(p: u64, g: u32, as_json: bool) -> CmdResult {
    let r = count_superspecial(p, g)?;
    if as_json {
        return Ok(to_json(&r));
    }
    let mut s = String::new();
    let _ = writeln!(s, "p = {}, g = {}, branch {}", r.p, r.g, r.branch);
    let _ = writeln!(s, "h(sqrt(-p)) = {}, h(Z[sqrt(-p)]) = {}, unit index {}", r.h_field, r.h_order, r.unit_index);
    let genus: Vec<String> = r.per_genus.iter().map(u64::to_string).collect();
    let _ = writeln!(s, "per genus: {}", genus.join(" + "));
    let _ = writeln!(s, "|S| = {}", r.total);
    Ok(s)
}

#[derive(Debug, Clone, Serialize)]
struct TableRow {
    p: u64,
    g: u32,
    branch: Branch,
    h_field: u64,
    h_order: u64,
    unit_index: u64,
    total: u64,
    genus_sum_total: u64,
}

const TABLE_HEADER: &str = "p,g,branch,h_field,h_order,unit_index,total,genus_sum_total";

fn table_row(p: u64, g: u32) -> Result<TableRow, Error> {
    let r = count_superspecial(p, g)?;
    let genus = count_via_genus_sum(p, g)?;
    Ok(TableRow {
        p,
        g,
        branch: r.branch,
        h_field: r.h_field,
        h_order: r.h_order,
        unit_index: r.unit_index,
        total: r.total,
        genus_sum_total: genus.total,
    })
}

fn cmd_table(pmax: u64, g: u32, format: Format) -> CmdResult {
    if g == 0 {
        return Err(Failure::Input("g must be a positive integer".into()));
    }
    let rows: Vec<TableRow> = primes_up_to(pmax)
        .par_iter()
        .map(|&p| table_row(p, g))
        .collect::<Result<_, _>>()?;
    if let Some(bad) = rows.iter().find(|r| r.total != r.genus_sum_total) {
        return Err(Failure::Check(format!(
            "p = {}: closed form {} differs from genus sum {}",
            bad.p, bad.total, bad.genus_sum_total
        )));
    }
    Ok(match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from(TABLE_HEADER);
            s.push('\n');
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{}",
                    r.p, r.g, r.branch, r.h_field, r.h_order, r.unit_index, r.total, r.genus_sum_total
                );
            }
            s
        }
    })
}

fn cmd_classnum(d: i64, oracle: bool) -> CmdResult {
    let disc = Disc::new(d)?;
    let h = class_number(&disc)?;
    if !oracle {
        return Ok(format!("{h}\n"));
    }
    let h2 = class_number_dirichlet(&disc)?;
    if h != h2 {
        return Err(Failure::Partial {
            stdout: format!("{h}, oracle {h2}, disagree\n"),
            msg: format!("class number {h} disagrees with the character sum {h2}"),
        });
    }
    Ok(format!("{h}, oracle {h2}, agree\n"))
}

#[derive(Serialize)]
struct ClassEntry {
    form: [i64; 3],
    order: u64,
}

#[derive(Serialize)]
struct ClassGroupDoc {
    disc: i64,
    h: usize,
    exponent: u64,
    cyclic: bool,
    elements: Vec<ClassEntry>,
}

fn cmd_classgroup(d: i64) -> CmdResult {
    let disc = Disc::new(d)?;
    let group = FormClassGroup::new(&disc)?;
    let elements = group
        .elements()
        .iter()
        .zip(group.orders())
        .map(|(f, &order)| ClassEntry {
            form: [f.a, f.b, f.c],
            order,
        })
        .collect();
    Ok(to_json(&ClassGroupDoc {
        disc: d,
        h: group.size(),
        exponent: group.exponent(),
        cyclic: group.is_cyclic(),
        elements,
    }))
}

#[derive(Serialize)]
struct DecomposeDoc {
    p: u64,
    k: u32,
    n: usize,
    invariants: DecompInvariants,
    tate_like: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    splitting: Option<Vec<Vec<u64>>>,
}

fn cmd_decompose(path: &std::path::Path, with_split: bool) -> CmdResult {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let module = TwoAdicModule::from_json(&text)?;
    let (inv, basis) = if with_split {
        let sp = split(&module)?;
        (sp.invariants, Some(sp.basis.rows()))
    } else {
        (decompose(&module)?, None)
    };
    Ok(to_json(&DecomposeDoc {
        p: module.p(),
        k: module.k(),
        n: module.n(),
        tate_like: inv.is_tate_like(),
        invariants: inv,
        splitting: basis,
    }))
}

fn cmd_hecke(p: u64, g: u32, ell: u64) -> CmdResult {
    Ok(to_json(&hecke_orbit_report(p, g, ell)?))
}

#[derive(Debug, Clone, Serialize)]
struct DeuringRow {
    p: u64,
    h: Option<u64>,
    hprime: Option<u64>,
    t: Option<u64>,
    integral: bool,
    parity: bool,
}

fn deuring_row(p: u64) -> Result<DeuringRow, Error> {
    let integral_or_fail = |r: Result<u64, Error>| match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Invariant(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let h = integral_or_fail(eichler_h(p))?;
    let hprime = integral_or_fail(deuring_hprime(p))?;
    let (integral, parity, t) = match (h, hprime) {
        (Some(h), Some(hp)) => {
            let even = (h + hp) % 2 == 0;
            (true, even, even.then_some((h + hp) / 2))
        }
        _ => (false, false, None),
    };
    Ok(DeuringRow {
        p,
        h,
        hprime,
        t,
        integral,
        parity,
    })
}

fn cmd_deuring(pmax: u64, format: Format) -> CmdResult {
    let primes: Vec<u64> = primes_up_to(pmax).into_iter().filter(|&p| p > 3).collect();
    let rows: Vec<DeuringRow> = primes
        .par_iter()
        .map(|&p| deuring_row(p))
        .collect::<Result<_, _>>()?;
    let out = match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let cell = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |x| x.to_string());
            let verdict = |b: bool| if b { "ok" } else { "FAIL" };
            let mut s = String::from("p,h,hprime,t,integrality,parity\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    r.p,
                    cell(r.h),
                    cell(r.hprime),
                    cell(r.t),
                    verdict(r.integral),
                    verdict(r.parity)
                );
            }
            s
        }
    };
    if let Some(bad) = rows.iter().find(|r| !(r.integral && r.parity && r.t >= Some(1))) {
        return Err(Failure::Partial {
            msg: format!("p = {}: integrality or parity check failed", bad.p),
            stdout: out,
        });
    }
    Ok(out)
}
