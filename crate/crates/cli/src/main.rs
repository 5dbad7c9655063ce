//! rainbow-lab: rainbow numbers of x1 + x2 = k*x3 over Z_n.
//!
//! Exit codes: 0 ok, 1 rainbow triple found, 2 input or scope error,
//! 3 formula/search mismatch, 4 search inconclusive within the time budget.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rainbow_lab::constructions::{witness_general, witness_schur};
use rainbow_lab::formulas::TWO_POWER_ORACLE_MAX_ALPHA;
use rainbow_lab::modular::is_prime;
use rainbow_lab::{
    max_rainbow_free_r, rb_general, rb_oracle, rb_schur, Certificate, CertificateMeta, Coloring,
    CyclicInstance, Error, OracleVerdict, RbResult, SearchConfig, TwoPowerTable,
};

const EXIT_RAINBOW: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "rainbow-lab",
    version,
    about = "Rainbow numbers rb(Z_n, k) for x1 + x2 = k*x3 (mod n)",
    after_help = "EXIT CODES:\n  0 ok\n  1 rainbow triple found\n  2 input or scope error\n  \
                  3 formula and search disagree\n  4 search inconclusive within the budget\n\n\
                  EXAMPLES:\n  rainbow-lab rb --n 12 --k 1 --method both\n  \
                  rainbow-lab witness --n 25 --k 5 --out z25.json\n  \
                  rainbow-lab verify z25.json --palettes\n  \
                  rainbow-lab table --n-max 20 --k 3 --format csv"
)]
struct Cli {
    /// Time budget for each exhaustive search, in seconds
    #[arg(
        long,
        global = true,
        env = "RAINBOW_LAB_BUDGET_SECS",
        default_value_t = 60
    )]
    budget_secs: u64,

    /// Split each search across threads
    #[arg(long, global = true)]
    parallel: bool,

    /// JSON object of known rb(Z_{2^a}, 2) values keyed by a, e.g. {"1": 3, "2": 3}.
    /// Without it, exponents up to 4 are filled in by search.
    #[arg(long, global = true)]
    two_power_table: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute rb(Z_n, k)
    Rb {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Write a rainbow-free certificate with the maximum number of colors
    Witness {
        #[arg(long)]
        n: u64,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file
    Verify {
        path: PathBuf,
        /// Also list residue palettes for every divisor 1 < t < n
        #[arg(long)]
        palettes: bool,
    },
    /// Tabulate formula and search values for n = 2..=n-max
    Table {
        #[arg(long)]
        n_max: u64,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Formula,
    Search,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Ends the command with a specific exit code after printing `message` to stderr.
#[derive(Debug)]
struct Exit {
    code: u8,
    message: String,
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

fn exit(code: u8, message: impl Into<String>) -> anyhow::Error {
    Exit {
        code,
        message: message.into(),
    }
    .into()
}

struct Session {
    cfg: SearchConfig,
    table_path: Option<PathBuf>,
    two_powers: Option<TwoPowerTable>,
}

impl Session {
    fn two_powers(&mut self, alpha: u32) -> anyhow::Result<&TwoPowerTable> {
        if self.two_powers.is_none() {
            let table = match &self.table_path {
                Some(path) => TwoPowerTable::load(path)
                    .with_context(|| format!("loading two-power table {}", path.display()))?,
                None if alpha <= TWO_POWER_ORACLE_MAX_ALPHA => {
                    TwoPowerTable::from_oracle(TWO_POWER_ORACLE_MAX_ALPHA, &self.cfg)?
                }
                None => {
                    return Err(exit(
                        EXIT_INPUT,
                        format!(
                            "rb(Z_{}, 2) has no closed form here; pass --two-power-table",
                            1u64 << alpha
                        ),
                    ))
                }
            };
            self.two_powers = Some(table);
        }
        Ok(self.two_powers.as_ref().expect("just filled"))
    }

    /// Closed-form value, or `None` when no formula covers `(n, k)`.
    fn formula(&mut self, n: u64, k: i64) -> anyhow::Result<Option<RbResult>> {
        if n < 2 {
            return Ok(None);
        }
        if k.rem_euclid(n as i64) == 1 % n as i64 {
            return Ok(Some(rb_schur(n)?));
        }
        if k < 2 || !is_prime(k as u64) {
            return Ok(None);
        }
        let p = k as u64;
        let table = if p == 2 && n.is_multiple_of(2) {
            Some(self.two_powers(n.trailing_zeros())?)
        } else {
            None
        };
        Ok(Some(rb_general(n, p, table)?))
    }

    fn require_formula(&mut self, n: u64, k: i64) -> anyhow::Result<RbResult> {
        self.formula(n, k)?.ok_or_else(|| {
            exit(
                EXIT_INPUT,
                format!("no closed form for n = {n}, k = {k}: formulas cover k = 1 and prime k"),
            )
        })
    }
}

fn instance(n: u64, k: i64) -> anyhow::Result<CyclicInstance> {
    Ok(CyclicInstance::new(n, k)?)
}

fn cmd_rb(ctx: &mut Session, n: u64, k: i64, method: MethodArg) -> anyhow::Result<()> {
    let inst = instance(n, k)?;
    let formula = match method {
        MethodArg::Search => None,
        _ => Some(ctx.require_formula(n, k)?),
    };
    if let Some(f) = &formula {
        eprintln!("formula ({}): {}", f.method, f.explain());
    }
    if method == MethodArg::Formula {
        println!("rb={}", formula.expect("formula computed").value);
        return Ok(());
    }

    let verdict = rb_oracle(&inst, &ctx.cfg)?;
    let out = verdict.outcome();
    eprintln!(
        "search: r_max={} nodes={} elapsed_ms={} witness={}",
        out.r_max,
        out.nodes_explored,
        out.elapsed.as_millis(),
        out.witness
    );
    match (verdict, formula) {
        (OracleVerdict::Exact { result, .. }, None) => println!("rb={}", result.value),
        (OracleVerdict::Exact { result, .. }, Some(f)) if result.value == f.value => {
            println!("rb={}, formula=search", f.value)
        }
        (OracleVerdict::Exact { result, .. }, Some(f)) => {
            println!("rb mismatch: formula={}, search={}", f.value, result.value);
            return Err(exit(EXIT_MISMATCH, "formula and search disagree"));
        }
        (OracleVerdict::Inconclusive { lower_bound, .. }, Some(f)) if lower_bound > f.value => {
            println!("rb mismatch: formula={}, search>={lower_bound}", f.value);
            return Err(exit(EXIT_MISMATCH, "search already exceeds the formula"));
        }
        (OracleVerdict::Inconclusive { lower_bound, .. }, f) => {
            match f {
                Some(f) => println!(
                    "rb>={lower_bound} (search inconclusive), formula={}",
                    f.value
                ),
                None => println!("rb>={lower_bound} (search inconclusive)"),
            }
            return Err(exit(
                EXIT_INCONCLUSIVE,
                format!(
                    "search did not finish within {} s",
                    ctx.cfg.time_budget.as_secs()
                ),
            ));
        }
    }
    Ok(())
}

/// A construction for `(n, k)`, or `None` when only the search can help.
fn construct(n: u64, k: i64) -> anyhow::Result<Option<(Coloring, &'static str)>> {
    if n >= 2 && k.rem_euclid(n as i64) == 1 % n as i64 {
        return Ok(Some((witness_schur(n)?, "witness_schur")));
    }
    if n >= 2 && k >= 2 && is_prime(k as u64) {
        match witness_general(n, k as u64) {
            Ok(c) => return Ok(Some((c, "witness_general"))),
            Err(Error::Unsupported(why)) => eprintln!("no construction: {why}"),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(None)
}

fn cmd_witness(ctx: &Session, n: u64, k: i64, out: Option<&Path>) -> anyhow::Result<()> {
    let inst = instance(n, k)?;
    let mut extra = std::collections::BTreeMap::new();
    let mut inconclusive = false;
    let (coloring, construction) = match construct(n, k)? {
        Some(found) => found,
        None => {
            let o = max_rainbow_free_r(&inst, &ctx.cfg)?;
            inconclusive = !o.is_exact();
            extra.insert(
                "exhaustive".to_owned(),
                serde_json::Value::Bool(o.is_exact()),
            );
            (o.witness, "search")
        }
    };
    let meta = CertificateMeta {
        construction: Some(construction.to_owned()),
        tool_version: Some(env!("CARGO_PKG_VERSION").to_owned()),
        extra,
    };
    let cert = Certificate::from_coloring(&coloring, k, Some(meta));
    let check = cert.verify()?;
    if let Some(t) = check.rainbow_triple {
        bail!("internal error: {construction} produced a coloring with rainbow triple {t}");
    }
    match out {
        Some(path) => {
            cert.save(path)
                .with_context(|| format!("writing {}", path.display()))?;
            eprintln!(
                "wrote {}-color certificate for Z_{n}, k={k} ({construction}) to {}",
                check.num_colors,
                path.display()
            );
        }
        None => print!("{}", cert.to_json()),
    }
    if inconclusive {
        return Err(exit(
            EXIT_INCONCLUSIVE,
            "search did not finish; the certificate may not have the maximum number of colors",
        ));
    }
    Ok(())
}

fn format_set<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn cmd_verify(path: &Path, palettes: bool) -> anyhow::Result<()> {
    let cert = Certificate::load(path).map_err(|e| match e {
        Error::Json(e) => exit(
            EXIT_INPUT,
            format!("{}: malformed certificate: {e}", path.display()),
        ),
        e => exit(EXIT_INPUT, format!("{}: {e}", path.display())),
    })?;
    let check = match cert.verify() {
        Ok(v) => v,
        Err(Error::NonCanonical { normalized }) => {
            let normalized: Vec<String> = normalized.iter().map(|c| c.to_string()).collect();
            return Err(exit(
                EXIT_INPUT,
                format!(
                    "colors are not in canonical form; relabeled they read [{}]",
                    normalized.join(",")
                ),
            ));
        }
        Err(e) => return Err(exit(EXIT_INPUT, e.to_string())),
    };
    println!("Z_{}, k={}: {} colors", cert.n, cert.k, check.num_colors);
    if palettes {
        for (t, ps) in cert.palettes_by_divisor()? {
            let row: Vec<String> = ps
                .iter()
                .enumerate()
                .map(|(i, p)| format!("P_{i}={}", format_set(p)))
                .collect();
            println!("t={t}: {}", row.join(" "));
        }
    }
    match check.rainbow_triple {
        Some(t) => {
            println!("rainbow triple {t}");
            Err(exit(EXIT_RAINBOW, "certificate is not rainbow-free"))
        }
        None => {
            println!("rainbow-free");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Row {
    n: u64,
    k: i64,
    rb_formula: Option<u64>,
    rb_search: Option<u64>,
    /// Lower bound when the search ran out of budget.
    rb_search_lower_bound: Option<u64>,
    agree: Option<bool>,
    elapsed_ms: u128,
    nodes: u64,
}

impl Row {
    fn csv(&self) -> String {
        let opt = |v: Option<u64>| v.map_or_else(|| "-".to_owned(), |v| v.to_string());
        let search = match (self.rb_search, self.rb_search_lower_bound) {
            (Some(v), _) => v.to_string(),
            (None, Some(lb)) => format!("inconclusive>={lb}"),
            (None, None) => "-".to_owned(),
        };
        let agree = self.agree.map_or_else(|| "-".to_owned(), |a| a.to_string());
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.k,
            opt(self.rb_formula),
            search,
            agree,
            self.elapsed_ms,
            self.nodes
        )
    }
}

fn cmd_table(ctx: &mut Session, n_max: u64, k: i64, format: Format) -> anyhow::Result<()> {
    if n_max < 2 {
        return Err(exit(EXIT_INPUT, "--n-max must be at least 2"));
    }
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    if format == Format::Csv {
        writeln!(w, "n,k,rb_formula,rb_search,agree,elapsed_ms,nodes")?;
    }
    let mut rows = Vec::new();
    let mut inconclusive = 0;
    let mut mismatch = None;
    for n in 2..=n_max {
        let formula = ctx.formula(n, k)?.map(|r| r.value);
        let verdict = rb_oracle(&instance(n, k)?, &ctx.cfg)?;
        let out = verdict.outcome();
        let (rb_search, lower) = match &verdict {
            OracleVerdict::Exact { result, .. } => (Some(result.value), None),
            OracleVerdict::Inconclusive { lower_bound, .. } => (None, Some(*lower_bound)),
        };
        let agree = match (formula, rb_search, lower) {
            (Some(f), Some(s), _) => Some(f == s),
            (Some(f), None, Some(lb)) if lb > f => Some(false),
            _ => None,
        };
        let row = Row {
            n,
            k,
            rb_formula: formula,
            rb_search,
            rb_search_lower_bound: lower,
            agree,
            elapsed_ms: out.elapsed.as_millis(),
            nodes: out.nodes_explored,
        };
        if rb_search.is_none() {
            inconclusive += 1;
        }
        if format == Format::Csv {
            writeln!(w, "{}", row.csv())?;
            w.flush()?;
        }
        rows.push(row);
        if agree == Some(false) {
            mismatch = Some(n);
            break;
        }
    }
    if format == Format::Json {
        serde_json::to_writer_pretty(&mut w, &rows)?;
        writeln!(w)?;
    }
    if let Some(n) = mismatch {
        return Err(exit(
            EXIT_MISMATCH,
            format!("formula and search disagree at n = {n}"),
        ));
    }
    if inconclusive > 0 {
        return Err(exit(
            EXIT_INCONCLUSIVE,
            format!("{inconclusive} search cell(s) ran out of budget"),
        ));
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if cli.budget_secs == 0 {
        return Err(exit(EXIT_INPUT, "--budget-secs must be positive"));
    }
    let mut ctx = Session {
        cfg: SearchConfig {
            time_budget: Duration::from_secs(cli.budget_secs),
            max_r: None,
            parallel: cli.parallel,
        },
        table_path: cli.two_power_table,
        two_powers: None,
    };
    match cli.command {
        Command::Rb { n, k, method } => cmd_rb(&mut ctx, n, k, method),
        Command::Witness { n, k, out } => cmd_witness(&ctx, n, k, out.as_deref()),
        Command::Verify { path, palettes } => cmd_verify(&path, palettes),
        Command::Table { n_max, k, format } => cmd_table(&mut ctx, n_max, k, format),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<Exit>() {
        return e.code;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Unverified { .. }) => EXIT_RAINBOW,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
