use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sepcode::bounds::bound_report;
use sepcode::scan::{run_scan, CriteriaSet, GridMode, ScanGrid, SettleOptions};
use sepcode::witness::{construct_witness, verify_witness, SeparationWitness, Strategy};
use sepcode::{is_ipp, is_restricted_separating, is_separating, rs_code, Code, Codeword, Error, FiniteField};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_NO_CONSTRUCTION: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "sepcode", version, about = "Separating codes and Reed-Solomon non-separation witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide separation of RS_k(q) or of a code read from a JSON file.
    Check(CheckArgs),
    /// Build and verify a non-separation witness for RS_k(q).
    Witness(WitnessArgs),
    /// Re-verify a witness JSON file.
    VerifyWitness {
        path: PathBuf,
    },
    /// Print the closed-form bounds for a parameter point.
    Bound(BoundArgs),
    /// Sweep (q, w1, w2) and settle the critical dimension of each triple.
    Scan(ScanArgs),
    /// Print the reduction polynomial, primitive element and exp/log tables.
    FieldInfo {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Property {
    Separating,
    Restricted,
    Ipp,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Field order (or alphabet size with --code).
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    /// JSON array of words, each an array of symbols.
    #[arg(long, conflicts_with = "k")]
    code: Option<PathBuf>,
    #[arg(long)]
    w1: usize,
    #[arg(long)]
    w2: usize,
    #[arg(long, value_enum, default_value = "separating")]
    property: Property,
    /// Shorthand for --property restricted.
    #[arg(long)]
    restricted: bool,
    #[arg(long, default_value_t = 10_000_000)]
    pair_budget: u128,
    /// Caps q^n for the IPP check.
    #[arg(long, default_value_t = 1_000_000)]
    ambient_budget: u128,
    #[arg(long, default_value_t = 10_000)]
    word_cap: u128,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Auto,
    Thm3,
    Thm5,
    Search,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Thm3 => Strategy::Thm3,
            StrategyArg::Thm5 => Strategy::Thm5,
            StrategyArg::Search => Strategy::Search,
        }
    }
}

#[derive(Args, Debug)]
struct WitnessArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    w1: usize,
    #[arg(long)]
    w2: usize,
    #[arg(long, value_enum, default_value = "auto")]
    strategy: StrategyArg,
    /// Caps the (E, F) pairs tried per candidate polynomial.
    #[arg(long, default_value_t = 1_000_000)]
    search_budget: u128,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    n: u64,
    /// Sets both w1 and w2.
    #[arg(long, required_unless_present_all = ["w1", "w2"])]
    w: Option<u64>,
    #[arg(long, requires = "w2")]
    w1: Option<u64>,
    #[arg(long, requires = "w1")]
    w2: Option<u64>,
    /// Alphabet size; defaults to n + 1.
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, Debug)]
struct Range(u64, u64);

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = match s.split_once(':') {
            Some((a, b)) => (a, b),
            None => (s, s),
        };
        let a: u64 = a.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
        let b: u64 = b.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
        if a > b {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Range(a, b))
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Symmetric,
    AllPairs,
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Coalition size range lo:hi.
    #[arg(long, default_value = "2:25")]
    w: Range,
    /// Field order range lo:hi.
    #[arg(long, default_value = "3:4096")]
    q: Range,
    #[arg(long, default_value = "thm3,thm5")]
    criteria: String,
    #[arg(long, value_enum, default_value = "symmetric")]
    mode: ModeArg,
    /// JSONL output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV summary; defaults to the --out path with a .csv extension.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    threads: Option<usize>,
    /// Attach verified witnesses to settled records.
    #[arg(long)]
    witnesses: bool,
    /// Largest q^k* handed to brute force.
    #[arg(long, default_value_t = 3000)]
    brute_force_cap: u128,
    #[arg(long, default_value_t = 10_000_000)]
    pair_budget: u128,
    #[arg(long, default_value_t = 1_000_000)]
    search_budget: u128,
}

/// A failure with its exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } | Error::TooLarge { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure(code, e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let result = match cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Witness(a) => cmd_witness(a),
        Command::VerifyWitness { path } => cmd_verify_witness(&path),
        Command::Bound(a) => cmd_bound(a),
        Command::Scan(a) => cmd_scan(a),
        Command::FieldInfo { q } => cmd_field_info(q),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn field(q: u64) -> Result<FiniteField, Failure> {
    if q > u32::MAX as u64 {
        return Err(usage(format!("field order {q} too large")));
    }
    Ok(FiniteField::new(q)?)
}

fn load_code(path: &Path, q: Option<u64>) -> Result<Code, Failure> {
    let text = std::fs::read_to_string(path)?;
    let rows: Vec<Vec<u32>> =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let alphabet = match q {
        Some(q) => u32::try_from(q).map_err(|_| usage("alphabet too large"))?,
        None => rows.iter().flatten().max().map_or(1, |m| m + 1),
    };
    Ok(Code::new(alphabet, rows.into_iter().map(Codeword).collect())?)
}

fn cmd_check(a: CheckArgs) -> CmdResult {
    let code = match (&a.code, a.q, a.k) {
        (Some(path), q, None) => load_code(path, q)?,
        (None, Some(q), Some(k)) => rs_code(&field(q)?, k, a.word_cap)?,
        _ => return Err(usage("give either --q and --k, or --code")),
    };
    let property = if a.restricted { Property::Restricted } else { a.property };
    let report = match property {
        Property::Separating | Property::Restricted => {
            let verdict = match property {
                Property::Separating => is_separating(&code, a.w1, a.w2, a.pair_budget)?,
                _ => is_restricted_separating(&code, a.w1, a.w2, a.pair_budget)?,
            };
            let ok = verdict.separating;
            let report = json!({
                "q": code.q(), "n": code.n(), "size": code.size(),
                "w1": a.w1, "w2": a.w2,
                "property": if matches!(property, Property::Separating) { "separating" } else { "restricted" },
                "separating": ok,
                "violation": verdict.violation,
            });
            (ok, report)
        }
        Property::Ipp => {
            if a.w1 != a.w2 {
                return Err(usage("IPP takes a single coalition size: pass --w1 equal to --w2"));
            }
            let verdict = is_ipp(&code, a.w1, a.ambient_budget)?;
            let report = json!({
                "q": code.q(), "n": code.n(), "size": code.size(),
                "w": a.w1, "property": "ipp",
                "ipp": verdict.ipp,
                "counterexample": verdict.counterexample,
            });
            (verdict.ipp, report)
        }
    };
    println!("{}", report.1);
    Ok(if report.0 { EXIT_OK } else { EXIT_VIOLATION })
}

fn emit_verified(w: &SeparationWitness) -> CmdResult {
    let check = verify_witness(w);
    if !check.valid {
        return Err(Failure(
            EXIT_NO_CONSTRUCTION,
            format!("constructed witness failed verification: {:?}", check.defect),
        ));
    }
    println!("{}", w.to_json());
    Ok(EXIT_OK)
}

fn cmd_witness(a: WitnessArgs) -> CmdResult {
    let f = field(a.q)?;
    match construct_witness(&f, a.k, a.w1, a.w2, a.strategy.into(), a.search_budget) {
        Ok(Some(w)) => emit_verified(&w),
        Ok(None) => Err(Failure(EXIT_NO_CONSTRUCTION, "no construction applies".into())),
        Err(Error::BudgetExceeded { estimate, budget }) => Err(Failure(
            EXIT_BUDGET,
            format!("search needs {estimate} steps, budget is {budget}"),
        )),
        Err(e) => Err(e.into()),
    }
}

fn cmd_verify_witness(path: &Path) -> CmdResult {
    let text = std::fs::read_to_string(path)?;
    let w: SeparationWitness =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let check = verify_witness(&w);
    println!("{}", serde_json::to_string(&check).expect("check serializes"));
    Ok(if check.valid { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_bound(a: BoundArgs) -> CmdResult {
    let (w1, w2) = match (a.w1, a.w2, a.w) {
        (Some(w1), Some(w2), _) => (w1, w2),
        (_, _, Some(w)) => (w, w),
        _ => return Err(usage("give --w or both --w1 and --w2")),
    };
    let q = a.q.unwrap_or(a.n + 1);
    let report = bound_report(q, a.n, w1, w2)?;
    match a.format {
        Format::Text => print!("{}", report.render()),
        Format::Json => println!("{}", serde_json::to_string(&report).expect("report serializes")),
    }
    Ok(EXIT_OK)
}

fn cmd_scan(a: ScanArgs) -> CmdResult {
    let criteria: CriteriaSet = a.criteria.parse()?;
    let grid = ScanGrid {
        w_min: a.w.0,
        w_max: a.w.1,
        q_min: a.q.0,
        q_max: a.q.1,
        mode: match a.mode {
            ModeArg::Symmetric => GridMode::Symmetric,
            ModeArg::AllPairs => GridMode::AllPairs,
        },
    };
    let options = SettleOptions {
        criteria,
        brute_force_cap: a.brute_force_cap,
        pair_budget: a.pair_budget,
        search_budget: a.search_budget,
        witnesses: a.witnesses,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = a.threads {
        if t == 0 {
            return Err(usage("--threads must be positive"));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| usage(e.to_string()))?;

    let summary = match &a.out {
        Some(path) => {
            let mut sink = BufWriter::new(File::create(path)?);
            let result = pool.install(|| run_scan(&grid, &options, &mut sink));
            sink.flush()?;
            result?
        }
        None => {
            let mut sink = BufWriter::new(io::stdout());
            let result = pool.install(|| run_scan(&grid, &options, &mut sink));
            sink.flush()?;
            result?
        }
    };
    let csv_path = a.csv.or_else(|| a.out.as_ref().map(|p| p.with_extension("csv")));
    if let Some(path) = csv_path {
        std::fs::write(path, summary.to_csv())?;
    }
    let text = serde_json::to_string(&summary).expect("summary serializes");
    if a.out.is_some() {
        println!("{text}");
    } else {
        eprintln!("{text}");
    }
    Ok(EXIT_OK)
}

fn cmd_field_info(q: u64) -> CmdResult {
    let f = field(q)?;
    let n = f.order() as usize - 1;
    let info = json!({
        "q": f.order(),
        "p": f.characteristic(),
        "m": f.degree(),
        "reduction": f.spec().reduction,
        "alpha": f.alpha(),
        "exp": &f.exp_table()[..n],
        "log": f.log_table(),
    });
    println!("{info}");
    Ok(EXIT_OK)
}
