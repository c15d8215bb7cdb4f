//! `crseq` — command-line front end for exact rank computations on
//! constant-recursive sequences.
//!
//! Exit codes: 0 success, 1 usage error, 2 computation error or reference
//! mismatch. Output is deterministic for a fixed (configuration, seed); the
//! `CRSEQ_THREADS` environment variable caps the worker count used by the
//! search.

mod bfile;
mod output;
mod reproduce;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use crseq_core::{
    bound_oracle, count_degree_m_classes, fit_quasi_polynomial, format_rational,
    minimal_recurrence, parse_rational, power_bound_distinct, power_bound_refined,
    quotient_invariants, rank_of_power_with_guard, rank_of_product_with_guard, search,
    smith_normal_form, Int, LinRecSequence, QuasiPolynomial, RankCertificate, Rational,
    Recurrence, RelationLattice, RootSpec, SearchConfig,
};
use num_traits::Zero;
use output::{emit, Format, Table};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "crseq",
    version,
    about = "Exact rank computations for constant-recursive sequences: powers, products, bounds, searches, and root-relation lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the rank (minimal recurrence) of a sequence or of literal terms
    Rank(RankArgs),
    /// Compute the ranks of the termwise powers s^M for M = 1..=mmax
    RankSeq(RankSeqArgs),
    /// Certify the rank of one termwise power s^M
    Power(PowerArgs),
    /// Certify the rank of the termwise product of two sequences
    Product(ProductArgs),
    /// Closed-form rank bounds for powers, with an optional multiset oracle column
    Bounds(BoundsArgs),
    /// Enumerate generic rank sequences over an integer coefficient box
    Search(SearchArgs),
    /// Smith normal form and quotient invariants of an integer matrix
    Snf(SnfArgs),
    /// Count degree-M root classes modulo a relation lattice
    Classes(ClassesArgs),
    /// Fit an eventual (quasi-)polynomial to an observed rank sequence
    Fit(FitArgs),
    /// Recompute an embedded reference table and diff it row by row
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct SequenceInput {
    /// Recurrence coefficients (c_{r-1},...,c_0), comma separated rationals
    #[arg(long, value_name = "LIST")]
    coeffs: Option<String>,
    /// Initial terms, comma separated rationals (at least the order; extra
    /// terms model transients)
    #[arg(long, value_name = "LIST")]
    init: Option<String>,
    /// JSON file {"coeffs": [...], "init": [...]} instead of --coeffs/--init
    #[arg(long, value_name = "PATH", conflicts_with_all = ["coeffs", "init"])]
    seq_file: Option<PathBuf>,
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    seq: SequenceInput,
    /// Literal terms to analyze directly, comma separated rationals
    #[arg(long, value_name = "LIST", conflicts_with_all = ["coeffs", "init", "seq_file"])]
    terms: Option<String>,
    /// Number of terms to generate from the sequence (0 = automatic)
    #[arg(long, default_value_t = 0)]
    count: usize,
    #[arg(long, default_value_t = crseq_core::DEFAULT_GUARD)]
    guard: usize,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RankSeqArgs {
    #[command(flatten)]
    seq: SequenceInput,
    #[arg(long, default_value_t = 8)]
    mmax: usize,
    #[arg(long, default_value_t = crseq_core::DEFAULT_GUARD)]
    guard: usize,
    /// Structured output with bounds and transients (default: bare ranks)
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PowerArgs {
    #[command(flatten)]
    seq: SequenceInput,
    /// The power M >= 1
    #[arg(short = 'M', long, value_name = "M")]
    power: u32,
    #[arg(long, default_value_t = crseq_core::DEFAULT_GUARD)]
    guard: usize,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProductArgs {
    /// First factor: coefficients
    #[arg(long, value_name = "LIST")]
    a_coeffs: Option<String>,
    #[arg(long, value_name = "LIST")]
    a_init: Option<String>,
    #[arg(long, value_name = "PATH", conflicts_with_all = ["a_coeffs", "a_init"])]
    a_file: Option<PathBuf>,
    /// Second factor: coefficients
    #[arg(long, value_name = "LIST")]
    b_coeffs: Option<String>,
    #[arg(long, value_name = "LIST")]
    b_init: Option<String>,
    #[arg(long, value_name = "PATH", conflicts_with_all = ["b_coeffs", "b_init"])]
    b_file: Option<PathBuf>,
    #[arg(long, default_value_t = crseq_core::DEFAULT_GUARD)]
    guard: usize,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Rank r of the base sequence
    #[arg(long, value_name = "R")]
    order: Option<u64>,
    /// Number of distinct characteristic roots (default: r)
    #[arg(long, value_name = "K")]
    distinct: Option<u64>,
    /// Explicit root multiplicities, e.g. "3,1" (implies r and k)
    #[arg(long, value_name = "LIST", conflicts_with_all = ["order", "distinct"])]
    multiplicities: Option<String>,
    #[arg(long, default_value_t = 8)]
    mmax: u64,
    /// Add the brute-force multiset oracle column
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// Recurrence order searched
    #[arg(long)]
    order: usize,
    #[arg(long, allow_hyphen_values = true)]
    coeff_min: i64,
    #[arg(long, allow_hyphen_values = true)]
    coeff_max: i64,
    #[arg(long, default_value_t = 8)]
    mmax: usize,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    init_bound: i64,
    /// Cap on total rank computations
    #[arg(long)]
    budget: Option<u64>,
    /// Only rows attaining the refined bound for every M
    #[arg(long)]
    attaining_only: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SnfArgs {
    /// Integer matrix, rows separated by ';', entries by ','
    #[arg(long, value_name = "MATRIX", allow_hyphen_values = true)]
    matrix: String,
    /// Also print U, D, V in full
    #[arg(long)]
    full: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassesArgs {
    /// Relation lattice as JSON {"k":5, "relations":[[...],...]}
    #[arg(long, value_name = "PATH")]
    lattice_file: Option<PathBuf>,
    /// Number of symbolic roots (with --relations)
    #[arg(long, value_name = "K", conflicts_with = "lattice_file")]
    k: Option<usize>,
    /// Relation rows separated by ';', entries by ',' (may be empty)
    #[arg(long, value_name = "ROWS", allow_hyphen_values = true, conflicts_with = "lattice_file")]
    relations: Option<String>,
    /// Derive relations from nonzero rational roots, e.g. "2,3,6"
    #[arg(long, value_name = "LIST", allow_hyphen_values = true, conflicts_with_all = ["lattice_file", "k", "relations"])]
    roots: Option<String>,
    #[arg(long, default_value_t = 5)]
    mmax: u64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Observed ranks for M = 1, 2, ..., comma separated
    #[arg(long, value_name = "LIST")]
    ranks: String,
    #[arg(long, default_value_t = 4)]
    max_period: usize,
    #[arg(long, default_value_t = 4)]
    window: usize,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableId {
    Table1,
    Table2,
    Appendix4,
    Appendix5,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Which embedded table to recompute
    #[arg(long, value_enum)]
    table: Option<TableId>,
    /// Allow the expensive high-M appendix recomputation
    #[arg(long)]
    deep: bool,
    /// Largest power checked per row (default depends on the table)
    #[arg(long)]
    mmax: Option<usize>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Opt-in OEIS cross-check against a local b-file: ID=PATH, repeatable
    /// (IDs: A051028, A051029, A051030, A265944)
    #[arg(long = "oeis", value_name = "ID=PATH")]
    oeis: Vec<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Computation(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
    fn computation(msg: impl Into<String>) -> Self {
        CliError::Computation(msg.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(threads) = std::env::var("CRSEQ_THREADS") {
        if let Ok(n) = threads.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Rank(args) => cmd_rank(args),
        Command::RankSeq(args) => cmd_rank_seq(args),
        Command::Power(args) => cmd_power(args),
        Command::Product(args) => cmd_product(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Search(args) => cmd_search(args),
        Command::Snf(args) => cmd_snf(args),
        Command::Classes(args) => cmd_classes(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    }
}

fn parse_rational_list(text: &str, what: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_rational(s).map_err(|e| CliError::usage(format!("{what}: {e}"))))
        .collect()
}

fn parse_int_list(text: &str, what: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| CliError::usage(format!("{what}: bad integer `{s}`"))))
        .collect()
}

fn load_sequence(input: &SequenceInput, strict: bool) -> Result<LinRecSequence, CliError> {
    let seq = if let Some(path) = &input.seq_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        LinRecSequence::from_json(&text).map_err(|e| CliError::usage(e.to_string()))?
    } else {
        let coeffs = input
            .coeffs
            .as_deref()
            .ok_or_else(|| CliError::usage("missing --coeffs (or --seq-file)"))?;
        let init = input
            .init
            .as_deref()
            .ok_or_else(|| CliError::usage("missing --init (or --seq-file)"))?;
        let rec = Recurrence::new(parse_rational_list(coeffs, "--coeffs")?);
        LinRecSequence::new(rec, parse_rational_list(init, "--init")?)
            .map_err(|e| CliError::usage(e.to_string()))?
    };
    if strict && !seq.recurrence.is_strict_rank() {
        return Err(CliError::usage("c0 must be nonzero"));
    }
    Ok(seq)
}

fn load_sequence_pair(
    coeffs: &Option<String>,
    init: &Option<String>,
    file: &Option<PathBuf>,
    label: &str,
) -> Result<LinRecSequence, CliError> {
    let input = SequenceInput { coeffs: coeffs.clone(), init: init.clone(), seq_file: file.clone() };
    load_sequence(&input, true).map_err(|e| match e {
        CliError::Usage(msg) => CliError::usage(format!("{label}: {msg}")),
        other => other,
    })
}

fn certificate_table(cert: &RankCertificate) -> Table {
    let mut t = Table::new(&["rank", "coefficients", "transient", "terms used", "guard validated"]);
    t.push(vec![
        cert.rank.to_string(),
        rec_string(&cert.recurrence),
        cert.transient.to_string(),
        cert.terms_used.to_string(),
        cert.guard_validated.to_string(),
    ]);
    t
}

fn rec_string(rec: &Recurrence) -> String {
    rec.coeffs().iter().map(format_rational).collect::<Vec<_>>().join(",")
}

fn computation(e: impl std::fmt::Display) -> CliError {
    CliError::computation(format!("{e}; supply more terms or widen the window"))
}

fn cmd_rank(args: RankArgs) -> Result<(), CliError> {
    let cert = if let Some(terms_text) = &args.terms {
        let terms = parse_rational_list(terms_text, "--terms")?;
        minimal_recurrence(&terms, args.guard).map_err(computation)?
    } else {
        let seq = load_sequence(&args.seq, false)?;
        let auto = 2 * seq.recurrence.order() + seq.transient_allowance() + args.guard + 6;
        let count = if args.count == 0 { auto } else { args.count };
        let terms = seq.generate_terms(count);
        minimal_recurrence(&terms, args.guard).map_err(computation)?
    };
    let table = certificate_table(&cert);
    match args.format {
        Some(f) => emit(&table.render(f), &args.out).map_err(io_error)?,
        None => emit(
            &format!(
                "rank {} transient {} coeffs {}\n",
                cert.rank,
                cert.transient,
                rec_string(&cert.recurrence)
            ),
            &args.out,
        )
        .map_err(io_error)?,
    }
    Ok(())
}

fn cmd_rank_seq(args: RankSeqArgs) -> Result<(), CliError> {
    if args.mmax < 1 {
        return Err(CliError::usage("--mmax must be >= 1"));
    }
    let seq = load_sequence(&args.seq, true)?;
    let profile = crseq_core::rank_sequence(&seq, args.mmax).map_err(computation)?;
    match args.format {
        None => {
            let line = profile
                .ranks
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            emit(&format!("{line}\n"), &args.out).map_err(io_error)?;
        }
        Some(f) => {
            let mut table = Table::new(&["M", "rank", "bound", "transient"]);
            for (i, rank) in profile.ranks.iter().enumerate() {
                table.push(vec![
                    (i + 1).to_string(),
                    rank.to_string(),
                    profile.bounds[i].to_string(),
                    profile.transients[i].to_string(),
                ]);
            }
            emit(&table.render(f), &args.out).map_err(io_error)?;
        }
    }
    Ok(())
}

fn cmd_power(args: PowerArgs) -> Result<(), CliError> {
    if args.power < 1 {
        return Err(CliError::usage("-M must be >= 1"));
    }
    let seq = load_sequence(&args.seq, true)?;
    let cert = rank_of_power_with_guard(&seq, args.power, args.guard).map_err(computation)?;
    let text = match args.format {
        Some(f) => certificate_table(&cert).render(f),
        None => format!(
            "rank {} transient {} coeffs {}\n",
            cert.rank,
            cert.transient,
            rec_string(&cert.recurrence)
        ),
    };
    emit(&text, &args.out).map_err(io_error)
}

fn cmd_product(args: ProductArgs) -> Result<(), CliError> {
    let a = load_sequence_pair(&args.a_coeffs, &args.a_init, &args.a_file, "first factor")?;
    let b = load_sequence_pair(&args.b_coeffs, &args.b_init, &args.b_file, "second factor")?;
    let cert = rank_of_product_with_guard(&a, &b, args.guard).map_err(computation)?;
    let text = match args.format {
        Some(f) => certificate_table(&cert).render(f),
        None => format!(
            "rank {} transient {} coeffs {}\n",
            cert.rank,
            cert.transient,
            rec_string(&cert.recurrence)
        ),
    };
    emit(&text, &args.out).map_err(io_error)
}

fn cmd_bounds(args: BoundsArgs) -> Result<(), CliError> {
    if args.mmax < 1 {
        return Err(CliError::usage("--mmax must be >= 1"));
    }
    let (r, k, spec) = if let Some(text) = &args.multiplicities {
        let ms: Vec<u64> = parse_int_list(text, "--multiplicities")?
            .into_iter()
            .map(|m| {
                if m >= 1 {
                    Ok(m as u64)
                } else {
                    Err(CliError::usage("multiplicities must be >= 1"))
                }
            })
            .collect::<Result<_, _>>()?;
        if ms.is_empty() {
            return Err(CliError::usage("--multiplicities must be nonempty"));
        }
        let spec = RootSpec::new(ms);
        (spec.rank(), spec.distinct_count(), Some(spec))
    } else {
        let r = args.order.ok_or_else(|| CliError::usage("missing --order (or --multiplicities)"))?;
        if r < 1 {
            return Err(CliError::usage("--order must be >= 1"));
        }
        let k = args.distinct.unwrap_or(r);
        if k < 1 || k > r {
            return Err(CliError::usage("--distinct must satisfy 1 <= k <= r"));
        }
        let spec = if args.oracle {
            // canonical multiplicity profile for (r, k)
            let mut ms = vec![1u64; k as usize];
            ms[0] = r - k + 1;
            Some(RootSpec::new(ms))
        } else {
            None
        };
        (r, k, spec)
    };

    let mut headers = vec!["M", "distinct-root bound", "refined bound"];
    if args.oracle {
        headers.push("multiset oracle");
    }
    let mut table = Table::new(&headers);
    for m in 1..=args.mmax {
        let mut row = vec![
            m.to_string(),
            power_bound_distinct(r, m).to_string(),
            power_bound_refined(r, k, m)
                .map_err(|e| CliError::usage(e.to_string()))?
                .to_string(),
        ];
        if let Some(spec) = &spec {
            row.push(
                bound_oracle(spec, m)
                    .map_err(|e| CliError::computation(format!("{e}; reduce --mmax")))?
                    .to_string(),
            );
        }
        table.push(row);
    }
    emit(&table.render(args.format.unwrap_or(Format::Md)), &args.out).map_err(io_error)
}

fn cmd_search(args: SearchArgs) -> Result<(), CliError> {
    let mut cfg = SearchConfig::new(args.order, args.coeff_min, args.coeff_max);
    cfg.mmax = args.mmax;
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    cfg.init_bound = args.init_bound;
    cfg.budget = args.budget;
    let rows = search(&cfg).map_err(|e| match e {
        crseq_core::ExplorerError::BudgetExceeded { .. } => {
            CliError::computation(format!("{e}; raise --budget or shrink the range"))
        }
        crseq_core::ExplorerError::BadConfig(msg) => CliError::usage(msg),
        other => computation(other),
    })?;
    let mut table =
        Table::new(&["coefficients", "rank sequence", "eventual polynomial", "classification", "attains bound"]);
    for row in &rows {
        if args.attaining_only && !row.attains_bound {
            continue;
        }
        table.push(vec![
            row.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
            row.ranks.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","),
            row.fitted.as_ref().map(QuasiPolynomial::render).unwrap_or_else(|| "-".into()),
            row.classification.to_string(),
            if row.attains_bound { "yes".into() } else { "no".into() },
        ]);
    }
    emit(&table.render(args.format.unwrap_or(Format::Md)), &args.out).map_err(io_error)
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<Int>>, CliError> {
    let rows: Vec<Vec<Int>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<Int>()
                        .map_err(|_| CliError::usage(format!("bad matrix entry `{s}`")))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<Vec<Int>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    if rows.is_empty() {
        return Err(CliError::usage("matrix must be nonempty"));
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(CliError::usage("matrix rows have unequal lengths"));
    }
    Ok(rows)
}

fn cmd_snf(args: SnfArgs) -> Result<(), CliError> {
    let matrix = parse_matrix(&args.matrix)?;
    let snf = smith_normal_form(&matrix);
    let diagonal = snf.diagonal();
    let diag_text =
        diagonal.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");

    // quotient structure applies when rows are zero-sum relation vectors
    let k = matrix[0].len();
    let quotient = RelationLattice::new(k, matrix.clone())
        .ok()
        .and_then(|l| quotient_invariants(&l).ok());

    match args.format {
        Some(f) => {
            let mut table = Table::new(&["key", "value"]);
            table.push(vec!["diagonal".into(), diag_text.clone()]);
            if let Some(q) = &quotient {
                table.push(vec![
                    "torsion".into(),
                    q.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" "),
                ]);
                table.push(vec!["free rank".into(), q.free_rank.to_string()]);
            }
            if args.full {
                table.push(vec!["U".into(), matrix_text(&snf.u)]);
                table.push(vec!["D".into(), matrix_text(&snf.d)]);
                table.push(vec!["V".into(), matrix_text(&snf.v)]);
            }
            emit(&table.render(f), &args.out).map_err(io_error)
        }
        None => {
            let mut text = format!("diagonal: {diag_text}\n");
            if let Some(q) = &quotient {
                let torsion = if q.torsion.is_empty() {
                    "none".to_string()
                } else {
                    q.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
                };
                text.push_str(&format!("torsion: {torsion}\nfree rank: {}\n", q.free_rank));
            }
            if args.full {
                text.push_str(&format!(
                    "U: {}\nD: {}\nV: {}\n",
                    matrix_text(&snf.u),
                    matrix_text(&snf.d),
                    matrix_text(&snf.v)
                ));
            }
            emit(&text, &args.out).map_err(io_error)
        }
    }
}

fn matrix_text(m: &[Vec<Int>]) -> String {
    m.iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn cmd_classes(args: ClassesArgs) -> Result<(), CliError> {
    if args.mmax < 1 {
        return Err(CliError::usage("--mmax must be >= 1"));
    }
    let lattice = if let Some(path) = &args.lattice_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        RelationLattice::from_json(&text).map_err(|e| CliError::usage(e.to_string()))?
    } else if let Some(roots_text) = &args.roots {
        let roots = parse_rational_list(roots_text, "--roots")?;
        if roots.iter().any(|r| r.is_zero()) {
            return Err(CliError::usage("roots must be nonzero"));
        }
        crseq_core::relations_from_rational_roots(&roots)
            .map_err(|e| CliError::usage(e.to_string()))?
    } else {
        let k = args.k.ok_or_else(|| CliError::usage("missing --lattice-file, --roots or --k"))?;
        let rows = match args.relations.as_deref().map(str::trim) {
            None | Some("") => Vec::new(),
            Some(text) => parse_matrix(text)?,
        };
        RelationLattice::new(k, rows).map_err(|e| CliError::usage(e.to_string()))?
    };

    let counts: Vec<u64> = (1..=args.mmax)
        .map(|m| {
            count_degree_m_classes(&lattice, m)
                .map_err(|e| CliError::computation(format!("{e}; reduce --mmax")))
        })
        .collect::<Result<_, _>>()?;
    match args.format {
        None => {
            let line = counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
            emit(&format!("{line}\n"), &args.out).map_err(io_error)
        }
        Some(f) => {
            let q = quotient_invariants(&lattice).map_err(|e| CliError::usage(e.to_string()))?;
            let mut table = Table::new(&["M", "classes"]);
            for (i, c) in counts.iter().enumerate() {
                table.push(vec![(i + 1).to_string(), c.to_string()]);
            }
            let mut text = table.render(f);
            text.push_str(&format!(
                "free rank: {}, predicted eventual degree: {}\n",
                q.free_rank,
                crseq_core::predicted_degree(&lattice)
            ));
            emit(&text, &args.out).map_err(io_error)
        }
    }
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    if args.window < 2 {
        return Err(CliError::usage("--window must be >= 2"));
    }
    if args.max_period < 1 {
        return Err(CliError::usage("--max-period must be >= 1"));
    }
    let ranks: Vec<usize> = parse_int_list(&args.ranks, "--ranks")?
        .into_iter()
        .map(|r| {
            if r >= 0 {
                Ok(r as usize)
            } else {
                Err(CliError::usage("ranks must be nonnegative"))
            }
        })
        .collect::<Result<_, _>>()?;
    if ranks.is_empty() {
        return Err(CliError::usage("--ranks must be nonempty"));
    }
    let fit = fit_quasi_polynomial(&ranks, args.max_period, args.window);
    let text = match &fit {
        Some(f) => format!("{} (period {}, onset M={})\n", f.render(), f.period(), f.onset()),
        None => "no eventual (quasi-)polynomial found\n".to_string(),
    };
    match args.format {
        None => emit(&text, &args.out).map_err(io_error),
        Some(fmt) => {
            let mut table = Table::new(&["period", "onset", "polynomial"]);
            if let Some(f) = &fit {
                table.push(vec![f.period().to_string(), f.onset().to_string(), f.render()]);
            }
            emit(&table.render(fmt), &args.out).map_err(io_error)
        }
    }
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<(), CliError> {
    if args.table.is_none() && args.oeis.is_empty() {
        return Err(CliError::usage("nothing to do: pass --table and/or --oeis ID=PATH"));
    }
    let mut out_text = String::new();
    let mut mismatches = 0usize;

    if let Some(table_id) = args.table {
        let report = match table_id {
            TableId::Table2 => reproduce::reproduce_power_recurrences(crseq_core::tables::table2())
                .map_err(CliError::computation)?,
            TableId::Table1 | TableId::Appendix4 | TableId::Appendix5 => {
                let (rows, default_mmax, deep_threshold): (Vec<_>, usize, usize) = match table_id {
                    TableId::Table1 => (
                        crseq_core::tables::table1_blocks()
                            .iter()
                            .flat_map(|b| b.rows.iter().cloned())
                            .collect(),
                        8,
                        8,
                    ),
                    TableId::Appendix4 => {
                        (crseq_core::tables::appendix_rank4().to_vec(), 5, 6)
                    }
                    TableId::Appendix5 => {
                        (crseq_core::tables::appendix_rank5().to_vec(), 4, 4)
                    }
                    TableId::Table2 => unreachable!(),
                };
                let mmax = args.mmax.unwrap_or(if args.deep { 8 } else { default_mmax });
                if mmax > deep_threshold && !args.deep {
                    return Err(CliError::computation(format!(
                        "BudgetExceeded: checking this table beyond M={deep_threshold} is \
                         expensive; pass --deep to allow it"
                    )));
                }
                let cfg = reproduce::RowConfig {
                    mmax,
                    trials: args.trials.max(1),
                    seed: args.seed,
                    max_period: 4,
                    window: 4,
                };
                reproduce::reproduce_rows(&rows, &cfg).map_err(CliError::computation)?
            }
        };
        mismatches += report.mismatches;
        out_text.push_str(&report.table.render(args.format.unwrap_or(Format::Md)));
        out_text.push_str(&format!("rows with mismatches: {}\n", report.mismatches));
    }

    if !args.oeis.is_empty() {
        let report = run_oeis_checks(&args.oeis)?;
        out_text.push_str(&report.0);
        mismatches += report.1;
    }

    emit(&out_text, &args.out).map_err(io_error)?;
    if mismatches > 0 {
        return Err(CliError::computation(format!("{mismatches} row(s) mismatched")));
    }
    Ok(())
}

fn run_oeis_checks(specs: &[String]) -> Result<(String, usize), CliError> {
    use std::collections::BTreeMap;
    let mut files: BTreeMap<String, BTreeMap<i64, Int>> = BTreeMap::new();
    for spec in specs {
        let (id, path) = spec
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("--oeis expects ID=PATH, got `{spec}`")))?;
        let text = std::fs::read_to_string(path.trim())
            .map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?;
        let terms = bfile::parse_bfile(&text).map_err(CliError::usage)?;
        files.insert(id.trim().to_uppercase(), terms);
    }
    let mut out = String::new();
    let mut failures = 0usize;
    let mut note = |line: String, ok: bool| {
        out.push_str(&line);
        out.push('\n');
        if !ok {
            failures += 1;
        }
    };

    for id in ["A051028", "A051029", "A051030"] {
        if let Some(terms) = files.get(id) {
            match bfile::check_cube_identity_recurrence(terms) {
                Ok(n) => note(format!("{id}: recurrence (82,82,-1) holds on {n} windows"), true),
                Err(e) => note(format!("{id}: FAIL: {e}"), false),
            }
        }
    }
    if let (Some(a), Some(b), Some(c)) =
        (files.get("A051028"), files.get("A051029"), files.get("A051030"))
    {
        match bfile::check_cube_identity(a, b, c) {
            Ok(n) => note(format!("cube identity a^3+b^3 = c^3+(-1)^n holds on {n} indices"), true),
            Err(e) => note(format!("cube identity FAIL: {e}"), false),
        }
    }
    if let Some(terms) = files.get("A265944") {
        match bfile::check_power_determinants(terms, 24) {
            Ok((n, skipped)) => note(
                format!("A265944: {n} power-determinant values match ({skipped} above cap skipped)"),
                true,
            ),
            Err(e) => note(format!("A265944: FAIL: {e}"), false),
        }
    }
    Ok((out, failures))
}

fn io_error(e: std::io::Error) -> CliError {
    CliError::computation(format!("i/o error: {e}"))
}
