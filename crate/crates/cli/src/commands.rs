//! Subcommand implementations and the exit-code contract.
//!
//! Exit codes: 0 success/agreement, 1 verification mismatch, 2 usage error,
//! 3 no closed-form family covers the request, 4 resource or limit errors.

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use imark_core::closedform::{family_for, FamilyError, FamilyEvaluator, GrundyDomain};
use imark_core::engine::{
    self, CacheError, Convention, EngineError, GameSpec, GrundyTable, Outcome, SpecError,
};
use imark_core::multiheap::{self, MultiheapError, SumPosition};
use imark_core::periodicity::{self, PeriodicityError};

const DEFAULT_CLI_BUDGET: u64 = 10_000_000;
const BUDGET_ENV: &str = "IMARK_ORACLE_BUDGET";
const CACHE_DIR_ENV: &str = "IMARK_CACHE_DIR";

#[derive(Debug)]
pub struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code,
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self::new(2, message)
    }

    fn no_family(message: impl Into<String>) -> Self {
        Self::new(3, message)
    }

    pub fn exit_code(&self) -> u8 {
        self.code
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<SpecError> for CliError {
    fn from(err: SpecError) -> Self {
        Self::usage(err.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(err: EngineError) -> Self {
        Self::new(4, err.to_string())
    }
}

impl From<PeriodicityError> for CliError {
    fn from(err: PeriodicityError) -> Self {
        let code = match err {
            PeriodicityError::ZeroPeriod | PeriodicityError::NoDivisionMove => 2,
            _ => 4,
        };
        Self::new(code, err.to_string())
    }
}

impl From<FamilyError> for CliError {
    fn from(err: FamilyError) -> Self {
        let code = match err {
            FamilyError::OutsideDomain { .. } => 3,
            FamilyError::InvalidParameters(_) => 2,
        };
        Self::new(code, err.to_string())
    }
}

impl From<MultiheapError> for CliError {
    fn from(err: MultiheapError) -> Self {
        match err {
            MultiheapError::MisereSumsUnsupported => Self::usage(err.to_string()),
            MultiheapError::Engine(e) => e.into(),
        }
    }
}

impl From<CacheError> for CliError {
    fn from(err: CacheError) -> Self {
        Self::new(4, err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        Self::new(4, err.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "imark",
    version,
    about = "Grundy values, outcomes, periodicity analysis and optimal play for integral subtraction-division heap games"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print g-values for one heap or a range of heaps
    Grundy(QueryArgs),
    /// Print N/P outcomes for one heap or a range of heaps
    Outcome(QueryArgs),
    /// Emit a whole sequence as CSV (or the classic Mark a/b sequences)
    Sequence(SequenceArgs),
    /// Sweep fast evaluator against the oracle and report mismatches
    Verify(VerifyArgs),
    /// Detect or census periodic structure in a sequence prefix
    Period(PeriodArgs),
    /// Produce an oracle-checked counterexample to a claimed g-sequence period
    Refute(RefuteArgs),
    /// Advise an optimal move on a sum of heaps
    Move(MoveArgs),
    /// Time the fast lane against oracle table construction
    Bench(BenchArgs),
    /// Build, store and check binary oracle-table caches
    Cache(CacheArgs),
}

#[derive(Args)]
struct GameArgs {
    /// Comma-separated subtraction set, e.g. --s 1,2,3
    #[arg(long, value_delimiter = ',')]
    s: Vec<u64>,
    /// Comma-separated division set, e.g. --d 2
    #[arg(long, value_delimiter = ',')]
    d: Vec<u64>,
}

impl GameArgs {
    fn spec(&self) -> Result<GameSpec, CliError> {
        Ok(GameSpec::new(self.s.clone(), self.d.clone())?)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Normal,
    Misere,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Convention {
        match c {
            ConventionArg::Normal => Convention::Normal,
            ConventionArg::Misere => Convention::Misere,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Oracle,
    Fast,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RangeFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Query the classic Mark game instead of an integral game
    #[arg(long, conflicts_with_all = ["s", "d"])]
    mark: bool,
    /// Single heap size to evaluate
    #[arg(long)]
    n: Option<u64>,
    /// Start of an inclusive range of heap sizes
    #[arg(long, requires = "to")]
    from: Option<u64>,
    /// End of an inclusive range of heap sizes
    #[arg(long, requires = "from")]
    to: Option<u64>,
    #[arg(long, value_enum, default_value_t = Mode::Oracle)]
    mode: Mode,
    /// For `grundy`: print outcomes instead of g-values
    #[arg(long)]
    outcome: bool,
    #[arg(long, value_enum, default_value_t = ConventionArg::Normal)]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = RangeFormat::Csv)]
    format: RangeFormat,
    /// Oracle table budget in entries (also IMARK_ORACLE_BUDGET)
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SequenceKind {
    Grundy,
    Outcome,
    /// Classic Mark complementary sequences (requires --mark)
    Ab,
}

#[derive(Args)]
struct SequenceArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, conflicts_with_all = ["s", "d"])]
    mark: bool,
    /// Largest heap size to include
    #[arg(long)]
    upto: Option<u64>,
    /// Number of entries for --kind ab
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, value_enum, default_value_t = SequenceKind::Grundy)]
    kind: SequenceKind,
    #[arg(long, value_enum, default_value_t = Mode::Oracle)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = ConventionArg::Normal)]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = RangeFormat::Csv)]
    format: RangeFormat,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    Auto,
    Grundy,
    Outcome,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Sweep heap sizes 0..=upto
    #[arg(long)]
    upto: u64,
    #[arg(long, value_enum, default_value_t = VerifyKind::Auto)]
    kind: VerifyKind,
    #[arg(long, value_enum, default_value_t = ConventionArg::Normal)]
    convention: ConventionArg,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct PeriodArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Length of the oracle-computed sequence prefix to analyze
    #[arg(long)]
    prefix: u64,
    /// Analyze g-values instead of outcomes
    #[arg(long, value_enum, default_value_t = PeriodKind::Outcome)]
    kind: PeriodKind,
    #[arg(long, value_enum, default_value_t = ConventionArg::Normal)]
    convention: ConventionArg,
    /// Census mode: list preperiod exceptions against --period
    #[arg(long, requires = "period")]
    census: bool,
    /// Assumed period length for --census
    #[arg(long)]
    period: Option<u64>,
    /// Largest period the detector will try (default: prefix/(min_reps+1), capped at 200)
    #[arg(long)]
    max_p: Option<u64>,
    /// Most exception columns the detector may use
    #[arg(long, default_value_t = 1)]
    ell_max: usize,
    /// Full periods required after the preperiod
    #[arg(long, default_value_t = 3)]
    min_reps: u64,
    /// Trailing periods used by --census to infer the pattern
    #[arg(long, default_value_t = 10)]
    tail_reps: u64,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PeriodKind {
    Grundy,
    Outcome,
}

#[derive(Args)]
struct RefuteArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Claimed preperiod and period as "q,p"
    #[arg(long)]
    claim: String,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct MoveArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Comma-separated heap sizes of the sum position
    #[arg(long, value_delimiter = ',', required = true)]
    heaps: Vec<u64>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Normal)]
    convention: ConventionArg,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    game: GameArgs,
    #[arg(long, value_enum, default_value_t = ConventionArg::Normal)]
    convention: ConventionArg,
    /// Fast-lane queries to time (random heap sizes below 2^60)
    #[arg(long, default_value_t = 200_000)]
    fast_samples: u64,
    /// Entries for the timed oracle build
    #[arg(long, default_value_t = 1_000_000)]
    oracle_entries: u64,
    /// Fast-vs-oracle spot checks
    #[arg(long, default_value_t = 1_000)]
    agreement_samples: u64,
    #[arg(long, value_enum, default_value_t = RangeFormat::Csv)]
    format: RangeFormat,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct CacheArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Largest heap size to tabulate
    #[arg(long)]
    upto: u64,
    /// Cache directory (also IMARK_CACHE_DIR; default ".")
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Reload the written file and check it byte-for-byte plus mex-consistency
    #[arg(long)]
    verify: bool,
    /// Also export the table as CSV to this path
    #[arg(long)]
    export_csv: Option<PathBuf>,
    #[arg(long)]
    budget: Option<u64>,
}

fn resolve_budget(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
    })
    .unwrap_or(DEFAULT_CLI_BUDGET)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Grundy(args) => query(args, false),
        Command::Outcome(args) => query(args, true),
        Command::Sequence(args) => sequence(args),
        Command::Verify(args) => verify(args),
        Command::Period(args) => period(args),
        Command::Refute(args) => refute(args),
        Command::Move(args) => advise(args),
        Command::Bench(args) => bench(args),
        Command::Cache(args) => cache(args),
    }
}

/// How one (game, convention, mode) combination answers point queries.
enum Lane {
    Fast(FamilyEvaluator),
    Oracle(GrundyTable),
    OracleOutcomes(Vec<Outcome>),
}

impl Lane {
    fn grundy(&self, n: u64) -> Result<u64, CliError> {
        match self {
            Lane::Fast(ev) => Ok(ev.grundy(n)?),
            Lane::Oracle(t) => Ok(t.grundy(n) as u64),
            Lane::OracleOutcomes(_) => unreachable!("outcome lane asked for g-values"),
        }
    }

    fn outcome(&self, n: u64) -> Result<Outcome, CliError> {
        match self {
            Lane::Fast(ev) => Ok(ev.outcome(n)?),
            Lane::Oracle(t) => Ok(if t.grundy(n) == 0 { Outcome::P } else { Outcome::N }),
            Lane::OracleOutcomes(outs) => Ok(outs[n as usize]),
        }
    }
}

fn open_lane(
    spec: Option<&GameSpec>,
    mark: bool,
    convention: Convention,
    mode: Mode,
    want_outcome: bool,
    limit: u64,
    budget: u64,
) -> Result<Lane, CliError> {
    if mark {
        if convention == Convention::Misere {
            return Err(CliError::usage("classic Mark is only covered under normal play"));
        }
        if mode == Mode::Oracle {
            return Err(CliError::usage(
                "classic Mark uses floor division, which the oracle does not model; use --mode fast",
            ));
        }
        return Ok(Lane::Fast(FamilyEvaluator::mark()));
    }
    let spec = spec.expect("spec required unless --mark");
    match mode {
        Mode::Fast => {
            let ev = family_for(spec, convention).ok_or_else(|| {
                CliError::no_family(format!(
                    "no closed-form family covers {spec} under {} play",
                    convention_name(convention)
                ))
            })?;
            if !want_outcome && ev.grundy_domain() == GrundyDomain::Unavailable {
                return Err(CliError::no_family(format!(
                    "the family for {spec} answers outcomes only; pass --outcome or use --mode oracle"
                )));
            }
            Ok(Lane::Fast(ev))
        }
        Mode::Oracle => {
            if convention == Convention::Misere {
                if !want_outcome {
                    return Err(CliError::usage(
                        "misère play has no Sprague-Grundy values here; pass --outcome",
                    ));
                }
                Ok(Lane::OracleOutcomes(engine::outcome_table(
                    spec, convention, limit, budget,
                )?))
            } else {
                Ok(Lane::Oracle(GrundyTable::build(spec, limit, budget)?))
            }
        }
    }
}

fn convention_name(c: Convention) -> &'static str {
    match c {
        Convention::Normal => "normal",
        Convention::Misere => "misère",
    }
}

fn query(args: QueryArgs, force_outcome: bool) -> Result<(), CliError> {
    let want_outcome = force_outcome || args.outcome;
    let convention: Convention = args.convention.into();
    if convention == Convention::Misere && !want_outcome {
        return Err(CliError::usage(
            "misère play has no Sprague-Grundy values here; use the outcome subcommand",
        ));
    }
    let (lo, hi) = match (args.n, args.from, args.to) {
        (Some(n), None, None) => (n, n),
        (None, Some(a), Some(b)) if a <= b => (a, b),
        _ => {
            return Err(CliError::usage(
                "pass exactly one of --n or an ascending --from/--to pair",
            ))
        }
    };
    let spec = if args.mark { None } else { Some(args.game.spec()?) };
    let lane = open_lane(
        spec.as_ref(),
        args.mark,
        convention,
        args.mode,
        want_outcome,
        hi,
        resolve_budget(args.budget),
    )?;
    if args.n.is_some() {
        if want_outcome {
            println!("{}", lane.outcome(lo)?);
        } else {
            println!("{}", lane.grundy(lo)?);
        }
        return Ok(());
    }
    let mut rows: Vec<(u64, String)> = Vec::with_capacity((hi - lo + 1) as usize);
    for n in lo..=hi {
        let value = if want_outcome {
            lane.outcome(n)?.to_string()
        } else {
            lane.grundy(n)?.to_string()
        };
        rows.push((n, value));
    }
    emit_rows(&rows, args.format, if want_outcome { "outcome" } else { "grundy" });
    Ok(())
}

fn emit_rows(rows: &[(u64, String)], format: RangeFormat, kind: &str) {
    match format {
        RangeFormat::Csv => {
            println!("n,value");
            for (n, v) in rows {
                println!("{n},{v}");
            }
        }
        RangeFormat::Json => {
            let values: Vec<serde_json::Value> = rows
                .iter()
                .map(|(n, v)| serde_json::json!([n, v]))
                .collect();
            println!(
                "{}",
                serde_json::json!({ "kind": kind, "values": values })
            );
        }
    }
}

fn sequence(args: SequenceArgs) -> Result<(), CliError> {
    if args.kind == SequenceKind::Ab {
        if !args.mark {
            return Err(CliError::usage("--kind ab is the classic Mark pair; pass --mark"));
        }
        let count = args
            .count
            .ok_or_else(|| CliError::usage("--kind ab needs --count"))?;
        if count == 0 {
            return Err(CliError::usage("--count must be positive"));
        }
        let seqs = imark_core::closedform::mark_sequences(count);
        match args.format {
            RangeFormat::Csv => {
                println!("i,a,b");
                for i in 0..count {
                    println!("{},{},{}", i, seqs.a_values[i], seqs.b_values[i]);
                }
            }
            RangeFormat::Json => println!(
                "{}",
                serde_json::json!({ "a": seqs.a_values, "b": seqs.b_values })
            ),
        }
        return Ok(());
    }
    let upto = args
        .upto
        .ok_or_else(|| CliError::usage("sequence needs --upto"))?;
    let want_outcome = args.kind == SequenceKind::Outcome;
    let convention: Convention = args.convention.into();
    if convention == Convention::Misere && !want_outcome {
        return Err(CliError::usage(
            "misère play has no Sprague-Grundy values here; use --kind outcome",
        ));
    }
    let spec = if args.mark { None } else { Some(args.game.spec()?) };
    let lane = open_lane(
        spec.as_ref(),
        args.mark,
        convention,
        args.mode,
        want_outcome,
        upto,
        resolve_budget(args.budget),
    )?;
    let mut rows = Vec::with_capacity((upto + 1) as usize);
    for n in 0..=upto {
        let value = if want_outcome {
            lane.outcome(n)?.to_string()
        } else {
            lane.grundy(n)?.to_string()
        };
        rows.push((n, value));
    }
    emit_rows(&rows, args.format, if want_outcome { "outcome" } else { "grundy" });
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), CliError> {
    let spec = args.game.spec()?;
    let convention: Convention = args.convention.into();
    let budget = resolve_budget(args.budget);
    let ev = family_for(&spec, convention).ok_or_else(|| {
        CliError::no_family(format!(
            "no closed-form family covers {spec} under {} play",
            convention_name(convention)
        ))
    })?;
    let compare_grundy = match args.kind {
        VerifyKind::Grundy => true,
        VerifyKind::Outcome => false,
        VerifyKind::Auto => ev.grundy_domain() != GrundyDomain::Unavailable,
    };
    if compare_grundy && ev.grundy_domain() == GrundyDomain::Unavailable {
        return Err(CliError::no_family(format!(
            "the family for {spec} answers outcomes only"
        )));
    }
    let mut mismatches: u64 = 0;
    let mut first: Option<(u64, String, String)> = None;
    if compare_grundy {
        let table = GrundyTable::build(&spec, args.upto, budget)?;
        for n in 0..=args.upto {
            if ev.grundy_domain() == GrundyDomain::OddHeapsOnly && n % 2 == 0 {
                continue;
            }
            let fast = ev.grundy(n)?;
            let oracle = table.grundy(n) as u64;
            if fast != oracle {
                mismatches += 1;
                first.get_or_insert((n, fast.to_string(), oracle.to_string()));
            }
        }
    } else {
        let outs = engine::outcome_table(&spec, convention, args.upto, budget)?;
        for n in 0..=args.upto {
            if ev.grundy_domain() == GrundyDomain::OddHeapsOnly && n % 2 == 0 {
                continue;
            }
            let fast = ev.outcome(n)?;
            let oracle = outs[n as usize];
            if fast != oracle {
                mismatches += 1;
                first.get_or_insert((n, fast.to_string(), oracle.to_string()));
            }
        }
    }
    if mismatches == 0 {
        println!("0 mismatches");
        Ok(())
    } else {
        let (n, fast, oracle) = first.unwrap();
        println!("{mismatches} mismatches; first at n={n}: fast={fast} oracle={oracle}");
        Err(CliError::new(1, format!("verification failed for {spec}")))
    }
}

fn period(args: PeriodArgs) -> Result<(), CliError> {
    if args.prefix == 0 {
        return Err(CliError::usage("--prefix must be positive"));
    }
    let spec = args.game.spec()?;
    let convention: Convention = args.convention.into();
    let budget = resolve_budget(args.budget);
    let limit = args.prefix - 1;
    enum Seq {
        Grundy(Vec<u8>),
        Outcome(Vec<Outcome>),
    }
    let seq = match args.kind {
        PeriodKind::Grundy => {
            if convention == Convention::Misere {
                return Err(CliError::usage(
                    "misère play has no Sprague-Grundy values here; use --kind outcome",
                ));
            }
            Seq::Grundy(GrundyTable::build(&spec, limit, budget)?.values().to_vec())
        }
        PeriodKind::Outcome => {
            Seq::Outcome(engine::outcome_table(&spec, convention, limit, budget)?)
        }
    };
    if args.census {
        let p = args.period.expect("clap enforces --period with --census");
        let doc = match &seq {
            Seq::Grundy(v) => periodicity::census(v, p, args.tail_reps)?.to_json(),
            Seq::Outcome(v) => periodicity::census(v, p, args.tail_reps)?.to_json(),
        };
        println!("{doc}");
        return Ok(());
    }
    let max_p = args
        .max_p
        .unwrap_or_else(|| (args.prefix / (args.min_reps + 1)).clamp(1, 200));
    let cert = match &seq {
        Seq::Grundy(v) => periodicity::detect(v, max_p, args.ell_max, args.min_reps)?,
        Seq::Outcome(v) => periodicity::detect(v, max_p, args.ell_max, args.min_reps)?,
    };
    match cert {
        Some(cert) => {
            println!("{}", cert.to_json());
            if let Seq::Outcome(v) = &seq {
                println!("period: {}", periodicity::period_string(v, &cert));
            }
            Ok(())
        }
        None => Err(CliError::new(
            1,
            format!("no certificate with period <= {max_p} and <= {} exceptions fits", args.ell_max),
        )),
    }
}

fn refute(args: RefuteArgs) -> Result<(), CliError> {
    let spec = args.game.spec()?;
    let claim: Vec<&str> = args.claim.split(',').collect();
    let (q, p) = match claim.as_slice() {
        [q, p] => (
            q.trim()
                .parse::<u64>()
                .map_err(|_| CliError::usage("claim preperiod must be an integer"))?,
            p.trim()
                .parse::<u64>()
                .map_err(|_| CliError::usage("claim period must be an integer"))?,
        ),
        _ => return Err(CliError::usage("--claim takes \"q,p\"")),
    };
    let witness =
        periodicity::refute_grundy_period(&spec, q, p, resolve_budget(args.budget))?;
    println!(
        "n={} g={}, dn={} g={}",
        witness.n, witness.grundy_n, witness.scaled, witness.grundy_scaled
    );
    Ok(())
}

fn advise(args: MoveArgs) -> Result<(), CliError> {
    let spec = args.game.spec()?;
    let pos = SumPosition::uniform(&spec, &args.heaps);
    let advice = multiheap::optimal_move(&pos, args.convention.into(), resolve_budget(args.budget))?;
    match advice {
        Some(a) => println!(
            "heap {} -> {} (total {})",
            a.heap_index, a.new_size, a.resulting_grundy
        ),
        None => println!("none (P-position: every move loses)"),
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), CliError> {
    let spec = args.game.spec()?;
    let convention: Convention = args.convention.into();
    let budget = resolve_budget(args.budget);
    let ev = family_for(&spec, convention).ok_or_else(|| {
        CliError::no_family(format!(
            "no closed-form family covers {spec} under {} play",
            convention_name(convention)
        ))
    })?;
    let odd_only = ev.grundy_domain() == GrundyDomain::OddHeapsOnly;
    let outcomes_only = ev.grundy_domain() == GrundyDomain::Unavailable;
    let mut rng = ChaCha8Rng::seed_from_u64(0x1AB5);
    let draw = |rng: &mut ChaCha8Rng| {
        let n: u64 = rng.gen_range(0..(1u64 << 60));
        if odd_only {
            n | 1
        } else {
            n
        }
    };

    // Fast lane: wall-clock over random large queries.
    let samples = args.fast_samples.max(1);
    let heaps: Vec<u64> = (0..samples).map(|_| draw(&mut rng)).collect();
    let start = Instant::now();
    let mut checksum = 0u64;
    for &n in &heaps {
        if outcomes_only {
            checksum ^= (ev.outcome(n)? == Outcome::P) as u64;
        } else {
            checksum ^= ev.grundy(n)?;
        }
    }
    let fast_elapsed = start.elapsed();
    std::hint::black_box(checksum);
    let fast_ns = fast_elapsed.as_nanos() as f64 / samples as f64;
    let fast_qps = samples as f64 / fast_elapsed.as_secs_f64();

    // Oracle lane: timed table build, refusing anything over budget.
    let entries = args.oracle_entries;
    let start = Instant::now();
    let table = GrundyTable::build(&spec, entries.saturating_sub(1), budget)?;
    let oracle_elapsed = start.elapsed();
    let oracle_eps = entries as f64 / oracle_elapsed.as_secs_f64();

    // Spot agreement between the lanes on sampled in-budget heaps.
    let mut agreement = "ok";
    let mut first_bad = None;
    for _ in 0..args.agreement_samples {
        let n = {
            let n = rng.gen_range(0..=table.limit());
            if odd_only {
                n | 1
            } else {
                n
            }
        };
        let oracle_g = table.grundy(n.min(table.limit())) as u64;
        let ok = if outcomes_only {
            let oracle_outcome = if oracle_g == 0 { Outcome::P } else { Outcome::N };
            convention == Convention::Normal && ev.outcome(n)? == oracle_outcome
        } else {
            ev.grundy(n)? == oracle_g
        };
        if !ok {
            agreement = "mismatch";
            first_bad = Some(n);
            break;
        }
    }

    match args.format {
        RangeFormat::Json => println!(
            "{}",
            serde_json::json!({
                "fast_queries_per_sec": fast_qps,
                "fast_ns_per_query": fast_ns,
                "fast_samples": samples,
                "oracle_entries_per_sec": oracle_eps,
                "oracle_entries": entries,
                "agreement": agreement,
                "agreement_samples": args.agreement_samples,
            })
        ),
        RangeFormat::Csv => {
            println!("fast: {fast_qps:.0} queries/s ({fast_ns:.1} ns/query, {samples} samples at n < 2^60)");
            println!("oracle: {oracle_eps:.0} entries/s ({entries} entries)");
            println!("agreement: {agreement} ({} samples)", args.agreement_samples);
        }
    }
    if agreement != "ok" {
        return Err(CliError::new(
            1,
            format!("fast and oracle lanes disagree at n={}", first_bad.unwrap()),
        ));
    }
    Ok(())
}

fn cache(args: CacheArgs) -> Result<(), CliError> {
    let spec = args.game.spec()?;
    let dir = args
        .dir
        .or_else(|| std::env::var(CACHE_DIR_ENV).ok().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let table = GrundyTable::build(&spec, args.upto, resolve_budget(args.budget))?;
    let join = |xs: &[u64]| {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join("-")
    };
    let name = format!(
        "imark_s{}_d{}_n{}.imgt",
        join(spec.subtraction_set()),
        join(spec.division_set()),
        args.upto
    );
    let path = dir.join(name);
    let mut bytes = Vec::new();
    table.write_binary(&mut bytes)?;
    fs::write(&path, &bytes)?;
    println!("wrote {} ({} values)", path.display(), table.values().len());
    if let Some(csv_path) = &args.export_csv {
        let mut csv = Vec::new();
        table.write_csv(&mut csv)?;
        fs::write(csv_path, csv)?;
        println!("wrote {}", csv_path.display());
    }
    if args.verify {
        let raw = fs::read(&path)?;
        let reloaded = GrundyTable::read_binary(&mut raw.as_slice())?;
        let mut reserialized = Vec::new();
        reloaded.write_binary(&mut reserialized)?;
        if reserialized != raw {
            return Err(CliError::new(1, "cache bytes do not round-trip"));
        }
        if !reloaded.verify_mex() {
            return Err(CliError::new(1, "reloaded table fails mex self-consistency"));
        }
        println!("cache ok: byte-identical round-trip, mex-consistent");
    }
    Ok(())
}
