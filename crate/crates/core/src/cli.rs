//! Command-line front end. [`dispatch`] returns the process exit code:
//! 0 on success, 1 on runtime errors (and failed promise checks), 2 on
//! usage errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::algorithms::{recover, RecoveryResult, Strategy, TranscriptEntry, TrialSource};
use crate::analytics::{
    classical_lower_bound_m1, entropy_budget_m1, t_cb, t_cs, t_q, t_q_approx, t_q_series,
};
use crate::bitstring::BitString;
use crate::error::Error;
use crate::harness::run_rng;
use crate::harness::{
    emit_figure1, emit_figure3, montecarlo_expected_queries, resolve_output, ExperimentSpec,
    MaskTarget, RunManifest,
};
use crate::oracle::{verify_promise, Labeling, MaskVariant, MaskedOracle, PromiseCheck};

#[derive(Debug, Parser)]
#[command(
    name = "maskfind",
    version,
    about = "Hidden-mask recovery: quantum vs classical query counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print exact and approximate query-count formulas.
    Analyze(AnalyzeArgs),
    /// One seeded quantum recovery run with its transcript.
    Simulate(SimulateArgs),
    /// Mean queries of a strategy over many seeded runs.
    Montecarlo(MontecarloArgs),
    /// One classical recovery run with its probe transcript.
    Classical(ClassicalArgs),
    /// Regenerate figure data as CSV.
    Figures(FiguresArgs),
    /// Check an oracle or a truth table against the mask promise.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("formula").required(true).multiple(true)))]
struct AnalyzeArgs {
    /// Exact T_Q(M).
    #[arg(long, value_name = "M", group = "formula")]
    tq: Option<u32>,
    /// T_Q(M) from the independent series.
    #[arg(long, value_name = "M", group = "formula")]
    tq_series: Option<u32>,
    /// 2 + log2(M).
    #[arg(long, value_name = "M", group = "formula")]
    tq_approx: Option<u32>,
    /// T_CB(N, M).
    #[arg(long, num_args = 2, value_names = ["N", "M"], group = "formula")]
    tcb: Option<Vec<u32>>,
    /// T_CS(N, M).
    #[arg(long, num_args = 2, value_names = ["N", "M"], group = "formula")]
    tcs: Option<Vec<u32>>,
    /// Classical lower bound for a single one-bit.
    #[arg(long, value_name = "N", group = "formula")]
    lower_bound: Option<u32>,
    /// Entropy split for a single one-bit.
    #[arg(long, value_name = "N", group = "formula")]
    entropy: Option<u32>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    n: u32,
    /// Hidden mask, e.g. 110.
    #[arg(long)]
    s: BitString,
    #[arg(long, default_value = "and")]
    variant: MaskVariant,
    /// Use the identity labeling instead of a seeded random one.
    #[arg(long)]
    canonical: bool,
    /// Seed of the random labeling (defaults to --seed).
    #[arg(long)]
    labeling_seed: Option<u64>,
}

impl OracleArgs {
    fn labeling(&self, fallback_seed: u64) -> Labeling {
        if self.canonical {
            Labeling::Canonical
        } else {
            Labeling::SeededRandom {
                seed: self.labeling_seed.unwrap_or(fallback_seed),
            }
        }
    }

    fn check(&self) -> Result<(), Failure> {
        if self.s.width() != self.n {
            return Err(Failure::Usage(format!(
                "--s has {} bits but --n is {}",
                self.s.width(),
                self.n
            )));
        }
        Ok(())
    }

    fn trivial(&self) -> bool {
        self.s.is_zero() || self.s.is_ones()
    }
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "fast")]
    source: TrialSource,
    /// Promised number of measurable bits (defaults to the true value).
    #[arg(long)]
    m: Option<u32>,
    /// Write the transcript as JSON lines.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MontecarloArgs {
    #[arg(long, default_value = "quantum")]
    strategy: Strategy,
    #[arg(long)]
    n: u32,
    /// Weight of a fresh random mask per run.
    #[arg(long, conflicts_with = "s", required_unless_present = "s")]
    m: Option<u32>,
    /// Fixed mask for every run.
    #[arg(long)]
    s: Option<BitString>,
    #[arg(long, default_value = "and")]
    variant: MaskVariant,
    #[arg(long, default_value_t = 10_000)]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "fast")]
    source: TrialSource,
    /// Write the result as a one-row CSV plus manifest.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ClassicalArgs {
    #[arg(long, default_value = "binary-adapted")]
    strategy: Strategy,
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct FiguresArgs {
    /// 1: T_Q and its estimate; 3: T_Q against T_CB and T_CS.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["1", "3"]))]
    which: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 500)]
    m_max: u32,
    #[arg(long, default_value_t = 200)]
    n: u32,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    n: u32,
    /// Mask of a generated oracle to check.
    #[arg(long, conflicts_with = "table", required_unless_present = "table")]
    s: Option<BitString>,
    /// Truth table file: 2^n outputs, one per line, as bit strings or
    /// decimal integers.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Claimed weight of the mask (defaults to the weight of --s).
    #[arg(long, required_unless_present = "s")]
    m: Option<u32>,
    #[arg(long, default_value = "and")]
    variant: MaskVariant,
    #[arg(long)]
    canonical: bool,
    #[arg(long, default_value_t = 0)]
    labeling_seed: u64,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type CliResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Montecarlo(a) => montecarlo(a, out),
        Command::Classical(a) => classical(a, out),
        Command::Figures(a) => figures(a, out),
        Command::Verify(a) => verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Runtime(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn analyze(a: AnalyzeArgs, out: &mut dyn Write) -> CliResult {
    if let Some(m) = a.tq {
        let v = t_q(m);
        writeln!(out, "t_q({m}) = {v} ≈ {:.6}", v.to_f64())?;
    }
    if let Some(m) = a.tq_series {
        writeln!(out, "t_q_series({m}) ≈ {:.12}", t_q_series(m, 1e-12)?)?;
    }
    if let Some(m) = a.tq_approx {
        writeln!(out, "t_q_approx({m}) = {:.6}", t_q_approx(m)?)?;
    }
    if let Some(nm) = a.tcb {
        writeln!(out, "t_cb({}, {}) = {}", nm[0], nm[1], t_cb(nm[0], nm[1])?)?;
    }
    if let Some(nm) = a.tcs {
        let v = t_cs(nm[0], nm[1])?;
        writeln!(out, "t_cs({}, {}) = {v} ≈ {:.6}", nm[0], nm[1], v.to_f64())?;
    }
    if let Some(n) = a.lower_bound {
        writeln!(
            out,
            "lower_bound_m1({n}) = {}",
            classical_lower_bound_m1(n)?
        )?;
    }
    if let Some(n) = a.entropy {
        let e = entropy_budget_m1(n)?;
        writeln!(
            out,
            "entropy_m1({n}): total = {:.6}, global = {:.6}, local = {:.6}",
            e.total, e.global, e.local
        )?;
    }
    Ok(0)
}

fn print_transcript(result: &RecoveryResult, out: &mut dyn Write) -> std::io::Result<()> {
    for (i, entry) in result.transcript.iter().enumerate() {
        match entry {
            TranscriptEntry::Trial { k, accumulated } => {
                writeln!(out, "trial {}: k={k} accumulated={accumulated}", i + 1)?
            }
            TranscriptEntry::Probe {
                input,
                output,
                differs_from_zero,
            } => {
                let verdict = match differs_from_zero {
                    None => "reference",
                    Some(true) => "differs from f(0)",
                    Some(false) => "equals f(0)",
                };
                writeln!(out, "query {}: f({input}) = {output} ({verdict})", i + 1)?
            }
        }
    }
    Ok(())
}

fn trivial_report(s: BitString, out: &mut dyn Write) -> CliResult {
    writeln!(out, "s={s} is trivial: solved with 0 queries")?;
    Ok(0)
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> CliResult {
    a.oracle.check()?;
    if a.oracle.trivial() {
        return trivial_report(a.oracle.s, out);
    }
    let labeling = a.oracle.labeling(a.seed);
    let mut oracle = MaskedOracle::new(a.oracle.n, a.oracle.s, a.oracle.variant, labeling)?;
    let m =
        a.m.unwrap_or_else(|| oracle.variant().support(oracle.mask()).weight());
    let mut rng = run_rng(a.seed, 0);
    let result = recover(&mut oracle, m, Strategy::Quantum, a.source, &mut rng)?;
    print_transcript(&result, out)?;
    writeln!(
        out,
        "recovered s={} in {} queries",
        result.s_found, result.queries
    )?;
    if let Some(path) = a.log {
        let path = resolve_output(&path);
        let mut text = String::new();
        for entry in &result.transcript {
            text.push_str(&serde_json::to_string(entry).map_err(Error::from)?);
            text.push('\n');
        }
        text.push_str(
            &serde_json::to_string(&serde_json::json!({
                "event": "result",
                "s_found": result.s_found,
                "queries": result.queries,
                "oracle": oracle.spec(),
                "seed": a.seed,
                "source": a.source,
            }))
            .map_err(Error::from)?,
        );
        text.push('\n');
        fs::write(&path, text)?;
    }
    Ok(0)
}

fn classical(a: ClassicalArgs, out: &mut dyn Write) -> CliResult {
    a.oracle.check()?;
    if a.oracle.trivial() {
        return trivial_report(a.oracle.s, out);
    }
    if a.strategy == Strategy::Quantum {
        return Err(Failure::Usage(
            "use `simulate` for the quantum strategy".into(),
        ));
    }
    if a.oracle.variant != MaskVariant::And {
        return Err(Failure::Usage(
            "classical searches need --variant and".into(),
        ));
    }
    let mut oracle = MaskedOracle::new(
        a.oracle.n,
        a.oracle.s,
        MaskVariant::And,
        a.oracle.labeling(a.seed),
    )?;
    let m = a.oracle.s.weight();
    let mut rng = run_rng(a.seed, 0);
    let result = recover(&mut oracle, m, a.strategy, TrialSource::Fast, &mut rng)?;
    print_transcript(&result, out)?;
    writeln!(
        out,
        "recovered s={} in {} queries",
        result.s_found, result.queries
    )?;
    Ok(0)
}

fn montecarlo(a: MontecarloArgs, out: &mut dyn Write) -> CliResult {
    let target = match (a.m, a.s) {
        (_, Some(s)) => MaskTarget::Mask(s),
        (Some(m), None) => MaskTarget::Weight(m),
        (None, None) => unreachable!("clap requires --m or --s"),
    };
    let spec = ExperimentSpec {
        n: a.n,
        target,
        variant: a.variant,
        strategy: a.strategy,
        runs: a.runs,
        seed: a.seed,
        trial_source: a.source,
        output: a.out.clone(),
    };
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let stats = montecarlo_expected_queries(&spec)?;
    let m = spec.m();
    writeln!(
        out,
        "{} n={} m={} runs={}: mean = {:.6} ± {:.6} (standard error)",
        spec.strategy, spec.n, m, stats.runs, stats.mean, stats.std_error
    )?;
    let reference = match spec.strategy {
        Strategy::Quantum => Some(("t_q", t_q(m))),
        Strategy::Sequential => Some(("t_cs", t_cs(spec.n, m)?)),
        Strategy::Binary | Strategy::BinaryAdapted => Some((
            "t_cb (worst case)",
            crate::analytics::Rational::from_integer(t_cb(spec.n, m)?),
        )),
    };
    if let Some((name, value)) = &reference {
        writeln!(out, "{name} = {value} ≈ {:.6}", value.to_f64())?;
    }
    if let Some(path) = a.out {
        let path = resolve_output(&path);
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut w = csv::Writer::from_path(&path).map_err(Error::from)?;
        w.write_record([
            "strategy",
            "variant",
            "n",
            "m",
            "runs",
            "seed",
            "mean",
            "std_error",
        ])
        .map_err(Error::from)?;
        w.write_record([
            spec.strategy.to_string(),
            spec.variant.to_string(),
            spec.n.to_string(),
            m.to_string(),
            stats.runs.to_string(),
            spec.seed.to_string(),
            format!("{:.6}", stats.mean),
            format!("{:.6}", stats.std_error),
        ])
        .map_err(Error::from)?;
        w.flush()?;
        let params = serde_json::to_value(&spec).map_err(Error::from)?;
        RunManifest::new("montecarlo", params).write_next_to(&path)?;
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(0)
}

fn figures(a: FiguresArgs, out: &mut dyn Write) -> CliResult {
    let path = resolve_output(&a.out);
    let series = match a.which.as_str() {
        "1" => emit_figure1(a.m_max, &path)?,
        _ => emit_figure3(a.n, &path)?,
    };
    writeln!(out, "wrote {} rows to {}", series.m.len(), path.display())?;
    Ok(0)
}

fn parse_table(text: &str, n: u32) -> Result<Vec<u64>, Failure> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|line| {
            if line.len() == n as usize && line.chars().all(|c| c == '0' || c == '1') {
                Ok(line.parse::<BitString>()?.bits())
            } else {
                line.parse::<u64>()
                    .map_err(|_| Failure::Usage(format!("bad table entry {line:?}")))
            }
        })
        .collect()
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> CliResult {
    let (table, claimed) = match (&a.table, a.s) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)?;
            (
                parse_table(&text, a.n)?,
                a.m.expect("clap requires --m with --table"),
            )
        }
        (None, Some(s)) => {
            if s.width() != a.n {
                return Err(Failure::Usage(format!(
                    "--s has {} bits but --n is {}",
                    s.width(),
                    a.n
                )));
            }
            let labeling = if a.canonical {
                Labeling::Canonical
            } else {
                Labeling::SeededRandom {
                    seed: a.labeling_seed,
                }
            };
            let oracle = MaskedOracle::new(a.n, s, a.variant, labeling)?;
            (oracle.truth_table()?, a.m.unwrap_or(s.weight()))
        }
        (None, None) => unreachable!("clap requires --s or --table"),
    };
    match verify_promise(&table, a.n, claimed, a.variant)? {
        PromiseCheck::Holds { mask } => {
            writeln!(
                out,
                "promise holds with mask s={mask} (wt={})",
                mask.weight()
            )?;
            Ok(0)
        }
        PromiseCheck::Violation { x, y } => {
            writeln!(
                out,
                "promise violated: inputs {x} and {y} break mask invariance"
            )?;
            Ok(1)
        }
        PromiseCheck::WeightMismatch { mask, claimed } => {
            writeln!(
                out,
                "promise violated: table is invariant under s={mask} of weight {}, not {claimed}",
                mask.weight()
            )?;
            Ok(1)
        }
    }
}
