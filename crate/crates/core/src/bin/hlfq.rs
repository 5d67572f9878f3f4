use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hlfq::expcli::{
    exit, fit_error_exponent, parse_grid, parse_kv, read_rows, run_sweep, split_offsets, SweepConfig, SweepControl,
    SweepError, SweepOutcome, CONFIG_KEYS,
};
use hlfq::galois_stats::{independence_test, joint_cycle_sample, GaloisError};
use hlfq::hlcount::{
    cr_count_exact, pi_exact, pi_exact_parallel, pi_sample, CountError, CountResult, SampleOptions, TupleSpec,
    DEFAULT_BUDGET,
};
use hlfq::{Field, Poly, Shard};

#[derive(Parser)]
#[command(name = "hlfq", version, about = "Prime-tuple counts over F_q[t]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact count by enumeration.
    Count(Common),
    /// Sampled estimate with a 95% interval.
    Estimate(Common),
    /// Discriminant-density count over partial specializations.
    CrDensity(Common),
    /// Joint cycle-type counts and chi-square tests.
    CycleStats(Common),
    /// Run a grid of counts from a config file or flags.
    Sweep(SweepArgs),
    /// Fit log(abs_error) against log(q) over rows of a JSON-lines file.
    Fit(FitArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Field label: p or p^k.
    #[arg(long)]
    field: Option<String>,
    /// Target degree.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated offset polynomials, e.g. "0,1" or "0,t+2".
    #[arg(long)]
    offsets: Option<String>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of parallel shards, or one shard as INDEX/TOTAL.
    #[arg(long)]
    shards: Option<String>,
    /// Cap on polynomials enumerated.
    #[arg(long)]
    budget: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Permit even q; results are flagged as outside the theorem's hypotheses.
    #[arg(long)]
    allow_even_q: bool,
    /// Visit every polynomial once when samples equals q^n.
    #[arg(long)]
    enumerate_if_full: bool,
    /// key = value file supplying defaults for the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// exact | sample | cr | cycle
    #[arg(long)]
    mode: Option<String>,
    /// CSV rendering of all rows, written at the end.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Checkpoint file; an existing one is resumed.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// JSON-lines file of count rows.
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error with its exit code.
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn validation(msg: impl ToString) -> Failure {
        Failure { code: exit::VALIDATION, msg: msg.to_string() }
    }

    fn io(path: &Path, e: impl ToString) -> Failure {
        Failure { code: exit::IO, msg: format!("{}: {}", path.display(), e.to_string()) }
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Failure {
        let code = if matches!(e, CountError::Budget { .. }) { exit::BUDGET } else { exit::VALIDATION };
        Failure { code, msg: e.to_string() }
    }
}

impl From<GaloisError> for Failure {
    fn from(e: GaloisError) -> Failure {
        match e {
            GaloisError::Count(c) => c.into(),
            e => Failure::validation(e),
        }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Failure {
        Failure { code: e.exit_code(), msg: e.to_string() }
    }
}

/// Flags merged over config-file values.
struct Settings {
    map: BTreeMap<String, String>,
    allow_even_q: bool,
    enumerate_if_full: bool,
}

impl Settings {
    fn new(c: &Common, extra: &[(&str, Option<String>)]) -> Result<Settings, Failure> {
        let mut map = match &c.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
                let map = parse_kv(&text).map_err(Failure::validation)?;
                if let Some(k) = map.keys().find(|k| !CONFIG_KEYS.contains(&k.as_str())) {
                    return Err(Failure::validation(format!("unknown config key '{k}'")));
                }
                map
            }
            None => BTreeMap::new(),
        };
        let flags = [
            ("field", c.field.clone()),
            ("n", c.n.map(|v| v.to_string())),
            ("offsets", c.offsets.clone()),
            ("samples", c.samples.map(|v| v.to_string())),
            ("seed", c.seed.map(|v| v.to_string())),
            ("shards", c.shards.clone()),
            ("budget", c.budget.map(|v| v.to_string())),
            ("out", c.out.as_ref().map(|p| p.display().to_string())),
            ("format", c.format.map(|f| if f == Format::Csv { "csv".into() } else { "json".into() })),
        ];
        for (k, v) in flags.into_iter().chain(extra.iter().cloned()) {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        }
        let flag = |k: &str, cli: bool| -> Result<bool, Failure> {
            match map.get(k) {
                Some(v) => v.parse::<bool>().map(|b| b || cli).map_err(|_| Failure::validation(format!("bad value for '{k}': {v}"))),
                None => Ok(cli),
            }
        };
        let allow_even_q = flag("allow_even_q", c.allow_even_q)?;
        let enumerate_if_full = flag("enumerate_if_full", c.enumerate_if_full)?;
        Ok(Settings { map, allow_even_q, enumerate_if_full })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|s| s.as_str())
    }

    fn require(&self, key: &str) -> Result<&str, Failure> {
        self.get(key).ok_or_else(|| Failure::validation(format!("missing --{key}")))
    }

    fn num<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, Failure> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Failure::validation(format!("bad value for --{key}: {v}"))),
        }
    }

    fn format(&self) -> Result<Format, Failure> {
        match self.get("format") {
            None | Some("json") => Ok(Format::Json),
            Some("csv") => Ok(Format::Csv),
            Some(v) => Err(Failure::validation(format!("bad value for --format: {v}"))),
        }
    }

    fn spec(&self) -> Result<TupleSpec, Failure> {
        let field: Field = self.require("field")?.parse().map_err(Failure::validation)?;
        let n = self.require("n")?;
        let n: usize = n.parse().map_err(|_| Failure::validation(format!("bad value for --n: {n}")))?;
        let offsets = split_offsets(self.require("offsets")?)
            .iter()
            .map(|s| Poly::parse(s, &field))
            .collect::<Result<Vec<_>, _>>()
            .map_err(Failure::validation)?;
        let spec = TupleSpec::new(&field, n, offsets).allowing_even_q(self.allow_even_q);
        spec.validate().map_err(CountError::Invalid)?;
        Ok(spec)
    }

    fn out(&self) -> Option<PathBuf> {
        self.get("out").map(PathBuf::from)
    }
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(&path, text).map_err(|e| Failure::io(&path, e)),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn emit_count(s: &Settings, r: &CountResult) -> Result<(), Failure> {
    let text = match s.format()? {
        Format::Json => json_line(r),
        Format::Csv => {
            let mut buf = Vec::new();
            CountResult::write_csv(std::slice::from_ref(r), &mut buf).map_err(Failure::validation)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
    };
    emit(s.out(), &text)
}

fn csv_of<T: Serialize>(rows: &[T]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(Failure::validation)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| Failure::validation(e.to_string()))?).expect("utf-8"))
}

fn count(c: &Common) -> Result<(), Failure> {
    let s = Settings::new(c, &[])?;
    let spec = s.spec()?;
    let budget = s.num("budget", DEFAULT_BUDGET)?;
    let r = match s.get("shards") {
        Some(v) if v.contains('/') => {
            let (i, t) = v.split_once('/').unwrap();
            let shard = i
                .trim()
                .parse()
                .ok()
                .zip(t.trim().parse().ok())
                .ok_or_else(|| Failure::validation(format!("bad value for --shards: {v}")))?;
            let shard = Shard::new(shard.0, shard.1).map_err(Failure::validation)?;
            pi_exact(&spec, shard, budget)?
        }
        _ => pi_exact_parallel(&spec, s.num("shards", 1u64)?.max(1), budget)?,
    };
    emit_count(&s, &r)
}

fn estimate(c: &Common) -> Result<(), Failure> {
    let s = Settings::new(c, &[])?;
    let spec = s.spec()?;
    let opts = SampleOptions {
        samples: s.num("samples", 10_000u64)?,
        seed: s.num("seed", 0u64)?,
        enumerate_if_full: s.enumerate_if_full,
    };
    if opts.samples > s.num("budget", DEFAULT_BUDGET)? {
        return Err(CountError::Budget { needed: opts.samples as u128, budget: s.num("budget", DEFAULT_BUDGET)? }.into());
    }
    emit_count(&s, &pi_sample(&spec, opts)?)
}

fn cr_density(c: &Common) -> Result<(), Failure> {
    let s = Settings::new(c, &[])?;
    let spec = s.spec()?;
    let r = cr_count_exact(&spec, s.num("budget", DEFAULT_BUDGET)?)?;
    let text = match s.format()? {
        Format::Json => json_line(&r),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                field: &'a str,
                n: usize,
                offsets: String,
                #[serde(rename = "N")]
                admissible: u64,
                space: u64,
                density: f64,
                not_squarefree: u64,
                not_coprime: u64,
                constant: u64,
                config_digest: &'a str,
                outside_hypotheses: bool,
            }
            csv_of(&[Row {
                field: &r.field,
                n: r.n,
                offsets: r.offsets.join(";"),
                admissible: r.admissible,
                space: r.space,
                density: r.density,
                not_squarefree: r.not_squarefree,
                not_coprime: r.not_coprime,
                constant: r.constant,
                config_digest: &r.config_digest,
                outside_hypotheses: r.outside_hypotheses,
            }])?
        }
    };
    emit(s.out(), &text)
}

fn cycle_stats(c: &Common) -> Result<(), Failure> {
    let s = Settings::new(c, &[])?;
    let spec = s.spec()?;
    let samples = s.num("samples", 10_000u64)?;
    let seed = s.num("seed", 0u64)?;
    let stats = joint_cycle_sample(&spec, samples, seed)?;
    let record = stats.to_record()?;
    let test = independence_test(&stats);
    let text = match s.format()? {
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                field: &'a str,
                offsets: Vec<String>,
                samples: u64,
                seed: u64,
                stats: &'a hlfq::galois_stats::JointCycleRecord,
                tests: Option<hlfq::galois_stats::IndependenceReport>,
                tests_skipped: Option<String>,
            }
            let (tests, skipped) = match test {
                Ok(t) => (Some(t), None),
                Err(e) => (None, Some(e.to_string())),
            };
            json_line(&Report {
                field: spec.field.label(),
                offsets: spec.offset_texts(),
                samples,
                seed,
                stats: &record,
                tests,
                tests_skipped: skipped,
            })
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                field: &'a str,
                cell: &'a str,
                count: u64,
                total: u64,
                discarded: u64,
            }
            let rows: Vec<Row> = record
                .counts
                .iter()
                .map(|(cell, &count)| Row {
                    field: spec.field.label(),
                    cell,
                    count,
                    total: record.total,
                    discarded: record.discarded,
                })
                .collect();
            csv_of(&rows)?
        }
    };
    emit(s.out(), &text)
}

fn sweep(a: &SweepArgs) -> Result<(), Failure> {
    let s = Settings::new(
        &a.common,
        &[
            ("mode", a.mode.clone()),
            ("csv", a.csv.as_ref().map(|p| p.display().to_string())),
            ("checkpoint", a.checkpoint.as_ref().map(|p| p.display().to_string())),
        ],
    )?;
    let mut map = s.map.clone();
    map.remove("format");
    map.insert("allow_even_q".into(), s.allow_even_q.to_string());
    if let Some(f) = map.get("field") {
        parse_grid(f).map_err(Failure::validation)?;
    }
    let config = SweepConfig::from_map(&map).map_err(Failure::validation)?;
    let result = run_sweep(&config, &SweepControl::default())?;
    if config.out.is_none() {
        let text: String = result.rows.iter().map(|r| r.to_json_line() + "\n").collect();
        emit(None, &text)?;
    }
    if let Some(e) = result.io_errors.first() {
        return Err(Failure { code: exit::IO, msg: e.to_string() });
    }
    if result.outcome == SweepOutcome::Interrupted {
        return Err(Failure::validation("sweep interrupted"));
    }
    Ok(())
}

fn fit(a: &FitArgs) -> Result<(), Failure> {
    let rows = read_rows(&a.input)?;
    let counts: Vec<CountResult> = rows.iter().filter_map(|r| r.as_count().cloned()).collect();
    let f = fit_error_exponent(&counts).map_err(Failure::validation)?;
    emit(a.out.clone(), &json_line(&f))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Count(c) => count(c),
        Command::Estimate(c) => estimate(c),
        Command::CrDensity(c) => cr_density(c),
        Command::CycleStats(c) => cycle_stats(c),
        Command::Sweep(a) => sweep(a),
        Command::Fit(a) => fit(a),
    };
    match res {
        Ok(()) => ExitCode::from(exit::SUCCESS as u8),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code as u8)
        }
    }
}
