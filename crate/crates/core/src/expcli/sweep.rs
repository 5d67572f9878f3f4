use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use super::{SweepConfig, SweepError, SweepMode};
use crate::ffield::Field;
use crate::fqpoly::{monic_space, Poly, Shard};
use crate::galois_stats::{joint_cycle_sample, GaloisError, JointCycleRecord};
use crate::hlcount::{
    count_shard_steps, cr_count_exact, pi_sample, CountError, CountResult, CrReport, SampleOptions,
    ShardProgress, TupleSpec,
};

/// Joint cycle-type counts at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleRow {
    pub field: String,
    pub n: usize,
    pub offsets: Vec<String>,
    pub samples: u64,
    pub seed: u64,
    pub stats: JointCycleRecord,
    pub config_digest: String,
    pub outside_hypotheses: bool,
}

/// One output row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepRow {
    Count(CountResult),
    Cr(CrReport),
    Cycle(CycleRow),
}

impl SweepRow {
    pub fn as_count(&self) -> Option<&CountResult> {
        match self {
            SweepRow::Count(c) => Some(c),
            _ => None,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("rows serialize")
    }
}

/// Interruption and granularity knobs; they never change the results.
#[derive(Copy, Clone, Debug)]
pub struct SweepControl {
    /// Polynomials each shard advances between checkpoints.
    pub round_steps: u64,
    /// Stop (as if killed) after this many rounds; finished grid points of the
    /// non-enumerating modes count as one round each.
    pub stop_after_rounds: Option<u64>,
}

impl Default for SweepControl {
    fn default() -> SweepControl {
        SweepControl { round_steps: 1 << 20, stop_after_rounds: None }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SweepOutcome {
    Complete,
    Interrupted,
}

#[derive(Debug)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub outcome: SweepOutcome,
    /// Write failures; the sweep kept computing past them.
    pub io_errors: Vec<SweepError>,
}

/// Saved progress of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config_digest: String,
    /// Rows of finished grid points, in grid order.
    pub rows: Vec<SweepRow>,
    /// Shard cursors of the next grid point when it was interrupted mid-way.
    pub current: Option<Vec<ShardProgress>>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Checkpoint, SweepError> {
        let text = fs::read_to_string(path).map_err(|e| SweepError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| SweepError::io(path, e))
    }

    /// Writes through a temporary file and a rename.
    pub fn save(&self, path: &Path) -> Result<(), SweepError> {
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string(self).expect("checkpoint serializes");
        fs::write(&tmp, text).map_err(|e| SweepError::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| SweepError::io(path, e))
    }
}

fn count_err(field: &str, source: CountError) -> SweepError {
    match source {
        CountError::Invalid(violations) => SweepError::Invalid { field: field.to_string(), violations },
        CountError::Budget { needed, budget } => SweepError::Budget { field: field.to_string(), needed, budget },
        source => SweepError::Count { field: field.to_string(), source },
    }
}

fn build_specs(config: &SweepConfig) -> Result<Vec<TupleSpec>, SweepError> {
    let mut specs = Vec::with_capacity(config.fields.len());
    for label in &config.fields {
        let field: Field = label.parse().map_err(|e| count_err(label, CountError::Field(e)))?;
        let offsets = config
            .offsets
            .iter()
            .map(|s| Poly::parse(s, &field))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| count_err(label, e.into()))?;
        let spec = TupleSpec::new(&field, config.n, offsets).allowing_even_q(config.allow_even_q);
        spec.validate().map_err(|v| count_err(label, CountError::Invalid(v)))?;
        let needed: u128 = match config.mode {
            SweepMode::Exact => monic_space(field.q(), config.n).map_err(|e| count_err(label, e.into()))? as u128,
            SweepMode::Cr => {
                if config.n < 2 {
                    return Err(count_err(label, CountError::NeedDegreeTwo));
                }
                monic_space(field.q(), config.n - 1).map_err(|e| count_err(label, e.into()))? as u128
            }
            SweepMode::Sample | SweepMode::Cycle => {
                if config.samples == 0 {
                    return Err(count_err(label, CountError::NoSamples));
                }
                config.samples as u128
            }
        };
        if needed > config.budget as u128 {
            return Err(SweepError::Budget { field: label.clone(), needed, budget: config.budget });
        }
        specs.push(spec);
    }
    Ok(specs)
}

/// SHA-256 over the mode, seeds, shard count and each grid point's canonical spec.
pub fn sweep_digest(config: &SweepConfig) -> Result<String, SweepError> {
    let specs = build_specs(config)?;
    Ok(digest_of(config, &specs))
}

fn digest_of(config: &SweepConfig, specs: &[TupleSpec]) -> String {
    let sampled = matches!(config.mode, SweepMode::Sample | SweepMode::Cycle);
    let v = json!({
        "mode": config.mode,
        "samples": if sampled { json!(config.samples) } else { json!(null) },
        "seed": if sampled { json!(config.seed) } else { json!(null) },
        "shards": config.shards.max(1),
        "points": specs.iter().map(|s| s.digest_with(&[])).collect::<Vec<_>>(),
    });
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

/// Appends rows to the JSON-lines file, remembering the first failure.
struct Sink {
    out: Option<BufWriter<File>>,
    path: Option<std::path::PathBuf>,
}

impl Sink {
    fn open(config: &SweepConfig, existing: &[SweepRow], errors: &mut Vec<SweepError>) -> Sink {
        let Some(path) = config.out.clone() else {
            return Sink { out: None, path: None };
        };
        let opened = OpenOptions::new().create(true).write(true).truncate(true).open(&path);
        let mut sink = match opened {
            Ok(f) => Sink { out: Some(BufWriter::new(f)), path: Some(path) },
            Err(e) => {
                errors.push(SweepError::io(&path, e));
                return Sink { out: None, path: Some(path) };
            }
        };
        for row in existing {
            sink.append(row, errors);
        }
        sink
    }

    fn append(&mut self, row: &SweepRow, errors: &mut Vec<SweepError>) {
        let Some(w) = self.out.as_mut() else { return };
        let res = writeln!(w, "{}", row.to_json_line()).and_then(|_| w.flush());
        if let Err(e) = res {
            errors.push(SweepError::io(self.path.as_deref().unwrap(), e));
            self.out = None;
        }
    }
}

/// Runs every grid point in order, appending each row as soon as it is
/// known. With a checkpoint path, progress is saved after every round and a
/// later call resumes from it.
pub fn run_sweep(config: &SweepConfig, control: &SweepControl) -> Result<SweepResult, SweepError> {
    let specs = build_specs(config)?;
    let digest = digest_of(config, &specs);
    let mut ckpt = match &config.checkpoint {
        Some(path) if path.exists() => {
            let c = Checkpoint::load(path)?;
            if c.config_digest != digest {
                return Err(SweepError::DigestMismatch { expected: digest, found: c.config_digest });
            }
            c
        }
        _ => Checkpoint { config_digest: digest, rows: Vec::new(), current: None },
    };
    let mut io_errors = Vec::new();
    let mut sink = Sink::open(config, &ckpt.rows, &mut io_errors);
    let save = |c: &Checkpoint, errors: &mut Vec<SweepError>| {
        if let Some(path) = &config.checkpoint {
            if let Err(e) = c.save(path) {
                errors.push(e);
            }
        }
    };
    let mut rounds = 0u64;
    let stop = |rounds: u64| control.stop_after_rounds.is_some_and(|s| rounds >= s);

    for spec in specs.iter().skip(ckpt.rows.len()) {
        let label = spec.field.label().to_string();
        let row = match config.mode {
            SweepMode::Exact => {
                let mut progress = ckpt
                    .current
                    .take()
                    .unwrap_or_else(|| Shard::split(config.shards).map(ShardProgress::start).collect());
                loop {
                    progress
                        .par_iter_mut()
                        .try_for_each(|p| count_shard_steps(spec, p, Some(control.round_steps.max(1))))
                        .map_err(|e| count_err(&label, e))?;
                    rounds += 1;
                    if progress.iter().all(|p| p.done) {
                        break;
                    }
                    ckpt.current = Some(progress.clone());
                    save(&ckpt, &mut io_errors);
                    if stop(rounds) {
                        return Ok(SweepResult { rows: ckpt.rows, outcome: SweepOutcome::Interrupted, io_errors });
                    }
                }
                let hits = progress.iter().map(|p| p.hits).sum();
                SweepRow::Count(CountResult::exact(spec, hits).map_err(|e| count_err(&label, e))?)
            }
            SweepMode::Sample => {
                rounds += 1;
                let r = pi_sample(spec, SampleOptions::new(config.samples, config.seed));
                SweepRow::Count(r.map_err(|e| count_err(&label, e))?)
            }
            SweepMode::Cr => {
                rounds += 1;
                SweepRow::Cr(cr_count_exact(spec, config.budget).map_err(|e| count_err(&label, e))?)
            }
            SweepMode::Cycle => {
                rounds += 1;
                let galois = |e: GaloisError| match e {
                    GaloisError::Count(c) => count_err(&label, c),
                    source => SweepError::Galois { field: label.clone(), source },
                };
                let stats = joint_cycle_sample(spec, config.samples, config.seed).map_err(galois)?;
                SweepRow::Cycle(CycleRow {
                    field: label.clone(),
                    n: spec.n,
                    offsets: spec.offset_texts(),
                    samples: config.samples,
                    seed: config.seed,
                    stats: stats.to_record().map_err(galois)?,
                    config_digest: spec.digest_with(&[
                        ("mode", "cycle".into()),
                        ("samples", json!(config.samples)),
                        ("seed", json!(config.seed)),
                    ]),
                    outside_hypotheses: spec.outside_hypotheses(),
                })
            }
        };
        sink.append(&row, &mut io_errors);
        ckpt.rows.push(row);
        ckpt.current = None;
        save(&ckpt, &mut io_errors);
        if stop(rounds) && ckpt.rows.len() < specs.len() {
            return Ok(SweepResult { rows: ckpt.rows, outcome: SweepOutcome::Interrupted, io_errors });
        }
    }

    if let Some(path) = &config.csv {
        let res = File::create(path)
            .map_err(|e| SweepError::io(path, e))
            .and_then(|f| write_csv(&ckpt.rows, BufWriter::new(f)).map_err(|e| SweepError::io(path, e)));
        if let Err(e) = res {
            io_errors.push(e);
        }
    }
    Ok(SweepResult { rows: ckpt.rows, outcome: SweepOutcome::Complete, io_errors })
}

#[derive(Serialize)]
struct CrCsv<'a> {
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

#[derive(Serialize)]
struct CycleCsv<'a> {
    field: &'a str,
    n: usize,
    offsets: String,
    cell: &'a str,
    count: u64,
    total: u64,
    discarded: u64,
    seed: u64,
    config_digest: &'a str,
}

/// CSV rendering of sweep rows. Count rows use the JSON field names as
/// columns; cycle rows are written one line per observed cell.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), csv::Error> {
    let counts: Vec<CountResult> = rows.iter().filter_map(|r| r.as_count().cloned()).collect();
    if counts.len() == rows.len() {
        return CountResult::write_csv(&counts, out);
    }
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        match row {
            SweepRow::Count(_) => {}
            SweepRow::Cr(c) => w.serialize(CrCsv {
                field: &c.field,
                n: c.n,
                offsets: c.offsets.join(";"),
                admissible: c.admissible,
                space: c.space,
                density: c.density,
                not_squarefree: c.not_squarefree,
                not_coprime: c.not_coprime,
                constant: c.constant,
                config_digest: &c.config_digest,
                outside_hypotheses: c.outside_hypotheses,
            })?,
            SweepRow::Cycle(c) => {
                for (cell, &count) in &c.stats.counts {
                    w.serialize(CycleCsv {
                        field: &c.field,
                        n: c.n,
                        offsets: c.offsets.join(";"),
                        cell,
                        count,
                        total: c.stats.total,
                        discarded: c.stats.discarded,
                        seed: c.seed,
                        config_digest: &c.config_digest,
                    })?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a JSON-lines result file.
pub fn read_rows(path: &Path) -> Result<Vec<SweepRow>, SweepError> {
    let f = File::open(path).map_err(|e| SweepError::io(path, e))?;
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|e| SweepError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(&line).map_err(|e| SweepError::io(path, format!("line {}: {e}", i + 1)))?;
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hlcount::PiValue;

    fn cfg(fields: &[&str], offsets: &[&str], mode: SweepMode) -> SweepConfig {
        SweepConfig::new(
            fields.iter().map(|s| s.to_string()).collect(),
            2,
            offsets.iter().map(|s| s.to_string()).collect(),
            mode,
        )
    }

    #[test]
    fn small_exact_sweep() {
        let c = cfg(&["3", "5", "7", "3^2", "11"], &["0", "1"], SweepMode::Exact);
        let r = run_sweep(&c, &SweepControl::default()).unwrap();
        assert_eq!(r.rows.len(), 5);
        assert_eq!(r.rows[0].as_count().unwrap().pi, PiValue::Exact(0));
        assert_eq!(r.rows[1].as_count().unwrap().pi, PiValue::Exact(5));
        assert_eq!(r.outcome, SweepOutcome::Complete);
    }

    #[test]
    fn even_grid_point_aborts_before_work() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = cfg(&["3", "2^2"], &["0", "1"], SweepMode::Exact);
        c.out = Some(dir.path().join("rows.jsonl"));
        let err = run_sweep(&c, &SweepControl::default()).unwrap_err();
        assert!(matches!(&err, SweepError::Invalid { field, .. } if field == "2^2"));
        assert_eq!(err.exit_code(), 2);
        assert!(!dir.path().join("rows.jsonl").exists());
    }

    #[test]
    fn budget_refusal() {
        let mut c = cfg(&["101"], &["0", "1"], SweepMode::Exact);
        c.budget = 100;
        let err = run_sweep(&c, &SweepControl::default()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn empty_grid_is_fine() {
        let c = cfg(&[], &["0", "1"], SweepMode::Exact);
        let r = run_sweep(&c, &SweepControl::default()).unwrap();
        assert!(r.rows.is_empty());
    }

    #[test]
    fn other_modes_produce_rows() {
        let mut c = cfg(&["5", "7"], &["0", "t"], SweepMode::Cr);
        let r = run_sweep(&c, &SweepControl::default()).unwrap();
        assert!(matches!(&r.rows[0], SweepRow::Cr(cr) if cr.admissible == 4));
        c.mode = SweepMode::Cycle;
        c.samples = 300;
        let r = run_sweep(&c, &SweepControl::default()).unwrap();
        let mut buf = Vec::new();
        write_csv(&r.rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("field,n,offsets,cell,count"));
        // rows read back through the untagged enum keep their kind
        let line = r.rows[0].to_json_line();
        assert!(matches!(serde_json::from_str::<SweepRow>(&line).unwrap(), SweepRow::Cycle(_)));
    }

    #[test]
    fn unwritable_output_is_reported_and_sweep_continues() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = cfg(&["3", "5"], &["0", "1"], SweepMode::Exact);
        c.out = Some(dir.path().join("missing").join("rows.jsonl"));
        let r = run_sweep(&c, &SweepControl::default()).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.io_errors.len(), 1);
        assert_eq!(r.io_errors[0].exit_code(), 4);
    }
}
