use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{CountError, TupleSpec};
use crate::numtheory::gcd_u128;

/// Nonnegative rational in lowest terms.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Ratio {
        assert!(den != 0, "zero denominator");
        let g = gcd_u128(num, den).max(1);
        Ratio { num: num / g, den: den / g }
    }

    /// `q^n / n^r`.
    pub fn prediction(q: u32, n: usize, r: usize) -> Result<Ratio, CountError> {
        let num = (q as u128).checked_pow(n as u32).ok_or(CountError::Poly(
            crate::fqpoly::PolyError::Overflow,
        ))?;
        let den = (n as u128).checked_pow(r as u32).ok_or(CountError::Poly(
            crate::fqpoly::PolyError::Overflow,
        ))?;
        Ok(Ratio::new(num, den))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `|x - self|` computed exactly, converted to f64 once.
    pub fn abs_diff_int(self, x: u64) -> f64 {
        let scaled = x as u128 * self.den;
        let diff = scaled.abs_diff(self.num);
        Ratio::new(diff, self.den).to_f64()
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

/// Exact integer count or sampled estimate.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PiValue {
    Exact(u64),
    Estimate(f64),
}

impl PiValue {
    pub fn as_f64(self) -> f64 {
        match self {
            PiValue::Exact(v) => v as f64,
            PiValue::Estimate(v) => v,
        }
    }

    pub fn exact(self) -> Option<u64> {
        match self {
            PiValue::Exact(v) => Some(v),
            PiValue::Estimate(_) => None,
        }
    }
}

impl fmt::Display for PiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PiValue::Exact(v) => write!(f, "{v}"),
            PiValue::Estimate(v) => write!(f, "{v}"),
        }
    }
}

/// One count, with the prediction it is compared against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub field: String,
    pub n: usize,
    pub offsets: Vec<String>,
    pub mode: Mode,
    pub pi: PiValue,
    pub prediction: String,
    pub abs_error: f64,
    pub normalized_error: f64,
    pub sample_size: Option<u64>,
    pub ci_half_width: Option<f64>,
    pub seed: Option<u64>,
    pub shard: Option<String>,
    pub config_digest: String,
    pub outside_hypotheses: bool,
}

/// `q^{n - 1/2}`.
pub(crate) fn error_scale(q: u32, n: usize) -> f64 {
    (q as f64).powf(n as f64 - 0.5)
}

impl CountResult {
    pub(crate) fn exact(spec: &TupleSpec, hits: u64) -> Result<CountResult, CountError> {
        let pred = Ratio::prediction(spec.q(), spec.n, spec.r())?;
        let abs_error = pred.abs_diff_int(hits);
        Ok(CountResult {
            field: spec.field.label().to_string(),
            n: spec.n,
            offsets: spec.offset_texts(),
            mode: Mode::Exact,
            pi: PiValue::Exact(hits),
            prediction: pred.to_string(),
            abs_error,
            normalized_error: abs_error / error_scale(spec.q(), spec.n),
            sample_size: None,
            ci_half_width: None,
            seed: None,
            shard: None,
            config_digest: spec.digest_with(&[("mode", "exact".into())]),
            outside_hypotheses: spec.outside_hypotheses(),
        })
    }

    pub(crate) fn sampled(
        spec: &TupleSpec,
        estimate: f64,
        samples: u64,
        half_width: f64,
        seed: u64,
        digest: String,
    ) -> Result<CountResult, CountError> {
        let pred = Ratio::prediction(spec.q(), spec.n, spec.r())?;
        let abs_error = (estimate - pred.to_f64()).abs();
        Ok(CountResult {
            field: spec.field.label().to_string(),
            n: spec.n,
            offsets: spec.offset_texts(),
            mode: Mode::Sampled,
            pi: PiValue::Estimate(estimate),
            prediction: pred.to_string(),
            abs_error,
            normalized_error: abs_error / error_scale(spec.q(), spec.n),
            sample_size: Some(samples),
            ci_half_width: Some(half_width),
            seed: Some(seed),
            shard: None,
            config_digest: digest,
            outside_hypotheses: spec.outside_hypotheses(),
        })
    }

    /// Number of offsets.
    pub fn r(&self) -> usize {
        self.offsets.len()
    }

    /// Field order parsed back from the label.
    pub fn q(&self) -> Option<u64> {
        let (p, k) = match self.field.split_once('^') {
            Some((p, k)) => (p.parse::<u64>().ok()?, k.parse::<u32>().ok()?),
            None => (self.field.parse().ok()?, 1),
        };
        p.checked_pow(k)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("result serializes")
    }

    /// Writes rows as CSV with the JSON field names as columns; offsets are
    /// joined with `;`.
    pub fn write_csv<W: Write>(rows: &[CountResult], out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for row in rows {
            w.serialize(CsvRow::from(row))?;
        }
        if rows.is_empty() {
            w.write_record(CSV_COLUMNS)?;
        }
        w.flush()?;
        Ok(())
    }
}

const CSV_COLUMNS: &[&str] = &[
    "field",
    "n",
    "offsets",
    "mode",
    "pi",
    "prediction",
    "abs_error",
    "normalized_error",
    "sample_size",
    "ci_half_width",
    "seed",
    "shard",
    "config_digest",
    "outside_hypotheses",
];

#[derive(Serialize)]
struct CsvRow<'a> {
    field: &'a str,
    n: usize,
    offsets: String,
    mode: Mode,
    pi: String,
    prediction: &'a str,
    abs_error: f64,
    normalized_error: f64,
    sample_size: Option<u64>,
    ci_half_width: Option<f64>,
    seed: Option<u64>,
    shard: Option<&'a str>,
    config_digest: &'a str,
    outside_hypotheses: bool,
}

impl<'a> From<&'a CountResult> for CsvRow<'a> {
    fn from(r: &'a CountResult) -> CsvRow<'a> {
        CsvRow {
            field: &r.field,
            n: r.n,
            offsets: r.offsets.join(";"),
            mode: r.mode,
            pi: r.pi.to_string(),
            prediction: &r.prediction,
            abs_error: r.abs_error,
            normalized_error: r.normalized_error,
            sample_size: r.sample_size,
            ci_half_width: r.ci_half_width,
            seed: r.seed,
            shard: r.shard.as_deref(),
            config_digest: &r.config_digest,
            outside_hypotheses: r.outside_hypotheses,
        }
    }
}
