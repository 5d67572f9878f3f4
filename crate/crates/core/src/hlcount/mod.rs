//! Tuple counts: the number of monic degree-`n` `f` with every `f + a_i`
//! irreducible, computed exactly (sharded enumeration) or by sampling, and
//! compared against `q^n / n^r`.

mod cr;
mod result;
pub mod sampling;

use rayon::prelude::*;
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bipoly::BiPolyError;
use crate::ffield::{Field, FieldElem, FieldError};
use crate::fqpoly::{monic_space, IrreducibilityTester, MonicCursor, Poly, PolyError, Shard};

pub use cr::{cr_classify, cr_count_exact, cr_discriminants, CrOutcome, CrReport};
pub use result::{CountResult, Mode, PiValue, Ratio};
pub use sampling::{pi_sample, SampleOptions};

/// Default cap on the number of polynomials one command may enumerate.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// One way a [`TupleSpec`] can be invalid.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("q = {q} is even; the counting theorem assumes odd q (pass the even-q override to explore)")]
    EvenOrder { q: u32 },
    #[error("degree n must be at least 1")]
    DegreeTooSmall,
    #[error("at least one offset is required")]
    NoOffsets,
    #[error("offsets {first} and {second} are equal")]
    Duplicate { first: usize, second: usize },
    #[error("offset {index} has degree {deg}, must be below n = {n}")]
    OffsetDegree { index: usize, deg: usize, n: usize },
    #[error("offset {index} lives over a different field")]
    FieldMismatch { index: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CountError {
    #[error("invalid tuple: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("enumeration needs {needed} tests, budget is {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error("discriminant-density counts need n >= 2")]
    NeedDegreeTwo,
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    BiPoly(#[from] BiPolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Experiment input: field, target degree and offsets `a_1, …, a_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleSpec {
    pub field: Field,
    pub n: usize,
    pub offsets: Vec<Poly>,
    /// Permit even q; results are then flagged as outside the theorem's hypotheses.
    pub allow_even_q: bool,
}

impl TupleSpec {
    pub fn new(field: &Field, n: usize, offsets: Vec<Poly>) -> TupleSpec {
        TupleSpec { field: field.clone(), n, offsets, allow_even_q: false }
    }

    /// Builds a spec from a field label and offset texts.
    pub fn parse(field: &str, n: usize, offsets: &[&str]) -> Result<TupleSpec, CountError> {
        let field: Field = field.parse()?;
        let offsets = offsets
            .iter()
            .map(|s| Poly::parse(s, &field))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TupleSpec::new(&field, n, offsets))
    }

    pub fn allowing_even_q(mut self, allow: bool) -> TupleSpec {
        self.allow_even_q = allow;
        self
    }

    pub fn r(&self) -> usize {
        self.offsets.len()
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// True when q is even (only reachable with the override).
    pub fn outside_hypotheses(&self) -> bool {
        self.field.q() % 2 == 0
    }

    pub fn offset_texts(&self) -> Vec<String> {
        self.offsets.iter().map(|a| a.to_string()).collect()
    }

    /// Every violated invariant, in a fixed order.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut v = Vec::new();
        if self.field.q() % 2 == 0 && !self.allow_even_q {
            v.push(Violation::EvenOrder { q: self.field.q() });
        }
        if self.n < 1 {
            v.push(Violation::DegreeTooSmall);
        }
        if self.offsets.is_empty() {
            v.push(Violation::NoOffsets);
        }
        for (i, a) in self.offsets.iter().enumerate() {
            if a.field() != &self.field {
                v.push(Violation::FieldMismatch { index: i });
                continue;
            }
            if let Some(deg) = a.degree().filter(|&d| d >= self.n) {
                v.push(Violation::OffsetDegree { index: i, deg, n: self.n });
            }
        }
        for i in 0..self.offsets.len() {
            for j in i + 1..self.offsets.len() {
                if self.offsets[i] == self.offsets[j] {
                    v.push(Violation::Duplicate { first: i, second: j });
                }
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    fn checked(&self) -> Result<(), CountError> {
        self.validate().map_err(CountError::Invalid)
    }

    /// Offsets in the order the short-circuit test visits them: ascending
    /// degree, then coefficients compared from the top down.
    pub fn test_order(&self) -> Vec<Poly> {
        let mut v = self.offsets.clone();
        v.sort_by(|a, b| {
            a.degree()
                .cmp(&b.degree())
                .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
        });
        v
    }

    /// Hex SHA-256 of the canonical JSON (sorted keys) of the spec plus extra keys.
    pub fn digest_with(&self, extra: &[(&str, serde_json::Value)]) -> String {
        let mut obj = json!({
            "field": self.field.label(),
            "n": self.n,
            "offsets": self.offset_texts(),
            "allow_even_q": self.allow_even_q,
        });
        let map = obj.as_object_mut().unwrap();
        for (k, v) in extra {
            map.insert((*k).to_string(), v.clone());
        }
        let canonical = serde_json::to_string(&obj).expect("json values serialize");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

/// Lists every violated invariant of `spec`.
pub fn validate_tuple(spec: &TupleSpec) -> Result<(), Vec<Violation>> {
    spec.validate()
}

fn check_budget(space: u128, budget: u64) -> Result<(), CountError> {
    if space > budget as u128 {
        Err(CountError::Budget { needed: space, budget })
    } else {
        Ok(())
    }
}

/// Tests `f + a_i` irreducible for all offsets, stopping at the first failure.
pub struct TupleTester {
    n: usize,
    field: Field,
    offsets: Vec<Vec<FieldElem>>,
    tester: IrreducibilityTester,
    shifted: Vec<FieldElem>,
}

impl TupleTester {
    pub fn new(spec: &TupleSpec) -> TupleTester {
        let n = spec.n;
        let offsets = spec
            .test_order()
            .iter()
            .map(|a| (0..n).map(|i| a.coeff(i)).collect())
            .collect();
        TupleTester {
            n,
            field: spec.field.clone(),
            offsets,
            tester: IrreducibilityTester::new(&spec.field, n),
            shifted: vec![FieldElem::ZERO; n + 1],
        }
    }

    /// `f` is monic of degree `n`, given as `n + 1` coefficients.
    #[inline]
    pub fn test(&mut self, f: &[FieldElem]) -> bool {
        let n = self.n;
        self.shifted[n] = FieldElem::ONE;
        for a in &self.offsets {
            for i in 0..n {
                self.shifted[i] = self.field.add(f[i], a[i]);
            }
            if !self.tester.test(&self.shifted) {
                return false;
            }
        }
        true
    }
}

/// Resumable progress through one shard.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ShardProgress {
    pub shard: Shard,
    /// Last completed rank, `None` before the first.
    pub last_done: Option<u64>,
    pub hits: u64,
    pub done: bool,
}

impl ShardProgress {
    pub fn start(shard: Shard) -> ShardProgress {
        ShardProgress { shard, last_done: None, hits: 0, done: false }
    }
}

/// Advances `progress` by at most `max_steps` polynomials (all when `None`).
pub fn count_shard_steps(
    spec: &TupleSpec,
    progress: &mut ShardProgress,
    max_steps: Option<u64>,
) -> Result<(), CountError> {
    spec.checked()?;
    if progress.done {
        return Ok(());
    }
    let mut cursor = MonicCursor::resume_after(&spec.field, spec.n, progress.shard, progress.last_done)?;
    let mut tester = TupleTester::new(spec);
    let mut steps = 0u64;
    while let Some((rank, coeffs)) = cursor.current() {
        if max_steps.is_some_and(|m| steps >= m) {
            return Ok(());
        }
        if tester.test(coeffs) {
            progress.hits += 1;
        }
        progress.last_done = Some(rank);
        steps += 1;
        cursor.advance();
    }
    progress.done = true;
    Ok(())
}

/// Exact count over one shard's slice of the monic degree-`n` space.
///
/// Summing the `pi` of all shards of a split reproduces the unsharded count.
pub fn pi_exact(spec: &TupleSpec, shard: Shard, budget: u64) -> Result<CountResult, CountError> {
    spec.checked()?;
    let space = monic_space(spec.q(), spec.n)?;
    check_budget(space as u128, budget)?;
    let mut progress = ShardProgress::start(Shard::new(shard.index, shard.total)?);
    count_shard_steps(spec, &mut progress, None)?;
    let mut out = CountResult::exact(spec, progress.hits)?;
    if shard != Shard::FULL {
        out.shard = Some(format!("{}/{}", shard.index, shard.total));
    }
    Ok(out)
}

/// Exact count with the space split into `shards` slices counted in parallel.
pub fn pi_exact_parallel(spec: &TupleSpec, shards: u64, budget: u64) -> Result<CountResult, CountError> {
    spec.checked()?;
    let space = monic_space(spec.q(), spec.n)?;
    check_budget(space as u128, budget)?;
    let hits = Shard::split(shards)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|shard| {
            let mut p = ShardProgress::start(shard);
            count_shard_steps(spec, &mut p, None).map(|_| p.hits)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    CountResult::exact(spec, hits)
}

/// Unoptimized reference: enumerate, then test each `f + a_i` with [`Poly::is_irreducible`].
pub fn pi_brute_force(spec: &TupleSpec) -> Result<u64, CountError> {
    spec.checked()?;
    let mut hits = 0;
    for f in crate::fqpoly::enumerate_monic(&spec.field, spec.n, Shard::FULL)? {
        let mut all = true;
        for a in &spec.offsets {
            if !(&f + a).is_irreducible()? {
                all = false;
                break;
            }
        }
        hits += all as u64;
    }
    Ok(hits)
}
