//! Density of partial specializations `(u_1, …, u_{n-1})` whose discriminants
//! in `t`, as polynomials in the free constant coefficient `U`, are square-free,
//! pairwise coprime and non-constant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_budget, CountError, TupleSpec};
use crate::bipoly::specialize_family;
use crate::ffield::FieldElem;
use crate::fqpoly::{monic_space, MonicCursor, Poly, Shard};

/// First failing condition, checked in the order square-free, coprime, non-constant.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CrOutcome {
    Admissible,
    NotSquarefree,
    NotCoprime,
    Constant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrReport {
    pub field: String,
    pub n: usize,
    pub offsets: Vec<String>,
    /// Admissible tuples.
    #[serde(rename = "N")]
    pub admissible: u64,
    /// `q^{n-1}`.
    pub space: u64,
    pub density: f64,
    pub not_squarefree: u64,
    pub not_coprime: u64,
    pub constant: u64,
    pub config_digest: String,
    pub outside_hypotheses: bool,
}

#[derive(Default, Clone, Copy)]
struct Tally {
    ok: u64,
    not_squarefree: u64,
    not_coprime: u64,
    constant: u64,
}

impl Tally {
    fn add(mut self, o: CrOutcome) -> Tally {
        match o {
            CrOutcome::Admissible => self.ok += 1,
            CrOutcome::NotSquarefree => self.not_squarefree += 1,
            CrOutcome::NotCoprime => self.not_coprime += 1,
            CrOutcome::Constant => self.constant += 1,
        }
        self
    }

    fn merge(self, o: Tally) -> Tally {
        Tally {
            ok: self.ok + o.ok,
            not_squarefree: self.not_squarefree + o.not_squarefree,
            not_coprime: self.not_coprime + o.not_coprime,
            constant: self.constant + o.constant,
        }
    }
}

/// Discriminants in `t` of the `r` specialized families at `u`.
pub fn cr_discriminants(spec: &TupleSpec, u: &[FieldElem]) -> Result<Vec<Poly>, CountError> {
    spec.offsets
        .iter()
        .map(|a| Ok(specialize_family(u, a, spec.n)?.disc_in_t()?))
        .collect()
}

/// Classifies one tuple `u = (u_1, …, u_{n-1})`.
pub fn cr_classify(spec: &TupleSpec, u: &[FieldElem]) -> Result<CrOutcome, CountError> {
    let discs = cr_discriminants(spec, u)?;
    for d in &discs {
        if d.is_zero() || !d.is_squarefree()? {
            return Ok(CrOutcome::NotSquarefree);
        }
    }
    for i in 0..discs.len() {
        for j in i + 1..discs.len() {
            if !discs[i].gcd(&discs[j])?.is_constant() {
                return Ok(CrOutcome::NotCoprime);
            }
        }
    }
    if discs.iter().any(|d| d.is_constant()) {
        return Ok(CrOutcome::Constant);
    }
    Ok(CrOutcome::Admissible)
}

/// Counts admissible `u ∈ F_q^{n-1}` exactly, in parallel over shards.
pub fn cr_count_exact(spec: &TupleSpec, budget: u64) -> Result<CrReport, CountError> {
    spec.checked()?;
    let n = spec.n;
    if n < 2 {
        return Err(CountError::NeedDegreeTwo);
    }
    let space = monic_space(spec.q(), n - 1)?;
    check_budget(space as u128, budget)?;
    let shards = (rayon::current_num_threads() as u64 * 4).min(space).max(1);
    let tally = Shard::split(shards)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|shard| {
            // The low n-1 coefficients of a monic degree-(n-1) cursor are the
            // tuple, u_1 most significant.
            let mut cursor = MonicCursor::new(&spec.field, n - 1, shard)?;
            let mut t = Tally::default();
            let mut u = vec![FieldElem::ZERO; n - 1];
            while let Some((_, c)) = cursor.current() {
                for (i, x) in u.iter_mut().enumerate() {
                    *x = c[n - 2 - i];
                }
                t = t.add(cr_classify(spec, &u)?);
                cursor.advance();
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>, CountError>>()?
        .into_iter()
        .fold(Tally::default(), Tally::merge);
    Ok(CrReport {
        field: spec.field.label().to_string(),
        n,
        offsets: spec.offset_texts(),
        admissible: tally.ok,
        space,
        density: tally.ok as f64 / space as f64,
        not_squarefree: tally.not_squarefree,
        not_coprime: tally.not_coprime,
        constant: tally.constant,
        config_digest: spec.digest_with(&[("mode", "cr".into())]),
        outside_hypotheses: spec.outside_hypotheses(),
    })
}
