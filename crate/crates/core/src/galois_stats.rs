//! Cycle-type statistics of specialized tuples and the discriminant parity check.
//!
//! The factorization pattern of a square-free `f + a_i` is read as a cycle
//! type of S_n. Under the product model the `r` cycle types of one draw are
//! independent, each with the uniform-S_n class probabilities.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::ffield::FieldElem;
use crate::fqpoly::{Poly, PolyError, SquarefreePolicy};
use crate::hlcount::sampling::DrawStream;
use crate::hlcount::{CountError, Ratio, TupleSpec};

/// Draws handed to one worker at a time.
const CHUNK: u64 = 2048;

/// Smallest expected count allowed in a chi-square bucket.
const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaloisError {
    #[error("not a partition: {0}")]
    BadPartition(String),
    #[error("class probability overflows for n = {0}")]
    Overflow(usize),
    #[error("need at least {needed} samples for a bucket-adequate test, have {total}")]
    InadequateSample { needed: u64, total: u64 },
    #[error("parity check needs odd q, got {0}")]
    EvenOrder(u32),
    #[error("parity check needs a monic polynomial of degree at least 1")]
    NotMonic,
    #[error("polynomial is not square-free")]
    NotSquarefree,
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A partition of `n`, stored with parts in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleType(Vec<usize>);

impl CycleType {
    /// Sorts `parts`; rejects empty input and zero parts.
    pub fn new(mut parts: Vec<usize>) -> Result<CycleType, GaloisError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(GaloisError::BadPartition(format!("{parts:?}")));
        }
        parts.sort_unstable();
        Ok(CycleType(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// The `n`-cycle class.
    pub fn full_cycle(n: usize) -> CycleType {
        CycleType(vec![n])
    }

    /// Cycle type of a permutation given as an image table.
    pub fn of_permutation(perm: &[usize]) -> CycleType {
        let mut seen = vec![false; perm.len()];
        let mut parts = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            parts.push(len);
        }
        parts.sort_unstable();
        CycleType(parts)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join("+"))
    }
}

impl FromStr for CycleType {
    type Err = GaloisError;

    fn from_str(s: &str) -> Result<CycleType, GaloisError> {
        let parts = s
            .split('+')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| GaloisError::BadPartition(s.to_string()))?;
        CycleType::new(parts)
    }
}

/// All partitions of `n`, in ascending order.
pub fn partitions(n: usize) -> Vec<CycleType> {
    fn go(rest: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<CycleType>) {
        if rest == 0 {
            out.push(CycleType(cur.clone()));
            return;
        }
        for p in min..=rest {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, 1, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// Probability that a uniform permutation of S_n has cycle type `lambda`:
/// `1 / Π_j (j^{m_j} m_j!)` where `m_j` counts parts equal to `j`.
pub fn sn_class_probability(lambda: &CycleType) -> Result<Ratio, GaloisError> {
    let n = lambda.n();
    let mut mult: BTreeMap<usize, u32> = BTreeMap::new();
    for &p in lambda.parts() {
        *mult.entry(p).or_default() += 1;
    }
    let mut den: u128 = 1;
    for (&j, &m) in &mult {
        let pow = (j as u128).checked_pow(m).ok_or(GaloisError::Overflow(n))?;
        let fact = (1..=m as u128).try_fold(1u128, |a, b| a.checked_mul(b)).ok_or(GaloisError::Overflow(n))?;
        den = den
            .checked_mul(pow)
            .and_then(|d| d.checked_mul(fact))
            .ok_or(GaloisError::Overflow(n))?;
    }
    Ok(Ratio::new(1, den))
}

/// Counts of `r`-tuples of cycle types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointCycleStats {
    pub n: usize,
    pub r: usize,
    pub counts: BTreeMap<Vec<CycleType>, u64>,
    /// Draws kept, equal to the sum of `counts`.
    pub total: u64,
    /// Draws with some non-square-free `f + a_i`.
    pub discarded: u64,
}

impl JointCycleStats {
    pub fn empty(n: usize, r: usize) -> JointCycleStats {
        JointCycleStats { n, r, counts: BTreeMap::new(), total: 0, discarded: 0 }
    }

    pub fn record(&mut self, cell: Vec<CycleType>) {
        debug_assert_eq!(cell.len(), self.r);
        *self.counts.entry(cell).or_default() += 1;
        self.total += 1;
    }

    /// Pointwise sum.
    pub fn merge(mut self, other: JointCycleStats) -> JointCycleStats {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        self.total += other.total;
        self.discarded += other.discarded;
        self
    }

    /// Exact S_n class probabilities for every partition of `n`.
    pub fn reference(&self) -> Result<BTreeMap<CycleType, Ratio>, GaloisError> {
        partitions(self.n)
            .into_iter()
            .map(|l| sn_class_probability(&l).map(|p| (l, p)))
            .collect()
    }

    /// Counts of coordinate `i` alone.
    pub fn marginal(&self, i: usize) -> BTreeMap<CycleType, u64> {
        let mut m = BTreeMap::new();
        for (cell, &c) in &self.counts {
            *m.entry(cell[i].clone()).or_default() += c;
        }
        m
    }

    pub fn cell_count(&self, cell: &[CycleType]) -> u64 {
        self.counts.get(cell).copied().unwrap_or(0)
    }

    /// Serializable form with string keys such as `"1+2|3"`.
    pub fn to_record(&self) -> Result<JointCycleRecord, GaloisError> {
        let key = |cell: &[CycleType]| cell.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("|");
        Ok(JointCycleRecord {
            n: self.n,
            r: self.r,
            total: self.total,
            discarded: self.discarded,
            counts: self.counts.iter().map(|(k, &v)| (key(k), v)).collect(),
            reference: self.reference()?.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JointCycleRecord {
    pub n: usize,
    pub r: usize,
    pub total: u64,
    pub discarded: u64,
    pub counts: BTreeMap<String, u64>,
    pub reference: BTreeMap<String, String>,
}

/// Samples `samples` uniform monic `f` and records the factorization patterns
/// of every `f + a_i`, discarding draws where any of them is not square-free.
///
/// Draw `i` is the same polynomial that [`crate::hlcount::pi_sample`] uses
/// for the same seed.
pub fn joint_cycle_sample(spec: &TupleSpec, samples: u64, seed: u64) -> Result<JointCycleStats, GaloisError> {
    spec.validate().map_err(|v| GaloisError::Count(CountError::Invalid(v)))?;
    let n = spec.n;
    let r = spec.r();
    let stream = DrawStream::new(&spec.field, n, seed);
    let chunks = samples.div_ceil(CHUNK);
    let parts = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<JointCycleStats, GaloisError> {
            let mut local = JointCycleStats::empty(n, r);
            let mut f = vec![FieldElem::ZERO; n + 1];
            let end = ((c + 1) * CHUNK).min(samples);
            'draw: for i in c * CHUNK..end {
                stream.draw(i, &mut f);
                let base = Poly::new(&spec.field, f.clone());
                let mut cell = Vec::with_capacity(r);
                for a in &spec.offsets {
                    match (&base + a).factor_degrees(SquarefreePolicy::Reject) {
                        Ok(d) => cell.push(CycleType(d)),
                        Err(PolyError::NotSquarefree) => {
                            local.discarded += 1;
                            continue 'draw;
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                local.record(cell);
            }
            Ok(local)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(parts.into_iter().fold(JointCycleStats::empty(n, r), JointCycleStats::merge))
}

/// Cycle types of `r` independent uniform permutations per draw; the exact
/// product model, for calibrating [`independence_test`].
pub fn simulate_product_model(n: usize, r: usize, samples: u64, seed: u64) -> JointCycleStats {
    let base = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = JointCycleStats::empty(n, r);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..samples {
        let mut rng = base.clone();
        rng.set_stream(i);
        rng.set_word_pos(0);
        let cell = (0..r)
            .map(|_| {
                perm.iter_mut().enumerate().for_each(|(j, x)| *x = j);
                perm.shuffle(&mut rng);
                CycleType::of_permutation(&perm)
            })
            .collect();
        stats.record(cell);
    }
    stats
}

/// Pearson chi-square result.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Buckets after merging.
    pub buckets: usize,
}

impl ChiSquare {
    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Goodness of fit of observed counts against expected counts, after merging
/// the smallest cells until every bucket expects at least five.
/// `constraints` is the number of fitted parameters plus one.
fn chi_square(mut cells: Vec<(f64, f64)>, constraints: usize) -> ChiSquare {
    // (expected, observed), smallest expectation first
    cells.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut buckets: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (e, o) in cells {
        acc.0 += e;
        acc.1 += o;
        if acc.0 >= MIN_EXPECTED {
            buckets.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.0 > 0.0 || acc.1 > 0.0 {
        match buckets.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => buckets.push(acc),
        }
    }
    let statistic: f64 = buckets
        .iter()
        .filter(|(e, _)| *e > 0.0)
        .map(|(e, o)| (o - e) * (o - e) / e)
        .sum();
    let dof = buckets.len().saturating_sub(constraints);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).expect("positive dof").sf(statistic)
    };
    ChiSquare { statistic, dof, p_value, buckets: buckets.len() }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    /// Joint counts against the product of exact S_n class probabilities.
    pub joint_fit: ChiSquare,
    /// Each coordinate against the exact S_n class probabilities.
    pub marginal_fits: Vec<ChiSquare>,
    /// Joint counts against the product of the observed marginals: tests
    /// independence of coordinates without assuming the marginal law.
    pub independence: ChiSquare,
}

impl IndependenceReport {
    /// True when coordinates are judged dependent at level `alpha`.
    pub fn rejects_independence(&self, alpha: f64) -> bool {
        self.independence.rejects(alpha)
    }

    /// True when the joint law differs from the exact S_n product at level `alpha`.
    pub fn rejects_product_model(&self, alpha: f64) -> bool {
        self.joint_fit.rejects(alpha)
    }
}

/// Chi-square tests of the joint and marginal cycle-type counts.
pub fn independence_test(stats: &JointCycleStats) -> Result<IndependenceReport, GaloisError> {
    let parts = partitions(stats.n);
    let needed = 50u64.saturating_mul((parts.len() as u64).saturating_pow(stats.r as u32));
    if stats.total < needed || stats.total == 0 {
        return Err(GaloisError::InadequateSample { needed: needed.max(1), total: stats.total });
    }
    let total = stats.total as f64;
    let reference = stats.reference()?;
    let prob: Vec<f64> = parts.iter().map(|l| reference[l].to_f64()).collect();

    // every r-tuple of partitions, as index vectors
    let mut cells: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..stats.r {
        cells = cells
            .into_iter()
            .flat_map(|c| {
                (0..parts.len()).map(move |j| {
                    let mut d = c.clone();
                    d.push(j);
                    d
                })
            })
            .collect();
    }
    let observed = |cell: &[usize]| {
        let key: Vec<CycleType> = cell.iter().map(|&j| parts[j].clone()).collect();
        stats.cell_count(&key) as f64
    };

    let joint_fit = chi_square(
        cells
            .iter()
            .map(|c| (total * c.iter().map(|&j| prob[j]).product::<f64>(), observed(c)))
            .collect(),
        1,
    );

    let marginals: Vec<Vec<f64>> = (0..stats.r)
        .map(|i| {
            let m = stats.marginal(i);
            parts.iter().map(|l| m.get(l).copied().unwrap_or(0) as f64).collect()
        })
        .collect();
    let marginal_fits = marginals
        .iter()
        .map(|m| chi_square(m.iter().zip(&prob).map(|(&o, &p)| (total * p, o)).collect(), 1))
        .collect();

    let independence = contingency(&parts, &marginals, &cells, total, &observed);
    Ok(IndependenceReport { joint_fit, marginal_fits, independence })
}

/// Mutual independence of coordinates. Rare classes of each coordinate are
/// pooled until every joint cell expects at least five draws.
fn contingency(
    parts: &[CycleType],
    marginals: &[Vec<f64>],
    cells: &[Vec<usize>],
    total: f64,
    observed: &dyn Fn(&[usize]) -> f64,
) -> ChiSquare {
    let r = marginals.len();
    // group[i][j]: pooled class of partition j in coordinate i; unobserved
    // classes join the rarest observed one.
    let mut groups: Vec<Vec<usize>> = Vec::with_capacity(r);
    let mut gprob: Vec<Vec<f64>> = Vec::with_capacity(r);
    for m in marginals {
        let mut order: Vec<usize> = (0..parts.len()).collect();
        order.sort_by(|&a, &b| m[a].total_cmp(&m[b]).then(a.cmp(&b)));
        let mut group = vec![0usize; parts.len()];
        let mut probs = Vec::new();
        for &j in order.iter().rev() {
            if m[j] > 0.0 || probs.is_empty() {
                group[j] = probs.len();
                probs.push(m[j] / total);
            } else {
                group[j] = probs.len() - 1;
            }
        }
        groups.push(group);
        gprob.push(probs);
    }
    let min_expected = |gprob: &[Vec<f64>]| -> f64 {
        total * gprob.iter().map(|p| p.iter().copied().fold(f64::INFINITY, f64::min)).product::<f64>()
    };
    let argmin = |p: &[f64], skip: Option<usize>| {
        (0..p.len()).filter(|&j| Some(j) != skip).min_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap()
    };
    while min_expected(&gprob) < MIN_EXPECTED {
        // pool the globally rarest class into the next rarest class of its coordinate
        let Some(i) = (0..r)
            .filter(|&i| gprob[i].len() > 1)
            .min_by(|&a, &b| gprob[a][argmin(&gprob[a], None)].total_cmp(&gprob[b][argmin(&gprob[b], None)]))
        else {
            break;
        };
        let lo = argmin(&gprob[i], None);
        let into = argmin(&gprob[i], Some(lo));
        gprob[i][into] += gprob[i][lo];
        gprob[i].remove(lo);
        for g in groups[i].iter_mut() {
            if *g == lo {
                *g = into;
            }
            if *g > lo {
                *g -= 1;
            }
        }
    }
    let shape: Vec<usize> = gprob.iter().map(|p| p.len()).collect();
    let mut obs: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for c in cells {
        let key: Vec<usize> = c.iter().enumerate().map(|(i, &j)| groups[i][j]).collect();
        *obs.entry(key).or_default() += observed(c);
    }
    let mut statistic = 0.0;
    for (key, o) in &obs {
        let e = total * key.iter().enumerate().map(|(i, &g)| gprob[i][g]).product::<f64>();
        if e > 0.0 {
            statistic += (o - e) * (o - e) / e;
        }
    }
    let buckets: usize = shape.iter().product();
    let dof = buckets - 1 - shape.iter().map(|k| k - 1).sum::<usize>();
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).expect("positive dof").sf(statistic)
    };
    ChiSquare { statistic, dof, p_value, buckets }
}

/// For odd q and monic square-free `f` of degree `n` with `m` irreducible
/// factors, the discriminant is a square exactly when `n - m` is even.
pub fn stickelberger_check(f: &Poly) -> Result<bool, GaloisError> {
    let field = f.field();
    if field.q() % 2 == 0 {
        return Err(GaloisError::EvenOrder(field.q()));
    }
    let n = match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => d,
        _ => return Err(GaloisError::NotMonic),
    };
    let m = match f.factor_degrees(SquarefreePolicy::Reject) {
        Ok(d) => d.len(),
        Err(PolyError::NotSquarefree) => return Err(GaloisError::NotSquarefree),
        Err(e) => return Err(e.into()),
    };
    let chi = field.quadratic_character(f.discriminant()?).map_err(PolyError::from)?;
    let expect = if (n - m) % 2 == 0 { 1 } else { -1 };
    Ok(chi == expect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::fqpoly::{enumerate_monic, Shard};

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn partitions_and_probabilities() {
        let counts: Vec<usize> = (1..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(sn_class_probability(&ct("3")).unwrap(), Ratio::new(1, 3));
        assert_eq!(sn_class_probability(&ct("1+1+1+1")).unwrap(), Ratio::new(1, 24));
        assert_eq!(sn_class_probability(&ct("1+2")).unwrap(), Ratio::new(1, 2));
        assert_eq!(sn_class_probability(&ct("2+2")).unwrap(), Ratio::new(1, 8));
        for n in 1..=10 {
            let sum = partitions(n)
                .iter()
                .map(|l| sn_class_probability(l).unwrap())
                .fold(Ratio::new(0, 1), |a, b| Ratio::new(a.num * b.den + b.num * a.den, a.den * b.den));
            assert_eq!(sum, Ratio::new(1, 1), "n = {n}");
        }
    }

    #[test]
    fn class_probability_counts_permutations() {
        // exhaustive over S_5
        let n = 5;
        let mut counts: BTreeMap<CycleType, u64> = BTreeMap::new();
        let mut perm: Vec<usize> = (0..n).collect();
        fn heap(k: usize, perm: &mut Vec<usize>, counts: &mut BTreeMap<CycleType, u64>) {
            if k == 1 {
                *counts.entry(CycleType::of_permutation(perm)).or_default() += 1;
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, counts);
                let j = if k % 2 == 0 { i } else { 0 };
                perm.swap(j, k - 1);
            }
        }
        heap(n, &mut perm, &mut counts);
        for (l, c) in counts {
            assert_eq!(sn_class_probability(&l).unwrap(), Ratio::new(c as u128, 120));
        }
    }

    #[test]
    fn cycle_type_text() {
        assert_eq!(ct("2+1").to_string(), "1+2");
        assert!("".parse::<CycleType>().is_err());
        assert!("1+0".parse::<CycleType>().is_err());
        assert!("a".parse::<CycleType>().is_err());
    }

    #[test]
    fn stickelberger_examples() {
        let f3 = Field::new(3, 1).unwrap();
        assert!(stickelberger_check(&Poly::parse("t^2+1", &f3).unwrap()).unwrap());
        assert!(stickelberger_check(&Poly::parse("t^2+t", &f3).unwrap()).unwrap());
        assert!(stickelberger_check(&Poly::parse("t+2", &f3).unwrap()).unwrap());
        assert_eq!(
            stickelberger_check(&Poly::parse("t^2+2*t+1", &f3).unwrap()),
            Err(GaloisError::NotSquarefree)
        );
        assert_eq!(stickelberger_check(&Poly::parse("2*t", &f3).unwrap()), Err(GaloisError::NotMonic));
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(stickelberger_check(&Poly::parse("t", &f4).unwrap()), Err(GaloisError::EvenOrder(4)));
    }

    #[test]
    fn stickelberger_small_exhaustive() {
        for (p, k, n) in [(3, 1, 4), (5, 1, 3), (3, 2, 3), (7, 1, 3)] {
            let f = Field::new(p, k).unwrap();
            for g in enumerate_monic(&f, n, Shard::FULL).unwrap() {
                if g.is_squarefree().unwrap() {
                    assert!(stickelberger_check(&g).unwrap(), "{g} over {}", f.label());
                }
            }
        }
    }

    #[test]
    fn degree_one_cells_are_trivial() {
        let spec = TupleSpec::parse("3", 1, &["0", "1"]).unwrap();
        let s = joint_cycle_sample(&spec, 500, 3).unwrap();
        assert_eq!(s.total, 500);
        assert_eq!(s.cell_count(&[ct("1"), ct("1")]), 500);
    }

    #[test]
    fn sampling_is_deterministic_and_accounts_for_discards() {
        let spec = TupleSpec::parse("7", 3, &["0", "1"]).unwrap();
        let a = joint_cycle_sample(&spec, 5000, 11).unwrap();
        let b = joint_cycle_sample(&spec, 5000, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total + a.discarded, 5000);
        assert_eq!(a.counts.values().sum::<u64>(), a.total);
        assert!(a.discarded > 0);
        let rec = a.to_record().unwrap();
        assert!(rec.counts.keys().all(|k| k.contains('|')));
        assert_eq!(rec.reference["3"], "1/3");
    }

    #[test]
    fn dependent_coordinates_are_rejected() {
        let mut s = simulate_product_model(3, 1, 10_000, 5);
        let mut dup = JointCycleStats::empty(3, 2);
        for (cell, c) in std::mem::take(&mut s.counts) {
            for _ in 0..c {
                dup.record(vec![cell[0].clone(), cell[0].clone()]);
            }
        }
        let rep = independence_test(&dup).unwrap();
        assert!(rep.independence.p_value < 1e-6);
        assert!(rep.joint_fit.p_value < 1e-6);
        assert!(rep.marginal_fits.iter().all(|m| !m.rejects(1e-6)));
    }

    #[test]
    fn inadequate_sample_refused() {
        let s = simulate_product_model(3, 2, 100, 1);
        assert_eq!(
            independence_test(&s),
            Err(GaloisError::InadequateSample { needed: 450, total: 100 })
        );
    }

    #[test]
    fn bucket_merging_keeps_expectations_large() {
        let cells = vec![(1.0, 2.0), (2.0, 1.0), (3.0, 3.0), (100.0, 99.0)];
        let c = chi_square(cells, 1);
        assert_eq!(c.buckets, 2);
        assert_eq!(c.dof, 1);
    }
}
