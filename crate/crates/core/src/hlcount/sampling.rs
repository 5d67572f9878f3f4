//! Uniform draws of monic polynomials from counter-based streams.
//!
//! Draw `i` under seed `s` comes from the ChaCha8 stream `i` keyed by `s`, so
//! any draw can be regenerated alone and the split across threads never
//! changes the outcome.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{count_shard_steps, CountError, CountResult, ShardProgress, TupleSpec, TupleTester};
use crate::ffield::{Field, FieldElem};
use crate::fqpoly::{monic_space, Shard};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Draws handed to one worker at a time.
const CHUNK: u64 = 4096;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SampleOptions {
    pub samples: u64,
    pub seed: u64,
    /// When `samples == q^n`, visit every polynomial once instead of sampling.
    pub enumerate_if_full: bool,
}

impl SampleOptions {
    pub fn new(samples: u64, seed: u64) -> SampleOptions {
        SampleOptions { samples, seed, enumerate_if_full: false }
    }
}

/// Reusable generator for the draws of one seed.
#[derive(Clone)]
pub struct DrawStream {
    base: ChaCha8Rng,
    q: u32,
    n: usize,
}

impl DrawStream {
    pub fn new(field: &Field, n: usize, seed: u64) -> DrawStream {
        DrawStream { base: ChaCha8Rng::seed_from_u64(seed), q: field.q(), n }
    }

    /// Fills `out` (length `n + 1`) with the coefficients of draw `index`.
    pub fn draw(&self, index: u64, out: &mut [FieldElem]) {
        let mut rng = self.base.clone();
        rng.set_stream(index);
        rng.set_word_pos(0);
        for c in out.iter_mut().take(self.n) {
            *c = FieldElem(rng.gen_range(0..self.q));
        }
        out[self.n] = FieldElem::ONE;
    }
}

/// Estimates the count as `q^n` times the hit fraction of uniform draws.
pub fn pi_sample(spec: &TupleSpec, opts: SampleOptions) -> Result<CountResult, CountError> {
    spec.checked()?;
    if opts.samples == 0 {
        return Err(CountError::NoSamples);
    }
    let digest = spec.digest_with(&[
        ("mode", "sampled".into()),
        ("samples", json!(opts.samples)),
        ("seed", json!(opts.seed)),
        ("enumerate_if_full", json!(opts.enumerate_if_full)),
    ]);
    let space = monic_space(spec.q(), spec.n).ok();
    let space_f = (spec.q() as f64).powi(spec.n as i32);

    if opts.enumerate_if_full && space == Some(opts.samples) {
        let mut progress = ShardProgress::start(Shard::FULL);
        count_shard_steps(spec, &mut progress, None)?;
        return CountResult::sampled(spec, progress.hits as f64, opts.samples, 0.0, opts.seed, digest);
    }

    let stream = DrawStream::new(&spec.field, spec.n, opts.seed);
    let chunks = opts.samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut tester = TupleTester::new(spec);
            let mut f = vec![FieldElem::ZERO; spec.n + 1];
            let end = ((c + 1) * CHUNK).min(opts.samples);
            let mut hits = 0u64;
            for i in c * CHUNK..end {
                stream.draw(i, &mut f);
                hits += tester.test(&f) as u64;
            }
            hits
        })
        .sum();

    let s = opts.samples as f64;
    let frac = hits as f64 / s;
    let half = Z95 * space_f * (frac * (1.0 - frac) / s).sqrt();
    CountResult::sampled(spec, space_f * frac, opts.samples, half, opts.seed, digest)
}
