//! Sharded enumeration of monic polynomials of fixed degree.
//!
//! The rank of `f = t^n + u_1 t^{n-1} + … + u_n` is the base-`q` integer with
//! digits `(u_1, …, u_n)`, `u_1` most significant and each digit the element's
//! code. Shard `(i, s)` owns exactly the ranks `≡ i (mod s)`, visited in
//! increasing order.

use serde::{Deserialize, Serialize};

use super::{Poly, PolyError};
use crate::ffield::{Field, FieldElem};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shard {
    pub index: u64,
    pub total: u64,
}

impl Shard {
    pub const FULL: Shard = Shard { index: 0, total: 1 };

    pub fn new(index: u64, total: u64) -> Result<Shard, PolyError> {
        if total == 0 || index >= total {
            return Err(PolyError::InvalidShard { index, total });
        }
        Ok(Shard { index, total })
    }

    /// All shards of a `total`-way split.
    pub fn split(total: u64) -> impl Iterator<Item = Shard> {
        (0..total.max(1)).map(move |index| Shard { index, total: total.max(1) })
    }

    /// Number of ranks in `[0, space)` owned by this shard.
    pub fn len_in(&self, space: u64) -> u64 {
        if self.index >= space {
            0
        } else {
            (space - self.index - 1) / self.total + 1
        }
    }
}

/// `q^n`, the number of monic degree-`n` polynomials, if it fits in 64 bits.
pub fn monic_space(q: u32, n: usize) -> Result<u64, PolyError> {
    (q as u64)
        .checked_pow(n as u32)
        .ok_or(PolyError::SpaceTooLarge { q, n })
}

/// In-place odometer over one shard. The current polynomial is exposed as a
/// borrowed coefficient slice so hot loops avoid allocation.
#[derive(Clone, Debug)]
pub struct MonicCursor {
    q: u32,
    n: usize,
    step: u64,
    space: u64,
    rank: u64,
    coeffs: Vec<FieldElem>,
}

impl MonicCursor {
    /// Positioned at the shard's first rank.
    pub fn new(field: &Field, n: usize, shard: Shard) -> Result<MonicCursor, PolyError> {
        Self::starting_at(field, n, shard, shard.index)
    }

    /// Positioned at the first owned rank strictly after `last_done`, or at the
    /// shard start when `last_done` is `None`.
    pub fn resume_after(
        field: &Field,
        n: usize,
        shard: Shard,
        last_done: Option<u64>,
    ) -> Result<MonicCursor, PolyError> {
        let start = match last_done {
            None => shard.index,
            Some(r) => {
                if r % shard.total.max(1) != shard.index % shard.total.max(1) {
                    return Err(PolyError::InvalidShard { index: shard.index, total: shard.total });
                }
                r.saturating_add(shard.total)
            }
        };
        Self::starting_at(field, n, shard, start)
    }

    fn starting_at(field: &Field, n: usize, shard: Shard, rank: u64) -> Result<MonicCursor, PolyError> {
        Shard::new(shard.index, shard.total)?;
        if n < 1 {
            return Err(PolyError::DegreeTooSmall);
        }
        let q = field.q();
        let space = monic_space(q, n)?;
        let mut coeffs = vec![FieldElem::ZERO; n + 1];
        coeffs[n] = FieldElem::ONE;
        let mut r = rank.min(space);
        for c in coeffs.iter_mut().take(n) {
            *c = FieldElem((r % q as u64) as u32);
            r /= q as u64;
        }
        Ok(MonicCursor { q, n, step: shard.total, space, rank: rank.min(space), coeffs })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `q^n`.
    pub fn space(&self) -> u64 {
        self.space
    }

    pub fn is_done(&self) -> bool {
        self.rank >= self.space
    }

    /// Rank and coefficients of the current polynomial.
    #[inline]
    pub fn current(&self) -> Option<(u64, &[FieldElem])> {
        if self.is_done() {
            None
        } else {
            Some((self.rank, &self.coeffs))
        }
    }

    /// Moves to the next owned rank.
    #[inline]
    pub fn advance(&mut self) {
        if self.is_done() {
            return;
        }
        match self.rank.checked_add(self.step) {
            Some(r) if r < self.space => self.rank = r,
            _ => {
                self.rank = self.space;
                return;
            }
        }
        let q = self.q as u64;
        if self.step == 1 {
            for c in self.coeffs.iter_mut().take(self.n) {
                if c.0 as u64 + 1 < q {
                    c.0 += 1;
                    return;
                }
                c.0 = 0;
            }
            return;
        }
        let mut add = self.step;
        let mut carry = 0u64;
        for c in self.coeffs.iter_mut().take(self.n) {
            if add == 0 && carry == 0 {
                break;
            }
            let s = c.0 as u64 + add % q + carry;
            add /= q;
            c.0 = (s % q) as u32;
            carry = s / q;
        }
    }
}

/// Iterator form of [`MonicCursor`].
pub struct MonicIter {
    field: Field,
    cursor: MonicCursor,
}

impl Iterator for MonicIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        let (_, coeffs) = self.cursor.current()?;
        let p = Poly::new(&self.field, coeffs.to_vec());
        self.cursor.advance();
        Some(p)
    }
}

/// Monic degree-`n` polynomials owned by `shard`, in rank order.
pub fn enumerate_monic(field: &Field, n: usize, shard: Shard) -> Result<MonicIter, PolyError> {
    Ok(MonicIter { field: field.clone(), cursor: MonicCursor::new(field, n, shard)? })
}
