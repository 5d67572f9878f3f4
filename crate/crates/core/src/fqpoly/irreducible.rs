//! Rabin irreducibility, distinct-degree factor degrees, and the Gauss count.
//!
//! [`IrreducibilityTester`] is the enumeration workhorse. For a monic `f` of
//! fixed degree `n` it computes `h = t^q mod f` once by square-and-multiply and
//! then walks the Frobenius orbit `t^{q^d}` by modular composition with the
//! precomputed powers `h^i`, which is linear in the coefficients.

use super::{dense, Poly, PolyError};
use crate::ffield::{Field, FieldElem};
use crate::numtheory::{divisors, mobius, prime_divisors};

/// What [`Poly::factor_degrees`] does with repeated factors.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum SquarefreePolicy {
    /// Non-square-free input is an error.
    #[default]
    Reject,
    /// Replace the input by its radical first.
    Radical,
}

/// Arithmetic modulo a monic polynomial of fixed degree `n`, on length-`n` buffers.
struct ModRing {
    field: Field,
    n: usize,
    lazy: bool,
    /// `f` without its leading 1.
    low: Vec<FieldElem>,
    /// red[i] = t^{n+i} mod f, i in 0..n-1.
    red: Vec<Vec<FieldElem>>,
    prod: Vec<u64>,
    high: Vec<u32>,
    prod_elems: Vec<FieldElem>,
}

impl ModRing {
    fn new(field: &Field, n: usize) -> ModRing {
        ModRing {
            field: field.clone(),
            n,
            // n products plus one residue must fit, for both phases.
            lazy: field.is_prime_field() && field.lazy_terms_ok(n),
            low: vec![FieldElem::ZERO; n],
            red: vec![vec![FieldElem::ZERO; n]; n.saturating_sub(1)],
            prod: vec![0; 2 * n],
            high: vec![0; n],
            prod_elems: vec![FieldElem::ZERO; 2 * n],
        }
    }

    /// Loads a monic `f` of degree `n` (coefficients `f[0..=n]`).
    fn load(&mut self, f: &[FieldElem]) {
        let fld = &self.field;
        let n = self.n;
        self.low.copy_from_slice(&f[..n]);
        if n < 2 {
            return;
        }
        // t^n = -(f_0 + … + f_{n-1} t^{n-1})
        for j in 0..n {
            self.red[0][j] = fld.neg(f[j]);
        }
        for i in 1..n - 1 {
            let top = self.red[i - 1][n - 1];
            let (prev, cur) = self.red.split_at_mut(i);
            let prev = &prev[i - 1];
            let cur = &mut cur[0];
            cur[0] = fld.neg(fld.mul(top, self.low[0]));
            for j in 1..n {
                cur[j] = fld.add(prev[j - 1], fld.mul(top, fld.neg(self.low[j])));
            }
        }
    }

    /// out = a·b mod f.
    fn mul(&mut self, a: &[FieldElem], b: &[FieldElem], out: &mut [FieldElem]) {
        let n = self.n;
        let fld = &self.field;
        if self.lazy {
            let prod = &mut self.prod[..2 * n - 1];
            prod.fill(0);
            for (i, &x) in a.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let x = x.0 as u64;
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] += x * y.0 as u64;
                }
            }
            let high = &mut self.high;
            for i in 0..n - 1 {
                high[i] = fld.reduce_u64(prod[n + i]);
            }
            for j in 0..n {
                let mut acc = fld.reduce_u64(prod[j]) as u64;
                for i in 0..n - 1 {
                    acc += high[i] as u64 * self.red[i][j].0 as u64;
                }
                out[j] = FieldElem(fld.reduce_u64(acc));
            }
        } else {
            let prod = &mut self.prod_elems[..2 * n - 1];
            prod.fill(FieldElem::ZERO);
            for (i, &x) in a.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] = fld.add(prod[i + j], fld.mul(x, y));
                }
            }
            for j in 0..n {
                let mut acc = prod[j];
                for i in 0..n - 1 {
                    acc = fld.add(acc, fld.mul(prod[n + i], self.red[i][j]));
                }
                out[j] = acc;
            }
        }
    }

    /// out = t·a mod f.
    fn mul_t(&self, a: &[FieldElem], out: &mut [FieldElem]) {
        let n = self.n;
        let fld = &self.field;
        let top = a[n - 1];
        for j in (1..n).rev() {
            out[j] = fld.sub(a[j - 1], fld.mul(top, self.low[j]));
        }
        out[0] = fld.neg(fld.mul(top, self.low[0]));
    }

    /// out = Σ_j a_j · powers[j]  (an F_q-linear map).
    fn compose(&self, a: &[FieldElem], powers: &[Vec<FieldElem>], out: &mut [FieldElem]) {
        let n = self.n;
        let fld = &self.field;
        if self.lazy {
            for m in 0..n {
                let mut acc = 0u64;
                for j in 0..n {
                    acc += a[j].0 as u64 * powers[j][m].0 as u64;
                }
                out[m] = FieldElem(fld.reduce_u64(acc));
            }
        } else {
            for m in 0..n {
                let mut acc = FieldElem::ZERO;
                for j in 0..n {
                    acc = fld.add(acc, fld.mul(a[j], powers[j][m]));
                }
                out[m] = acc;
            }
        }
    }
}

/// Reusable Rabin test for monic polynomials of one fixed degree over one field.
pub struct IrreducibilityTester {
    n: usize,
    q: u64,
    /// n/ℓ for each prime ℓ | n, ascending.
    checkpoints: Vec<usize>,
    ring: ModRing,
    powers: Vec<Vec<FieldElem>>,
    cur: Vec<FieldElem>,
    tmp: Vec<FieldElem>,
}

impl IrreducibilityTester {
    pub fn new(field: &Field, n: usize) -> IrreducibilityTester {
        assert!(n >= 1, "degree must be positive");
        let mut checkpoints: Vec<usize> =
            prime_divisors(n as u64).into_iter().map(|l| n / l as usize).collect();
        checkpoints.sort_unstable();
        IrreducibilityTester {
            n,
            q: field.q() as u64,
            checkpoints,
            ring: ModRing::new(field, n),
            powers: vec![vec![FieldElem::ZERO; n]; n],
            cur: vec![FieldElem::ZERO; n],
            tmp: vec![FieldElem::ZERO; n],
        }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Tests a monic polynomial given as `n + 1` little-endian coefficients.
    pub fn test(&mut self, f: &[FieldElem]) -> bool {
        let n = self.n;
        debug_assert_eq!(f.len(), n + 1);
        debug_assert_eq!(f[n], FieldElem::ONE);
        if n == 1 {
            return true;
        }
        if f[0].is_zero() {
            return false;
        }
        self.ring.load(f);

        // h = t^q mod f
        let mut x = std::mem::take(&mut self.cur);
        let mut y = std::mem::take(&mut self.tmp);
        x.fill(FieldElem::ZERO);
        x[1] = FieldElem::ONE;
        let q = self.q;
        for bit in (0..63 - q.leading_zeros()).rev() {
            self.ring.mul(&x, &x, &mut y);
            if (q >> bit) & 1 == 1 {
                self.ring.mul_t(&y, &mut x);
            } else {
                std::mem::swap(&mut x, &mut y);
            }
        }

        self.powers[0].fill(FieldElem::ZERO);
        self.powers[0][0] = FieldElem::ONE;
        self.powers[1].copy_from_slice(&x);
        for i in 2..n {
            let (done, rest) = self.powers.split_at_mut(i);
            self.ring.mul(&done[i - 1], &x, &mut rest[0]);
        }

        let mut next_check = 0;
        let mut result = true;
        for d in 1..=n {
            if d == n {
                result = x[0].is_zero() && x[1] == FieldElem::ONE && x[2..].iter().all(|c| c.is_zero());
                break;
            }
            if next_check < self.checkpoints.len() && self.checkpoints[next_check] == d {
                next_check += 1;
                let fld = &self.ring.field;
                let mut g = x.clone();
                g[1] = fld.sub(g[1], FieldElem::ONE);
                dense::trim(&mut g);
                if g.is_empty() || !dense::coprime(fld, f, &g) {
                    result = false;
                    break;
                }
            }
            self.ring.compose(&x, &self.powers, &mut y);
            std::mem::swap(&mut x, &mut y);
        }
        self.cur = x;
        self.tmp = y;
        result
    }
}

impl Poly {
    /// Rabin's criterion on the monic normalization.
    pub fn is_irreducible(&self) -> Result<bool, PolyError> {
        match self.degree() {
            None => Err(PolyError::Zero),
            Some(0) => Err(PolyError::Constant),
            Some(n) => {
                let g = self.monic();
                Ok(IrreducibilityTester::new(&self.field, n).test(&g.coeffs))
            }
        }
    }

    /// Degrees of the irreducible factors, ascending, by distinct-degree factorization.
    ///
    /// Stops at `d = ⌊deg/2⌋`; any remaining cofactor is a single irreducible factor.
    pub fn factor_degrees(&self, policy: SquarefreePolicy) -> Result<Vec<usize>, PolyError> {
        let mut f = match self.degree() {
            None => return Err(PolyError::Zero),
            Some(0) => return Ok(Vec::new()),
            Some(_) => self.monic(),
        };
        if !f.is_squarefree()? {
            match policy {
                SquarefreePolicy::Reject => return Err(PolyError::NotSquarefree),
                SquarefreePolicy::Radical => f = f.radical()?,
            }
        }
        let fld = self.field.clone();
        let q = fld.q() as u128;
        let t = Poly::x(&fld);
        let mut out = Vec::new();
        let mut h = t.rem(&f)?;
        let mut d = 0usize;
        while f.degree().unwrap() >= 2 * (d + 1) {
            d += 1;
            h = h.powmod(q, &f)?;
            let g = f.gcd(&(&h - &t))?;
            let gd = g.degree().unwrap();
            if gd > 0 {
                out.extend(std::iter::repeat(d).take(gd / d));
                f = f.div_rem(&g)?.0;
                h = h.rem(&f)?;
            }
        }
        if let Some(rest) = f.degree().filter(|&r| r > 0) {
            out.push(rest);
        }
        out.sort_unstable();
        Ok(out)
    }
}

/// Number of monic irreducible polynomials of degree `n` over F_q:
/// `(1/n) Σ_{d|n} μ(d) q^{n/d}`.
pub fn irreducible_count(q: u64, n: usize) -> Result<u128, PolyError> {
    if n < 1 {
        return Err(PolyError::DegreeTooSmall);
    }
    let mut sum: i128 = 0;
    for d in divisors(n as u64) {
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let term = (q as i128).checked_pow((n as u64 / d) as u32).ok_or(PolyError::Overflow)?;
        sum = if mu > 0 { sum.checked_add(term) } else { sum.checked_sub(term) }
            .ok_or(PolyError::Overflow)?;
    }
    Ok((sum / n as i128) as u128)
}
