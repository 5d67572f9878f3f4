//! Arithmetic in F_p and F_{p^k}.
//!
//! A [`Field`] is a cheap, clonable, immutable handle. Elements are
//! [`FieldElem`] codes: the canonical residue in `[0, p)` for prime fields,
//! and for extensions the base-`p` integer `c_0 + c_1 p + … + c_{k-1} p^{k-1}`
//! of the coefficient vector of the element modulo the field's defining
//! polynomial. Codes are fully reduced, so equality is code equality, and the
//! code order is the canonical residue order used by enumeration.
//!
//! The extension modulus is the lexicographically least monic irreducible of
//! degree `k` over F_p, ordering `(c_{k-1}, …, c_0)` as a base-`p` integer.
//! This is deterministic but is *not* the Conway polynomial.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::fqpoly::Poly;
use crate::numtheory::{is_prime, prime_divisors};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;

/// Extension fields up to this order get discrete log tables.
const LOG_TABLE_LIMIT: u32 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds 2^31")]
    TooLarge { p: u64, k: u32 },
    #[error("invalid field spec {0:?}: expected \"p\" or \"p^k\"")]
    BadSpec(String),
    #[error("quadratic character needs odd q, field has q = {0}")]
    EvenOrder(u32),
    #[error("code {code} is not an element of a field with {q} elements")]
    BadCode { code: u64, q: u32 },
    #[error("expected {expected} coordinates, got {got}")]
    BadCoordinates { expected: usize, got: usize },
}

/// Canonical code of a field element.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct FieldElem(pub(crate) u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A finite field handle. Clones share the same tables.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    /// floor(2^64 / p), for Barrett reduction.
    barrett: u64,
    ext: Option<Extension>,
    label: String,
}

struct Extension {
    /// Monic defining polynomial over F_p, little-endian, length k + 1.
    modulus: Vec<u32>,
    logs: Option<LogTables>,
}

struct LogTables {
    /// exp[i] = g^i for i in 0..2(q-1), doubled so sums of logs need no reduction.
    exp: Vec<u32>,
    /// log[x] for x != 0; log[0] is unused.
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.k == other.inner.k)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.label)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.inner.label)
    }
}

impl FromStr for Field {
    type Err = FieldError;

    /// Parses `"p"` or `"p^k"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::BadSpec(s.to_string());
        let t = s.trim();
        let (p, k) = match t.split_once('^') {
            Some((p, k)) => (p.trim(), k.trim()),
            None => (t, "1"),
        };
        let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
        if !digits(p) || !digits(k) {
            return Err(bad());
        }
        let p: u64 = p.parse().map_err(|_| bad())?;
        let k: u32 = k.parse().map_err(|_| bad())?;
        Field::new(p, k)
    }
}

impl Field {
    /// Builds F_{p^k}. The same `(p, k)` always yields the same modulus.
    pub fn new(p: u64, k: u32) -> Result<Field, FieldError> {
        if k < 1 {
            return Err(FieldError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let q = (p as u128)
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER as u128)
            .ok_or(FieldError::TooLarge { p, k })?;
        let (p, q) = (p as u32, q as u32);
        let label = if k == 1 { p.to_string() } else { format!("{p}^{k}") };
        let base = Inner {
            p,
            k: 1,
            q: p,
            barrett: barrett_constant(p),
            ext: None,
            label: p.to_string(),
        };
        if k == 1 {
            return Ok(Field { inner: Arc::new(base) });
        }
        let prime_field = Field { inner: Arc::new(base) };
        let modulus = least_irreducible(&prime_field, k as usize);
        let mut inner = Inner {
            p,
            k,
            q,
            barrett: barrett_constant(p),
            ext: Some(Extension { modulus, logs: None }),
            label,
        };
        if q <= LOG_TABLE_LIMIT {
            let logs = build_log_tables(&inner);
            inner.ext.as_mut().unwrap().logs = Some(logs);
        }
        Ok(Field { inner: Arc::new(inner) })
    }

    /// Characteristic.
    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    /// Extension degree over F_p.
    #[inline]
    pub fn k(&self) -> u32 {
        self.inner.k
    }

    /// Cardinality.
    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.inner.ext.is_none()
    }

    /// Canonical label, `"p"` or `"p^k"`.
    pub fn label(&self) -> &str {
        &self.inner.label
    }

    /// Monic defining polynomial over F_p (little-endian), `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.inner.ext.as_ref().map(|e| e.modulus.as_slice())
    }

    #[inline]
    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// Element with the given code, which must be `< q`.
    pub fn elem(&self, code: u64) -> Result<FieldElem, FieldError> {
        if code < self.q() as u64 {
            Ok(FieldElem(code as u32))
        } else {
            Err(FieldError::BadCode { code, q: self.q() })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: u64) -> FieldElem {
        FieldElem((v % self.p() as u64) as u32)
    }

    /// Image of a signed integer in the prime subfield.
    pub fn from_i64(&self, v: i64) -> FieldElem {
        FieldElem(v.rem_euclid(self.p() as i64) as u32)
    }

    /// Element from coordinates `(c_0, …, c_{k-1})`; each is reduced mod p.
    pub fn from_coords(&self, coords: &[u64]) -> Result<FieldElem, FieldError> {
        let k = self.k() as usize;
        if coords.len() != k {
            return Err(FieldError::BadCoordinates { expected: k, got: coords.len() });
        }
        let p = self.p() as u64;
        let code = coords.iter().rev().fold(0u64, |acc, &c| acc * p + c % p);
        Ok(FieldElem(code as u32))
    }

    /// Coordinates `(c_0, …, c_{k-1})` of an element.
    pub fn coords(&self, x: FieldElem) -> Vec<u32> {
        let p = self.p();
        let mut v = x.0;
        (0..self.k())
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q()).map(FieldElem)
    }

    /// Reduces a 64-bit value modulo p.
    #[inline]
    pub(crate) fn reduce_u64(&self, x: u64) -> u32 {
        let p = self.inner.p as u64;
        let qhat = ((x as u128 * self.inner.barrett as u128) >> 64) as u64;
        let mut r = x - qhat * p;
        if r >= p {
            r -= p;
        }
        r as u32
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.inner.ext {
            None => {
                let p = self.inner.p;
                let s = a.0 as u64 + b.0 as u64;
                FieldElem(if s >= p as u64 { (s - p as u64) as u32 } else { s as u32 })
            }
            Some(_) => self.digitwise(a, b, |x, y, p| (x + y) % p),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.inner.ext {
            None => {
                let p = self.inner.p;
                FieldElem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + (p - b.0) })
            }
            Some(_) => self.digitwise(a, b, |x, y, p| (x + p - y) % p),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.sub(FieldElem::ZERO, a)
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.inner.ext {
            None => FieldElem(self.reduce_u64(a.0 as u64 * b.0 as u64)),
            Some(ext) => {
                if a.0 == 0 || b.0 == 0 {
                    return FieldElem::ZERO;
                }
                match &ext.logs {
                    Some(t) => {
                        FieldElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                    }
                    None => FieldElem(schoolbook_ext_mul(&self.inner, a.0, b.0)),
                }
            }
        }
    }

    /// `x^e` by square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, x: FieldElem, mut e: u64) -> FieldElem {
        let mut base = x;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, x: FieldElem) -> Option<FieldElem> {
        if x.is_zero() {
            return None;
        }
        if let Some(Extension { logs: Some(t), .. }) = &self.inner.ext {
            let l = t.log[x.0 as usize];
            let n = self.q() - 1;
            return Some(FieldElem(t.exp[((n - l) % n) as usize]));
        }
        Some(self.pow(x, self.q() as u64 - 2))
    }

    /// `a / b`; panics when `b` is zero.
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b).expect("division by zero in finite field"))
    }

    /// Quadratic character: 0 on zero, +1 on nonzero squares, -1 otherwise.
    pub fn quadratic_character(&self, x: FieldElem) -> Result<i8, FieldError> {
        let q = self.q();
        if q % 2 == 0 {
            return Err(FieldError::EvenOrder(q));
        }
        if x.is_zero() {
            return Ok(0);
        }
        if let Some(Extension { logs: Some(t), .. }) = &self.inner.ext {
            return Ok(if t.log[x.0 as usize] % 2 == 0 { 1 } else { -1 });
        }
        let r = self.pow(x, (q as u64 - 1) / 2);
        if r == FieldElem::ONE {
            Ok(1)
        } else {
            debug_assert_eq!(r, self.neg(FieldElem::ONE));
            Ok(-1)
        }
    }

    /// Inverse of the Frobenius `x ↦ x^p`, i.e. `x^(q/p)`.
    pub fn pth_root(&self, x: FieldElem) -> FieldElem {
        if self.k() == 1 {
            return x;
        }
        self.pow(x, (self.q() / self.p()) as u64)
    }

    /// Whether `n` terms of size `(p-1)^2` plus one residue fit in a `u64` accumulator.
    #[inline]
    pub(crate) fn lazy_terms_ok(&self, n: usize) -> bool {
        let pm = (self.inner.p - 1) as u128;
        (n as u128) * pm * pm + self.inner.p as u128 <= u64::MAX as u128
    }

    fn digitwise(&self, a: FieldElem, b: FieldElem, op: impl Fn(u32, u32, u32) -> u32) -> FieldElem {
        let p = self.inner.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut scale = 1u32;
        let mut out = 0u32;
        for _ in 0..self.inner.k {
            out += op(x % p, y % p, p) * scale;
            x /= p;
            y /= p;
            scale = scale.wrapping_mul(p);
        }
        FieldElem(out)
    }
}

fn barrett_constant(p: u32) -> u64 {
    ((1u128 << 64) / p as u128) as u64
}

/// Multiplies two extension codes as polynomials over F_p modulo the defining polynomial.
fn schoolbook_ext_mul(inner: &Inner, a: u32, b: u32) -> u32 {
    let p = inner.p as u64;
    let k = inner.k as usize;
    let modulus = &inner.ext.as_ref().unwrap().modulus;
    let digits = |mut v: u32| -> Vec<u64> {
        (0..k)
            .map(|_| {
                let c = (v % inner.p) as u64;
                v /= inner.p;
                c
            })
            .collect()
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for i in (k..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..k {
            let m = modulus[j] as u64;
            prod[i - k + j] = (prod[i - k + j] + (p - c) * m) % p;
        }
    }
    prod[..k].iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32
}

/// Lexicographically least monic irreducible of degree `k` over the prime field,
/// scanning `(c_{k-1}, …, c_0)` as a base-p integer from zero.
fn least_irreducible(prime_field: &Field, k: usize) -> Vec<u32> {
    let p = prime_field.p() as u64;
    let space = p.pow(k as u32);
    for rank in 0..space {
        let mut coeffs = vec![0u32; k + 1];
        let mut r = rank;
        for c in coeffs.iter_mut().take(k) {
            *c = (r % p) as u32;
            r /= p;
        }
        coeffs[k] = 1;
        let f = Poly::from_codes(prime_field, &coeffs).expect("codes are reduced");
        if f.is_irreducible().expect("degree is positive") {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

fn build_log_tables(inner: &Inner) -> LogTables {
    let q = inner.q;
    let order = (q - 1) as u64;
    let factors = prime_divisors(order);
    let slow_pow = |x: u32, mut e: u64| -> u32 {
        let (mut base, mut acc) = (x, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = schoolbook_ext_mul(inner, acc, base);
            }
            base = schoolbook_ext_mul(inner, base, base);
            e >>= 1;
        }
        acc
    };
    let g = (2..q)
        .find(|&g| factors.iter().all(|&l| slow_pow(g, order / l) != 1))
        .expect("multiplicative group of a finite field is cyclic");
    let n = (q - 1) as usize;
    let mut exp = vec![0u32; 2 * n];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for i in 0..n {
        exp[i] = x;
        exp[i + n] = x;
        log[x as usize] = i as u32;
        x = schoolbook_ext_mul(inner, x, g);
    }
    LogTables { exp, log }
}
