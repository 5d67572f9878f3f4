//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are stored little-endian (`coeffs[i]` is the coefficient of
//! `x^i`) with no trailing zeros, so the zero polynomial is the empty vector
//! and its degree is `None`.

mod dense;
mod enumerate;
mod irreducible;
mod text;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::ffield::{Field, FieldElem, FieldError};

pub use enumerate::{enumerate_monic, monic_space, MonicCursor, MonicIter, Shard};
pub use irreducible::{irreducible_count, IrreducibilityTester, SquarefreePolicy};
pub use text::Var;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomials live over different fields (F_{0} vs F_{1})")]
    FieldMismatch(String, String),
    #[error("zero polynomial is not allowed here")]
    Zero,
    #[error("constant polynomial is not allowed here")]
    Constant,
    #[error("modulus must have degree at least 1")]
    BadModulus,
    #[error("polynomial is not square-free")]
    NotSquarefree,
    #[error("syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("coefficient {text:?} at offset {offset} does not reduce into F_{field}")]
    Coefficient { offset: usize, text: String, field: String },
    #[error("degree must be at least 1")]
    DegreeTooSmall,
    #[error("invalid shard {index}/{total}")]
    InvalidShard { index: u64, total: u64 },
    #[error("search space {q}^{n} does not fit in 64 bits")]
    SpaceTooLarge { q: u32, n: usize },
    #[error("count overflows 128-bit arithmetic")]
    Overflow,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A polynomial over a finite field.
#[derive(Clone)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for Poly {}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.q().hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over F_{}", self, self.field)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(Var::T))
    }
}

impl Poly {
    /// Builds a polynomial, trimming trailing zeros.
    pub fn new(field: &Field, mut coeffs: Vec<FieldElem>) -> Poly {
        dense::trim(&mut coeffs);
        Poly { field: field.clone(), coeffs }
    }

    /// Builds a polynomial from raw element codes (little-endian).
    pub fn from_codes(field: &Field, codes: &[u32]) -> Result<Poly, FieldError> {
        let coeffs = codes
            .iter()
            .map(|&c| field.elem(c as u64))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Poly::new(field, coeffs))
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, FieldElem::ONE)
    }

    pub fn constant(field: &Field, c: FieldElem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The variable `x`.
    pub fn x(field: &Field) -> Poly {
        Poly::monomial(field, FieldElem::ONE, 1)
    }

    /// `c·x^deg`.
    pub fn monomial(field: &Field, c: FieldElem, deg: usize) -> Poly {
        let mut coeffs = vec![FieldElem::ZERO; deg + 1];
        coeffs[deg] = c;
        Poly::new(field, coeffs)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for nonzero constants and for zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<FieldElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(FieldElem::ONE)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [FieldElem::ONE]
    }

    pub(crate) fn check_field(&self, other: &Poly) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch(
                self.field.label().to_string(),
                other.field.label().to_string(),
            ))
        }
    }

    fn assert_field(&self, other: &Poly) {
        if let Err(e) = self.check_field(other) {
            panic!("{e}");
        }
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(FieldElem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as u64), c))
            .collect();
        Poly::new(f, coeffs)
    }

    pub fn scale(&self, c: FieldElem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) if lc == FieldElem::ONE => self.clone(),
            Some(lc) => self.scale(self.field.inv(lc).unwrap()),
        }
    }

    /// `f(x + c)`.
    pub fn shift(&self, c: FieldElem) -> Poly {
        let f = &self.field;
        let lin = Poly::new(f, vec![c, FieldElem::ONE]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(f), |acc, &a| &(&acc * &lin) + &Poly::constant(f, a))
    }

    /// Quotient and remainder; errors on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.check_field(d)?;
        if d.is_zero() {
            return Err(PolyError::Zero);
        }
        let (q, r) = dense::div_rem(&self.field, &self.coeffs, &d.coeffs);
        Ok((Poly::new(&self.field, q), Poly::new(&self.field, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly, PolyError> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic gcd; zero only when both inputs are zero.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_field(other)?;
        Ok(Poly::new(&self.field, dense::gcd(&self.field, &self.coeffs, &other.coeffs)))
    }

    /// `self^e mod modulus`.
    pub fn powmod(&self, e: u128, modulus: &Poly) -> Result<Poly, PolyError> {
        self.check_field(modulus)?;
        if modulus.degree().unwrap_or(0) < 1 {
            return Err(PolyError::BadModulus);
        }
        let base = self.rem(modulus)?;
        let mut acc = Poly::one(&self.field).rem(modulus)?;
        if e == 0 {
            return Ok(acc);
        }
        for bit in (0..128 - e.leading_zeros()).rev() {
            acc = (&acc * &acc).rem(modulus)?;
            if (e >> bit) & 1 == 1 {
                acc = (&acc * &base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    /// Resultant with respect to the actual degrees, by the Euclidean
    /// remainder recurrence `Res(a, b) = (-1)^{deg a·deg b} lc(b)^{deg a - deg r} Res(b, r)`.
    pub fn resultant(&self, other: &Poly) -> Result<FieldElem, PolyError> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Err(PolyError::Zero);
        }
        let f = &self.field;
        let mut a = self.coeffs.clone();
        let mut b = other.coeffs.clone();
        let mut acc = FieldElem::ONE;
        loop {
            let m = a.len() - 1;
            let n = b.len() - 1;
            if n == 0 {
                return Ok(f.mul(acc, f.pow(b[0], m as u64)));
            }
            if m == 0 {
                return Ok(f.mul(acc, f.pow(a[0], n as u64)));
            }
            let (_, r) = dense::div_rem(f, &a, &b);
            if r.is_empty() {
                return Ok(FieldElem::ZERO);
            }
            let k = r.len() - 1;
            if (m * n) % 2 == 1 {
                acc = f.neg(acc);
            }
            acc = f.mul(acc, f.pow(b[n], (m - k) as u64));
            a = b;
            b = r;
        }
    }

    /// `(-1)^{n(n-1)/2} Res(f, f')` for the monic normalization of `f`, with
    /// `f'` taken at formal degree `n - 1`. Zero when `f' = 0`.
    pub fn discriminant(&self) -> Result<FieldElem, PolyError> {
        let n = match self.degree() {
            None => return Err(PolyError::Zero),
            Some(0) => return Err(PolyError::Constant),
            Some(n) => n,
        };
        let g = self.monic();
        let dg = g.derivative();
        if dg.is_zero() {
            return Ok(FieldElem::ZERO);
        }
        // lc(g) = 1, so the formal-degree correction lc(g)^{n-1-deg g'} is 1.
        let res = g.resultant(&dg)?;
        let f = &self.field;
        Ok(if (n * (n - 1) / 2) % 2 == 1 { f.neg(res) } else { res })
    }

    /// True iff there is no repeated irreducible factor.
    pub fn is_squarefree(&self) -> Result<bool, PolyError> {
        match self.degree() {
            None => Err(PolyError::Zero),
            Some(0) => Ok(true),
            Some(_) => {
                let d = self.derivative();
                if d.is_zero() {
                    return Ok(false);
                }
                Ok(self.gcd(&d)?.is_one())
            }
        }
    }

    /// Monic product of the distinct irreducible factors.
    pub fn radical(&self) -> Result<Poly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::Zero);
        }
        let f = self.monic();
        if f.is_constant() {
            return Ok(Poly::one(&self.field));
        }
        let d = f.derivative();
        if d.is_zero() {
            return f.pth_root().radical();
        }
        let g = f.gcd(&d)?;
        let w = f.div_rem(&g)?.0;
        // Strip from g every factor of w; what remains is a p-th power.
        let mut rest = g;
        loop {
            let y = rest.gcd(&w)?;
            if y.is_one() {
                break;
            }
            rest = rest.div_rem(&y)?.0;
        }
        if rest.is_constant() {
            Ok(w)
        } else {
            Ok((&w * &rest.pth_root().radical()?).monic())
        }
    }

    /// For `f = Σ c_i x^{pi}`, returns `Σ c_i^{1/p} x^i`.
    fn pth_root(&self) -> Poly {
        let fld = &self.field;
        let p = fld.p() as usize;
        let coeffs = self.coeffs.iter().step_by(p).map(|&c| fld.pth_root(c)).collect();
        Poly::new(fld, coeffs)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.assert_field(rhs);
        Poly::new(&self.field, dense::add(&self.field, &self.coeffs, &rhs.coeffs))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.assert_field(rhs);
        Poly::new(&self.field, dense::sub(&self.field, &self.coeffs, &rhs.coeffs))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_field(rhs);
        Poly::new(&self.field, dense::mul(&self.field, &self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(p: u64, k: u32) -> Field {
        Field::new(p, k).unwrap()
    }

    fn poly(f: &Field, s: &str) -> Poly {
        Poly::parse(s, f).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let f5 = field(5, 1);
        assert_eq!(poly(&f5, "t^2-1").gcd(&poly(&f5, "t-1")).unwrap(), poly(&f5, "t-1"));
        let f3 = field(3, 1);
        assert!(poly(&f3, "t^2+1").gcd(&poly(&f3, "t^2+t+2")).unwrap().is_one());
        let g = poly(&f3, "2*t^2+1");
        assert_eq!(Poly::zero(&f3).gcd(&g).unwrap(), g.monic());
        assert!(Poly::zero(&f3).gcd(&Poly::zero(&f3)).unwrap().is_zero());
        let f7 = field(7, 1);
        assert!(matches!(
            poly(&f3, "t").gcd(&poly(&f7, "t")),
            Err(PolyError::FieldMismatch(..))
        ));
    }

    #[test]
    fn powmod_examples() {
        let f3 = field(3, 1);
        let m = poly(&f3, "t^2+1");
        assert_eq!(poly(&f3, "t").powmod(3, &m).unwrap(), poly(&f3, "2*t"));
        let f = poly(&f3, "t^3+2*t+1");
        assert_eq!(poly(&f3, "t").powmod(1, &f).unwrap(), poly(&f3, "t"));
        assert!(Poly::zero(&f3).powmod(5, &f).unwrap().is_zero());
        assert_eq!(poly(&f3, "t").powmod(0, &f).unwrap(), Poly::one(&f3));
        assert_eq!(poly(&f3, "t").powmod(2, &poly(&f3, "2")), Err(PolyError::BadModulus));
    }

    #[test]
    fn resultant_examples() {
        let f7 = field(7, 1);
        for a in 0..7u64 {
            for b in 0..7u64 {
                let fa = Poly::new(&f7, vec![f7.neg(f7.from_int(a)), f7.one()]);
                let fb = Poly::new(&f7, vec![f7.neg(f7.from_int(b)), f7.one()]);
                assert_eq!(fa.resultant(&fb).unwrap(), f7.sub(f7.from_int(a), f7.from_int(b)));
            }
        }
        let f3 = field(3, 1);
        assert_eq!(poly(&f3, "t^2+1").resultant(&poly(&f3, "t")).unwrap(), FieldElem(1));
        let f5 = field(5, 1);
        assert_eq!(poly(&f5, "t^2-1").resultant(&poly(&f5, "t-1")).unwrap(), FieldElem(0));
        assert_eq!(Poly::zero(&f5).resultant(&poly(&f5, "t")), Err(PolyError::Zero));
    }

    /// Sylvester determinant by permutation expansion; only for tiny sizes.
    fn sylvester_oracle(f: &Poly, g: &Poly) -> FieldElem {
        let fld = f.field();
        let (m, n) = (f.degree().unwrap(), g.degree().unwrap());
        let size = m + n;
        if size == 0 {
            return FieldElem::ONE;
        }
        let mut mat = vec![vec![FieldElem::ZERO; size]; size];
        for i in 0..n {
            for j in 0..=m {
                mat[i][i + j] = f.coeff(m - j);
            }
        }
        for i in 0..m {
            for j in 0..=n {
                mat[n + i][i + j] = g.coeff(n - j);
            }
        }
        let mut perm: Vec<usize> = (0..size).collect();
        let mut total = FieldElem::ZERO;
        permute(&mut perm, 0, &mut |p| {
            let mut sign = false;
            for i in 0..size {
                for j in i + 1..size {
                    if p[i] > p[j] {
                        sign = !sign;
                    }
                }
            }
            let mut prod = FieldElem::ONE;
            for i in 0..size {
                prod = fld.mul(prod, mat[i][p[i]]);
            }
            total = if sign { fld.sub(total, prod) } else { fld.add(total, prod) };
        });
        total
    }

    fn permute(v: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            visit(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, visit);
            v.swap(k, i);
        }
    }

    #[test]
    fn resultant_matches_sylvester_exhaustive_f3_deg2() {
        let f3 = field(3, 1);
        let mut polys = Vec::new();
        for d in 0..=2usize {
            let count = 3u32.pow(d as u32);
            for r in 0..count {
                let mut c = vec![0u32; d + 1];
                let mut t = r;
                for x in c.iter_mut().take(d) {
                    *x = t % 3;
                    t /= 3;
                }
                c[d] = 1;
                polys.push(Poly::from_codes(&f3, &c).unwrap());
            }
        }
        for f in &polys {
            for g in &polys {
                let res = f.resultant(g).unwrap();
                assert_eq!(res, sylvester_oracle(f, g), "{f} {g}");
                let (m, n) = (f.degree().unwrap(), g.degree().unwrap());
                let swapped = g.resultant(f).unwrap();
                let expect = if (m * n) % 2 == 1 { f3.neg(swapped) } else { swapped };
                assert_eq!(res, expect);
                let common = f.gcd(g).unwrap().degree().unwrap() >= 1;
                assert_eq!(res.is_zero(), common);
            }
        }
    }

    #[test]
    fn discriminant_examples() {
        let f7 = field(7, 1);
        for b in 0..7u64 {
            for c in 0..7u64 {
                let f = Poly::new(&f7, vec![f7.from_int(c), f7.from_int(b), f7.one()]);
                let expect = f7.sub(f7.from_int(b * b), f7.from_int(4 * c));
                assert_eq!(f.discriminant().unwrap(), expect);
            }
        }
        let f3 = field(3, 1);
        assert_eq!(poly(&f3, "t^2+1").discriminant().unwrap(), FieldElem(2));
        assert_eq!(poly(&f3, "t+2").discriminant().unwrap(), FieldElem(1));
        assert_eq!(poly(&f3, "2").discriminant(), Err(PolyError::Constant));
        // Inseparable: derivative vanishes.
        assert_eq!(poly(&f3, "t^3+1").discriminant().unwrap(), FieldElem(0));
    }

    #[test]
    fn squarefree_examples() {
        let f5 = field(5, 1);
        assert!(!poly(&f5, "t^2-2*t+1").is_squarefree().unwrap());
        let f3 = field(3, 1);
        assert!(poly(&f3, "t^2+1").is_squarefree().unwrap());
        assert!(!poly(&f3, "t^3").is_squarefree().unwrap());
        assert!(poly(&f3, "2").is_squarefree().unwrap());
        assert_eq!(Poly::zero(&f3).is_squarefree(), Err(PolyError::Zero));
    }

    #[test]
    fn radical_strips_multiplicities() {
        let f3 = field(3, 1);
        // (t+1)^3 (t^2+1)^2 t
        let a = poly(&f3, "t+1");
        let b = poly(&f3, "t^2+1");
        let t = poly(&f3, "t");
        let f = &(&(&(&a * &a) * &a) * &(&b * &b)) * &t;
        let expect = (&(&a * &b) * &t).monic();
        assert_eq!(f.radical().unwrap(), expect);
        let f9 = field(3, 2);
        let g = poly(&f9, "t^3+(1,0)");
        let r = g.radical().unwrap();
        assert_eq!(r.degree(), Some(1));
        assert!((&(&r * &r) * &r) == g);
    }

    #[test]
    fn shift_matches_evaluation() {
        let f = field(5, 1);
        let g = poly(&f, "t^3+2*t+4");
        for c in f.elements() {
            let s = g.shift(c);
            for x in f.elements() {
                assert_eq!(s.eval(x), g.eval(f.add(x, c)));
            }
        }
    }

    fn arb_poly(f: Field, max_deg: usize) -> impl Strategy<Value = Poly> {
        let q = f.q();
        proptest::collection::vec(0..q, 1..=max_deg + 1)
            .prop_map(move |c| Poly::from_codes(&f, &c).unwrap())
    }

    fn arb_monic(f: Field, min_deg: usize, max_deg: usize) -> impl Strategy<Value = Poly> {
        let q = f.q();
        proptest::collection::vec(0..q, min_deg..=max_deg).prop_map(move |mut c| {
            c.push(1);
            Poly::from_codes(&f, &c).unwrap()
        })
    }

    fn small_fields() -> impl Strategy<Value = Field> {
        prop_oneof![
            Just(field(3, 1)),
            Just(field(5, 1)),
            Just(field(7, 1)),
            Just(field(3, 2)),
            Just(field(2, 3)),
            Just(field(13, 1)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn resultant_symmetry_and_vanishing(
            (f, g) in small_fields().prop_flat_map(|fl| (arb_poly(fl.clone(), 6), arb_poly(fl, 6)))
        ) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let fld = f.field().clone();
            let (m, n) = (f.degree().unwrap(), g.degree().unwrap());
            let a = f.resultant(&g).unwrap();
            let b = g.resultant(&f).unwrap();
            prop_assert_eq!(a, if (m * n) % 2 == 1 { fld.neg(b) } else { b });
            prop_assert_eq!(a.is_zero(), f.gcd(&g).unwrap().degree().unwrap() >= 1);
        }

        #[test]
        fn discriminant_of_product(
            (f, g) in small_fields().prop_flat_map(|fl| (arb_monic(fl.clone(), 1, 4), arb_monic(fl, 1, 4)))
        ) {
            prop_assume!(f.gcd(&g).unwrap().is_one());
            let fld = f.field().clone();
            let r = f.resultant(&g).unwrap();
            let lhs = (&f * &g).discriminant().unwrap();
            let rhs = fld.mul(fld.mul(f.discriminant().unwrap(), g.discriminant().unwrap()), fld.mul(r, r));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn division_identity(
            (a, b) in small_fields().prop_flat_map(|fl| (arb_poly(fl.clone(), 8), arb_poly(fl, 5)))
        ) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.is_zero() || r.degree() < b.degree());
        }

        #[test]
        fn radical_is_squarefree_and_divides(
            (a, b) in small_fields().prop_flat_map(|fl| (arb_monic(fl.clone(), 1, 3), arb_monic(fl, 0, 2)))
        ) {
            let f = &(&a * &a) * &b;
            let r = f.radical().unwrap();
            prop_assert!(r.is_squarefree().unwrap());
            prop_assert!(f.rem(&r).unwrap().is_zero());
            // every root-free part of f is accounted for: r^deg f is divisible by f
            let big = r.powmod(f.degree().unwrap() as u128, &f).unwrap();
            prop_assert!(big.is_zero());
        }
    }
}
