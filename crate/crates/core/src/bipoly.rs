//! Polynomials in `t` whose coefficients are polynomials in one free variable `U`,
//! and their discriminant in `t` as an element of F_q[U].
//!
//! Only the shape needed for discriminant-density counts is supported: a
//! monic degree-`n` polynomial in `t` whose constant term carries `U`.

use thiserror::Error;

use crate::ffield::{Field, FieldElem};
use crate::fqpoly::{Poly, PolyError, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BiPolyError {
    #[error("offset has degree {deg}, must be below {n}")]
    OffsetDegree { deg: usize, n: usize },
    #[error("expected {expected} specialization values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("polynomial is not monic in t")]
    NotMonic,
    #[error("discriminant in t needs degree at least 2")]
    DegreeTooSmall,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `Σ_i c_i(U) t^i` with `c_i ∈ F_q[U]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    field: Field,
    coeffs_in_t: Vec<Poly>,
}

impl BiPoly {
    pub fn new(field: &Field, mut coeffs_in_t: Vec<Poly>) -> BiPoly {
        while coeffs_in_t.last().is_some_and(|c| c.is_zero()) {
            coeffs_in_t.pop();
        }
        BiPoly { field: field.clone(), coeffs_in_t }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs_in_t(&self) -> &[Poly] {
        &self.coeffs_in_t
    }

    pub fn degree_t(&self) -> Option<usize> {
        self.coeffs_in_t.len().checked_sub(1)
    }

    /// Substitutes `U := c`, giving a polynomial in `t`.
    pub fn eval_u(&self, c: FieldElem) -> Poly {
        Poly::new(&self.field, self.coeffs_in_t.iter().map(|p| p.eval(c)).collect())
    }

    /// `∂/∂t`.
    pub fn derivative_t(&self) -> BiPoly {
        let f = &self.field;
        let coeffs = self
            .coeffs_in_t
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(f.from_int(i as u64)))
            .collect();
        BiPoly::new(f, coeffs)
    }

    /// Discriminant in `t`: `(-1)^{n(n-1)/2}` times the determinant of the
    /// `(2n-1)×(2n-1)` Sylvester matrix of `(F, ∂F/∂t)`, with `∂F/∂t` at formal
    /// degree `n - 1`, evaluated by fraction-free elimination over F_q[U].
    pub fn disc_in_t(&self) -> Result<Poly, BiPolyError> {
        let n = self.degree_t().ok_or(BiPolyError::NotMonic)?;
        if !self.coeffs_in_t[n].is_one() {
            return Err(BiPolyError::NotMonic);
        }
        if n < 2 {
            return Err(BiPolyError::DegreeTooSmall);
        }
        let f = &self.field;
        let zero = Poly::zero(f);
        let d = self.derivative_t();
        let dcoeff = |i: usize| d.coeffs_in_t.get(i).cloned().unwrap_or_else(|| zero.clone());
        let size = 2 * n - 1;
        let mut m = vec![vec![zero.clone(); size]; size];
        for i in 0..n - 1 {
            for j in 0..=n {
                m[i][i + j] = self.coeffs_in_t[n - j].clone();
            }
        }
        for i in 0..n {
            for j in 0..n {
                m[n - 1 + i][i + j] = dcoeff(n - 1 - j);
            }
        }
        let det = bareiss_det(f, m)?;
        Ok(if (n * (n - 1) / 2) % 2 == 1 { -&det } else { det })
    }

    /// Text with `U` coefficients in brackets, highest power of `t` first.
    pub fn to_text(&self) -> String {
        if self.coeffs_in_t.is_empty() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (e, c) in self.coeffs_in_t.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match e {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{e}"),
            };
            let coeff = c.format_with(Var::U);
            terms.push(match (e, c.is_one()) {
                (0, _) => format!("({coeff})"),
                (_, true) => mono,
                _ => format!("({coeff})*{mono}"),
            });
        }
        terms.join("+")
    }
}

/// Determinant over F_q[U] by Bareiss elimination with row pivoting.
fn bareiss_det(field: &Field, mut m: Vec<Vec<Poly>>) -> Result<Poly, PolyError> {
    let size = m.len();
    let mut negate = false;
    let mut prev = Poly::one(field);
    for k in 0..size - 1 {
        if m[k][k].is_zero() {
            match (k + 1..size).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(Poly::zero(field)),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                let (quot, rem) = num.div_rem(&prev)?;
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                m[i][j] = quot;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[size - 1][size - 1].clone();
    Ok(if negate { -&det } else { det })
}

/// `t^n + u_1 t^{n-1} + … + u_{n-1} t + U + a(t)`.
pub fn specialize_family(u: &[FieldElem], a: &Poly, n: usize) -> Result<BiPoly, BiPolyError> {
    let field = a.field();
    if n < 1 {
        return Err(PolyError::DegreeTooSmall.into());
    }
    if u.len() != n - 1 {
        return Err(BiPolyError::WrongLength { expected: n - 1, got: u.len() });
    }
    if let Some(deg) = a.degree().filter(|&d| d >= n) {
        return Err(BiPolyError::OffsetDegree { deg, n });
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    // t^0: U + a_0
    coeffs.push(Poly::new(field, vec![a.coeff(0), FieldElem::ONE]));
    for i in 1..n {
        // coefficient of t^i is u_{n-i} + a_i
        coeffs.push(Poly::constant(field, field.add(u[n - i - 1], a.coeff(i))));
    }
    coeffs.push(Poly::one(field));
    Ok(BiPoly::new(field, coeffs))
}
