//! Slice-level kernels shared by [`super::Poly`] and the hot enumeration paths.

use crate::ffield::{Field, FieldElem};

pub(crate) fn trim(v: &mut Vec<FieldElem>) {
    while v.last() == Some(&FieldElem::ZERO) {
        v.pop();
    }
}

pub(crate) fn add(f: &Field, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let n = a.len().max(b.len());
    let get = |v: &[FieldElem], i: usize| v.get(i).copied().unwrap_or(FieldElem::ZERO);
    let mut out: Vec<FieldElem> = (0..n).map(|i| f.add(get(a, i), get(b, i))).collect();
    trim(&mut out);
    out
}

pub(crate) fn sub(f: &Field, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let n = a.len().max(b.len());
    let get = |v: &[FieldElem], i: usize| v.get(i).copied().unwrap_or(FieldElem::ZERO);
    let mut out: Vec<FieldElem> = (0..n).map(|i| f.sub(get(a, i), get(b, i))).collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(f: &Field, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElem::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Long division; `d` must be nonzero and trimmed.
pub(crate) fn div_rem(f: &Field, a: &[FieldElem], d: &[FieldElem]) -> (Vec<FieldElem>, Vec<FieldElem>) {
    let dn = d.len() - 1;
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let inv_lc = f.inv(d[dn]).expect("divisor is trimmed");
    let mut q = vec![FieldElem::ZERO; r.len() - dn];
    for i in (dn..r.len()).rev() {
        let c = f.mul(r[i], inv_lc);
        if c.is_zero() {
            continue;
        }
        q[i - dn] = c;
        for j in 0..=dn {
            r[i - dn + j] = f.sub(r[i - dn + j], f.mul(c, d[j]));
        }
    }
    r.truncate(dn);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

/// In-place remainder, no quotient.
pub(crate) fn rem_in_place(f: &Field, r: &mut Vec<FieldElem>, d: &[FieldElem]) {
    trim(r);
    let dn = d.len() - 1;
    if r.len() < d.len() {
        return;
    }
    let inv_lc = f.inv(d[dn]).expect("divisor is trimmed");
    for i in (dn..r.len()).rev() {
        let c = f.mul(r[i], inv_lc);
        if c.is_zero() {
            continue;
        }
        for j in 0..=dn {
            r[i - dn + j] = f.sub(r[i - dn + j], f.mul(c, d[j]));
        }
    }
    r.truncate(dn);
    trim(r);
}

/// Monic gcd of two trimmed vectors.
pub(crate) fn gcd(f: &Field, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        rem_in_place(f, &mut x, &y);
        std::mem::swap(&mut x, &mut y);
    }
    if let Some(&lc) = x.last() {
        if lc != FieldElem::ONE {
            let inv = f.inv(lc).unwrap();
            for c in x.iter_mut() {
                *c = f.mul(*c, inv);
            }
        }
    }
    x
}

/// Whether `gcd(a, b)` is a nonzero constant.
pub(crate) fn coprime(f: &Field, a: &[FieldElem], b: &[FieldElem]) -> bool {
    gcd(f, a, b).len() == 1
}
