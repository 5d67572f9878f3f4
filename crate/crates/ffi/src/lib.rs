//! C ABI over `hlfq`.
//!
//! Objects are opaque handles created by `*_new` / `*_parse` functions and
//! released with the matching `*_free`. Every fallible call returns an
//! [`HlfqStatus`]; on failure a message is available from
//! [`hlfq_last_error`] on the same thread until the next failing call.
//! Strings returned to the caller are released with [`hlfq_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hlfq::fqpoly::{irreducible_count, PolyError};
use hlfq::hlcount::{
    cr_count_exact, pi_exact, pi_sample, CountError, CountResult, PiValue, SampleOptions, TupleSpec,
};
use hlfq::{Field, FieldError, Poly, Shard};

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum HlfqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    InvalidTuple = 4,
    Budget = 5,
    FieldMismatch = 6,
    Overflow = 7,
    Internal = 8,
}

/// A finite field F_q.
pub struct HlfqField(Field);

/// A polynomial over an [`HlfqField`].
pub struct HlfqPoly(Poly);

/// A validated tuple: field, degree and offsets.
pub struct HlfqTuple(TupleSpec);

/// Outcome of an exact or sampled count.
#[repr(C)]
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct HlfqCount {
    /// 1 when `exact_count` holds an enumerated count, 0 for an estimate.
    pub is_exact: i32,
    pub exact_count: u64,
    pub estimate: f64,
    /// `q^n / n^r` as a double.
    pub prediction: f64,
    pub abs_error: f64,
    pub normalized_error: f64,
    /// 0 for exact counts.
    pub sample_size: u64,
    pub ci_half_width: f64,
}

/// Discriminant-density tallies.
#[repr(C)]
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct HlfqCrReport {
    pub admissible: u64,
    pub space: u64,
    pub density: f64,
    pub not_squarefree: u64,
    pub not_coprime: u64,
    pub constant: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl ToString) {
    let s = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: HlfqStatus, msg: impl ToString) -> HlfqStatus {
    set_error(msg);
    status
}

fn field_status(e: &FieldError) -> HlfqStatus {
    match e {
        FieldError::BadSpec(_) => HlfqStatus::Parse,
        _ => HlfqStatus::InvalidArgument,
    }
}

fn poly_status(e: &PolyError) -> HlfqStatus {
    match e {
        PolyError::Syntax { .. } | PolyError::Coefficient { .. } => HlfqStatus::Parse,
        PolyError::FieldMismatch { .. } => HlfqStatus::FieldMismatch,
        PolyError::Overflow | PolyError::SpaceTooLarge { .. } => HlfqStatus::Overflow,
        PolyError::Field(f) => field_status(f),
        _ => HlfqStatus::InvalidArgument,
    }
}

fn count_status(e: &CountError) -> HlfqStatus {
    match e {
        CountError::Invalid(_) => HlfqStatus::InvalidTuple,
        CountError::Budget { .. } => HlfqStatus::Budget,
        CountError::Poly(p) => poly_status(p),
        CountError::Field(f) => field_status(f),
        _ => HlfqStatus::InvalidArgument,
    }
}

/// Runs `body`, turning panics into [`HlfqStatus::Internal`].
fn guard(body: impl FnOnce() -> HlfqStatus) -> HlfqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => fail(HlfqStatus::Internal, "internal panic"),
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, HlfqStatus> {
    if s.is_null() {
        return Err(fail(HlfqStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(HlfqStatus::Parse, "string is not UTF-8"))
}

macro_rules! deref {
    ($p:expr) => {{
        if $p.is_null() {
            return fail(HlfqStatus::NullPointer, concat!("null ", stringify!($p)));
        }
        unsafe { &*$p }
    }};
}

macro_rules! out {
    ($p:expr, $v:expr) => {{
        if $p.is_null() {
            return fail(HlfqStatus::NullPointer, concat!("null ", stringify!($p)));
        }
        unsafe { *$p = $v };
        HlfqStatus::Ok
    }};
}

/// Message of the last failing call on this thread; empty when none.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn hlfq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hlfq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// F_{p^k}.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_field_new(p: u64, k: u32, out: *mut *mut HlfqField) -> HlfqStatus {
    guard(|| match Field::new(p, k) {
        Ok(f) => out!(out, Box::into_raw(Box::new(HlfqField(f)))),
        Err(e) => fail(field_status(&e), e),
    })
}

/// Field from a label such as `"7"` or `"3^2"`.
///
/// # Safety
/// `label` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_field_parse(label: *const c_char, out: *mut *mut HlfqField) -> HlfqStatus {
    guard(|| {
        let label = match text(label) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match label.parse::<Field>() {
            Ok(f) => out!(out, Box::into_raw(Box::new(HlfqField(f)))),
            Err(e) => fail(field_status(&e), e),
        }
    })
}

/// # Safety
/// `f` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hlfq_field_free(f: *mut HlfqField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Order q, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hlfq_field_order(f: *const HlfqField) -> u32 {
    f.as_ref().map_or(0, |f| f.0.q())
}

/// Quadratic character of the element with the given code: -1, 0 or 1.
///
/// # Safety
/// `f` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_field_quadratic_character(f: *const HlfqField, code: u32, out: *mut i8) -> HlfqStatus {
    guard(|| {
        let f = &deref!(f).0;
        let x = match f.elem(code as u64) {
            Ok(x) => x,
            Err(e) => return fail(field_status(&e), e),
        };
        match f.quadratic_character(x) {
            Ok(c) => out!(out, c),
            Err(e) => fail(field_status(&e), e),
        }
    })
}

/// Parses polynomial text over `f`.
///
/// # Safety
/// `f` must be a live handle, `s` NUL-terminated, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_poly_parse(f: *const HlfqField, s: *const c_char, out: *mut *mut HlfqPoly) -> HlfqStatus {
    guard(|| {
        let f = &deref!(f).0;
        let s = match text(s) {
            Ok(s) => s,
            Err(st) => return st,
        };
        match Poly::parse(s, f) {
            Ok(p) => out!(out, Box::into_raw(Box::new(HlfqPoly(p)))),
            Err(e) => fail(poly_status(&e), e),
        }
    })
}

/// # Safety
/// `p` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hlfq_poly_free(p: *mut HlfqPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Canonical text; release with [`hlfq_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_poly_format(p: *const HlfqPoly, out: *mut *mut c_char) -> HlfqStatus {
    guard(|| {
        let p = &deref!(p).0;
        let s = CString::new(p.to_string()).expect("no NUL in polynomial text");
        out!(out, s.into_raw())
    })
}

/// Degree, or -1 for the zero polynomial.
///
/// # Safety
/// `p` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_poly_degree(p: *const HlfqPoly, out: *mut i64) -> HlfqStatus {
    guard(|| {
        let p = &deref!(p).0;
        out!(out, p.degree().map_or(-1, |d| d as i64))
    })
}

/// # Safety
/// `p` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_poly_is_irreducible(p: *const HlfqPoly, out: *mut bool) -> HlfqStatus {
    guard(|| {
        let p = &deref!(p).0;
        match p.is_irreducible() {
            Ok(b) => out!(out, b),
            Err(e) => fail(poly_status(&e), e),
        }
    })
}

/// Discriminant as an element code.
///
/// # Safety
/// `p` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_poly_discriminant(p: *const HlfqPoly, out: *mut u32) -> HlfqStatus {
    guard(|| {
        let p = &deref!(p).0;
        match p.discriminant() {
            Ok(d) => out!(out, d.code()),
            Err(e) => fail(poly_status(&e), e),
        }
    })
}

/// Number of monic irreducible polynomials of degree `n` over F_q.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_irreducible_count(q: u64, n: u32, out: *mut u64) -> HlfqStatus {
    guard(|| match irreducible_count(q, n as usize) {
        Ok(c) => match u64::try_from(c) {
            Ok(c) => out!(out, c),
            Err(_) => fail(HlfqStatus::Overflow, "count exceeds 64 bits"),
        },
        Err(e) => fail(poly_status(&e), e),
    })
}

/// Builds and validates a tuple from `r` offsets over `f`.
///
/// # Safety
/// `f` must be a live handle, `offsets` must point to `r` live polynomial
/// handles, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_tuple_new(
    f: *const HlfqField,
    n: u32,
    offsets: *const *const HlfqPoly,
    r: usize,
    allow_even_q: bool,
    out: *mut *mut HlfqTuple,
) -> HlfqStatus {
    guard(|| {
        let f = &deref!(f).0;
        if offsets.is_null() && r > 0 {
            return fail(HlfqStatus::NullPointer, "null offsets");
        }
        let mut polys = Vec::with_capacity(r);
        for i in 0..r {
            let p = *offsets.add(i);
            if p.is_null() {
                return fail(HlfqStatus::NullPointer, format!("null offset {i}"));
            }
            polys.push((*p).0.clone());
        }
        let spec = TupleSpec::new(f, n as usize, polys).allowing_even_q(allow_even_q);
        if let Err(v) = spec.validate() {
            let e = CountError::Invalid(v);
            return fail(count_status(&e), e);
        }
        out!(out, Box::into_raw(Box::new(HlfqTuple(spec))))
    })
}

/// # Safety
/// `t` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hlfq_tuple_free(t: *mut HlfqTuple) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

fn to_count(r: &CountResult) -> HlfqCount {
    let (num, den) = r.prediction.split_once('/').expect("num/den");
    let prediction = num.parse::<f64>().unwrap_or(f64::NAN) / den.parse::<f64>().unwrap_or(f64::NAN);
    let (is_exact, exact_count, estimate) = match r.pi {
        PiValue::Exact(v) => (1, v, v as f64),
        PiValue::Estimate(v) => (0, 0, v),
    };
    HlfqCount {
        is_exact,
        exact_count,
        estimate,
        prediction,
        abs_error: r.abs_error,
        normalized_error: r.normalized_error,
        sample_size: r.sample_size.unwrap_or(0),
        ci_half_width: r.ci_half_width.unwrap_or(0.0),
    }
}

/// Exact count over shard `shard_index` of `shard_total` (use 0 of 1 for all).
///
/// # Safety
/// `t` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_pi_exact(
    t: *const HlfqTuple,
    shard_index: u64,
    shard_total: u64,
    budget: u64,
    out: *mut HlfqCount,
) -> HlfqStatus {
    guard(|| {
        let t = &deref!(t).0;
        let shard = match Shard::new(shard_index, shard_total) {
            Ok(s) => s,
            Err(e) => return fail(poly_status(&e), e),
        };
        match pi_exact(t, shard, budget) {
            Ok(r) => out!(out, to_count(&r)),
            Err(e) => fail(count_status(&e), e),
        }
    })
}

/// Sampled estimate from `samples` draws under `seed`.
///
/// # Safety
/// `t` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_pi_sample(t: *const HlfqTuple, samples: u64, seed: u64, out: *mut HlfqCount) -> HlfqStatus {
    guard(|| {
        let t = &deref!(t).0;
        match pi_sample(t, SampleOptions::new(samples, seed)) {
            Ok(r) => out!(out, to_count(&r)),
            Err(e) => fail(count_status(&e), e),
        }
    })
}

/// Discriminant-density count over all `(u_1, …, u_{n-1})`.
///
/// # Safety
/// `t` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_cr_count(t: *const HlfqTuple, budget: u64, out: *mut HlfqCrReport) -> HlfqStatus {
    guard(|| {
        let t = &deref!(t).0;
        match cr_count_exact(t, budget) {
            Ok(r) => out!(
                out,
                HlfqCrReport {
                    admissible: r.admissible,
                    space: r.space,
                    density: r.density,
                    not_squarefree: r.not_squarefree,
                    not_coprime: r.not_coprime,
                    constant: r.constant,
                }
            ),
            Err(e) => fail(count_status(&e), e),
        }
    })
}

/// JSON record of an exact count; release with [`hlfq_string_free`].
///
/// # Safety
/// `t` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn hlfq_pi_exact_json(t: *const HlfqTuple, budget: u64, out: *mut *mut c_char) -> HlfqStatus {
    guard(|| {
        let t = &deref!(t).0;
        match pi_exact(t, Shard::FULL, budget) {
            Ok(r) => out!(out, CString::new(r.to_json_line()).expect("json has no NUL").into_raw()),
            Err(e) => fail(count_status(&e), e),
        }
    })
}
