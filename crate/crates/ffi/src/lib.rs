//! C ABI for `heisdyn`.
//!
//! Conventions:
//! * every fallible function returns a [`HeisStatus`] and writes results through
//!   out-pointers; on failure the out-pointers are left untouched and
//!   [`heis_last_error`] describes the problem;
//! * handles (`HeisElement`, `HeisWordTable`) are created by this library and
//!   must be released with the matching `*_free` function;
//! * strings returned to the caller are NUL-terminated and released with
//!   [`heis_string_free`];
//! * panics never cross the boundary; they are reported as `HEIS_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use heisdyn::entropy::{
    entropy_linear, entropy_periodic, entropy_trace_series, word_counts, WordCountTable, WordGroup,
};
use heisdyn::expansive::is_lopsided;
use heisdyn::lyapunov::{entropy_via_lyapunov, LyapunovConfig};
use heisdyn::{Error, GroupRingElement, Monomial};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeisStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Overflow = 5,
    NotLopsided = 6,
    NonConvergence = 7,
    Io = 8,
    OutOfRange = 9,
    Panic = 10,
}

/// Which group [`heis_words_new`] counts words in.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeisGroup {
    Heisenberg = 0,
    Z2 = 1,
    Free2 = 2,
}

/// Opaque element of the integral group ring.
pub struct HeisElement(GroupRingElement);

/// Opaque table of word counts `r(0..=n_max)`.
pub struct HeisWordTable(WordCountTable);

/// Entropy value with its error bound.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct HeisEstimate {
    pub value: f64,
    pub error_bound: f64,
    /// Nonzero when `error_bound` is an estimate rather than a proven bound.
    pub heuristic: c_int,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> HeisStatus {
    match e {
        Error::Overflow(_) => HeisStatus::Overflow,
        Error::InvalidInput(_) => HeisStatus::InvalidInput,
        Error::Parse { .. } => HeisStatus::Parse,
        Error::NotLopsided => HeisStatus::NotLopsided,
        Error::NonConvergence { .. } => HeisStatus::NonConvergence,
        Error::Io(_) | Error::Json(_) => HeisStatus::Io,
    }
}

struct Fail(HeisStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> HeisStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            HeisStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            HeisStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(HeisStatus::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(HeisStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn elem<'a>(p: *const HeisElement) -> Result<&'a GroupRingElement, Fail> {
    p.as_ref().map(|e| &e.0).ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

fn c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(HeisStatus::InvalidInput, "string contains NUL".into()))
}

fn boxed(e: GroupRingElement) -> *mut HeisElement {
    Box::into_raw(Box::new(HeisElement(e)))
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn heis_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn heis_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn heis_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an expression in `x, y, z` such as `"y^2-x*y-1"`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_element_parse(
    text: *const c_char,
    out: *mut *mut HeisElement,
) -> HeisStatus {
    guard(|| {
        let f = heisdyn::cli::parse_element(str_arg(text)?)?;
        put(out, boxed(f))
    })
}

/// The monomial `c · x^k y^l z^m`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_element_monomial(
    k: i64,
    l: i64,
    m: i64,
    c: i64,
    out: *mut *mut HeisElement,
) -> HeisStatus {
    guard(|| {
        let f = GroupRingElement::monomial(Monomial::new(k, l, m), c as i128);
        put(out, boxed(f))
    })
}

/// Releases an element. NULL is ignored.
///
/// # Safety
/// `e` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn heis_element_free(e: *mut HeisElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_element_add(
    a: *const HeisElement,
    b: *const HeisElement,
    out: *mut *mut HeisElement,
) -> HeisStatus {
    guard(|| {
        let r = elem(a)?.add(elem(b)?)?;
        put(out, boxed(r))
    })
}

/// Product `a·b` in normal form.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_element_mul(
    a: *const HeisElement,
    b: *const HeisElement,
    out: *mut *mut HeisElement,
) -> HeisStatus {
    guard(|| {
        let r = elem(a)?.mul(elem(b)?)?;
        put(out, boxed(r))
    })
}

/// `f*`, the involution sending each group element to its inverse.
///
/// # Safety
/// `f` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_element_star(
    f: *const HeisElement,
    out: *mut *mut HeisElement,
) -> HeisStatus {
    guard(|| {
        let r = elem(f)?.star()?;
        put(out, boxed(r))
    })
}

/// Nonzero if `a == b`.
///
/// # Safety
/// Handles must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_element_equal(
    a: *const HeisElement,
    b: *const HeisElement,
    out: *mut c_int,
) -> HeisStatus {
    guard(|| {
        let eq = elem(a)? == elem(b)?;
        put(out, eq as c_int)
    })
}

/// Number of nonzero terms.
///
/// # Safety
/// `f` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_element_len(f: *const HeisElement, out: *mut usize) -> HeisStatus {
    guard(|| {
        let n = elem(f)?.len();
        put(out, n)
    })
}

/// Coefficient of `x^k y^l z^m`; `HEIS_STATUS_OUT_OF_RANGE` if it does not fit in `int64_t`.
///
/// # Safety
/// `f` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_element_coeff(
    f: *const HeisElement,
    k: i64,
    l: i64,
    m: i64,
    out: *mut i64,
) -> HeisStatus {
    guard(|| {
        let c = elem(f)?.coeff(&Monomial::new(k, l, m));
        let c = i64::try_from(c).map_err(|_| {
            Fail(
                HeisStatus::OutOfRange,
                format!("coefficient {c} exceeds int64"),
            )
        })?;
        put(out, c)
    })
}

/// Normal form as text, e.g. `"x*y*z"`. Free with [`heis_string_free`].
///
/// # Safety
/// `f` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_element_to_string(
    f: *const HeisElement,
    out: *mut *mut c_char,
) -> HeisStatus {
    guard(|| {
        let s = c_string(elem(f)?.to_string())?;
        put(out, s)
    })
}

/// Nonzero if one coefficient outweighs all others combined.
///
/// # Safety
/// `f` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_is_lopsided(f: *const HeisElement, out: *mut c_int) -> HeisStatus {
    guard(|| {
        let l = is_lopsided(elem(f)?).is_some();
        put(out, l as c_int)
    })
}

fn estimate(e: heisdyn::entropy::EntropyEstimate) -> HeisEstimate {
    HeisEstimate {
        value: e.value,
        error_bound: e.error_bound,
        heuristic: e.heuristic as c_int,
    }
}

/// Trace-series entropy of a lopsided element, with tail below `tol`.
///
/// # Safety
/// `f` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_entropy_trace(
    f: *const HeisElement,
    tol: f64,
    out: *mut HeisEstimate,
) -> HeisStatus {
    guard(|| {
        let e = entropy_trace_series(elem(f)?, tol)?;
        put(out, estimate(e))
    })
}

/// Periodic-determinant entropy over the primes `qs[0..n_q]`.
///
/// # Safety
/// `f` must be valid; `qs` must point to `n_q` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_entropy_periodic(
    f: *const HeisElement,
    qs: *const usize,
    n_q: usize,
    grid: usize,
    out: *mut HeisEstimate,
) -> HeisStatus {
    guard(|| {
        if qs.is_null() {
            return Err(null());
        }
        let primes = std::slice::from_raw_parts(qs, n_q);
        let r = entropy_periodic(elem(f)?, primes, grid)?;
        put(out, estimate(r.estimate))
    })
}

/// Linear-formula entropy for elements linear in `x` or `y`.
///
/// # Safety
/// `f` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_entropy_linear(
    f: *const HeisElement,
    grid: usize,
    out: *mut HeisEstimate,
) -> HeisStatus {
    guard(|| {
        let e = entropy_linear(elem(f)?, grid)?;
        put(out, estimate(e))
    })
}

/// Lyapunov-exponent entropy over `zetas` Kronecker points.
///
/// # Safety
/// `f` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_entropy_lyapunov(
    f: *const HeisElement,
    zetas: usize,
    steps: usize,
    samples: usize,
    seed: u64,
    out: *mut HeisEstimate,
) -> HeisStatus {
    guard(|| {
        let cfg = LyapunovConfig {
            n_steps: steps,
            n_samples: samples,
            seed,
            allow_rational: false,
        };
        let e = entropy_via_lyapunov(elem(f)?, zetas, &cfg)?;
        put(out, estimate(e))
    })
}

/// Counts of identity words of length `0..=n_max`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_words_new(
    group: HeisGroup,
    n_max: usize,
    out: *mut *mut HeisWordTable,
) -> HeisStatus {
    guard(|| {
        let g = match group {
            HeisGroup::Heisenberg => WordGroup::Heisenberg,
            HeisGroup::Z2 => WordGroup::Z2,
            HeisGroup::Free2 => WordGroup::Free2,
        };
        let t = word_counts(g, n_max)?;
        put(out, Box::into_raw(Box::new(HeisWordTable(t))))
    })
}

/// `r(n)` in decimal. Free with [`heis_string_free`].
///
/// # Safety
/// `t` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_words_count(
    t: *const HeisWordTable,
    n: usize,
    out: *mut *mut c_char,
) -> HeisStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(null)?;
        let c = t
            .0
            .get(n)
            .ok_or_else(|| Fail(HeisStatus::OutOfRange, format!("n = {n} exceeds the table")))?;
        let s = c_string(c.to_string())?;
        put(out, s)
    })
}

/// Releases a word table. NULL is ignored.
///
/// # Safety
/// `t` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn heis_words_free(t: *mut HeisWordTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Runs the command-line interface on `argv[0..argc]` (without the program
/// name) and returns its JSON report in `json_out` and exit code in `exit_code`.
/// Command failures are reported inside the JSON with exit code 1, not as a
/// failing status.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn heis_cli_run(
    argc: usize,
    argv: *const *const c_char,
    json_out: *mut *mut c_char,
    exit_code: *mut c_int,
) -> HeisStatus {
    guard(|| {
        if json_out.is_null() || exit_code.is_null() || (argc > 0 && argv.is_null()) {
            return Err(null());
        }
        let mut args = vec!["heisdyn".to_string()];
        for i in 0..argc {
            args.push(str_arg(*argv.add(i))?.to_string());
        }
        let (code, text) = heisdyn::cli::run_to_string(args);
        let s = c_string(text)?;
        put(json_out, s)?;
        put(exit_code, code as c_int)
    })
}
