//! C interface to `treeauto`.
//!
//! Groups and automorphisms are opaque heap handles released with
//! `ta_group_free` / `ta_automorphism_free`. Every fallible call returns a
//! `TaStatus`; on failure `ta_last_error` describes the problem until the
//! next call on the same thread. Strings returned through `char **` are
//! owned by the caller and released with `ta_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use treeauto::activity::{classify_activity, singular_measure, theta};
use treeauto::{catalog, ActivityKind, Automorphism, Error, GeneratorSet, GroupWord, Vertex};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    AlphabetMismatch = 4,
    InvalidArgument = 5,
    BudgetExceeded = 6,
    UnknownName = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaActivityClass {
    Finitary = 0,
    Bounded = 1,
    Polynomial = 2,
    Exponential = 3,
}

/// Activity class; `depth` is set for finitary elements, `degree` for
/// polynomial ones.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaActivity {
    pub kind: TaActivityClass,
    pub depth: usize,
    pub degree: usize,
}

/// A named generating set.
pub struct TaGroup(GeneratorSet);

/// One automorphism in canonical form.
pub struct TaAutomorphism(Automorphism);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(e: &Error) -> TaStatus {
    match e {
        Error::Parse { .. } | Error::InvalidWord(_) | Error::InvalidBoundaryPoint(_) => TaStatus::Parse,
        Error::AlphabetMismatch { .. } => TaStatus::AlphabetMismatch,
        Error::BudgetExceeded { .. } => TaStatus::BudgetExceeded,
        Error::UnknownGenerator(_) | Error::UnknownCatalogEntry(_) => TaStatus::UnknownName,
        _ => TaStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and turning panics into `TaStatus::Panic`.
fn guard(f: impl FnOnce() -> Result<(), (TaStatus, String)>) -> TaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TaStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TaStatus::Panic
        }
    }
}

type Fallible<T> = Result<T, (TaStatus, String)>;

fn lib<T>(r: treeauto::Result<T>) -> Fallible<T> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (TaStatus, String) {
    (TaStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Fallible<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (TaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Fallible<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Fallible<&'a mut T> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn letters<'a>(p: *const u8, len: usize) -> Fallible<&'a [u8]> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null("letters"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn boxed<T>(x: T) -> *mut T {
    Box::into_raw(Box::new(x))
}

fn c_string(s: String) -> Fallible<*mut c_char> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (TaStatus::InvalidArgument, "string contains NUL".into()))
}

/// Message for the last failed call on this thread, or NULL. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ta_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ta_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ta_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the automaton text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_group_from_text(text: *const c_char, out: *mut *mut TaGroup) -> TaStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let gens = lib(GeneratorSet::parse(str_arg(text, "text")?))?;
        *out = boxed(TaGroup(gens));
        Ok(())
    })
}

/// A built-in generating set by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_group_from_catalog(name: *const c_char, out: *mut *mut TaGroup) -> TaStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let entry = lib(catalog::builtin(str_arg(name, "name")?))?;
        *out = boxed(TaGroup(entry.generators));
        Ok(())
    })
}

/// # Safety
/// `g` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ta_group_free(g: *mut TaGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of generators; 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ta_group_len(g: *const TaGroup) -> usize {
    g.as_ref().map_or(0, |g| g.0.len())
}

/// The machine text of the group.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_group_to_text(g: *const TaGroup, out: *mut *mut c_char) -> TaStatus {
    guard(|| {
        let g = ref_arg(g, "group")?;
        let out = out_arg(out, "out")?;
        *out = c_string(g.0.to_text())?;
        Ok(())
    })
}

/// Evaluates a word such as `"a b^-1"` over the group's generators.
///
/// # Safety
/// `g` must be a live handle, `word` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_group_evaluate(
    g: *const TaGroup,
    word: *const c_char,
    out: *mut *mut TaAutomorphism,
) -> TaStatus {
    guard(|| {
        let g = ref_arg(g, "group")?;
        let out = out_arg(out, "out")?;
        let w: GroupWord = lib(str_arg(word, "word")?.parse())?;
        *out = boxed(TaAutomorphism(lib(g.0.evaluate(&w))?));
        Ok(())
    })
}

/// # Safety
/// `a` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ta_automorphism_free(a: *mut TaAutomorphism) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Alphabet size; 0 for NULL.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ta_arity(a: *const TaAutomorphism) -> usize {
    a.as_ref().map_or(0, |a| a.0.arity())
}

/// States of the canonical machine, identity state included; 0 for NULL.
///
/// # Safety
/// `a` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ta_num_states(a: *const TaAutomorphism) -> usize {
    a.as_ref().map_or(0, |a| a.0.num_states() as usize)
}

/// `out = g h`, acting as `h` first.
///
/// # Safety
/// `g`, `h` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_compose(
    g: *const TaAutomorphism,
    h: *const TaAutomorphism,
    out: *mut *mut TaAutomorphism,
) -> TaStatus {
    guard(|| {
        let (g, h) = (ref_arg(g, "g")?, ref_arg(h, "h")?);
        let out = out_arg(out, "out")?;
        *out = boxed(TaAutomorphism(lib(g.0.compose(&h.0))?));
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_invert(g: *const TaAutomorphism, out: *mut *mut TaAutomorphism) -> TaStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let out = out_arg(out, "out")?;
        *out = boxed(TaAutomorphism(g.0.invert()));
        Ok(())
    })
}

/// The section at the vertex `v[0..len]`.
///
/// # Safety
/// `g` must be a live handle, `v` must point to `len` bytes (or be NULL
/// when `len` is 0) and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_section(
    g: *const TaAutomorphism,
    v: *const u8,
    len: usize,
    out: *mut *mut TaAutomorphism,
) -> TaStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let out = out_arg(out, "out")?;
        let v = Vertex::from(letters(v, len)?);
        *out = boxed(TaAutomorphism(lib(g.0.section(&v))?));
        Ok(())
    })
}

/// Writes the image of `v[0..len]` to `image[0..len]`.
///
/// # Safety
/// `g` must be a live handle; `v` and `image` must each point to `len`
/// bytes (or be NULL when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn ta_apply(g: *const TaAutomorphism, v: *const u8, len: usize, image: *mut u8) -> TaStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let v = Vertex::from(letters(v, len)?);
        let w = lib(g.0.apply(&v))?;
        if len > 0 {
            if image.is_null() {
                return Err(null("image"));
            }
            std::slice::from_raw_parts_mut(image, len).copy_from_slice(w.letters());
        }
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_is_identity(g: *const TaAutomorphism, out: *mut bool) -> TaStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        *out_arg(out, "out")? = g.0.is_identity();
        Ok(())
    })
}

/// # Safety
/// `g`, `h` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_equal(g: *const TaAutomorphism, h: *const TaAutomorphism, out: *mut bool) -> TaStatus {
    guard(|| {
        let (g, h) = (ref_arg(g, "g")?, ref_arg(h, "h")?);
        *out_arg(out, "out")? = g.0 == h.0;
        Ok(())
    })
}

/// `θ(n)`, the number of level-`n` vertices with nontrivial section, as a
/// decimal string (it can exceed 64 bits).
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_theta(g: *const TaAutomorphism, n: usize, out: *mut *mut c_char) -> TaStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let out = out_arg(out, "out")?;
        *out = c_string(theta(&g.0, n).to_string())?;
        Ok(())
    })
}

/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_classify(g: *const TaAutomorphism, out: *mut TaActivity) -> TaStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let out = out_arg(out, "out")?;
        *out = match classify_activity(&g.0).kind {
            ActivityKind::Finitary { depth } => TaActivity {
                kind: TaActivityClass::Finitary,
                depth,
                degree: 0,
            },
            ActivityKind::Bounded => TaActivity {
                kind: TaActivityClass::Bounded,
                depth: 0,
                degree: 0,
            },
            ActivityKind::Polynomial { degree } => TaActivity {
                kind: TaActivityClass::Polynomial,
                depth: 0,
                degree,
            },
            ActivityKind::Exponential => TaActivity {
                kind: TaActivityClass::Exponential,
                depth: 0,
                degree: 0,
            },
        };
        Ok(())
    })
}

/// Exact measure of the singular set as `"p/q"`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ta_singular_measure(g: *const TaAutomorphism, out: *mut *mut c_char) -> TaStatus {
    guard(|| {
        let g = ref_arg(g, "g")?;
        let out = out_arg(out, "out")?;
        let m = singular_measure(&g.0);
        *out = c_string(format!("{}/{}", m.numer(), m.denom()))?;
        Ok(())
    })
}
