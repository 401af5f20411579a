//! C interface to `domtwist`.
//!
//! Every fallible function returns a status code, `DT_OK` on success, and
//! writes its result through an out pointer. The message of the most recent
//! failure on the calling thread is available from
//! [`dt_last_error_message`]. Objects are opaque handles released with the
//! matching `_free` function; strings returned by the library are released
//! with [`dt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use domtwist::curves::{assemble_curves, CurveOptions, CurveSystem, PipeMode};
use domtwist::fixtures::{self, AUTO_MARGIN};
use domtwist::framing::Framing;
use domtwist::homology::rflux;
use domtwist::region::Region;
use domtwist::shell::{Shell, ShellStrategy};
use domtwist::tiling::{enumerate_tilings, Tiling};
use domtwist::twist::twist_via_helicity;
use domtwist::Error;
use num_rational::Rational64;

pub const DT_OK: i32 = 0;
pub const DT_ERR_USAGE: i32 = 2;
pub const DT_ERR_REGION: i32 = 3;
pub const DT_ERR_TILING: i32 = 4;
pub const DT_ERR_HOMOLOGY: i32 = 5;
pub const DT_ERR_PIPE: i32 = 6;
pub const DT_ERR_LINK: i32 = 7;
pub const DT_ERR_TWIST: i32 = 8;
pub const DT_ERR_IO: i32 = 9;
pub const DT_ERR_NULL_POINTER: i32 = 20;
pub const DT_ERR_INVALID_UTF8: i32 = 21;
pub const DT_ERR_PANIC: i32 = 22;

/// A cubical region.
pub struct DtRegion(Arc<Region>);

/// A domino tiling of a region.
pub struct DtTiling(Tiling);

/// The tilings of a region, in enumeration order.
pub struct DtTilingList(Vec<Tiling>);

/// Closed flux curves of a tiling.
pub struct DtCurves(CurveSystem);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Fail {
    Code(i32, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Code(e.code(), e.to_string())
    }
}

macro_rules! from_domain {
    ($($t:ty),*) => {$(
        impl From<$t> for Fail {
            fn from(e: $t) -> Self {
                Fail::from(Error::from(e))
            }
        }
    )*};
}

from_domain!(
    domtwist::RegionError,
    domtwist::TilingError,
    domtwist::HomologyError,
    domtwist::PipeError,
    domtwist::LinkError,
    domtwist::TwistError
);

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DT_OK
        }
        Ok(Err(Fail::Code(code, msg))) => {
            set_error(msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            DT_ERR_PANIC
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Code(DT_ERR_NULL_POINTER, format!("null pointer: {what}"))
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail::Code(DT_ERR_USAGE, msg.into())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Code(DT_ERR_INVALID_UTF8, format!("{what} is not valid UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, what).map(Some)
    }
}

unsafe fn obj<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn dt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads the region of a builtin fixture such as `"box-3-3-2"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_region_builtin(name: *const c_char, out: *mut *mut DtRegion) -> i32 {
    guard(|| {
        let f = fixtures::builtin(str_arg(name, "name")?)?;
        put(out, boxed(DtRegion(f.region)), "out")
    })
}

/// Parses a region from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_region_from_json(json: *const c_char, out: *mut *mut DtRegion) -> i32 {
    guard(|| {
        let r = Region::from_json(str_arg(json, "json")?)?;
        put(out, boxed(DtRegion(Arc::new(r))), "out")
    })
}

/// Number of cells of the region.
///
/// # Safety
/// `region` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_region_len(region: *const DtRegion, out: *mut usize) -> i32 {
    guard(|| put(out, obj(region, "region")?.0.len(), "out"))
}

/// # Safety
/// `region` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dt_region_free(region: *mut DtRegion) {
    free(region)
}

/// Loads a stored tiling of a builtin fixture, for example `("hex", "t1")`.
///
/// # Safety
/// Both strings must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tiling_builtin(
    builtin: *const c_char,
    name: *const c_char,
    out: *mut *mut DtTiling,
) -> i32 {
    guard(|| {
        let f = fixtures::builtin(str_arg(builtin, "builtin")?)?;
        let name = str_arg(name, "name")?;
        let t = f
            .tiling(name)
            .ok_or_else(|| usage(format!("no stored tiling {name:?} for {}", f.name)))?;
        put(out, boxed(DtTiling(t.clone())), "out")
    })
}

/// Parses a tiling from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tiling_from_json(json: *const c_char, out: *mut *mut DtTiling) -> i32 {
    guard(|| {
        let t = Tiling::from_json(str_arg(json, "json")?)?;
        put(out, boxed(DtTiling(t)), "out")
    })
}

/// JSON form of the tiling. Free the result with [`dt_string_free`].
///
/// # Safety
/// `tiling` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tiling_to_json(tiling: *const DtTiling, out: *mut *mut c_char) -> i32 {
    guard(|| put(out, c_string(obj(tiling, "tiling")?.0.to_json()), "out"))
}

/// Floor-by-floor text drawing. Free the result with [`dt_string_free`].
///
/// # Safety
/// `tiling` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tiling_render(tiling: *const DtTiling, out: *mut *mut c_char) -> i32 {
    guard(|| put(out, c_string(obj(tiling, "tiling")?.0.render()), "out"))
}

/// Writes 1 when the relative flux class of the tiling is zero, else 0.
///
/// # Safety
/// `tiling` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tiling_rflux_is_zero(tiling: *const DtTiling, out: *mut i32) -> i32 {
    guard(|| {
        let z = rflux(&obj(tiling, "tiling")?.0)?.is_zero();
        put(out, z as i32, "out")
    })
}

/// # Safety
/// `tiling` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dt_tiling_free(tiling: *mut DtTiling) {
    free(tiling)
}

/// All tilings of the region.
///
/// # Safety
/// `region` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_enumerate(region: *const DtRegion, out: *mut *mut DtTilingList) -> i32 {
    guard(|| {
        let ts = enumerate_tilings(&obj(region, "region")?.0)?;
        put(out, boxed(DtTilingList(ts)), "out")
    })
}

/// Number of tilings in the list; 0 for a null list.
///
/// # Safety
/// `list` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dt_tiling_list_len(list: *const DtTilingList) -> usize {
    list.as_ref().map_or(0, |l| l.0.len())
}

/// Copy of the tiling at `index`.
///
/// # Safety
/// `list` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_tiling_list_get(list: *const DtTilingList, index: usize, out: *mut *mut DtTiling) -> i32 {
    guard(|| {
        let l = obj(list, "list")?;
        let t =
            l.0.get(index)
                .ok_or_else(|| usage(format!("index {index} out of range for {} tilings", l.0.len())))?;
        put(out, boxed(DtTiling(t.clone())), "out")
    })
}

/// # Safety
/// `list` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dt_tiling_list_free(list: *mut DtTilingList) {
    free(list)
}

unsafe fn options(phi_num: i64, phi_den: i64, pipes: i32, framing: *const c_char) -> Result<CurveOptions, Fail> {
    if phi_den == 0 || phi_num == 0 {
        return Err(usage("phi must be a nonzero rational"));
    }
    let mode = match pipes {
        5 => PipeMode::Five,
        6 => PipeMode::Six,
        _ => return Err(usage(format!("pipes must be 5 or 6, got {pipes}"))),
    };
    let framing = match opt_str_arg(framing, "framing")? {
        Some(s) => s.parse::<Framing>().map_err(|e| usage(e.to_string()))?,
        None => Framing::default(),
    };
    Ok(CurveOptions {
        phi: Rational64::new(phi_num, phi_den),
        mode,
        framing,
    })
}

unsafe fn shell_for(region: &Region, json: *const c_char) -> Result<Shell, Fail> {
    match opt_str_arg(json, "shell")? {
        Some(s) => {
            let sh = Shell::from_json(s)?;
            sh.validate(region)?;
            Ok(sh)
        }
        None => Ok(fixtures::build_shell(region, ShellStrategy::Builtin, AUTO_MARGIN)
            .or_else(|_| fixtures::build_shell(region, ShellStrategy::LayeredAuto, AUTO_MARGIN))?),
    }
}

/// Builds the flux curves of a tiling.
///
/// `shell_json` selects the isolating shell; null means the stored shell of
/// a builtin region or else an auto-routed one. `framing` is null for the
/// default or one of `"transported"`, `"twisted:N"`, `"constant:X,Y,Z"`.
/// `pipes` is 5 or 6 and the flux per pipe is `phi_num / phi_den`.
///
/// # Safety
/// `tiling` must be a live handle, the strings null or NUL-terminated, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_curves_build(
    tiling: *const DtTiling,
    shell_json: *const c_char,
    phi_num: i64,
    phi_den: i64,
    pipes: i32,
    framing: *const c_char,
    out: *mut *mut DtCurves,
) -> i32 {
    guard(|| {
        let t = &obj(tiling, "tiling")?.0;
        let opts = options(phi_num, phi_den, pipes, framing)?;
        let shell = shell_for(t.region(), shell_json)?;
        let sys = assemble_curves(t, &shell, &opts)?;
        put(out, boxed(DtCurves(sys)), "out")
    })
}

/// Number of curves.
///
/// # Safety
/// `curves` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dt_curves_len(curves: *const DtCurves) -> usize {
    curves.as_ref().map_or(0, |c| c.0.curves.len())
}

/// Writes the whole linking matrix, row major, into `buf` of `cap`
/// entries. `len` receives the number of curves; nothing is written to
/// `buf` when `cap` is smaller than its square.
///
/// # Safety
/// `curves` must be a live handle, `len` writable and `buf` valid for `cap`
/// writes.
#[no_mangle]
pub unsafe extern "C" fn dt_curves_matrix(curves: *const DtCurves, buf: *mut i64, cap: usize, len: *mut usize) -> i32 {
    guard(|| {
        let m = obj(curves, "curves")?.0.tabulation_matrix()?;
        let n = m.len();
        put(len, n, "len")?;
        if cap < n * n {
            return Err(usage(format!("buffer holds {cap} entries, {} needed", n * n)));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        for (i, v) in m.entries.iter().flatten().enumerate() {
            buf.add(i).write(*v);
        }
        Ok(())
    })
}

/// Exact helicity as a reduced fraction.
///
/// # Safety
/// `curves` must be a live handle and both outputs writable.
#[no_mangle]
pub unsafe extern "C" fn dt_curves_helicity(curves: *const DtCurves, num: *mut i64, den: *mut i64) -> i32 {
    guard(|| {
        let h = obj(curves, "curves")?.0.helicity()?;
        put(num, *h.numer(), "num")?;
        put(den, *h.denom(), "den")
    })
}

/// JSON form of the curves. Free the result with [`dt_string_free`].
///
/// # Safety
/// `curves` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_curves_to_json(curves: *const DtCurves, out: *mut *mut c_char) -> i32 {
    guard(|| put(out, c_string(obj(curves, "curves")?.0.to_json()), "out"))
}

/// # Safety
/// `curves` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dt_curves_free(curves: *mut DtCurves) {
    free(curves)
}

/// Twist of `tiling` relative to `base`, read off the helicity difference.
/// `base` must have zero relative flux and the same flux as `tiling`.
/// The shell argument is as for [`dt_curves_build`]; the default five-pipe
/// system with flux 1/6 and transported framing is used.
///
/// # Safety
/// Both tilings must be live handles, `shell_json` null or NUL-terminated,
/// and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_twist(
    tiling: *const DtTiling,
    base: *const DtTiling,
    shell_json: *const c_char,
    out: *mut i64,
) -> i32 {
    guard(|| {
        let t = &obj(tiling, "tiling")?.0;
        let b = &obj(base, "base")?.0;
        let shell = shell_for(t.region(), shell_json)?;
        let tw = twist_via_helicity(t, b, &shell, &CurveOptions::default())?;
        put(out, tw, "out")
    })
}
