//! C interface.
//!
//! Indexes are opaque `PkidxIndex` handles. Every fallible call returns a
//! `PkidxStatus`; on failure `pkidx_last_error` gives a message for the
//! calling thread. Positions are 0-based offsets into the indexed text.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use pkidx::{BuildOptions, Error, Index, IndexFile};

/// Opaque index handle.
pub struct PkidxIndex {
    file: IndexFile,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PkidxStatus {
    Ok = 0,
    NullArgument = 1,
    EmptyText = 2,
    Io = 3,
    Format = 4,
    InvalidArgument = 5,
    Panic = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> PkidxStatus {
    match err {
        Error::EmptyText => PkidxStatus::EmptyText,
        Error::Io(_) => PkidxStatus::Io,
        Error::Format(_) => PkidxStatus::Format,
        _ => PkidxStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), (PkidxStatus, String)>) -> PkidxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PkidxStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PkidxStatus::Panic
        }
    }
}

fn fail(err: Error) -> (PkidxStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(what: &str) -> (PkidxStatus, String) {
    (PkidxStatus::NullArgument, format!("{what} is null"))
}

/// Borrows `len` bytes; a null pointer is accepted only for `len == 0`.
unsafe fn bytes<'a>(data: *const u8, len: usize, what: &str) -> Result<&'a [u8], (PkidxStatus, String)> {
    if len == 0 {
        Ok(&[])
    } else if data.is_null() {
        Err(null(what))
    } else {
        Ok(std::slice::from_raw_parts(data, len))
    }
}

unsafe fn to_path<'a>(p: *const c_char) -> Result<&'a Path, (PkidxStatus, String)> {
    if p.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(p).to_str().map_err(|_| (PkidxStatus::InvalidArgument, "path is not UTF-8".to_string()))?;
    Ok(Path::new(s))
}

unsafe fn handle<'a>(idx: *const PkidxIndex) -> Result<&'a PkidxIndex, (PkidxStatus, String)> {
    idx.as_ref().ok_or_else(|| null("index"))
}

/// Message for the last failed call on this thread, or an empty string.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn pkidx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds an index over `len` bytes. `force_threshold` of 0 picks the
/// default heavy-node threshold.
///
/// # Safety
/// `text` must point to `len` readable bytes and `out` to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn pkidx_build(
    text: *const u8,
    len: usize,
    force_threshold: usize,
    out: *mut *mut PkidxIndex,
) -> PkidxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let raw = bytes(text, len, "text")?;
        let opts = BuildOptions { force_threshold: (force_threshold > 0).then_some(force_threshold) };
        let index = Index::build_with(raw, &opts).map_err(fail)?;
        *out = Box::into_raw(Box::new(PkidxIndex { file: IndexFile::new(index, Vec::new()) }));
        Ok(())
    })
}

/// Loads an index file written by `pkidx_save` or the `pkidx build` tool.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn pkidx_load(path: *const c_char, out: *mut *mut PkidxIndex) -> PkidxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let file = IndexFile::load(to_path(path)?).map_err(fail)?;
        *out = Box::into_raw(Box::new(PkidxIndex { file }));
        Ok(())
    })
}

/// # Safety
/// `idx` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pkidx_save(idx: *const PkidxIndex, path: *const c_char) -> PkidxStatus {
    guard(|| handle(idx)?.file.save(to_path(path)?).map_err(fail))
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `idx` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pkidx_free(idx: *mut PkidxIndex) {
    if !idx.is_null() {
        drop(Box::from_raw(idx));
    }
}

/// Length of the indexed text, or 0 for a null handle.
///
/// # Safety
/// `idx` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pkidx_len(idx: *const PkidxIndex) -> usize {
    idx.as_ref().map_or(0, |h| h.file.index.len())
}

/// # Safety
/// `pattern` must point to `len` readable bytes and `count` be writable.
#[no_mangle]
pub unsafe extern "C" fn pkidx_count(
    idx: *const PkidxIndex,
    pattern: *const u8,
    len: usize,
    count: *mut usize,
) -> PkidxStatus {
    guard(|| {
        let h = handle(idx)?;
        let p = bytes(pattern, len, "pattern")?;
        let count = count.as_mut().ok_or_else(|| null("count"))?;
        *count = h.file.count(p);
        Ok(())
    })
}

/// Occurrence positions in suffix order. The array is owned by the caller
/// and must be released with `pkidx_positions_free`; it is null when there
/// are no occurrences.
///
/// # Safety
/// `pattern` must point to `len` readable bytes; `positions` and `count`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn pkidx_locate(
    idx: *const PkidxIndex,
    pattern: *const u8,
    len: usize,
    positions: *mut *mut usize,
    count: *mut usize,
) -> PkidxStatus {
    guard(|| {
        let h = handle(idx)?;
        let p = bytes(pattern, len, "pattern")?;
        let positions = positions.as_mut().ok_or_else(|| null("positions"))?;
        let count = count.as_mut().ok_or_else(|| null("count"))?;
        let occ = h.file.occurrences(p).into_boxed_slice();
        *count = occ.len();
        *positions = if occ.is_empty() { ptr::null_mut() } else { Box::into_raw(occ) as *mut usize };
        Ok(())
    })
}

/// # Safety
/// `positions` and `count` must come from one `pkidx_locate` call, or
/// `positions` must be null.
#[no_mangle]
pub unsafe extern "C" fn pkidx_positions_free(positions: *mut usize, count: usize) {
    if !positions.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(positions, count)));
    }
}

/// Start of the largest suffix smaller than the pattern. `*found` is false
/// when every suffix is at least the pattern.
///
/// # Safety
/// `pattern` must point to `len` readable bytes; `found` and `position`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn pkidx_predecessor(
    idx: *const PkidxIndex,
    pattern: *const u8,
    len: usize,
    found: *mut bool,
    position: *mut usize,
) -> PkidxStatus {
    guard(|| {
        let h = handle(idx)?;
        let p = bytes(pattern, len, "pattern")?;
        let found = found.as_mut().ok_or_else(|| null("found"))?;
        let position = position.as_mut().ok_or_else(|| null("position"))?;
        let pred = h.file.index.predecessor(p);
        *found = pred.is_some();
        *position = pred.unwrap_or(0);
        Ok(())
    })
}
