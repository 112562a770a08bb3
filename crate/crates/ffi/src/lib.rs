//! C ABI over the `carpool` orientation engine.
//!
//! Every function returns a [`CarpoolStatus`] (or a plain value for the
//! infallible getters) and never unwinds across the boundary. Engines are
//! opaque handles created with `carpool_engine_new` and released with
//! `carpool_engine_free`. A handle must not be used from two threads at once.
//!
//! The generated header lives in `include/carpool.h`.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use carpool::{check_all_invariants, EdgeId, Engine, Error, UpdateEvent, UpdateResult, VertexId};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarpoolStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidSize = 2,
    VertexOutOfRange = 3,
    SelfLoop = 4,
    UnknownEdge = 5,
    DeadEdge = 6,
    NoLiveEdge = 7,
    InvariantViolation = 8,
    Poisoned = 9,
    BufferTooSmall = 10,
    Panic = 11,
    Internal = 12,
}

impl From<&Error> for CarpoolStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidSize => CarpoolStatus::InvalidSize,
            Error::VertexOutOfRange { .. } => CarpoolStatus::VertexOutOfRange,
            Error::SelfLoop(_) => CarpoolStatus::SelfLoop,
            Error::UnknownEdge(_) => CarpoolStatus::UnknownEdge,
            Error::DeadEdge(_) => CarpoolStatus::DeadEdge,
            Error::NoLiveEdge(..) => CarpoolStatus::NoLiveEdge,
            Error::InvariantViolation(_) => CarpoolStatus::InvariantViolation,
            Error::Poisoned => CarpoolStatus::Poisoned,
            _ => CarpoolStatus::Internal,
        }
    }
}

/// Opaque engine handle.
pub struct CarpoolEngine {
    engine: Engine,
    last: Option<UpdateResult>,
    last_error: Option<CString>,
    panicked: bool,
}

impl CarpoolEngine {
    fn fail(&mut self, status: CarpoolStatus, message: String) -> CarpoolStatus {
        let message = message.replace('\0', " ");
        self.last_error = Some(CString::new(message).expect("nul bytes removed"));
        status
    }

    fn error(&mut self, e: Error) -> CarpoolStatus {
        let status = CarpoolStatus::from(&e);
        self.fail(status, e.to_string())
    }

    fn apply(&mut self, event: UpdateEvent, out_edge: *mut u64) -> CarpoolStatus {
        match self.engine.apply(event) {
            Ok(r) => {
                if !out_edge.is_null() {
                    // SAFETY: caller passes a valid pointer or null.
                    unsafe { *out_edge = r.edge.0 };
                }
                self.last = Some(r);
                self.last_error = None;
                CarpoolStatus::Ok
            }
            Err(e) => self.error(e),
        }
    }
}

/// Runs `f` on the handle, converting panics into `Panic` and refusing
/// handles that panicked before.
fn with_engine(
    handle: *mut CarpoolEngine,
    f: impl FnOnce(&mut CarpoolEngine) -> CarpoolStatus,
) -> CarpoolStatus {
    if handle.is_null() {
        return CarpoolStatus::NullPointer;
    }
    // SAFETY: non-null handles come from `carpool_engine_new`.
    let h = unsafe { &mut *handle };
    if h.panicked {
        return CarpoolStatus::Poisoned;
    }
    match catch_unwind(AssertUnwindSafe(|| f(&mut *h))) {
        Ok(status) => status,
        Err(_) => {
            h.panicked = true;
            h.fail(
                CarpoolStatus::Panic,
                "internal panic; handle is unusable".into(),
            )
        }
    }
}

/// Creates an engine for `n` vertices and stores the handle in `*out`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn carpool_engine_new(n: u32, out: *mut *mut CarpoolEngine) -> CarpoolStatus {
    if out.is_null() {
        return CarpoolStatus::NullPointer;
    }
    let made = catch_unwind(|| Engine::new(n));
    match made {
        Ok(Ok(engine)) => {
            let h = Box::new(CarpoolEngine {
                engine,
                last: None,
                last_error: None,
                panicked: false,
            });
            *out = Box::into_raw(h);
            CarpoolStatus::Ok
        }
        Ok(Err(e)) => {
            *out = ptr::null_mut();
            CarpoolStatus::from(&e)
        }
        Err(_) => {
            *out = ptr::null_mut();
            CarpoolStatus::Panic
        }
    }
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `handle` must be null or a live handle from `carpool_engine_new`, and is
/// invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn carpool_engine_free(handle: *mut CarpoolEngine) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Inserts an edge between `u` and `v`; its id goes to `*out_edge` when
/// that is non-null.
///
/// # Safety
/// `handle` must be null or live; `out_edge` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn carpool_insert(
    handle: *mut CarpoolEngine,
    u: u32,
    v: u32,
    out_edge: *mut u64,
) -> CarpoolStatus {
    with_engine(handle, |h| {
        h.apply(UpdateEvent::Insert(VertexId(u), VertexId(v)), out_edge)
    })
}

/// Deletes the edge with the given id.
///
/// # Safety
/// `handle` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn carpool_delete(handle: *mut CarpoolEngine, edge: u64) -> CarpoolStatus {
    with_engine(handle, |h| {
        h.apply(UpdateEvent::DeleteById(EdgeId(edge)), ptr::null_mut())
    })
}

/// Deletes the most recently inserted live edge between `u` and `v`; the
/// removed id goes to `*out_edge` when that is non-null.
///
/// # Safety
/// `handle` must be null or live; `out_edge` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn carpool_delete_pair(
    handle: *mut CarpoolEngine,
    u: u32,
    v: u32,
    out_edge: *mut u64,
) -> CarpoolStatus {
    with_engine(handle, |h| {
        h.apply(
            UpdateEvent::DeleteByPair(VertexId(u), VertexId(v)),
            out_edge,
        )
    })
}

/// Copies the ids of edges flipped by the last successful update into
/// `buf`. `*out_len` always receives the number of flips; if it exceeds
/// `cap`, nothing is copied and `BufferTooSmall` is returned.
///
/// # Safety
/// `buf` must be valid for `cap` writes (or null when `cap` is 0);
/// `out_len` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn carpool_last_flips(
    handle: *mut CarpoolEngine,
    buf: *mut u64,
    cap: usize,
    out_len: *mut usize,
) -> CarpoolStatus {
    if out_len.is_null() || (buf.is_null() && cap > 0) {
        return CarpoolStatus::NullPointer;
    }
    with_engine(handle, |h| {
        let flips = h.last.as_ref().map(|r| r.flips.as_slice()).unwrap_or(&[]);
        *out_len = flips.len();
        if flips.len() > cap {
            return CarpoolStatus::BufferTooSmall;
        }
        for (i, e) in flips.iter().enumerate() {
            *buf.add(i) = e.0;
        }
        CarpoolStatus::Ok
    })
}

/// Largest `|out - in|` over all vertices.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn carpool_max_discrepancy(
    handle: *mut CarpoolEngine,
    out: *mut u32,
) -> CarpoolStatus {
    if out.is_null() {
        return CarpoolStatus::NullPointer;
    }
    with_engine(handle, |h| {
        *out = h.engine.max_discrepancy();
        CarpoolStatus::Ok
    })
}

/// Current direction of a live edge.
///
/// # Safety
/// `tail` and `head` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn carpool_edge_direction(
    handle: *mut CarpoolEngine,
    edge: u64,
    tail: *mut u32,
    head: *mut u32,
) -> CarpoolStatus {
    if tail.is_null() || head.is_null() {
        return CarpoolStatus::NullPointer;
    }
    with_engine(handle, |h| {
        if let Err(e) = h.engine.graph().live_edge(EdgeId(edge)) {
            return h.error(e);
        }
        match h.engine.orientation().get(EdgeId(edge)) {
            Some((t, hd)) => {
                *tail = t.0;
                *head = hd.0;
                CarpoolStatus::Ok
            }
            None => h.fail(
                CarpoolStatus::Internal,
                format!("live edge {edge} has no direction"),
            ),
        }
    })
}

/// Number of live edges.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn carpool_live_edges(
    handle: *mut CarpoolEngine,
    out: *mut usize,
) -> CarpoolStatus {
    if out.is_null() {
        return CarpoolStatus::NullPointer;
    }
    with_engine(handle, |h| {
        *out = h.engine.graph().live_count();
        CarpoolStatus::Ok
    })
}

/// Recomputes every invariant from scratch. `*out_violations` receives the
/// number of violations; a non-zero count also returns
/// `InvariantViolation` with the details in `carpool_last_error`.
///
/// # Safety
/// `out_violations` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn carpool_check_invariants(
    handle: *mut CarpoolEngine,
    out_violations: *mut usize,
) -> CarpoolStatus {
    with_engine(handle, |h| {
        let v = check_all_invariants(&h.engine);
        if !out_violations.is_null() {
            *out_violations = v.len();
        }
        if v.is_empty() {
            CarpoolStatus::Ok
        } else {
            h.fail(CarpoolStatus::InvariantViolation, v.to_string())
        }
    })
}

/// Message for the last failed call on this handle, or null. The pointer
/// stays valid until the next call on the handle.
///
/// # Safety
/// `handle` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn carpool_last_error(handle: *const CarpoolEngine) -> *const c_char {
    match handle.as_ref().and_then(|h| h.last_error.as_ref()) {
        Some(s) => s.as_ptr(),
        None => ptr::null(),
    }
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn carpool_status_name(status: CarpoolStatus) -> *const c_char {
    let s: &'static CStr = match status {
        CarpoolStatus::Ok => c"ok",
        CarpoolStatus::NullPointer => c"null-pointer",
        CarpoolStatus::InvalidSize => c"invalid-size",
        CarpoolStatus::VertexOutOfRange => c"vertex-out-of-range",
        CarpoolStatus::SelfLoop => c"self-loop",
        CarpoolStatus::UnknownEdge => c"unknown-edge",
        CarpoolStatus::DeadEdge => c"dead-edge",
        CarpoolStatus::NoLiveEdge => c"no-live-edge",
        CarpoolStatus::InvariantViolation => c"invariant-violation",
        CarpoolStatus::Poisoned => c"poisoned",
        CarpoolStatus::BufferTooSmall => c"buffer-too-small",
        CarpoolStatus::Panic => c"panic",
        CarpoolStatus::Internal => c"internal",
    };
    s.as_ptr()
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn carpool_version() -> *const c_char {
    const V: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(s) => s,
            Err(_) => panic!("version has no interior nul"),
        };
    V.as_ptr()
}
