//! C ABI for websplit.
//!
//! Every fallible call returns a [`WsStatus`] and writes its result through
//! an out-pointer. On failure the message is kept per thread and can be read
//! with [`ws_last_error`]. Strings returned through out-pointers are owned by
//! the caller and must be released with [`ws_string_free`]. MRs cross the
//! boundary as JSON arrays of `"subject | property | object"` strings.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use libc::c_char;
use websplit::corpus::Segmenter;
use websplit::eval::bleu4_multi_ref;
use websplit::generator::{GeneratorBackend, RetrievalIndex, TemplateGenerator};
use websplit::pipeline::{split_and_rephrase, PipelineConfig};
use websplit::rdf::TripleSet;
use websplit::splitter::SplitModel;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Io = 4,
    Panic = 5,
}

/// Opaque split model handle.
pub struct WsSplitModel(SplitModel);

/// Opaque retrieval index handle.
pub struct WsIndex(RetrievalIndex);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(WsStatus, String);

impl From<websplit::Error> for Fail {
    fn from(e: websplit::Error) -> Self {
        let status = if e.is_io() { WsStatus::Io } else { WsStatus::InvalidInput };
        Fail(status, e.to_string())
    }
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> WsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            WsStatus::Ok
        }
        Ok(Err(Fail(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            WsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(WsStatus::NullPointer, format!("{name} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(WsStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn mr_arg(p: *const c_char) -> Result<TripleSet, Fail> {
    let json = str_arg(p, "mr_json")?;
    serde_json::from_str(json).map_err(|e| Fail(WsStatus::InvalidInput, format!("mr_json: {e}")))
}

fn check_out<T>(out: *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(Fail(WsStatus::NullPointer, "out is NULL".to_string()))
    } else {
        Ok(())
    }
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(WsStatus::InvalidInput, "result contains NUL".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ws_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ws_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ws_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a split model from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_split_model_from_json(json: *const c_char, out: *mut *mut WsSplitModel) -> WsStatus {
    guard(|| {
        check_out(out)?;
        let model = SplitModel::from_json(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(WsSplitModel(model)));
        Ok(())
    })
}

/// Loads a split model file written by `websplit train-split`.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_split_model_load(path: *const c_char, out: *mut *mut WsSplitModel) -> WsStatus {
    guard(|| {
        check_out(out)?;
        let text = websplit::io::read_text(Path::new(str_arg(path, "path")?))?;
        *out = Box::into_raw(Box::new(WsSplitModel(SplitModel::from_json(&text)?)));
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ws_split_model_free(model: *mut WsSplitModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Parses a retrieval index from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_index_from_json(json: *const c_char, out: *mut *mut WsIndex) -> WsStatus {
    guard(|| {
        check_out(out)?;
        let index = RetrievalIndex::from_json(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(WsIndex(index)));
        Ok(())
    })
}

/// Loads an index file written by `websplit train-gen`.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ws_index_load(path: *const c_char, out: *mut *mut WsIndex) -> WsStatus {
    guard(|| {
        check_out(out)?;
        let text = websplit::io::read_text(Path::new(str_arg(path, "path")?))?;
        *out = Box::into_raw(Box::new(WsIndex(RetrievalIndex::from_json(&text)?)));
        Ok(())
    })
}

/// # Safety
/// `index` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ws_index_free(index: *mut WsIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}

/// Predicts a partition of `mr_json` and writes it as a JSON array of blocks,
/// each a JSON array of triple strings.
///
/// # Safety
/// `model` must be a live handle; `mr_json` a NUL-terminated string; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ws_predict_partition(
    model: *const WsSplitModel,
    mr_json: *const c_char,
    out: *mut *mut c_char,
) -> WsStatus {
    guard(|| {
        check_out(out)?;
        let model = model
            .as_ref()
            .ok_or_else(|| Fail(WsStatus::NullPointer, "model is NULL".to_string()))?;
        let partition = model.0.predict(&mr_arg(mr_json)?);
        let json = serde_json::to_string(partition.blocks()).expect("blocks serialize");
        put_string(out, json)
    })
}

/// Splits and rephrases one complex sentence. A NULL `model` splits into
/// single triples; a NULL `index` uses the template generator.
///
/// # Safety
/// Handles must be NULL or live; `complex` and `mr_json` NUL-terminated
/// strings; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ws_split_and_rephrase(
    model: *const WsSplitModel,
    index: *const WsIndex,
    complex: *const c_char,
    mr_json: *const c_char,
    out: *mut *mut c_char,
) -> WsStatus {
    guard(|| {
        check_out(out)?;
        let complex = str_arg(complex, "complex")?;
        let mr = mr_arg(mr_json)?;
        let fallback = SplitModel::default();
        let splitter = model.as_ref().map_or(&fallback, |m| &m.0);
        let generator: &dyn GeneratorBackend = match index.as_ref() {
            Some(i) => &i.0,
            None => &TemplateGenerator,
        };
        let config = PipelineConfig {
            splitter,
            generator,
            use_context: false,
        };
        put_string(out, split_and_rephrase(&config, complex, &mr).output())
    })
}

/// Sentence-level BLEU-4 (0 to 100) of `hyp` against `n_refs` references.
///
/// # Safety
/// `hyp` must be a NUL-terminated string, `refs` an array of `n_refs` such
/// strings, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ws_bleu4(
    hyp: *const c_char,
    refs: *const *const c_char,
    n_refs: usize,
    out: *mut f64,
) -> WsStatus {
    guard(|| {
        check_out(out)?;
        let hyp = str_arg(hyp, "hyp")?;
        if refs.is_null() && n_refs > 0 {
            return Err(Fail(WsStatus::NullPointer, "refs is NULL".to_string()));
        }
        let mut references = Vec::with_capacity(n_refs);
        for i in 0..n_refs {
            references.push(str_arg(*refs.add(i), "refs[i]")?);
        }
        *out = bleu4_multi_ref(hyp, &references);
        Ok(())
    })
}

/// Splits `text` into sentences with the default abbreviation lexicon and
/// writes them as a JSON array of strings.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ws_segment(text: *const c_char, out: *mut *mut c_char) -> WsStatus {
    guard(|| {
        check_out(out)?;
        let sentences = Segmenter::default().split(str_arg(text, "text")?);
        put_string(out, serde_json::to_string(&sentences).expect("strings serialize"))
    })
}
