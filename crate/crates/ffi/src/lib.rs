//! C ABI over `qpos`.
//!
//! Every fallible function returns a [`QposStatus`]. On failure a message is kept per thread
//! and can be read with [`qpos_last_error`] until the next failing call on that thread.
//! Handles are opaque and owned by the caller once returned; release them with the
//! matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use qpos::hmm::{
    brute_force_best_sequence, enumeration_cap, train_mle, HmmError, HmmModel, TaggedCorpus,
};
use qpos::qmax::{quantum_prob_max, QmaxError, ValueList};
use qpos::qsim::{Circuit, QsimError};
use qpos::qviterbi::{quantum_brute_force, quantum_viterbi, QviterbiError};
use qpos::viterbi::classical_viterbi;
use qpos::zx::{
    circuit_to_diagram, diagram_t_count, diagram_to_tensor, equal_up_to_scalar, full_simplify,
    ZxError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QposStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidArgument = 5,
    /// A size cap was exceeded (enumeration, simulator or tensor limits).
    Limit = 6,
    /// A Rust panic was caught at the boundary; the handle arguments are left untouched.
    Panic = 7,
}

/// Decoder selector for [`qpos_tag`], passed as a `uint32_t`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QposBackend {
    Classical = 0,
    Quantum = 1,
    Brute = 2,
    QuantumBrute = 3,
}

/// Diagram T-counts before and after simplification.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QposZxReport {
    pub qubits: usize,
    pub t_before: usize,
    pub t_after: usize,
    pub rewrite_steps: usize,
    /// 1 equal up to scalar, 0 not equal, -1 not checked.
    pub verified: i32,
}

/// Largest circuit width accepted with `verify` set.
pub const QPOS_MAX_VERIFY_QUBITS: usize = 8;

/// A trained or loaded tagging model.
pub struct QposModel {
    model: HmmModel,
    labels: Vec<CString>,
}

impl QposModel {
    fn new(model: HmmModel) -> Box<Self> {
        let labels = model
            .tagset()
            .tags()
            .iter()
            .map(|t| CString::new(t.as_str()).unwrap_or_default())
            .collect();
        Box::new(QposModel { model, labels })
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (QposStatus, String);

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QposStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QposStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            QposStatus::Panic
        }
    }
}

fn hmm_failure(e: HmmError) -> Failure {
    let status = match e {
        HmmError::Io(_) => QposStatus::Io,
        HmmError::Parse { .. } | HmmError::Json(_) => QposStatus::Parse,
        HmmError::EnumerationCap { .. } => QposStatus::Limit,
        _ => QposStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn qsim_failure(e: QsimError) -> Failure {
    let status = match e {
        QsimError::Parse { .. } => QposStatus::Parse,
        QsimError::TooManyQubits { .. } => QposStatus::Limit,
        _ => QposStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn zx_failure(e: ZxError) -> Failure {
    let status = match e {
        ZxError::TooLarge(_) => QposStatus::Limit,
        ZxError::Parse { .. } => QposStatus::Parse,
        _ => QposStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn qviterbi_failure(e: QviterbiError) -> Failure {
    match e {
        QviterbiError::Hmm(h) => hmm_failure(h),
        other => (QposStatus::InvalidArgument, other.to_string()),
    }
}

fn null(what: &str) -> Failure {
    (QposStatus::NullPointer, format!("{what} is NULL"))
}

/// # Safety
/// `p` is NULL or a NUL-terminated string valid for reads.
unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (QposStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` is NULL or points to a live model handle.
unsafe fn model_arg<'a>(p: *const QposModel) -> Result<&'a QposModel, Failure> {
    p.as_ref().ok_or_else(|| null("model"))
}

/// Message of the last failed call on this thread, or NULL. Valid until the next failing
/// call on the same thread.
#[no_mangle]
pub extern "C" fn qpos_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qpos_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Trains a bigram model with add-`alpha` smoothing from corpus text
/// (`word<TAB>tag` lines, blank line between sentences).
///
/// # Safety
/// `corpus_text` is a NUL-terminated string; `out` points to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qpos_model_train(
    corpus_text: *const c_char,
    alpha: f64,
    out: *mut *mut QposModel,
) -> QposStatus {
    guard(|| {
        let text = str_arg(corpus_text, "corpus_text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let corpus = TaggedCorpus::parse(text).map_err(hmm_failure)?;
        let model = train_mle(&corpus, alpha).map_err(hmm_failure)?;
        *out = Box::into_raw(QposModel::new(model));
        Ok(())
    })
}

/// Loads a model saved by [`qpos_model_save`] or the `qpos train` command.
///
/// # Safety
/// `path` is a NUL-terminated string; `out` points to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qpos_model_load(
    path: *const c_char,
    out: *mut *mut QposModel,
) -> QposStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let model = HmmModel::load(Path::new(path)).map_err(hmm_failure)?;
        *out = Box::into_raw(QposModel::new(model));
        Ok(())
    })
}

/// # Safety
/// `model` is a live handle; `path` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qpos_model_save(
    model: *const QposModel,
    path: *const c_char,
) -> QposStatus {
    guard(|| {
        let m = model_arg(model)?;
        let path = str_arg(path, "path")?;
        m.model.save(Path::new(path)).map_err(hmm_failure)
    })
}

/// Releases a model handle. NULL is ignored.
///
/// # Safety
/// `model` is NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qpos_model_free(model: *mut QposModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of tags K, or 0 for NULL.
///
/// # Safety
/// `model` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qpos_model_num_tags(model: *const QposModel) -> usize {
    model.as_ref().map_or(0, |m| m.model.k())
}

/// Vocabulary size N including the unknown-word entry, or 0 for NULL.
///
/// # Safety
/// `model` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qpos_model_vocab_size(model: *const QposModel) -> usize {
    model.as_ref().map_or(0, |m| m.model.n())
}

/// Label of tag `index`, owned by the model; NULL when out of range.
///
/// # Safety
/// `model` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qpos_model_tag_label(
    model: *const QposModel,
    index: usize,
) -> *const c_char {
    model
        .as_ref()
        .and_then(|m| m.labels.get(index))
        .map_or(std::ptr::null(), |c| c.as_ptr())
}

/// Decodes `n_words` words with the selected [`QposBackend`]. Writes one tag index per word
/// to `out_tags` and the path probability to `out_score` (may be NULL). `seed` and
/// `retries` are used by the quantum backends only.
///
/// # Safety
/// `words` points to `n_words` NUL-terminated strings; `out_tags` has room for `n_words`
/// entries; `model` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn qpos_tag(
    model: *const QposModel,
    words: *const *const c_char,
    n_words: usize,
    backend: u32,
    seed: u64,
    retries: usize,
    out_tags: *mut usize,
    out_score: *mut f64,
) -> QposStatus {
    guard(|| {
        let m = &model_arg(model)?.model;
        if words.is_null() {
            return Err(null("words"));
        }
        if out_tags.is_null() {
            return Err(null("out_tags"));
        }
        if n_words == 0 {
            return Err((QposStatus::InvalidArgument, "empty sentence".into()));
        }
        let ws = std::slice::from_raw_parts(words, n_words)
            .iter()
            .map(|&w| str_arg(w, "word"))
            .collect::<Result<Vec<&str>, _>>()?;
        let (obs, _) = m.observe(&ws).map_err(hmm_failure)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (states, score) = match backend {
            b if b == QposBackend::Classical as u32 => {
                let (p, _) = classical_viterbi(m, &obs).map_err(hmm_failure)?;
                (p.states, p.score)
            }
            b if b == QposBackend::Quantum as u32 => {
                let q = quantum_viterbi(m, &obs, &mut rng, retries).map_err(qviterbi_failure)?;
                (q.path.states, q.path.score)
            }
            b if b == QposBackend::Brute as u32 => {
                brute_force_best_sequence(m, &obs).map_err(hmm_failure)?
            }
            b if b == QposBackend::QuantumBrute as u32 => {
                let (p, _) = quantum_brute_force(m, &obs, &mut rng, retries, enumeration_cap())
                    .map_err(qviterbi_failure)?;
                (p.states, p.score)
            }
            other => {
                return Err((
                    QposStatus::InvalidArgument,
                    format!("unknown backend {other}"),
                ))
            }
        };
        std::slice::from_raw_parts_mut(out_tags, n_words).copy_from_slice(&states);
        if !out_score.is_null() {
            *out_score = score;
        }
        Ok(())
    })
}

/// Quantum maximum finding over `len` finite values with the default query budget.
/// Any of the out pointers may be NULL.
///
/// # Safety
/// `values` points to `len` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn qpos_quantum_max(
    values: *const f64,
    len: usize,
    seed: u64,
    out_value: *mut f64,
    out_index: *mut usize,
    out_queries: *mut u64,
) -> QposStatus {
    guard(|| {
        if values.is_null() {
            return Err(null("values"));
        }
        let xs = std::slice::from_raw_parts(values, len).to_vec();
        let v = ValueList::new(xs)
            .map_err(|e: QmaxError| (QposStatus::InvalidArgument, e.to_string()))?;
        if v.padded_len() > 1 << qpos::qsim::MAX_QUBITS {
            return Err((
                QposStatus::Limit,
                format!("{len} values exceed the simulator"),
            ));
        }
        let (x, i, ledger) = quantum_prob_max(&v, &mut ChaCha8Rng::seed_from_u64(seed));
        if !out_value.is_null() {
            *out_value = x;
        }
        if !out_index.is_null() {
            *out_index = i;
        }
        if !out_queries.is_null() {
            *out_queries = ledger.oracle_queries;
        }
        Ok(())
    })
}

/// Parses a circuit in the line format (`H 0`, `CNOT 0 1`, `RZ 1 pi/8`, ...), simplifies
/// its ZX diagram and reports the T-counts. `verify` (at most 8 qubits) compares the
/// tensors before and after.
///
/// # Safety
/// `circuit_text` is a NUL-terminated string; `out` points to a writable report.
#[no_mangle]
pub unsafe extern "C" fn qpos_zx_optimize(
    circuit_text: *const c_char,
    zero_inputs: bool,
    verify: bool,
    out: *mut QposZxReport,
) -> QposStatus {
    guard(|| {
        let text = str_arg(circuit_text, "circuit_text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c: Circuit = text.parse().map_err(qsim_failure)?;
        if verify && c.n_qubits() > QPOS_MAX_VERIFY_QUBITS {
            return Err((
                QposStatus::Limit,
                format!("verify supports at most {QPOS_MAX_VERIFY_QUBITS} qubits"),
            ));
        }
        let mut d = circuit_to_diagram(&c);
        if zero_inputs {
            d.plug_all_inputs_zero();
        }
        let (g, trace) = full_simplify(&d);
        let verified = if verify {
            let a = diagram_to_tensor(&d).map_err(zx_failure)?;
            let b = diagram_to_tensor(&g).map_err(zx_failure)?;
            equal_up_to_scalar(&a, &b, 1e-9) as i32
        } else {
            -1
        };
        *out = QposZxReport {
            qubits: c.n_qubits(),
            t_before: diagram_t_count(&d),
            t_after: diagram_t_count(&g),
            rewrite_steps: trace.len(),
            verified,
        };
        Ok(())
    })
}
