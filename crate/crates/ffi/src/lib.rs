//! C interface to the xdt transpiler.
//!
//! Programs live behind an opaque [`XdtProgram`] handle. Every fallible call
//! returns an [`XdtStatus`]; text results are heap strings owned by the
//! caller and released with [`xdt_string_free`]. When a call fails and the
//! caller passed a non-null `message` out-pointer, it receives a
//! human-readable explanation (also to be freed with `xdt_string_free`).

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use xdt::diagnostic::Diagnostic;
use xdt::emitter::{emit_dsl, emit_program, RenderConfig};
use xdt::growlang::{infer_exp, parse_exp, print_exp, PrintHandlers};
use xdt::{encode_program, parse_program, validate_program, EncodeMode, Program};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XdtStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Parse or validation errors; details in `message`.
    Diagnostics = 3,
    /// growlang type error; details in `message`.
    TypeError = 4,
    InvalidMode = 5,
    Internal = 6,
}

/// Encoding mode for [`xdt_program_encode`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XdtMode {
    Compact = 0,
    Naive = 1,
}

/// A parsed declaration program.
pub struct XdtProgram {
    text: String,
    program: Program,
}

struct Failure(XdtStatus, String);

type Outcome<T> = Result<T, Failure>;

fn to_c(s: String) -> *mut c_char {
    match CString::new(s) {
        Ok(c) => c.into_raw(),
        Err(e) => {
            let mut bytes = e.into_vec();
            bytes.retain(|b| *b != 0);
            CString::new(bytes).map_or(ptr::null_mut(), CString::into_raw)
        }
    }
}

unsafe fn input<'a>(s: *const c_char) -> Outcome<&'a str> {
    if s.is_null() {
        return Err(Failure(XdtStatus::NullArgument, "null string argument".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(XdtStatus::InvalidUtf8, e.to_string()))
}

fn render(diags: &[Diagnostic], text: &str) -> String {
    diags
        .iter()
        .map(|d| d.clone().locate(None, text).to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

/// Runs `f`, storing its text result in `*out` and any failure text in
/// `*message`.
unsafe fn guarded(
    out: *mut *mut c_char,
    message: *mut *mut c_char,
    f: impl FnOnce() -> Outcome<String>,
) -> XdtStatus {
    if !message.is_null() {
        *message = ptr::null_mut();
    }
    if out.is_null() {
        return XdtStatus::NullArgument;
    }
    *out = ptr::null_mut();
    let result = catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|_| Err(Failure(XdtStatus::Internal, "internal error".into())));
    match result {
        Ok(s) => {
            *out = to_c(s);
            XdtStatus::Ok
        }
        Err(Failure(status, text)) => {
            if !message.is_null() {
                *message = to_c(text);
            }
            status
        }
    }
}

/// Parses `source` into a new program handle stored in `*program`.
///
/// # Safety
/// `source` must be null or a NUL-terminated string; `program` must be null
/// or writable; `message` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn xdt_program_parse(
    source: *const c_char,
    program: *mut *mut XdtProgram,
    message: *mut *mut c_char,
) -> XdtStatus {
    if program.is_null() {
        return XdtStatus::NullArgument;
    }
    *program = ptr::null_mut();
    let mut handle = None;
    let mut scratch = ptr::null_mut();
    let status = guarded(&mut scratch, message, || {
        let text = input(source)?;
        let parsed = parse_program(text).map_err(|d| Failure(XdtStatus::Diagnostics, render(&d, text)))?;
        handle = Some(Box::new(XdtProgram {
            text: text.to_owned(),
            program: parsed,
        }));
        Ok(String::new())
    });
    xdt_string_free(scratch);
    if let Some(h) = handle {
        *program = Box::into_raw(h);
    }
    status
}

/// Releases a handle from [`xdt_program_parse`]. Null is ignored.
///
/// # Safety
/// `program` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xdt_program_free(program: *mut XdtProgram) {
    if !program.is_null() {
        drop(Box::from_raw(program));
    }
}

unsafe fn handle<'a>(p: *const XdtProgram) -> Outcome<&'a XdtProgram> {
    p.as_ref()
        .ok_or_else(|| Failure(XdtStatus::NullArgument, "null program handle".into()))
}

/// Number of declarations and extensions in the program, or -1 for a null
/// handle.
///
/// # Safety
/// `program` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn xdt_program_declaration_count(program: *const XdtProgram) -> i64 {
    match program.as_ref() {
        Some(h) => (h.program.extensibles.len() + h.program.extensions.len()) as i64,
        None => -1,
    }
}

/// Validates the program. `*report` receives every diagnostic, one per
/// line (empty when clean); the status is `Diagnostics` when any is an
/// error.
///
/// # Safety
/// `program` must be a live handle; `report` and `message` as in
/// [`xdt_program_parse`].
#[no_mangle]
pub unsafe extern "C" fn xdt_program_validate(
    program: *const XdtProgram,
    report: *mut *mut c_char,
    message: *mut *mut c_char,
) -> XdtStatus {
    let mut failed = false;
    let status = guarded(report, message, || {
        let h = handle(program)?;
        let diags = validate_program(&h.program);
        failed = diags.iter().any(Diagnostic::is_error);
        Ok(render(&diags, &h.text))
    });
    if status == XdtStatus::Ok && failed {
        XdtStatus::Diagnostics
    } else {
        status
    }
}

/// Encodes the program to Haskell source in `*output`. `mode` is an
/// [`XdtMode`] value.
///
/// # Safety
/// As [`xdt_program_validate`].
#[no_mangle]
pub unsafe extern "C" fn xdt_program_encode(
    program: *const XdtProgram,
    mode: i32,
    output: *mut *mut c_char,
    message: *mut *mut c_char,
) -> XdtStatus {
    guarded(output, message, || {
        let h = handle(program)?;
        let mode = match mode {
            0 => EncodeMode::Compact,
            1 => EncodeMode::Naive,
            other => return Err(Failure(XdtStatus::InvalidMode, format!("unknown mode {other}"))),
        };
        let encoded =
            encode_program(&h.program, mode).map_err(|d| Failure(XdtStatus::Diagnostics, render(&d, &h.text)))?;
        Ok(emit_program(&encoded, &RenderConfig::default()))
    })
}

/// Renders the program back to declaration-language source.
///
/// # Safety
/// As [`xdt_program_validate`].
#[no_mangle]
pub unsafe extern "C" fn xdt_program_echo(
    program: *const XdtProgram,
    output: *mut *mut c_char,
    message: *mut *mut c_char,
) -> XdtStatus {
    guarded(output, message, || Ok(emit_dsl(&handle(program)?.program)))
}

/// Infers the type of a growlang expression; `*ty` receives it printed.
///
/// # Safety
/// As [`xdt_program_parse`], with `ty` in place of `program`.
#[no_mangle]
pub unsafe extern "C" fn xdt_growlang_infer(
    source: *const c_char,
    ty: *mut *mut c_char,
    message: *mut *mut c_char,
) -> XdtStatus {
    guarded(ty, message, || {
        let text = input(source)?;
        let tree = parse_exp(text).map_err(|d| Failure(XdtStatus::Diagnostics, render(&d, text)))?;
        let r = infer_exp(&tree).map_err(|e| Failure(XdtStatus::TypeError, e.render(text)))?;
        Ok(r.result.to_string())
    })
}

/// Parses and pretty-prints a growlang expression.
///
/// # Safety
/// As [`xdt_growlang_infer`].
#[no_mangle]
pub unsafe extern "C" fn xdt_growlang_print(
    source: *const c_char,
    output: *mut *mut c_char,
    message: *mut *mut c_char,
) -> XdtStatus {
    guarded(output, message, || {
        let text = input(source)?;
        let tree = parse_exp(text).map_err(|d| Failure(XdtStatus::Diagnostics, render(&d, text)))?;
        Ok(print_exp(tree.root(), &PrintHandlers::default()))
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn xdt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Static, NUL-terminated name of a status code; "unknown" for values
/// outside [`XdtStatus`].
#[no_mangle]
pub extern "C" fn xdt_status_name(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        0 => c"ok",
        1 => c"null-argument",
        2 => c"invalid-utf8",
        3 => c"diagnostics",
        4 => c"type-error",
        5 => c"invalid-mode",
        6 => c"internal",
        _ => c"unknown",
    };
    s.as_ptr()
}
