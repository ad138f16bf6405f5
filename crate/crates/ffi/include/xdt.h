#ifndef XDT_H
#define XDT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Encoding mode for [`xdt_program_encode`].
typedef enum XdtMode {
  XDT_MODE_COMPACT = 0,
  XDT_MODE_NAIVE = 1,
} XdtMode;

// Result code of every fallible call.
typedef enum XdtStatus {
  XDT_STATUS_OK = 0,
  XDT_STATUS_NULL_ARGUMENT = 1,
  XDT_STATUS_INVALID_UTF8 = 2,
  // Parse or validation errors; details in `message`.
  XDT_STATUS_DIAGNOSTICS = 3,
  // growlang type error; details in `message`.
  XDT_STATUS_TYPE_ERROR = 4,
  XDT_STATUS_INVALID_MODE = 5,
  XDT_STATUS_INTERNAL = 6,
} XdtStatus;

// A parsed declaration program.
typedef struct XdtProgram XdtProgram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses `source` into a new program handle stored in `*program`.
//
// # Safety
// `source` must be null or a NUL-terminated string; `program` must be null
// or writable; `message` must be null or writable.
enum XdtStatus xdt_program_parse(const char *source, struct XdtProgram **program, char **message);

// Releases a handle from [`xdt_program_parse`]. Null is ignored.
//
// # Safety
// `program` must be null or a handle not yet freed.
void xdt_program_free(struct XdtProgram *program);

// Number of declarations and extensions in the program, or -1 for a null
// handle.
//
// # Safety
// `program` must be null or a live handle.
int64_t xdt_program_declaration_count(const struct XdtProgram *program);

// Validates the program. `*report` receives every diagnostic, one per
// line (empty when clean); the status is `Diagnostics` when any is an
// error.
//
// # Safety
// `program` must be a live handle; `report` and `message` as in
// [`xdt_program_parse`].
enum XdtStatus xdt_program_validate(const struct XdtProgram *program,
                                    char **report,
                                    char **message);

// Encodes the program to Haskell source in `*output`. `mode` is an
// [`XdtMode`] value.
//
// # Safety
// As [`xdt_program_validate`].
enum XdtStatus xdt_program_encode(const struct XdtProgram *program,
                                  int32_t mode,
                                  char **output,
                                  char **message);

// Renders the program back to declaration-language source.
//
// # Safety
// As [`xdt_program_validate`].
enum XdtStatus xdt_program_echo(const struct XdtProgram *program, char **output, char **message);

// Infers the type of a growlang expression; `*ty` receives it printed.
//
// # Safety
// As [`xdt_program_parse`], with `ty` in place of `program`.
enum XdtStatus xdt_growlang_infer(const char *source, char **ty, char **message);

// Parses and pretty-prints a growlang expression.
//
// # Safety
// As [`xdt_growlang_infer`].
enum XdtStatus xdt_growlang_print(const char *source, char **output, char **message);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void xdt_string_free(char *s);

// Static, NUL-terminated name of a status code; "unknown" for values
// outside [`XdtStatus`].
const char *xdt_status_name(int32_t status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XDT_H */
