#ifndef CWS_CLUSTER_H
#define CWS_CLUSTER_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  CWS_STATUS_OK = 0,
  CWS_STATUS_NULL_POINTER = 1,
  CWS_STATUS_INVALID_UTF8 = 2,
  CWS_STATUS_PARSE = 3,
  CWS_STATUS_INVALID_INPUT = 4,
  CWS_STATUS_INVALID_CODE = 5,
  CWS_STATUS_SIZE_CAP = 6,
  CWS_STATUS_UNCORRECTABLE = 7,
  CWS_STATUS_IO = 8,
  CWS_STATUS_OVERFLOW = 9,
  CWS_STATUS_INTERNAL = 10,
  CWS_STATUS_PANIC = 11,
} CwsStatus;

typedef enum {
  CWS_STRATEGY_CLUSTERED = 0,
  CWS_STRATEGY_EXHAUSTIVE = 1,
} CwsStrategy;

typedef enum {
  /**
   * Dense state vector, at most 12 qubits.
   */
  CWS_BACKEND_DENSE = 0,
  /**
   * Sparse graph-basis simulation.
   */
  CWS_BACKEND_GRAPH_BASIS = 1,
} CwsBackend;

/**
 * A loaded code.
 */
typedef struct CwsCode CwsCode;

/**
 * A decoder bound to one code and error weight.
 */
typedef struct CwsDecoder CwsDecoder;

/**
 * The outcome of one encode, corrupt, decode, recover trial.
 */
typedef struct CwsReport CwsReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the calling thread's last error message, or null if the last call
 * succeeded. Free with [`cws_string_free`].
 */
char *cws_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed at most once.
 */
void cws_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *cws_version(void);

/**
 * Parses a code from the text of a code file.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
CwsStatus cws_code_parse(const char *text, CwsCode **out);

/**
 * Loads a code file from disk.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
CwsStatus cws_code_load(const char *path, CwsCode **out);

/**
 * # Safety
 * `code` must be null or a handle from this library, freed at most once.
 */
void cws_code_free(CwsCode *code);

/**
 * Number of physical qubits; 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t cws_code_num_qubits(const CwsCode *code);

/**
 * Number of codewords `K`; 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t cws_code_dimension(const CwsCode *code);

/**
 * Declared minimum distance, or 0 when the code file does not declare one.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t cws_code_distance(const CwsCode *code);

/**
 * Builds a decoder for errors of weight `<= t`. The code is copied, so the
 * code handle may be freed afterwards.
 *
 * # Safety
 * `code` must be a live handle and `out` a valid pointer.
 */
CwsStatus cws_decoder_new(const CwsCode *code, size_t t, bool ust_acceleration, CwsDecoder **out);

/**
 * # Safety
 * `decoder` must be null or a handle from this library, freed at most once.
 */
void cws_decoder_free(CwsDecoder *decoder);

/**
 * Encodes a random logical state drawn from `seed`, applies `error` (for
 * example `"X1 Z3"`, qubits numbered from 1), decodes and applies the
 * recovery. An error outside the correctable set may yield
 * [`CwsStatus::Uncorrectable`].
 *
 * # Safety
 * `decoder` must be a live handle, `error` a NUL-terminated string and `out`
 * a valid pointer.
 */
CwsStatus cws_decoder_run(const CwsDecoder *decoder,
                          CwsStrategy strategy,
                          CwsBackend backend,
                          const char *error,
                          uint64_t seed,
                          CwsReport **out);

/**
 * # Safety
 * `report` must be null or a handle from this library, freed at most once.
 */
void cws_report_free(CwsReport *report);

/**
 * Syndrome measurements performed; 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t cws_report_measurements(const CwsReport *report);

/**
 * Two-qubit gates over all measurements performed; 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
uint64_t cws_report_gate_total(const CwsReport *report);

/**
 * Overlap between the recovered and the original state; -1 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
double cws_report_fidelity(const CwsReport *report);

/**
 * Whether the recovered state matches the original within tolerance.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
bool cws_report_recovered(const CwsReport *report);

/**
 * Identified error class as a bit string. Free with [`cws_string_free`].
 *
 * # Safety
 * `report` must be null or a live handle.
 */
char *cws_report_class(const CwsReport *report);

/**
 * Applied recovery operator. Free with [`cws_string_free`].
 *
 * # Safety
 * `report` must be null or a live handle.
 */
char *cws_report_recovery(const CwsReport *report);

/**
 * Full decoding report, transcript included, as JSON. Free with
 * [`cws_string_free`].
 *
 * # Safety
 * `report` must be null or a live handle.
 */
char *cws_report_json(const CwsReport *report);

/**
 * Number of Paulis of weight `<= t` on `n` qubits, identity included.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
CwsStatus cws_sphere_count(size_t n, size_t t, uint64_t *out);

/**
 * Worst-case number of measurements of the clustered decoder.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
CwsStatus cws_clustered_count(size_t n, size_t t, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CWS_CLUSTER_H */
