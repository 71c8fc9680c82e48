#ifndef STN_C_H
#define STN_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define STN_API __declspec(dllexport)
#else
#define STN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 1..10 match stn::ErrorCode. */
typedef enum stn_status {
  STN_OK = 0,
  STN_ERR_INVALID_ARGUMENT = 1,
  STN_ERR_DIMENSION = 2,
  STN_ERR_PARSE = 3,
  STN_ERR_UNSUPPORTED = 4,
  STN_ERR_CONTRADICTION = 5,
  STN_ERR_IMPOSSIBLE_OUTCOME = 6,
  STN_ERR_STALE = 7,
  STN_ERR_SIZE_LIMIT = 8,
  STN_ERR_IO = 9,
  STN_ERR_INTERNAL = 10,
  STN_ERR_UNKNOWN = 11
} stn_status;

typedef enum stn_method { STN_METHOD_MAST = 0, STN_METHOD_STN = 1 } stn_method;

typedef struct stn_circuit stn_circuit;
typedef struct stn_result stn_result;
typedef struct stn_bench_report stn_bench_report;
typedef struct stn_string stn_string;

/* Message for the last failing call on this thread; "" after a success. */
STN_API const char* stn_last_error(void);
STN_API const char* stn_status_name(stn_status s);

STN_API const char* stn_string_data(const stn_string* s);
STN_API void stn_string_free(stn_string* s);

/* Circuits */
STN_API stn_status stn_circuit_new(size_t num_qubits, stn_circuit** out);
/* On a parse failure *error_line (if non-null) receives the 1-based line. */
STN_API stn_status stn_circuit_parse(const char* text, stn_circuit** out, size_t* error_line);
STN_API stn_status stn_circuit_add(stn_circuit* c, const char* mnemonic, const size_t* qubits, size_t num_qubits,
                                   double angle);
STN_API size_t stn_circuit_num_qubits(const stn_circuit* c);
STN_API size_t stn_circuit_num_gates(const stn_circuit* c);
STN_API size_t stn_circuit_nonclifford_count(const stn_circuit* c);
STN_API stn_status stn_circuit_emit(const stn_circuit* c, stn_string** out);
STN_API void stn_circuit_free(stn_circuit* c);

/* uudagger != 0 appends the exact inverse. */
STN_API stn_status stn_gen_t_doped(size_t n, size_t t, uint64_t seed, int uudagger, stn_circuit** out);
/* decomposition is "four-t" or "seven-t". shift_out, if non-null, receives n bytes. */
STN_API stn_status stn_gen_hidden_shift(size_t n, size_t ccz_count, const char* decomposition, uint64_t seed,
                                        stn_circuit** out, uint8_t* shift_out);

/* Simulation */
typedef struct stn_run_options {
  stn_method method;
  const char* schedule; /* "left-to-right", "right-to-left", "middle-out-pairwise" */
  size_t chi_max;       /* 0 = unbounded */
  double svd_cutoff;
  uint64_t seed;
} stn_run_options;

STN_API void stn_run_options_default(stn_run_options* opts);
STN_API stn_status stn_run(const stn_circuit* c, const stn_run_options* opts, stn_result** out);
STN_API size_t stn_result_peak_chi(const stn_result* r);
STN_API size_t stn_result_resolution_peak_chi(const stn_result* r);
STN_API double stn_result_wall_ms(const stn_result* r);
STN_API size_t stn_result_num_outcomes(const stn_result* r);
STN_API stn_status stn_result_outcome(const stn_result* r, size_t i, size_t* gate_index, size_t* qubit, int* bit);
STN_API size_t stn_result_trace_length(const stn_result* r);
STN_API stn_status stn_result_trace_sample(const stn_result* r, size_t i, size_t* step, size_t* chi);
/* pauli is a letter string over the final state's qubits, e.g. "ZIX", optionally signed. */
STN_API stn_status stn_result_expectation(const stn_result* r, const char* pauli, double* out);
STN_API void stn_result_free(stn_result* r);

/* Benchmark harness */
typedef struct stn_bench_config {
  const char* family;        /* "tdoped", "uudagger", "hiddenshift" */
  const char* method;        /* "mast", "stn" */
  size_t n;
  size_t t;
  size_t ccz_count;
  const char* decomposition; /* hiddenshift: "four-t" or "seven-t" */
  size_t instances;
  size_t shots;
  uint64_t seed;
  const char* schedule;
  size_t chi_max;
  double svd_cutoff;
  const char* out_path;      /* NULL or "" for no CSV */
  size_t threads;            /* 0 = hardware concurrency */
} stn_bench_config;

STN_API void stn_bench_config_default(stn_bench_config* cfg);
STN_API stn_status stn_bench_run(const stn_bench_config* cfg, stn_bench_report** out);
STN_API size_t stn_bench_report_rows(const stn_bench_report* r);
/* Hidden-shift rows whose outcome equals the planted shift. */
STN_API size_t stn_bench_report_shift_matches(const stn_bench_report* r);
STN_API stn_status stn_bench_report_summary(const stn_bench_report* r, int plot, stn_string** out);
STN_API stn_status stn_bench_report_csv(const stn_bench_report* r, stn_string** out);
STN_API void stn_bench_report_free(stn_bench_report* r);

STN_API stn_status stn_bench_summarize(const char* const* paths, size_t count, int plot, stn_string** out);

STN_API stn_status stn_model_expected_chi(size_t n, size_t t, double* out);
STN_API stn_status stn_model_expected_chi_mc(size_t n, size_t t, size_t samples, uint64_t seed, double* out);
STN_API stn_status stn_x_probability(size_t n, uint64_t* num, uint64_t* den);

#ifdef __cplusplus
}
#endif

#endif
