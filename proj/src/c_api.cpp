#include "stn/stn_c.h"

#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "stn/bench.hpp"
#include "stn/circuit.hpp"
#include "stn/error.hpp"
#include "stn/mast.hpp"

struct stn_circuit {
  stn::Circuit c;
};

struct stn_result {
  stn::RunResult r;
};

struct stn_bench_report {
  stn::ExperimentResult res;
};

struct stn_string {
  std::string s;
};

namespace {

thread_local std::string g_last_error;

stn_status set_error(stn_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
stn_status guard(F&& f, size_t* error_line = nullptr) {
  try {
    f();
    g_last_error.clear();
    return STN_OK;
  } catch (const stn::ParseError& e) {
    if (error_line) *error_line = e.line();
    return set_error(STN_ERR_PARSE, e.what());
  } catch (const stn::Error& e) {
    return set_error(static_cast<stn_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(STN_ERR_SIZE_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return set_error(STN_ERR_UNKNOWN, e.what());
  } catch (...) {
    return set_error(STN_ERR_UNKNOWN, "unknown exception");
  }
}

void need(const void* p, const char* what) {
  if (!p) throw stn::Error(stn::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

std::string str_or(const char* s, const char* fallback) { return s && *s ? s : fallback; }

stn::ProjectionSchedule parse_schedule(const char* s) {
  const std::string name = str_or(s, "left-to-right");
  auto strat = stn::schedule_from_string(name);
  if (!strat || *strat == stn::ScheduleStrategy::Explicit)
    throw stn::Error(stn::ErrorCode::kInvalidArgument, "unknown schedule '" + name + "'");
  return {*strat, {}};
}

stn::CczDecomposition parse_decomposition(const char* s) {
  const std::string name = str_or(s, "four-t");
  auto d = stn::ccz_decomposition_from_string(name);
  if (!d) throw stn::Error(stn::ErrorCode::kInvalidArgument, "unknown decomposition '" + name + "'");
  return *d;
}

stn_string* make_string(std::string s) { return new stn_string{std::move(s)}; }

}  // namespace

extern "C" {

const char* stn_last_error(void) { return g_last_error.c_str(); }

const char* stn_status_name(stn_status s) {
  switch (s) {
    case STN_OK:
      return "ok";
    case STN_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case STN_ERR_DIMENSION:
      return "dimension mismatch";
    case STN_ERR_PARSE:
      return "parse error";
    case STN_ERR_UNSUPPORTED:
      return "unsupported";
    case STN_ERR_CONTRADICTION:
      return "contradiction";
    case STN_ERR_IMPOSSIBLE_OUTCOME:
      return "impossible outcome";
    case STN_ERR_STALE:
      return "stale decomposition";
    case STN_ERR_SIZE_LIMIT:
      return "size limit";
    case STN_ERR_IO:
      return "i/o error";
    case STN_ERR_INTERNAL:
      return "internal error";
    case STN_ERR_UNKNOWN:
      break;
  }
  return "unknown error";
}

const char* stn_string_data(const stn_string* s) { return s ? s->s.c_str() : ""; }
void stn_string_free(stn_string* s) { delete s; }

stn_status stn_circuit_new(size_t num_qubits, stn_circuit** out) {
  return guard([&] {
    need(out, "out");
    *out = new stn_circuit{stn::Circuit(num_qubits)};
  });
}

stn_status stn_circuit_parse(const char* text, stn_circuit** out, size_t* error_line) {
  if (error_line) *error_line = 0;
  return guard(
      [&] {
        need(text, "text");
        need(out, "out");
        *out = new stn_circuit{stn::parse_circuit(text)};
      },
      error_line);
}

stn_status stn_circuit_add(stn_circuit* c, const char* mnemonic, const size_t* qubits, size_t num_qubits,
                           double angle) {
  return guard([&] {
    need(c, "circuit");
    need(mnemonic, "mnemonic");
    if (num_qubits) need(qubits, "qubits");
    auto kind = stn::kind_from_mnemonic(mnemonic);
    if (!kind) throw stn::Error(stn::ErrorCode::kInvalidArgument, std::string("unknown gate '") + mnemonic + "'");
    c->c.add(*kind, std::vector<std::size_t>(qubits, qubits + num_qubits), angle);
  });
}

size_t stn_circuit_num_qubits(const stn_circuit* c) { return c ? c->c.num_qubits() : 0; }
size_t stn_circuit_num_gates(const stn_circuit* c) { return c ? c->c.size() : 0; }
size_t stn_circuit_nonclifford_count(const stn_circuit* c) { return c ? c->c.nonclifford_count() : 0; }

stn_status stn_circuit_emit(const stn_circuit* c, stn_string** out) {
  return guard([&] {
    need(c, "circuit");
    need(out, "out");
    *out = make_string(stn::emit_circuit(c->c));
  });
}

void stn_circuit_free(stn_circuit* c) { delete c; }

stn_status stn_gen_t_doped(size_t n, size_t t, uint64_t seed, int uudagger, stn_circuit** out) {
  return guard([&] {
    need(out, "out");
    const stn::TDopedSpec spec{n, t, seed};
    *out = new stn_circuit{uudagger ? stn::gen_uudagger(spec) : stn::gen_t_doped(spec)};
  });
}

stn_status stn_gen_hidden_shift(size_t n, size_t ccz_count, const char* decomposition, uint64_t seed,
                                stn_circuit** out, uint8_t* shift_out) {
  return guard([&] {
    need(out, "out");
    stn::HiddenShiftSpec spec;
    spec.n = n;
    spec.ccz_count = ccz_count;
    spec.decomposition = parse_decomposition(decomposition);
    spec.seed = seed;
    auto hs = stn::gen_hidden_shift(spec);
    if (shift_out) std::memcpy(shift_out, hs.shift.data(), hs.shift.size());
    *out = new stn_circuit{std::move(hs.circuit)};
  });
}

void stn_run_options_default(stn_run_options* opts) {
  if (!opts) return;
  opts->method = STN_METHOD_MAST;
  opts->schedule = "left-to-right";
  opts->chi_max = 0;
  opts->svd_cutoff = stn::TruncationPolicy{}.svd_cutoff;
  opts->seed = 0;
}

stn_status stn_run(const stn_circuit* c, const stn_run_options* opts, stn_result** out) {
  return guard([&] {
    need(c, "circuit");
    need(opts, "options");
    need(out, "out");
    stn::RunOptions ro;
    ro.policy.chi_max = opts->chi_max;
    ro.policy.svd_cutoff = opts->svd_cutoff;
    ro.schedule = parse_schedule(opts->schedule);
    stn::Rng rng(opts->seed);
    if (opts->method != STN_METHOD_MAST && opts->method != STN_METHOD_STN)
      throw stn::Error(stn::ErrorCode::kInvalidArgument, "unknown method");
    auto r = opts->method == STN_METHOD_MAST ? stn::run_mast(c->c, ro, rng) : stn::run_stn(c->c, ro, rng);
    *out = new stn_result{std::move(r)};
  });
}

size_t stn_result_peak_chi(const stn_result* r) { return r ? r->r.peak_chi : 0; }
size_t stn_result_resolution_peak_chi(const stn_result* r) { return r ? r->r.resolution_peak_chi : 0; }
double stn_result_wall_ms(const stn_result* r) { return r ? r->r.wall_ms : 0.0; }
size_t stn_result_num_outcomes(const stn_result* r) { return r ? r->r.outcomes.size() : 0; }

stn_status stn_result_outcome(const stn_result* r, size_t i, size_t* gate_index, size_t* qubit, int* bit) {
  return guard([&] {
    need(r, "result");
    if (i >= r->r.outcomes.size()) throw stn::Error(stn::ErrorCode::kInvalidArgument, "outcome index out of range");
    const auto& m = r->r.outcomes[i];
    if (gate_index) *gate_index = m.gate_index;
    if (qubit) *qubit = m.qubit;
    if (bit) *bit = m.bit;
  });
}

size_t stn_result_trace_length(const stn_result* r) { return r ? r->r.trace.samples.size() : 0; }

stn_status stn_result_trace_sample(const stn_result* r, size_t i, size_t* step, size_t* chi) {
  return guard([&] {
    need(r, "result");
    if (i >= r->r.trace.samples.size()) throw stn::Error(stn::ErrorCode::kInvalidArgument, "trace index out of range");
    const auto& s = r->r.trace.samples[i];
    if (step) *step = s.step;
    if (chi) *chi = s.chi;
  });
}

stn_status stn_result_expectation(const stn_result* r, const char* pauli, double* out) {
  return guard([&] {
    need(r, "result");
    need(pauli, "pauli");
    need(out, "out");
    *out = r->r.state.expectation(stn::PauliString::parse(pauli));
  });
}

void stn_result_free(stn_result* r) { delete r; }

void stn_bench_config_default(stn_bench_config* cfg) {
  if (!cfg) return;
  const stn::ExperimentConfig d;
  cfg->family = "tdoped";
  cfg->method = "mast";
  cfg->n = d.n;
  cfg->t = d.t;
  cfg->ccz_count = d.ccz_count;
  cfg->decomposition = "four-t";
  cfg->instances = d.instances;
  cfg->shots = d.shots;
  cfg->seed = d.seed;
  cfg->schedule = "left-to-right";
  cfg->chi_max = d.policy.chi_max;
  cfg->svd_cutoff = d.policy.svd_cutoff;
  cfg->out_path = nullptr;
  cfg->threads = 0;
}

stn_status stn_bench_run(const stn_bench_config* cfg, stn_bench_report** out) {
  return guard([&] {
    need(cfg, "config");
    need(out, "out");
    stn::ExperimentConfig ec;
    const std::string fam = str_or(cfg->family, "tdoped");
    const std::string meth = str_or(cfg->method, "mast");
    auto f = stn::family_from_string(fam);
    auto m = stn::method_from_string(meth);
    if (!f) throw stn::Error(stn::ErrorCode::kInvalidArgument, "unknown family '" + fam + "'");
    if (!m) throw stn::Error(stn::ErrorCode::kInvalidArgument, "unknown method '" + meth + "'");
    ec.family = *f;
    ec.method = *m;
    ec.n = cfg->n;
    ec.t = cfg->t;
    ec.ccz_count = cfg->ccz_count;
    ec.decomposition = parse_decomposition(cfg->decomposition);
    ec.instances = cfg->instances;
    ec.shots = cfg->shots;
    ec.seed = cfg->seed;
    ec.schedule = parse_schedule(cfg->schedule);
    ec.policy.chi_max = cfg->chi_max;
    ec.policy.svd_cutoff = cfg->svd_cutoff;
    ec.out_path = cfg->out_path ? cfg->out_path : "";
    ec.threads = cfg->threads;
    *out = new stn_bench_report{stn::run_experiment(ec)};
  });
}

size_t stn_bench_report_rows(const stn_bench_report* r) { return r ? r->res.rows.size() : 0; }
size_t stn_bench_report_shift_matches(const stn_bench_report* r) { return r ? r->res.shift_matches : 0; }

stn_status stn_bench_report_summary(const stn_bench_report* r, int plot, stn_string** out) {
  return guard([&] {
    need(r, "report");
    need(out, "out");
    *out = make_string(plot ? stn::format_plot_data(r->res.summary) : stn::format_summary(r->res.summary));
  });
}

stn_status stn_bench_report_csv(const stn_bench_report* r, stn_string** out) {
  return guard([&] {
    need(r, "report");
    need(out, "out");
    std::ostringstream os;
    stn::write_csv(os, r->res.rows);
    *out = make_string(os.str());
  });
}

void stn_bench_report_free(stn_bench_report* r) { delete r; }

stn_status stn_bench_summarize(const char* const* paths, size_t count, int plot, stn_string** out) {
  return guard([&] {
    need(out, "out");
    if (count == 0) throw stn::Error(stn::ErrorCode::kInvalidArgument, "no input files");
    need(paths, "paths");
    std::vector<std::string> files;
    for (size_t i = 0; i < count; ++i) {
      need(paths[i], "path");
      files.emplace_back(paths[i]);
    }
    const auto rows = stn::summarize_files(files);
    *out = make_string(plot ? stn::format_plot_data(rows) : stn::format_summary(rows));
  });
}

stn_status stn_model_expected_chi(size_t n, size_t t, double* out) {
  return guard([&] {
    need(out, "out");
    *out = stn::expected_chi_model(n, t);
  });
}

stn_status stn_model_expected_chi_mc(size_t n, size_t t, size_t samples, uint64_t seed, double* out) {
  return guard([&] {
    need(out, "out");
    *out = stn::expected_chi_model_mc(n, t, samples, seed);
  });
}

stn_status stn_x_probability(size_t n, uint64_t* num, uint64_t* den) {
  return guard([&] {
    need(num, "num");
    need(den, "den");
    const auto q = stn::x_probability(n);
    *num = q.num;
    *den = q.den;
  });
}

}  // extern "C"
