// stnbench: experiment driver over the stnsim C API.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stn/stn_c.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int fail(stn_status s) {
  std::cerr << "stnbench: " << stn_status_name(s) << ": " << stn_last_error() << "\n";
  return (s == STN_ERR_INVALID_ARGUMENT || s == STN_ERR_PARSE) ? kExitConfig : kExitRuntime;
}

// Owns an stn_string for the duration of a scope.
struct Text {
  stn_string* s = nullptr;
  ~Text() { stn_string_free(s); }
  const char* c_str() const { return stn_string_data(s); }
};

struct RunArgs {
  std::string family = "tdoped";
  std::string method = "mast";
  std::size_t n = 8;
  std::size_t t = 0;
  std::size_t ccz = 0;
  std::string decomposition = "four-t";
  std::size_t instances = 200;
  std::size_t shots = 1;
  std::uint64_t seed = 0;
  std::string schedule = "left-to-right";
  std::size_t chi_max = 0;
  double cutoff = 1e-12;
  std::string out;
  std::size_t threads = 0;
  bool plot = false;
};

int cmd_run(const RunArgs& a) {
  stn_bench_config cfg;
  stn_bench_config_default(&cfg);
  cfg.family = a.family.c_str();
  cfg.method = a.method.c_str();
  cfg.n = a.n;
  cfg.t = a.t;
  cfg.ccz_count = a.ccz;
  cfg.decomposition = a.decomposition.c_str();
  cfg.instances = a.instances;
  cfg.shots = a.shots;
  cfg.seed = a.seed;
  cfg.schedule = a.schedule.c_str();
  cfg.chi_max = a.chi_max;
  cfg.svd_cutoff = a.cutoff;
  cfg.out_path = a.out.c_str();
  cfg.threads = a.threads;

  stn_bench_report* rep = nullptr;
  if (auto s = stn_bench_run(&cfg, &rep); s != STN_OK) return fail(s);
  Text summary;
  const stn_status s = stn_bench_report_summary(rep, a.plot ? 1 : 0, &summary.s);
  if (s == STN_OK) {
    std::cout << summary.c_str();
    if (a.family == "hiddenshift")
      std::cout << "# shift recovered: " << stn_bench_report_shift_matches(rep) << "/" << stn_bench_report_rows(rep)
                << "\n";
  }
  stn_bench_report_free(rep);
  return s == STN_OK ? kExitOk : fail(s);
}

int cmd_summarize(const std::vector<std::string>& files, bool plot, const std::string& out) {
  std::vector<const char*> paths;
  for (const auto& f : files) paths.push_back(f.c_str());
  Text text;
  if (auto s = stn_bench_summarize(paths.data(), paths.size(), plot ? 1 : 0, &text.s); s != STN_OK) return fail(s);
  if (out.empty()) {
    std::cout << text.c_str();
    return kExitOk;
  }
  std::ofstream f(out, std::ios::binary);
  f << text.c_str();
  if (!f) {
    std::cerr << "stnbench: cannot write " << out << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_model(std::size_t n, std::size_t t_max, std::size_t samples, std::uint64_t seed) {
  std::printf("# n t model monte_carlo\n");
  for (std::size_t t = 0; t <= t_max; ++t) {
    double closed = 0, mc = 0;
    if (auto s = stn_model_expected_chi(n, t, &closed); s != STN_OK) return fail(s);
    if (auto s = stn_model_expected_chi_mc(n, t, samples, seed, &mc); s != STN_OK) return fail(s);
    std::printf("%zu %zu %.6f %.6f\n", n, t, closed, mc);
  }
  return kExitOk;
}

int cmd_xprob(std::size_t n) {
  std::uint64_t num = 0, den = 0;
  if (auto s = stn_x_probability(n, &num, &den); s != STN_OK) return fail(s);
  if (den == 1)
    std::printf("%zu %llu %.12f\n", n, static_cast<unsigned long long>(num), 1.0 * num);
  else
    std::printf("%zu %llu/%llu %.12f\n", n, static_cast<unsigned long long>(num), static_cast<unsigned long long>(den),
                static_cast<double>(num) / static_cast<double>(den));
  return kExitOk;
}

int cmd_parse_check(const std::vector<std::string>& files) {
  int rc = kExitOk;
  for (const auto& path : files) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
      std::cerr << path << ": cannot open\n";
      rc = kExitRuntime;
      continue;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    stn_circuit* c = nullptr;
    std::size_t line = 0;
    const stn_status s = stn_circuit_parse(ss.str().c_str(), &c, &line);
    if (s != STN_OK) {
      std::cerr << path << ": " << stn_last_error() << "\n";
      if (rc == kExitOk) rc = (s == STN_ERR_PARSE || s == STN_ERR_INVALID_ARGUMENT) ? kExitConfig : kExitRuntime;
      continue;
    }
    std::cout << path << ": ok, " << stn_circuit_num_qubits(c) << " qubits, " << stn_circuit_num_gates(c) << " gates, "
              << stn_circuit_nonclifford_count(c) << " non-Clifford\n";
    stn_circuit_free(c);
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilizer tensor network benchmark driver"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run a seeded ensemble and write CSV rows");
  run->add_option("--family", ra.family, "tdoped, uudagger or hiddenshift")
      ->check(CLI::IsMember({"tdoped", "uudagger", "hiddenshift"}));
  run->add_option("--method", ra.method, "mast or stn")->check(CLI::IsMember({"mast", "stn"}));
  run->add_option("--n", ra.n, "Data qubits")->check(CLI::PositiveNumber);
  run->add_option("--t", ra.t, "T gates per instance (tdoped, uudagger)");
  run->add_option("--ccz", ra.ccz, "CCZ gates per oracle (hiddenshift)");
  run->add_option("--decomposition", ra.decomposition, "CCZ decomposition: four-t or seven-t");
  run->add_option("--instances", ra.instances, "Number of instances")->check(CLI::PositiveNumber);
  run->add_option("--shots", ra.shots, "Repeated runs per hiddenshift instance")->check(CLI::PositiveNumber);
  run->add_option("--seed", ra.seed, "Ensemble seed");
  run->add_option("--schedule", ra.schedule, "left-to-right, right-to-left or middle-out-pairwise");
  run->add_option("--chi-max", ra.chi_max, "Bond dimension cap, 0 for none");
  run->add_option("--cutoff", ra.cutoff, "Relative singular value cutoff");
  run->add_option("--out", ra.out, "CSV output path");
  run->add_option("--threads", ra.threads, "Worker threads, 0 for all cores");
  run->add_flag("--plot", ra.plot, "Print plot columns instead of the summary table");

  std::vector<std::string> sum_files;
  bool sum_plot = false;
  std::string sum_out;
  auto* summarize = app.add_subcommand("summarize", "Aggregate CSV files");
  summarize->add_option("files", sum_files, "CSV files")->required()->check(CLI::ExistingFile);
  summarize->add_flag("--plot", sum_plot, "Emit whitespace-separated plot columns");
  summarize->add_option("--out", sum_out, "Write to a file instead of stdout");

  std::size_t model_n = 20, model_t = 0, model_samples = 100000;
  std::uint64_t model_seed = 0;
  auto* model = app.add_subcommand("model", "Expected peak bond dimension for t = 0..T");
  model->add_option("--n", model_n, "Qubits")->check(CLI::PositiveNumber);
  auto* model_t_opt = model->add_option("--t", model_t, "Largest t (default n)");
  model->add_option("--samples", model_samples, "Monte-Carlo samples")->check(CLI::PositiveNumber);
  model->add_option("--seed", model_seed, "Monte-Carlo seed");

  std::size_t xprob_n = 1;
  auto* xprob = app.add_subcommand("xprob", "Probability of an X component in a random Clifford entry");
  xprob->add_option("--n", xprob_n, "Qubits")->required()->check(CLI::Range(1, 63));

  std::vector<std::string> pc_files;
  auto* parse_check = app.add_subcommand("parse-check", "Validate circuit files");
  parse_check->add_option("files", pc_files, "Circuit files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(ra);
  if (*summarize) return cmd_summarize(sum_files, sum_plot, sum_out);
  if (*model) return cmd_model(model_n, model_t_opt->count() ? model_t : model_n, model_samples, model_seed);
  if (*xprob) return cmd_xprob(xprob_n);
  if (*parse_check) return cmd_parse_check(pc_files);
  return kExitConfig;
}
