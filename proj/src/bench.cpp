#include "stn/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include "stn/error.hpp"

namespace stn {

std::string to_string(Family f) {
  switch (f) {
    case Family::TDoped:
      return "tdoped";
    case Family::UUdagger:
      return "uudagger";
    case Family::HiddenShift:
      return "hiddenshift";
  }
  return "?";
}

std::string to_string(Method m) { return m == Method::Mast ? "mast" : "stn"; }

std::optional<Family> family_from_string(std::string_view s) {
  if (s == "tdoped") return Family::TDoped;
  if (s == "uudagger") return Family::UUdagger;
  if (s == "hiddenshift") return Family::HiddenShift;
  return std::nullopt;
}

std::optional<Method> method_from_string(std::string_view s) {
  if (s == "mast") return Method::Mast;
  if (s == "stn") return Method::Stn;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (n == 0) bad("n must be positive");
  if (instances == 0) bad("instance count must be positive");
  if (shots == 0) bad("shot count must be positive");
  if (family == Family::HiddenShift) {
    if (n % 2 != 0) bad("hiddenshift needs an even n");
    const std::size_t h = n / 2;
    const std::size_t triples = h < 3 ? 0 : h * (h - 1) * (h - 2) / 6;
    if (ccz_count > triples) bad("ccz count exceeds the number of distinct CCZ triples on n/2 qubits");
  } else if (shots != 1) {
    bad("shots only applies to hiddenshift");
  }
  policy.validate();
  if (schedule.strategy == ScheduleStrategy::Explicit && method == Method::Mast) {
    const std::size_t expected = family == Family::TDoped ? t : family == Family::UUdagger ? 2 * t : 0;
    if (family != Family::HiddenShift && schedule.explicit_order.size() != expected)
      bad("explicit schedule length does not match the ancilla count");
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t instance_seed(std::uint64_t config_seed, std::size_t instance) {
  return splitmix64(config_seed ^ splitmix64(instance));
}

namespace {

RunResult simulate(const ExperimentConfig& cfg, const Circuit& c, std::uint64_t seed) {
  RunOptions opts;
  opts.policy = cfg.policy;
  opts.schedule = cfg.schedule;
  Rng rng(seed);
  return cfg.method == Method::Mast ? run_mast(c, opts, rng) : run_stn(c, opts, rng);
}

void fill_from_run(ResultRow& row, const RunResult& r) {
  row.peak_chi = std::max(row.peak_chi, r.peak_chi);
  row.trace_steps = r.trace.samples.size();
  row.final_chi = r.state.max_bond();
  row.wall_ms += r.wall_ms;
}

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
  std::string s;
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace

ResultRow run_instance(const ExperimentConfig& cfg, std::size_t instance) {
  ResultRow row;
  row.instance = instance;
  row.family = cfg.family;
  row.method = cfg.method;
  row.n = cfg.n;
  row.seed = instance_seed(cfg.seed, instance);

  switch (cfg.family) {
    case Family::TDoped:
    case Family::UUdagger: {
      row.t = cfg.t;
      const TDopedSpec spec{cfg.n, cfg.t, row.seed};
      const Circuit c = cfg.family == Family::TDoped ? gen_t_doped(spec) : gen_uudagger(spec);
      fill_from_run(row, simulate(cfg, c, row.seed));
      break;
    }
    case Family::HiddenShift: {
      row.t = cfg.ccz_count;
      HiddenShiftSpec spec;
      spec.n = cfg.n;
      spec.ccz_count = cfg.ccz_count;
      spec.decomposition = cfg.decomposition;
      spec.seed = row.seed;
      const HiddenShiftCircuit hs = gen_hidden_shift(spec);
      row.expected = bits_to_string(hs.shift);
      for (std::size_t shot = 0; shot < cfg.shots; ++shot) {
        const RunResult r = simulate(cfg, hs.circuit, splitmix64(row.seed + shot));
        fill_from_run(row, r);
        std::vector<std::uint8_t> bits(cfg.n, 0);
        for (const auto& m : r.outcomes) {
          auto it = std::find(hs.measure_gates.begin(), hs.measure_gates.end(), m.gate_index);
          if (it != hs.measure_gates.end()) bits[it - hs.measure_gates.begin()] = static_cast<std::uint8_t>(m.bit);
        }
        const std::string got = bits_to_string(bits);
        if (shot == 0) {
          row.outcome = got;
        } else if (got != row.outcome) {
          row.shots_agree = false;
        }
      }
      if (!row.shots_agree) row.outcome = "mixed";
      break;
    }
  }
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  res.rows.resize(cfg.instances);

  std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.instances);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&]() {
    for (std::size_t i = next++; i < cfg.instances; i = next++) {
      try {
        res.rows[i] = run_instance(cfg, i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = cfg.instances;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& r : res.rows)
    if (r.family == Family::HiddenShift && r.outcome == r.expected) ++res.shift_matches;
  res.summary = summarize(res.rows);
  if (!cfg.out_path.empty()) write_csv(cfg.out_path, res.rows);
  return res;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kCsvSchemaLine << '\n' << kCsvHeader << '\n';
  char wall[32];
  for (const auto& r : rows) {
    std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
    os << r.instance << ',' << to_string(r.family) << ',' << to_string(r.method) << ',' << r.n << ',' << r.t << ','
       << r.peak_chi << ',' << wall << ',' << r.seed << ',' << r.outcome << '\n';
  }
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  write_csv(f, rows);
  f.flush();
  if (!f) throw Error(ErrorCode::kIo, "write to " + path + " failed");
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class T>
T parse_number(const std::string& s, const std::string& where) {
  std::istringstream ss(s);
  T v{};
  ss >> v;
  if (!ss || !ss.eof()) throw Error(ErrorCode::kParse, where + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<ResultRow> read_csv(std::istream& is, const std::string& name) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvSchemaLine)
    throw Error(ErrorCode::kParse, name + ": missing or unknown schema line (want '" + std::string(kCsvSchemaLine) + "')");
  if (!std::getline(is, line) || line != kCsvHeader)
    throw Error(ErrorCode::kParse, name + ": column header does not match the schema");
  std::vector<ResultRow> rows;
  std::size_t lineno = 2;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(lineno);
    const auto f = split_commas(line);
    if (f.size() != 9) throw Error(ErrorCode::kParse, where + ": expected 9 fields");
    ResultRow r;
    r.instance = parse_number<std::size_t>(f[0], where);
    auto fam = family_from_string(f[1]);
    auto meth = method_from_string(f[2]);
    if (!fam || !meth) throw Error(ErrorCode::kParse, where + ": unknown family or method");
    r.family = *fam;
    r.method = *meth;
    r.n = parse_number<std::size_t>(f[3], where);
    r.t = parse_number<std::size_t>(f[4], where);
    r.peak_chi = parse_number<std::size_t>(f[5], where);
    r.wall_ms = parse_number<double>(f[6], where);
    r.seed = parse_number<std::uint64_t>(f[7], where);
    r.outcome = f[8];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path);
  return read_csv(f, path);
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<int, int, std::size_t, std::size_t>;
  std::map<Key, std::vector<std::size_t>> groups;
  for (const auto& r : rows)
    groups[{static_cast<int>(r.family), static_cast<int>(r.method), r.n, r.t}].push_back(r.peak_chi);

  std::vector<SummaryRow> out;
  for (auto& [key, chis] : groups) {
    std::sort(chis.begin(), chis.end());
    SummaryRow s;
    s.family = static_cast<Family>(std::get<0>(key));
    s.method = static_cast<Method>(std::get<1>(key));
    s.n = std::get<2>(key);
    s.t = std::get<3>(key);
    s.count = chis.size();
    double sum = 0;
    for (auto c : chis) sum += static_cast<double>(c);
    s.mean = sum / static_cast<double>(s.count);
    // Nearest-rank percentiles.
    auto rank = [&](double p) {
      auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(s.count)));
      return chis[std::clamp<std::size_t>(idx, 1, s.count) - 1];
    };
    s.p50 = rank(0.5);
    s.p90 = rank(0.9);
    s.max = chis.back();
    out.push_back(s);
  }
  return out;
}

std::vector<SummaryRow> summarize_files(const std::vector<std::string>& paths) {
  std::vector<ResultRow> all;
  for (const auto& p : paths) {
    auto rows = read_csv(p);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return summarize(all);
}

std::string format_summary(const std::vector<SummaryRow>& rows) {
  std::string out = "family,method,n,t,count,mean,p50,p90,max\n";
  char buf[160];
  for (const auto& s : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,%zu,%zu,%.4f,%zu,%zu,%zu\n", to_string(s.family).c_str(),
                  to_string(s.method).c_str(), s.n, s.t, s.count, s.mean, s.p50, s.p90, s.max);
    out += buf;
  }
  return out;
}

std::string format_plot_data(const std::vector<SummaryRow>& rows) {
  std::string out = "# n t method mean p50 p90 max\n";
  char buf[128];
  for (const auto& s : rows) {
    std::snprintf(buf, sizeof buf, "%zu %zu %d %.4f %zu %zu %zu\n", s.n, s.t, s.method == Method::Mast ? 0 : 1, s.mean,
                  s.p50, s.p90, s.max);
    out += buf;
  }
  return out;
}

namespace {

double failure_probability(std::size_t n, std::size_t w) {
  if (w >= n) return 1.0;
  return std::ldexp(1.0, -static_cast<int>(n - w));
}

}  // namespace

double expected_chi_model(std::size_t n, std::size_t t) {
  if (t == 0) return 1.0;
  double none = 1.0;
  for (std::size_t w = 0; w < t; ++w) none *= 1.0 - failure_probability(n, w);
  return 2.0 * none + 4.0 * (1.0 - none);
}

double expected_chi_model_mc(std::size_t n, std::size_t t, std::size_t samples, std::uint64_t seed) {
  require(samples > 0, ErrorCode::kInvalidArgument, "sample count must be positive");
  if (t == 0) return 1.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double sum = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    bool failed = false;
    for (std::size_t w = 0; w < t; ++w) failed |= u(rng) < failure_probability(n, w);
    sum += failed ? 4.0 : 2.0;
  }
  return sum / static_cast<double>(samples);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational x_probability(std::size_t n) {
  require(n >= 1 && n <= 63, ErrorCode::kInvalidArgument, "x_probability needs 1 <= n <= 63");
  const std::uint64_t num = std::uint64_t{1} << (n - 1);
  const std::uint64_t den = (std::uint64_t{1} << n) - 1;
  // num is a power of two and den is odd, so the fraction is already reduced
  return {num, den};
}

}  // namespace stn
