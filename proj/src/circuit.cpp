#include "stn/circuit.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include "stn/error.hpp"

namespace stn {

namespace {

struct KindInfo {
  GateKind kind;
  const char* name;
  std::size_t arity;
};

constexpr KindInfo kKinds[] = {
    {GateKind::H, "h", 1},          {GateKind::S, "s", 1},        {GateKind::Sdg, "sdg", 1},
    {GateKind::X, "x", 1},          {GateKind::Y, "y", 1},        {GateKind::Z, "z", 1},
    {GateKind::CX, "cx", 2},        {GateKind::CZ, "cz", 2},      {GateKind::Swap, "swap", 2},
    {GateKind::T, "t", 1},          {GateKind::Tdg, "tdg", 1},    {GateKind::Rz, "rz", 1},
    {GateKind::CCZ, "ccz", 3},      {GateKind::Measure, "measure", 1},
    {GateKind::Postselect, "postselect", 1},
    {GateKind::CliffordBlock, "clifford", 0},
};

const KindInfo& info(GateKind k) {
  for (const auto& i : kKinds)
    if (i.kind == k) return i;
  throw Error(ErrorCode::kInternal, "unknown gate kind");
}

// Deterministic bounded draw independent of the standard library's
// distribution implementations.
std::size_t pick(Rng& rng, std::size_t bound) { return static_cast<std::size_t>(rng() % bound); }

}  // namespace

std::size_t gate_arity(GateKind k) { return info(k).arity; }
std::string mnemonic(GateKind k) { return info(k).name; }

std::optional<GateKind> kind_from_mnemonic(std::string_view m) {
  for (const auto& i : kKinds)
    if (m == i.name && i.kind != GateKind::CliffordBlock) return i.kind;
  return std::nullopt;
}

bool is_clifford(GateKind k) { return as_clifford_gate(k).has_value() || k == GateKind::CliffordBlock; }

bool is_single_qubit_nonclifford(GateKind k) { return k == GateKind::T || k == GateKind::Tdg || k == GateKind::Rz; }

std::optional<CliffordGate> as_clifford_gate(GateKind k) {
  switch (k) {
    case GateKind::H:
      return CliffordGate::H;
    case GateKind::S:
      return CliffordGate::S;
    case GateKind::Sdg:
      return CliffordGate::Sdg;
    case GateKind::X:
      return CliffordGate::X;
    case GateKind::Y:
      return CliffordGate::Y;
    case GateKind::Z:
      return CliffordGate::Z;
    case GateKind::CX:
      return CliffordGate::CX;
    case GateKind::CZ:
      return CliffordGate::CZ;
    case GateKind::Swap:
      return CliffordGate::Swap;
    default:
      return std::nullopt;
  }
}

double z_rotation_angle(GateKind k, double angle) {
  switch (k) {
    case GateKind::T:
      return std::numbers::pi / 4;
    case GateKind::Tdg:
      return -std::numbers::pi / 4;
    case GateKind::Rz:
      return angle;
    default:
      throw Error(ErrorCode::kInvalidArgument, mnemonic(k) + " is not a Z rotation");
  }
}

bool Gate::operator==(const Gate& o) const {
  if (kind != o.kind || qubits != o.qubits || angle != o.angle) return false;
  if (static_cast<bool>(block) != static_cast<bool>(o.block)) return false;
  return !block || *block == *o.block;
}

Circuit::Circuit(std::size_t n) : n_(n) {
  if (n == 0) throw DimensionError("circuit needs at least one qubit");
}

Circuit& Circuit::add(Gate g) {
  const std::size_t want = g.kind == GateKind::CliffordBlock ? (g.block ? g.block->num_qubits() : 0) : gate_arity(g.kind);
  if (g.kind == GateKind::CliffordBlock && !g.block)
    throw Error(ErrorCode::kInvalidArgument, "clifford block without a tableau payload");
  if (g.qubits.size() != want)
    throw Error(ErrorCode::kInvalidArgument, mnemonic(g.kind) + " expects " + std::to_string(want) + " operand(s), got " +
                                                 std::to_string(g.qubits.size()));
  for (std::size_t i = 0; i < g.qubits.size(); ++i) {
    if (g.qubits[i] >= n_)
      throw Error(ErrorCode::kInvalidArgument, "operand " + std::to_string(g.qubits[i]) + " out of range for " +
                                                   std::to_string(n_) + " qubits");
    for (std::size_t j = 0; j < i; ++j)
      if (g.qubits[i] == g.qubits[j]) throw Error(ErrorCode::kInvalidArgument, "duplicate operand " + std::to_string(g.qubits[i]));
  }
  if (g.kind == GateKind::Rz && !std::isfinite(g.angle)) throw Error(ErrorCode::kInvalidArgument, "rz angle must be finite");
  if (g.kind != GateKind::Rz) g.angle = 0.0;
  gates_.push_back(std::move(g));
  return *this;
}

Circuit& Circuit::add_block(std::shared_ptr<const Tableau> block, std::vector<std::size_t> operands) {
  return add(Gate{GateKind::CliffordBlock, std::move(operands), 0.0, std::move(block)});
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_ > n_) throw DimensionError("appended circuit has more qubits");
  for (const auto& g : other.gates_) add(g);
  return *this;
}

std::size_t Circuit::nonclifford_count() const {
  std::size_t c = 0;
  for (const auto& g : gates_)
    if (is_single_qubit_nonclifford(g.kind) || g.kind == GateKind::CCZ) ++c;
  return c;
}

std::size_t Circuit::count(GateKind k) const {
  return static_cast<std::size_t>(std::count_if(gates_.begin(), gates_.end(), [k](const Gate& g) { return g.kind == k; }));
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<std::size_t> to_index(std::string_view s) {
  std::size_t v = 0;
  if (s.empty()) return std::nullopt;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

double parse_angle(std::string_view tok) {
  auto bad = [&]() { return Error(ErrorCode::kParse, "malformed angle '" + std::string(tok) + "'"); };
  if (auto v = to_double(tok)) {
    if (!std::isfinite(*v)) throw bad();
    return *v;
  }
  const std::size_t pi = tok.find("pi");
  if (pi == std::string_view::npos) throw bad();
  double coef = 1.0;
  std::string_view pre = tok.substr(0, pi);
  if (pre == "-") {
    coef = -1.0;
  } else if (pre == "+" || pre.empty()) {
    coef = 1.0;
  } else {
    if (pre.back() != '*') throw bad();
    auto c = to_double(pre.substr(0, pre.size() - 1));
    if (!c) throw bad();
    coef = *c;
  }
  std::string_view post = tok.substr(pi + 2);
  double den = 1.0;
  if (!post.empty()) {
    if (post.front() != '/') throw bad();
    auto d = to_double(post.substr(1));
    if (!d || *d == 0.0) throw bad();
    den = *d;
  }
  const double v = coef * std::numbers::pi / den;
  if (!std::isfinite(v)) throw bad();
  return v;
}

Circuit parse_circuit(std::string_view text) {
  std::optional<Circuit> c;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    const auto toks = split_ws(line);
    if (toks.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (!c) {
      if (toks[0] != "qubits") throw ParseError(lineno, "missing 'qubits <n>' header");
      if (toks.size() != 2) throw ParseError(lineno, "header must be 'qubits <n>'");
      auto n = to_index(toks[1]);
      if (!n || *n == 0) throw ParseError(lineno, "qubit count must be a positive integer");
      c.emplace(*n);
      if (end == text.size()) break;
      continue;
    }
    if (toks[0] == "qubits") throw ParseError(lineno, "duplicate header");
    auto kind = kind_from_mnemonic(toks[0]);
    if (!kind) throw ParseError(lineno, "unknown mnemonic '" + std::string(toks[0]) + "'");
    std::size_t i = 1;
    Gate g;
    g.kind = *kind;
    if (*kind == GateKind::Rz) {
      if (toks.size() < 2) throw ParseError(lineno, "rz requires an angle");
      try {
        g.angle = parse_angle(toks[1]);
      } catch (const Error& e) {
        throw ParseError(lineno, e.what());
      }
      i = 2;
    }
    for (; i < toks.size(); ++i) {
      auto q = to_index(toks[i]);
      if (!q) throw ParseError(lineno, "malformed qubit index '" + std::string(toks[i]) + "'");
      g.qubits.push_back(*q);
    }
    try {
      c->add(std::move(g));
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
    if (end == text.size()) break;
  }
  if (!c) throw ParseError(lineno == 0 ? 1 : lineno, "missing 'qubits <n>' header");
  return *std::move(c);
}

std::string emit_circuit(const Circuit& c) {
  std::ostringstream os;
  os << "qubits " << c.num_qubits() << "\n";
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::CliffordBlock)
      throw Error(ErrorCode::kUnsupported, "clifford blocks must be expanded before emitting");
    os << mnemonic(g.kind);
    if (g.kind == GateKind::Rz) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", g.angle);
      os << ' ' << buf;
    }
    for (auto q : g.qubits) os << ' ' << q;
    os << "\n";
  }
  return os.str();
}

Circuit expand_clifford_blocks(const Circuit& c) {
  Circuit out(c.num_qubits());
  for (const auto& g : c.gates()) {
    if (g.kind != GateKind::CliffordBlock) {
      out.add(g);
      continue;
    }
    for (const auto& sg : synthesize_clifford(*g.block)) {
      switch (sg.gate) {
        case CliffordGate::H:
          out.add(GateKind::H, {g.qubits[sg.q0]});
          break;
        case CliffordGate::S:
          out.add(GateKind::S, {g.qubits[sg.q0]});
          break;
        case CliffordGate::CX:
          out.add(GateKind::CX, {g.qubits[sg.q0], g.qubits[sg.q1]});
          break;
        default:
          throw Error(ErrorCode::kInternal, "unexpected gate in clifford synthesis");
      }
    }
  }
  return out;
}

Circuit inverse_circuit(const Circuit& c) {
  Circuit out(c.num_qubits());
  const auto& gs = c.gates();
  for (auto it = gs.rbegin(); it != gs.rend(); ++it) {
    Gate g = *it;
    switch (g.kind) {
      case GateKind::S:
        g.kind = GateKind::Sdg;
        break;
      case GateKind::Sdg:
        g.kind = GateKind::S;
        break;
      case GateKind::T:
        g.kind = GateKind::Tdg;
        break;
      case GateKind::Tdg:
        g.kind = GateKind::T;
        break;
      case GateKind::Rz:
        g.angle = -g.angle;
        break;
      case GateKind::CliffordBlock:
        g.block = std::make_shared<const Tableau>(g.block->inverse());
        break;
      case GateKind::Measure:
      case GateKind::Postselect:
        throw Error(ErrorCode::kUnsupported, "cannot invert a circuit containing measurements");
      default:
        break;
    }
    out.add(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CCZ decompositions

std::string to_string(CczDecomposition d) { return d == CczDecomposition::FourT ? "four" : "seven"; }

std::optional<CczDecomposition> ccz_decomposition_from_string(std::string_view s) {
  if (s == "four" || s == "4" || s == "four-t") return CczDecomposition::FourT;
  if (s == "seven" || s == "7" || s == "seven-t") return CczDecomposition::SevenT;
  return std::nullopt;
}

namespace {

Gate g1(GateKind k, std::size_t q) { return Gate{k, {q}, 0.0, nullptr}; }
Gate g2(GateKind k, std::size_t a, std::size_t b) { return Gate{k, {a, b}, 0.0, nullptr}; }

void require_distinct(std::initializer_list<std::size_t> qs) {
  std::set<std::size_t> seen(qs);
  if (seen.size() != qs.size()) throw Error(ErrorCode::kInvalidArgument, "CCZ operands must be distinct");
}

}  // namespace

std::vector<Gate> ccz_four_t(std::size_t c0, std::size_t c1, std::size_t target, std::size_t anc0, std::size_t anc1) {
  require_distinct({c0, c1, target, anc0, anc1});
  const std::size_t a = anc0, b = anc1;
  // Computes the logical AND of c0 and c1 into anc0 (a |x0 x1> phase state
  // after the final S), kicks the target phase through a CZ and postselects.
  return {
      g1(GateKind::H, a),        g2(GateKind::CX, c0, b),   g2(GateKind::CX, a, c0),   g2(GateKind::CX, a, c1),
      g2(GateKind::CX, c1, b),   g1(GateKind::Tdg, c0),     g1(GateKind::Tdg, c1),     g1(GateKind::T, a),
      g1(GateKind::T, b),        g2(GateKind::CX, c1, b),   g2(GateKind::CX, a, c1),   g2(GateKind::CX, a, c0),
      g2(GateKind::CX, c0, b),   g1(GateKind::H, a),        g1(GateKind::S, a),        g2(GateKind::CZ, a, target),
      g1(GateKind::H, a),        g1(GateKind::Postselect, a),
  };
}

std::vector<Gate> ccz_seven_t(std::size_t c0, std::size_t c1, std::size_t target) {
  require_distinct({c0, c1, target});
  const std::size_t t = target;
  return {
      g2(GateKind::CX, c1, t), g1(GateKind::Tdg, t),   g2(GateKind::CX, c0, t), g1(GateKind::T, t),
      g2(GateKind::CX, c1, t), g1(GateKind::Tdg, t),   g2(GateKind::CX, c0, t), g1(GateKind::T, c1),
      g1(GateKind::T, t),      g2(GateKind::CX, c0, c1), g1(GateKind::T, c0),   g1(GateKind::Tdg, c1),
      g2(GateKind::CX, c0, c1),
  };
}

Circuit expand_ccz_seven_t(const Circuit& c) {
  Circuit out(c.num_qubits());
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::CCZ) {
      for (auto& s : ccz_seven_t(g.qubits[0], g.qubits[1], g.qubits[2])) out.add(std::move(s));
    } else {
      out.add(g);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generators

Circuit gen_t_doped(const TDopedSpec& spec) {
  Circuit c(spec.n);
  Rng rng(spec.seed);
  std::vector<std::size_t> all(spec.n);
  for (std::size_t q = 0; q < spec.n; ++q) all[q] = q;
  for (std::size_t i = 0; i < spec.t; ++i) {
    c.add_block(std::make_shared<const Tableau>(random_clifford(spec.n, rng)), all);
    c.add(GateKind::T, {0});
  }
  return c;
}

Circuit gen_uudagger(const TDopedSpec& spec) {
  Circuit c = gen_t_doped(spec);
  c.append(inverse_circuit(c));
  return c;
}

HiddenShiftCircuit gen_hidden_shift(const HiddenShiftSpec& spec) {
  const std::size_t n = spec.n;
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::kInvalidArgument, "hidden shift needs an even qubit count >= 2");
  const std::size_t h = n / 2;
  const std::size_t triples = h >= 3 ? h * (h - 1) * (h - 2) / 6 : 0;
  if (spec.ccz_count > triples)
    throw Error(ErrorCode::kInvalidArgument, "ccz_count " + std::to_string(spec.ccz_count) + " exceeds the " +
                                                 std::to_string(triples) + " available operand triples");
  Rng rng(spec.seed);

  HiddenShiftCircuit out;
  if (spec.shift.empty()) {
    out.shift.resize(n);
    for (auto& b : out.shift) b = static_cast<std::uint8_t>(rng() & 1u);
  } else {
    if (spec.shift.size() != n) throw DimensionError("shift length must equal n");
    out.shift = spec.shift;
    for (auto b : out.shift)
      if (b > 1) throw Error(ErrorCode::kInvalidArgument, "shift entries must be 0 or 1");
  }

  // g(x) on the first half as a list of diagonal gates.
  const std::size_t phase_count = spec.clifford_phase_count ? spec.clifford_phase_count : 3 * n;
  std::vector<Gate> og;
  for (std::size_t i = 0; i < phase_count; ++i) {
    if (h >= 2 && (rng() & 1u)) {
      const std::size_t a = pick(rng, h);
      std::size_t b = pick(rng, h - 1);
      if (b >= a) ++b;
      og.push_back(g2(GateKind::CZ, std::min(a, b), std::max(a, b)));
    } else {
      og.push_back(g1(GateKind::Z, pick(rng, h)));
    }
  }
  std::set<std::array<std::size_t, 3>> used;
  while (used.size() < spec.ccz_count) {
    std::array<std::size_t, 3> tr{pick(rng, h), pick(rng, h), pick(rng, h)};
    std::sort(tr.begin(), tr.end());
    if (tr[0] == tr[1] || tr[1] == tr[2]) continue;
    if (!used.insert(tr).second) continue;
    og.push_back(Gate{GateKind::CCZ, {tr[0], tr[1], tr[2]}, 0.0, nullptr});
  }
  for (std::size_t i = og.size(); i > 1; --i) std::swap(og[i - 1], og[pick(rng, i)]);

  const bool four = spec.decomposition == CczDecomposition::FourT;
  const std::size_t total = n + (four ? 4 * spec.ccz_count : 0);
  Circuit& c = out.circuit;
  c = Circuit(total);
  std::size_t next_anc = n;

  auto emit_og = [&](std::size_t offset) {
    for (const auto& g : og) {
      if (g.kind != GateKind::CCZ) {
        Gate s = g;
        for (auto& q : s.qubits) q += offset;
        c.add(std::move(s));
        continue;
      }
      const std::size_t a = g.qubits[0] + offset, b = g.qubits[1] + offset, t = g.qubits[2] + offset;
      if (four) {
        for (auto& s : ccz_four_t(a, b, t, next_anc, next_anc + 1)) c.add(std::move(s));
        next_anc += 2;
      } else {
        for (auto& s : ccz_seven_t(a, b, t)) c.add(std::move(s));
      }
    }
  };
  auto hadamards = [&]() {
    for (std::size_t q = 0; q < n; ++q) c.add(GateKind::H, {q});
  };
  auto bent_layer = [&]() {
    for (std::size_t i = 0; i < h; ++i) c.add(GateKind::CZ, {i, h + i});
  };

  hadamards();
  bent_layer();
  emit_og(0);
  hadamards();
  for (std::size_t q = 0; q < n; ++q)
    if (out.shift[q]) c.add(GateKind::Z, {q});
  bent_layer();
  emit_og(h);
  hadamards();
  for (std::size_t q = 0; q < n; ++q) {
    out.measure_gates.push_back(c.size());
    c.add(GateKind::Measure, {q});
  }
  return out;
}

}  // namespace stn
