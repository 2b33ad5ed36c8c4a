#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ltlmine/buchi.hpp"
#include "ltlmine/check.hpp"
#include "ltlmine/dataset_pair.hpp"

namespace ltlmine {

struct GenConfig {
  int props = 5;
  /// Formula size in nodes, drawn uniformly from [min_nodes, max_nodes].
  int min_nodes = 3;
  int max_nodes = 15;
  /// Relative weights of !, &, X, U at inner nodes.
  std::array<unsigned, 4> operator_weights{1, 1, 1, 1};
  /// Relative weight of each proposition and of each constant at leaves.
  unsigned atom_weight = 8;
  unsigned constant_weight = 1;
  std::size_t max_trace_chars = 35;
  std::uint64_t seed = 1;
  CheckLimits limits{std::chrono::milliseconds(30'000), 100'000};

  void validate() const {
    if (props < 1 || props > kMaxProps) throw std::invalid_argument("props must be in [1, 26]");
    if (min_nodes < 1 || max_nodes < min_nodes) throw std::invalid_argument("need 1 <= min_nodes <= max_nodes");
    if (max_trace_chars < 3) throw std::invalid_argument("max_trace_chars must be at least 3");
    if (atom_weight == 0 && constant_weight == 0) throw std::invalid_argument("leaf weights are all zero");
  }
};

/// Uniform integer in [0, n) by rejection sampling on raw 64-bit draws, so
/// sequences are identical across standard library implementations.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index over an empty range");
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

namespace detail {

template <std::size_t N>
std::size_t weighted_pick(std::mt19937_64& rng, const std::array<unsigned, N>& w) {
  std::uint64_t total = 0;
  for (unsigned x : w) total += x;
  std::uint64_t r = uniform_index(rng, total);
  for (std::size_t i = 0; i < N; ++i) {
    if (r < w[i]) return i;
    r -= w[i];
  }
  return N - 1;
}

} // namespace detail

/// Random formula with exactly `nodes` nodes.
inline Formula random_formula(std::mt19937_64& rng, int nodes, const GenConfig& cfg) {
  if (nodes <= 1) {
    std::uint64_t total = std::uint64_t{cfg.atom_weight} * cfg.props + 2ull * cfg.constant_weight;
    std::uint64_t r = uniform_index(rng, total);
    if (r < std::uint64_t{cfg.atom_weight} * cfg.props) return Formula::atom(static_cast<PropId>(r / cfg.atom_weight));
    r -= std::uint64_t{cfg.atom_weight} * cfg.props;
    return r < cfg.constant_weight ? Formula::top() : Formula::bottom();
  }
  auto w = cfg.operator_weights;
  if (nodes == 2) w[1] = w[3] = 0; // binary operators need at least 3 nodes
  if (w[0] + w[1] + w[2] + w[3] == 0) w = {1, 0, 1, 0};
  switch (detail::weighted_pick(rng, w)) {
  case 0:
    return Formula::negation(random_formula(rng, nodes - 1, cfg));
  case 2:
    return Formula::next(random_formula(rng, nodes - 1, cfg));
  default: {
    bool conj = w[1] && (!w[3] || detail::weighted_pick(rng, std::array<unsigned, 2>{w[1], w[3]}) == 0);
    int left = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(nodes - 2)));
    Formula l = random_formula(rng, left, cfg);
    Formula r = random_formula(rng, nodes - 1 - left, cfg);
    return conj ? Formula::conjunction(l, r) : Formula::until(l, r);
  }
  }
}

enum class Rejection { None, Unsatisfiable, TraceTooLong, VerificationFailed };

inline const char* to_string(Rejection r) {
  switch (r) {
  case Rejection::None:
    return "none";
  case Rejection::Unsatisfiable:
    return "unsatisfiable";
  case Rejection::TraceTooLong:
    return "trace-too-long";
  case Rejection::VerificationFailed:
    return "verification-failed";
  }
  return "?";
}

struct GenOutcome {
  std::optional<DatasetPair> pair;
  Rejection rejection = Rejection::None;
};

/// Trace for a formula: the guards of the first accepting lasso that nested
/// DFS finds in the formula's automaton. Throws ResourceLimitError or
/// TimeoutError when the automaton outgrows the limits.
inline GenOutcome pair_from_formula(const Formula& f, const GenConfig& cfg) {
  Budget budget(cfg.limits);
  Tableau tab(f, cfg.limits.state_cap);
  DegeneralizedTableau g(tab, budget);
  auto run = find_accepting_lasso(g, budget);
  if (!run) return {std::nullopt, Rejection::Unsatisfiable};
  std::vector<PropConstraint> prefix, period;
  for (const auto& c : run->stem) prefix.push_back(cube_formula(c));
  for (const auto& c : run->cycle) period.push_back(cube_formula(c));
  SymbolicTrace t(std::move(prefix), std::move(period));
  if (print_trace(t).size() > cfg.max_trace_chars) return {std::nullopt, Rejection::TraceTooLong};
  if (check_universal(t, f, cfg.limits).verdict != Verdict::Holds) return {std::nullopt, Rejection::VerificationFailed};
  return {DatasetPair{std::move(t), f}, Rejection::None};
}

inline GenOutcome generate_pair(std::mt19937_64& rng, const GenConfig& cfg) {
  int nodes = cfg.min_nodes +
              static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(cfg.max_nodes - cfg.min_nodes + 1)));
  return pair_from_formula(random_formula(rng, nodes, cfg), cfg);
}

struct GenStats {
  std::size_t attempts = 0;
  std::size_t unsatisfiable = 0;
  std::size_t too_long = 0;
  std::size_t verification_failed = 0;
  std::size_t resource_limit = 0;
};

/// `count` pairs from one seeded stream. Formulas whose automaton exceeds
/// the limits are skipped and counted.
inline std::vector<DatasetPair> generate_dataset(std::size_t count, const GenConfig& cfg, GenStats* stats = nullptr) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::vector<DatasetPair> out;
  GenStats s;
  const std::size_t max_attempts = 1000 * (count + 10);
  while (out.size() < count) {
    if (s.attempts++ >= max_attempts) throw std::runtime_error("generator rejected too many candidates");
    GenOutcome o;
    try {
      o = generate_pair(rng, cfg);
    } catch (const ResourceLimitError&) {
      ++s.resource_limit;
      continue;
    } catch (const TimeoutError&) {
      ++s.resource_limit;
      continue;
    }
    switch (o.rejection) {
    case Rejection::None:
      out.push_back(std::move(*o.pair));
      break;
    case Rejection::Unsatisfiable:
      ++s.unsatisfiable;
      break;
    case Rejection::TraceTooLong:
      ++s.too_long;
      break;
    case Rejection::VerificationFailed:
      ++s.verification_failed;
      break;
    }
  }
  if (stats) *stats = s;
  return out;
}

struct FilterStats {
  std::size_t retained = 0;
  std::size_t dropped = 0;
};

inline std::vector<DatasetPair> filter_by_trace_length(const std::vector<DatasetPair>& pairs,
                                                       std::size_t max_chars = 35, FilterStats* stats = nullptr) {
  std::vector<DatasetPair> out;
  FilterStats s;
  for (const auto& p : pairs) {
    if (print_trace(p.trace).size() <= max_chars) {
      out.push_back(p);
      ++s.retained;
    } else {
      ++s.dropped;
    }
  }
  if (stats) *stats = s;
  return out;
}

/// Error while reading a dataset file; `line` is 1-based.
struct DatasetError : std::runtime_error {
  DatasetError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};
struct DatasetParseError : DatasetError {
  using DatasetError::DatasetError;
};
struct InvariantViolation : DatasetError {
  using DatasetError::DatasetError;
};

enum class DatasetFormat { Tsv, Jsonl };

inline DatasetFormat format_for_path(const std::string& path) {
  return path.size() >= 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0 ? DatasetFormat::Jsonl
                                                                              : DatasetFormat::Tsv;
}

inline std::string serialize(const std::vector<DatasetPair>& pairs, DatasetFormat format = DatasetFormat::Tsv) {
  std::string out;
  for (const auto& p : pairs) {
    if (format == DatasetFormat::Tsv) {
      out += print_trace(p.trace) + "\t" + print_formula(p.formula) + "\n";
    } else {
      out += nlohmann::json{{"trace", print_trace(p.trace)}, {"formula", print_formula(p.formula)}}.dump() + "\n";
    }
  }
  return out;
}

struct LoadOptions {
  Alphabet alphabet;
  /// Re-check every pair with check_universal.
  bool validate = true;
  CheckLimits limits;
};

inline std::vector<DatasetPair> deserialize(std::istream& in, DatasetFormat format, const LoadOptions& opts = {}) {
  std::vector<DatasetPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trace_text, formula_text;
    if (format == DatasetFormat::Tsv) {
      auto tab = line.find('\t');
      if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
        throw DatasetParseError(lineno, "expected exactly one TAB");
      trace_text = line.substr(0, tab);
      formula_text = line.substr(tab + 1);
    } else {
      try {
        auto rec = nlohmann::json::parse(line);
        trace_text = rec.at("trace").get<std::string>();
        formula_text = rec.at("formula").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw DatasetParseError(lineno, e.what());
      }
    }
    std::optional<DatasetPair> p;
    try {
      p = DatasetPair{parse_trace(trace_text, opts.alphabet), parse_formula(formula_text, opts.alphabet)};
    } catch (const ParseError& e) {
      throw DatasetParseError(lineno, e.what());
    }
    if (opts.validate) {
      auto r = check_universal(p->trace, p->formula, opts.limits);
      if (r.verdict != Verdict::Holds)
        throw InvariantViolation(lineno, std::string("formula does not hold on its trace (") + to_string(r.verdict) + ")");
    }
    out.push_back(std::move(*p));
  }
  return out;
}

inline void save(const std::vector<DatasetPair>& pairs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize(pairs, format_for_path(path));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<DatasetPair> load(const std::string& path, const LoadOptions& opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return deserialize(in, format_for_path(path), opts);
}

struct Split {
  std::vector<DatasetPair> train, val, test;
};

/// Seeded shuffle, then contiguous cuts of floor(r * n) for train and
/// validation; the test part takes the rest.
inline Split split(const std::vector<DatasetPair>& pairs, std::array<double, 3> ratios, std::uint64_t seed) {
  for (double r : ratios)
    if (!(r > 0)) throw std::invalid_argument("split ratios must be positive");
  if (std::abs(ratios[0] + ratios[1] + ratios[2] - 1.0) > 1e-9)
    throw std::invalid_argument("split ratios must sum to 1");
  std::vector<std::size_t> idx(pairs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
  auto n = static_cast<double>(pairs.size());
  auto n_train = static_cast<std::size_t>(std::floor(ratios[0] * n));
  auto n_val = static_cast<std::size_t>(std::floor(ratios[1] * n));
  Split s;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    auto& dst = k < n_train ? s.train : k < n_train + n_val ? s.val : s.test;
    dst.push_back(pairs[idx[k]]);
  }
  return s;
}

} // namespace ltlmine
