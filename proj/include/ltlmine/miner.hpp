#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltlmine/enumerate.hpp"
#include "ltlmine/metrics.hpp"
#include "ltlmine/parallel.hpp"
#include "ltlmine/probe.hpp"

namespace ltlmine {

/// Every retained candidate up to the operator limit, stored compactly in
/// enumeration order. Candidates below the top layer also keep their
/// Formula and Polish string, since they are reused as subformulas; top
/// layer formulas are built on demand from their children.
///
/// Same order and same members as enumerate_formulae.
class Universe {
public:
  struct Entry {
    Kind kind;
    PropId prop;
    std::uint8_t ops;
    std::int32_t a;
    std::int32_t b;
  };

  Universe(const Alphabet& alphabet, int max_operators, const EliminationRules& rules = {})
      : max_ops_(max_operators), rules_(rules) {
    if (max_operators < 0) throw std::invalid_argument("max_operators must be non-negative");
    if (max_operators > 255) throw std::invalid_argument("max_operators too large");
    layer_begin_.push_back(0);
    // Layer 0: "0" < "1" < letters.
    add_leaf(Formula::bottom());
    add_leaf(Formula::top());
    for (PropId p : alphabet.props()) add_leaf(Formula::atom(p));
    layer_begin_.push_back(entries_.size());

    std::vector<std::int32_t> sorted_lower; // all entries of layers < k, lexicographic
    for (std::size_t i = 0; i < entries_.size(); ++i) sorted_lower.push_back(static_cast<std::int32_t>(i));

    for (int k = 1; k <= max_operators; ++k) {
      bool top = k == max_operators;
      auto layer = [&](int j) { return std::pair(layer_begin_[j], layer_begin_[j + 1]); };
      // '!' < '&' < 'U' < 'X'
      for (auto [lo, hi] = layer(k - 1); lo < hi; ++lo) {
        if (rules_.double_negation && entries_[lo].kind == Kind::Not) continue;
        add(Kind::Not, static_cast<std::int32_t>(lo), -1, k, top);
      }
      for (std::int32_t l : sorted_lower) {
        auto [lo, hi] = layer(k - 1 - entries_[l].ops);
        for (; lo < hi; ++lo) {
          if (rules_.any() && !retained_with_canonical_children(
                                  Formula::conjunction(formulas_[l], formulas_[lo]), rules_))
            continue;
          add(Kind::And, l, static_cast<std::int32_t>(lo), k, top);
        }
      }
      for (std::int32_t l : sorted_lower) {
        auto [lo, hi] = layer(k - 1 - entries_[l].ops);
        for (; lo < hi; ++lo) add(Kind::Until, l, static_cast<std::int32_t>(lo), k, top);
      }
      for (auto [lo, hi] = layer(k - 1); lo < hi; ++lo) add(Kind::Next, static_cast<std::int32_t>(lo), -1, k, top);
      layer_begin_.push_back(entries_.size());

      if (!top) {
        // Merge layer k into the sorted list of lower entries.
        std::vector<std::int32_t> merged;
        merged.reserve(sorted_lower.size() + (layer_begin_[k + 1] - layer_begin_[k]));
        std::size_t x = 0, y = layer_begin_[k];
        while (x < sorted_lower.size() || y < layer_begin_[k + 1]) {
          if (y == layer_begin_[k + 1] || (x < sorted_lower.size() && polish_[sorted_lower[x]] < polish_[y]))
            merged.push_back(sorted_lower[x++]);
          else
            merged.push_back(static_cast<std::int32_t>(y++));
        }
        sorted_lower = std::move(merged);
      }
    }
  }

  std::size_t size() const { return entries_.size(); }
  int max_operators() const { return max_ops_; }
  const Entry& entry(std::size_t i) const { return entries_[i]; }
  /// Entries [begin, end) with exactly k operators.
  std::pair<std::size_t, std::size_t> layer(int k) const { return {layer_begin_[k], layer_begin_[k + 1]}; }
  /// Entries below this index keep a stored Formula.
  std::size_t stored() const { return formulas_.size(); }

  Formula formula(std::size_t i) const {
    if (i < formulas_.size()) return formulas_[i];
    const Entry& e = entries_[i];
    switch (e.kind) {
    case Kind::Not:
      return Formula::negation(formulas_[e.a]);
    case Kind::Next:
      return Formula::next(formulas_[e.a]);
    case Kind::And:
      return Formula::conjunction(formulas_[e.a], formulas_[e.b]);
    case Kind::Until:
      return Formula::until(formulas_[e.a], formulas_[e.b]);
    default:
      throw std::logic_error("leaf entries are always stored");
    }
  }

  /// Probe value of entry i from its children's values.
  TraceProbe::Value value(const TraceProbe& probe, std::size_t i, const std::vector<TraceProbe::Value>& lower) const {
    const Entry& e = entries_[i];
    switch (e.kind) {
    case Kind::True:
      return probe.top();
    case Kind::False:
      return probe.bottom();
    case Kind::Atom:
      return probe.atom(e.prop);
    case Kind::Not:
      return probe.negation(lower[e.a]);
    case Kind::Next:
      return probe.next(lower[e.a]);
    case Kind::And:
      return probe.conjunction(lower[e.a], lower[e.b]);
    case Kind::Until:
      return probe.until(lower[e.a], lower[e.b]);
    }
    return {};
  }

  /// Values of all stored entries on one trace.
  std::vector<TraceProbe::Value> lower_values(const TraceProbe& probe) const {
    std::vector<TraceProbe::Value> out;
    out.reserve(formulas_.size());
    for (std::size_t i = 0; i < formulas_.size(); ++i) out.push_back(value(probe, i, out));
    return out;
  }

private:
  void add_leaf(Formula f) {
    entries_.push_back(Entry{f.kind(), f.kind() == Kind::Atom ? f.prop() : PropId{0}, 0, -1, -1});
    polish_.push_back(print_formula(f));
    formulas_.push_back(std::move(f));
  }

  void add(Kind kind, std::int32_t a, std::int32_t b, int ops, bool top) {
    entries_.push_back(Entry{kind, 0, static_cast<std::uint8_t>(ops), a, b});
    if (top) return;
    Formula f = kind == Kind::Not    ? Formula::negation(formulas_[a])
                : kind == Kind::Next ? Formula::next(formulas_[a])
                : kind == Kind::And  ? Formula::conjunction(formulas_[a], formulas_[b])
                                     : Formula::until(formulas_[a], formulas_[b]);
    polish_.push_back(print_formula(f));
    formulas_.push_back(std::move(f));
  }

  int max_ops_;
  EliminationRules rules_;
  std::vector<Entry> entries_;
  std::vector<std::size_t> layer_begin_;
  std::vector<Formula> formulas_;
  std::vector<std::string> polish_;
};

struct MineStats {
  std::size_t candidates = 0;
  std::size_t satisfied = 0;
  /// Candidates settled by the bitmask probe without building an automaton.
  std::size_t probe_decided = 0;
  std::size_t automaton_checks = 0;
  /// Candidates excluded because their check timed out or failed.
  std::size_t timeouts = 0;
  double check_seconds = 0;
};

struct NoSatisfyingFormula : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mines one trace against a prebuilt universe. Calls emit(index) for each
/// satisfied candidate in enumeration order.
inline MineStats mine_indices(const Universe& u, const SymbolicTrace& t, const CheckLimits& limits,
                              const std::function<void(std::size_t)>& emit) {
  MineStats stats;
  auto start = std::chrono::steady_clock::now();
  TraceProbe probe(t);
  TraceSteps steps(t);
  std::vector<TraceProbe::Value> lower;
  if (probe.usable()) lower = u.lower_values(probe);
  for (std::size_t i = 0; i < u.size(); ++i) {
    ++stats.candidates;
    ProbeVerdict pv = ProbeVerdict::Unknown;
    if (probe.usable()) pv = probe.verdict(i < lower.size() ? lower[i] : u.value(probe, i, lower));
    bool holds;
    if (pv != ProbeVerdict::Unknown) {
      ++stats.probe_decided;
      holds = pv == ProbeVerdict::Holds;
    } else {
      ++stats.automaton_checks;
      auto r = FormulaChecker(u.formula(i), limits).universal(steps);
      if (r.verdict == Verdict::Timeout || r.verdict == Verdict::InternalError) {
        ++stats.timeouts;
        continue;
      }
      holds = r.verdict == Verdict::Holds;
    }
    if (holds) {
      ++stats.satisfied;
      emit(i);
    }
  }
  stats.check_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

inline CheckLimits limits_of(const EnumerationConfig& cfg) { return CheckLimits{cfg.check_timeout, cfg.state_cap}; }

/// Every enumerated formula that holds universally on t, in enumeration
/// order.
inline std::vector<Formula> mine(const SymbolicTrace& t, const EnumerationConfig& cfg, MineStats* stats = nullptr) {
  Universe u(cfg.alphabet, cfg.max_operators, cfg.rules);
  std::vector<Formula> out;
  auto s = mine_indices(u, t, limits_of(cfg), [&](std::size_t i) { out.push_back(u.formula(i)); });
  if (stats) *stats = s;
  return out;
}

struct MostDistinct {
  Formula formula;
  DistinctivenessScore score;
};

/// The mined formula with the highest distinctiveness against `others`;
/// the earliest in enumeration order wins ties.
inline MostDistinct mine_most_distinct(const Universe& u, const SymbolicTrace& t, const TraceBatch& others,
                                       const CheckLimits& limits, MineStats* stats = nullptr) {
  if (others.size() == 0) throw std::invalid_argument("others must be non-empty");
  std::vector<std::size_t> mined;
  auto s = mine_indices(u, t, limits, [&](std::size_t i) { mined.push_back(i); });
  if (stats) *stats = s;
  if (mined.empty()) throw NoSatisfyingFormula("no enumerated formula holds on " + print_trace(t));

  // satisfied[m] counts the other traces candidate mined[m] holds on.
  std::vector<std::size_t> satisfied(mined.size(), 0), timeouts(mined.size(), 0);
  for (std::size_t o = 0; o < others.size(); ++o) {
    const TraceProbe& probe = others.probe(o);
    std::vector<TraceProbe::Value> lower;
    if (probe.usable()) lower = u.lower_values(probe);
    for (std::size_t m = 0; m < mined.size(); ++m) {
      std::size_t i = mined[m];
      ProbeVerdict pv = ProbeVerdict::Unknown;
      if (probe.usable()) pv = probe.verdict(i < lower.size() ? lower[i] : u.value(probe, i, lower));
      if (pv == ProbeVerdict::Holds) {
        ++satisfied[m];
      } else if (pv == ProbeVerdict::Unknown) {
        Verdict v = FormulaChecker(u.formula(i), limits).universal(others.steps(o)).verdict;
        if (v == Verdict::Holds)
          ++satisfied[m];
        else if (v != Verdict::Violated)
          ++timeouts[m];
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t m = 1; m < mined.size(); ++m)
    if (satisfied[m] < satisfied[best]) best = m;
  MostDistinct out{u.formula(mined[best]), {}};
  out.score.other_count = others.size();
  out.score.satisfied_others = satisfied[best];
  out.score.timeout_pairs = timeouts[best];
  out.score.value = 1.0 - static_cast<double>(satisfied[best]) / static_cast<double>(others.size());
  return out;
}

inline MostDistinct mine_most_distinct(const SymbolicTrace& t, const std::vector<SymbolicTrace>& others,
                                       const EnumerationConfig& cfg, MineStats* stats = nullptr) {
  Universe u(cfg.alphabet, cfg.max_operators, cfg.rules);
  return mine_most_distinct(u, t, TraceBatch(others), limits_of(cfg), stats);
}

/// Result of mining one trace of a batch.
struct MinedTrace {
  std::vector<std::string> formulas;
  MineStats stats;
};

/// Mines many traces against one shared universe. Results are indexed like
/// `traces` regardless of worker scheduling.
inline std::vector<MinedTrace> mine_batch(const Universe& u, const std::vector<SymbolicTrace>& traces,
                                          const CheckLimits& limits, unsigned workers = 1) {
  std::vector<MinedTrace> out(traces.size());
  parallel_for(traces.size(), workers, [&](std::size_t k) {
    out[k].stats = mine_indices(u, traces[k], limits,
                                [&](std::size_t i) { out[k].formulas.push_back(print_formula(u.formula(i))); });
  });
  return out;
}

} // namespace ltlmine
