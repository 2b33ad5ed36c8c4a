#pragma once

#include <chrono>
#include <deque>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ltlmine/buchi.hpp"
#include "ltlmine/concrete.hpp"
#include "ltlmine/ndfs.hpp"
#include "ltlmine/tableau.hpp"
#include "ltlmine/trace.hpp"

namespace ltlmine {

enum class Verdict { Holds, Violated, Timeout, InternalError };

inline const char* to_string(Verdict v) {
  switch (v) {
  case Verdict::Holds:
    return "HOLDS";
  case Verdict::Violated:
    return "VIOLATED";
  case Verdict::Timeout:
    return "TIMEOUT";
  case Verdict::InternalError:
    return "INTERNAL_ERROR";
  }
  return "?";
}

struct CheckResult {
  Verdict verdict = Verdict::InternalError;
  /// Universal check, Violated: a represented word falsifying the formula.
  /// Existential check, Holds: a represented word satisfying it.
  std::optional<ConcreteLasso> witness;
  std::string message;
  /// States of the explored product.
  std::size_t product_states = 0;

  bool holds() const { return verdict == Verdict::Holds; }
};

/// Satisfying assignments of each trace step, enumerated over the
/// propositions the step mentions.
class TraceSteps {
public:
  explicit TraceSteps(const SymbolicTrace& t) : trace_(t) {
    for (std::size_t i = 0; i < t.length(); ++i) {
      Step s;
      s.vars = t.at(i).atoms();
      // Enumerate sub-masks of vars.
      Assignment sub = 0;
      do {
        if (eval_propositional(t.at(i), sub)) s.models.push_back(sub);
        sub = (sub - s.vars) & s.vars;
      } while (sub != 0);
      steps_.push_back(std::move(s));
    }
  }

  const SymbolicTrace& trace() const { return trace_; }
  std::size_t size() const { return steps_.size(); }

  /// A letter satisfying both step i and the cube, if one exists. Atoms
  /// constrained by neither are false.
  std::optional<Assignment> compatible(std::size_t i, const Cube& c) const {
    const Step& s = steps_[i];
    for (Assignment m : s.models)
      if ((m & c.pos & s.vars) == (c.pos & s.vars) && (m & c.neg) == 0) return m | c.pos;
    return std::nullopt;
  }

  bool satisfiable(std::size_t i) const { return !steps_[i].models.empty(); }

private:
  struct Step {
    Assignment vars = 0;
    std::vector<Assignment> models;
  };
  SymbolicTrace trace_;
  std::vector<Step> steps_;
};

namespace detail {

// Lazy product of a trace automaton with a degeneralized tableau. Edge
// labels are concrete letters witnessing both guards.
class TraceProduct {
public:
  using Label = Assignment;
  struct Edge {
    Assignment label;
    int target;
  };

  TraceProduct(const TraceSteps& steps, Tableau& tab, Budget& budget) : steps_(steps), tab_(tab), budget_(budget) {}

  int initial() { return intern(0, tab_.initial(), 0); }
  bool accepting(int s) const { return keys_[s].level == static_cast<int>(tab_.until_count()); }

  const std::vector<Edge>& successors(int s) {
    if (succ_index_[s] < 0) {
      Key k = keys_[s];
      int sets = static_cast<int>(tab_.until_count());
      std::size_t next_pos = steps_.trace().successor(k.pos);
      std::vector<Edge> out;
      for (const auto& e : tab_.edges(k.state)) {
        if (auto letter = steps_.compatible(k.pos, e.cube))
          out.push_back(Edge{*letter, intern(next_pos, e.target, next_level(k.level, sets, e.marks))});
      }
      succ_index_[s] = static_cast<int>(succ_.size());
      succ_.push_back(std::move(out));
    }
    return succ_[succ_index_[s]];
  }

  std::size_t state_count() const { return keys_.size(); }

private:
  struct Key {
    std::size_t pos;
    int state;
    int level;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = static_cast<std::uint64_t>(k.state) * 0x9e3779b97f4a7c15ull;
      h ^= (k.pos + 0x632be59bd9b4e019ull + (h << 6) + (h >> 2));
      h ^= (static_cast<std::uint64_t>(k.level) + 0x85ebca6bull + (h << 6) + (h >> 2));
      return static_cast<std::size_t>(h);
    }
  };

  int intern(std::size_t pos, int state, int level) {
    auto [it, inserted] = ids_.emplace(Key{pos, state, level}, static_cast<int>(keys_.size()));
    if (inserted) {
      budget_.add_states();
      keys_.push_back(Key{pos, state, level});
      succ_index_.push_back(-1);
    }
    return it->second;
  }

  const TraceSteps& steps_;
  Tableau& tab_;
  Budget& budget_;
  std::unordered_map<Key, int, KeyHash> ids_;
  std::vector<Key> keys_;
  std::vector<int> succ_index_;
  std::deque<std::vector<Edge>> succ_;
};

} // namespace detail

/// Checks one formula against many traces, reusing the tableaux of f and ¬f
/// across calls. Not thread-safe; use one checker per thread.
class FormulaChecker {
public:
  explicit FormulaChecker(Formula f, CheckLimits limits = {}) : formula_(std::move(f)), limits_(limits) {}

  const Formula& formula() const { return formula_; }

  /// Holds iff every word represented by the trace satisfies the formula.
  CheckResult universal(const TraceSteps& steps) { return run(steps, true); }
  CheckResult universal(const SymbolicTrace& t) { return universal(TraceSteps(t)); }

  /// Holds iff some word represented by the trace satisfies the formula.
  CheckResult existential(const TraceSteps& steps) { return run(steps, false); }
  CheckResult existential(const SymbolicTrace& t) { return existential(TraceSteps(t)); }

private:
  CheckResult run(const TraceSteps& steps, bool universal) {
    CheckResult r;
    Budget budget(limits_);
    auto& tab = universal ? negated_ : positive_;
    try {
      if (!tab) tab = std::make_unique<Tableau>(universal ? Formula::negation(formula_) : formula_, limits_.state_cap);
      detail::TraceProduct product(steps, *tab, budget);
      auto run = find_accepting_lasso(product, budget);
      r.product_states = product.state_count();
      if (run) {
        r.witness = ConcreteLasso{std::move(run->stem), std::move(run->cycle)};
        r.verdict = universal ? Verdict::Violated : Verdict::Holds;
      } else {
        r.verdict = universal ? Verdict::Holds : Verdict::Violated;
      }
    } catch (const TimeoutError& e) {
      r.verdict = Verdict::Timeout;
      r.message = e.what();
    } catch (const ResourceLimitError& e) {
      r.verdict = Verdict::InternalError;
      r.message = e.what();
    } catch (const std::bad_alloc&) {
      r.verdict = Verdict::InternalError;
      r.message = "out of memory";
    } catch (const std::overflow_error& e) {
      r.verdict = Verdict::InternalError;
      r.message = e.what();
    }
    return r;
  }

  Formula formula_;
  CheckLimits limits_;
  std::unique_ptr<Tableau> negated_;
  std::unique_ptr<Tableau> positive_;
};

/// Universal satisfaction: emptiness of trace × tableau(¬f) by nested DFS.
/// A Violated result carries a counterexample word.
inline CheckResult check_universal(const SymbolicTrace& t, const Formula& f, CheckLimits limits = {}) {
  return FormulaChecker(f, limits).universal(t);
}

/// Existential satisfaction: non-emptiness of trace × tableau(f). A Holds
/// result carries a witness word.
inline CheckResult check_existential(const SymbolicTrace& t, const Formula& f, CheckLimits limits = {}) {
  return FormulaChecker(f, limits).existential(t);
}

} // namespace ltlmine
