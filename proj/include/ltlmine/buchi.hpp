#pragma once

#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ltlmine/concrete.hpp"
#include "ltlmine/ndfs.hpp"
#include "ltlmine/tableau.hpp"
#include "ltlmine/trace.hpp"

namespace ltlmine {

/// Explicit state-based Büchi automaton with propositional edge guards.
struct BuchiAutomaton {
  struct Transition {
    int source;
    int target;
    PropConstraint guard;
  };

  std::size_t state_count = 0;
  std::vector<int> initial;
  std::vector<Transition> transitions;
  std::vector<bool> accepting;

  std::vector<std::vector<std::size_t>> outgoing() const {
    std::vector<std::vector<std::size_t>> out(state_count);
    for (std::size_t i = 0; i < transitions.size(); ++i) out[transitions[i].source].push_back(i);
    return out;
  }
};

/// The tableau of a formula with its generalized condition folded into a
/// level counter, explored lazily. Edge labels are literal cubes.
class DegeneralizedTableau {
public:
  using Label = Cube;
  struct Edge {
    Cube label;
    int target;
  };

  DegeneralizedTableau(Tableau& tableau, Budget& budget) : tab_(tableau), budget_(budget) {}

  int initial() { return intern(tab_.initial(), 0); }
  bool accepting(int s) const { return keys_[s].second == static_cast<int>(tab_.until_count()); }

  const std::vector<Edge>& successors(int s) {
    if (succ_index_[s] < 0) {
      auto [ts, level] = keys_[s];
      std::vector<Edge> out;
      int sets = static_cast<int>(tab_.until_count());
      for (const auto& e : tab_.edges(ts)) out.push_back(Edge{e.cube, intern(e.target, next_level(level, sets, e.marks))});
      succ_index_[s] = static_cast<int>(succ_.size());
      succ_.push_back(std::move(out));
    }
    return succ_[succ_index_[s]];
  }

  std::size_t state_count() const { return keys_.size(); }
  std::pair<int, int> key(int s) const { return keys_[s]; }

private:
  int intern(int tableau_state, int level) {
    std::uint64_t k = static_cast<std::uint64_t>(tableau_state) << 20 | static_cast<std::uint64_t>(level);
    auto [it, inserted] = ids_.emplace(k, static_cast<int>(keys_.size()));
    if (inserted) {
      budget_.add_states();
      keys_.emplace_back(tableau_state, level);
      succ_index_.push_back(-1);
    }
    return it->second;
  }

  Tableau& tab_;
  Budget& budget_;
  std::unordered_map<std::uint64_t, int> ids_;
  std::vector<std::pair<int, int>> keys_;
  std::vector<int> succ_index_;
  std::deque<std::vector<Edge>> succ_;
};

/// Büchi automaton accepting exactly the words that satisfy f.
///
/// Throws ResourceLimitError when the state cap is exceeded.
inline BuchiAutomaton to_buchi(const Formula& f, const CheckLimits& limits = {}) {
  Budget budget(limits);
  Tableau tab(f, limits.state_cap);
  DegeneralizedTableau g(tab, budget);
  BuchiAutomaton out;
  int init = g.initial();
  out.initial.push_back(init);
  std::vector<int> frontier{init};
  std::vector<bool> seen{true};
  while (!frontier.empty()) {
    int s = frontier.back();
    frontier.pop_back();
    budget.poll();
    for (const auto& e : g.successors(s)) {
      out.transitions.push_back({s, e.target, cube_formula(e.label)});
      if (static_cast<std::size_t>(e.target) >= seen.size()) seen.resize(e.target + 1, false);
      if (!seen[e.target]) {
        seen[e.target] = true;
        frontier.push_back(e.target);
      }
    }
  }
  out.state_count = g.state_count();
  out.accepting.resize(out.state_count);
  for (std::size_t s = 0; s < out.state_count; ++s) out.accepting[s] = g.accepting(static_cast<int>(s));
  return out;
}

/// Lasso-shaped automaton of a symbolic trace: one state per distinct
/// position, edge i guarded by the step-i constraint, every state accepting.
inline BuchiAutomaton trace_automaton(const SymbolicTrace& t) {
  BuchiAutomaton out;
  out.state_count = t.length();
  out.initial.push_back(0);
  for (std::size_t i = 0; i < t.length(); ++i)
    out.transitions.push_back({static_cast<int>(i), static_cast<int>(t.successor(i)), t.at(i)});
  out.accepting.assign(out.state_count, true);
  return out;
}

namespace detail {

// Product of an explicit automaton with a single concrete lasso word.
class WordProduct {
public:
  using Label = int;
  struct Edge {
    int label;
    int target;
  };

  WordProduct(const BuchiAutomaton& a, const ConcreteLasso& w, Budget& budget)
      : a_(a), w_(w), out_(a.outgoing()), budget_(budget) {}

  int initial() { return root_; }
  bool accepting(int s) const { return s != root_ && a_.accepting[keys_[s].second]; }

  const std::vector<Edge>& successors(int s) {
    if (succ_index_.size() <= static_cast<std::size_t>(s) || succ_index_[s] < 0) {
      std::vector<Edge> out;
      auto push = [&](std::size_t pos, int q) {
        std::size_t n = w_.length();
        Assignment letter = w_.at(pos);
        for (std::size_t ti : out_[q]) {
          const auto& tr = a_.transitions[ti];
          if (eval_propositional(tr.guard, letter))
            out.push_back(Edge{0, intern(pos + 1 < n ? pos + 1 : w_.prefix.size(), tr.target)});
        }
      };
      if (s == root_) {
        for (int q : a_.initial) push(0, q);
      } else {
        push(keys_[s].first, keys_[s].second);
      }
      if (succ_index_.size() <= static_cast<std::size_t>(s)) succ_index_.resize(s + 1, -1);
      succ_index_[s] = static_cast<int>(succ_.size());
      succ_.push_back(std::move(out));
    }
    return succ_[succ_index_[s]];
  }

private:
  int intern(std::size_t pos, int q) {
    std::uint64_t k = static_cast<std::uint64_t>(pos) << 32 | static_cast<std::uint32_t>(q);
    auto [it, inserted] = ids_.emplace(k, static_cast<int>(keys_.size()));
    if (inserted) {
      budget_.add_states();
      keys_.emplace_back(pos, q);
    }
    return it->second;
  }

  const BuchiAutomaton& a_;
  const ConcreteLasso& w_;
  std::vector<std::vector<std::size_t>> out_;
  Budget& budget_;
  // State 0 is a synthetic root so several initial states can be handled.
  int root_ = 0;
  std::vector<std::pair<std::size_t, int>> keys_{{0, -1}};
  std::unordered_map<std::uint64_t, int> ids_;
  std::vector<int> succ_index_;
  std::deque<std::vector<Edge>> succ_;
};

} // namespace detail

/// Membership of a concrete lasso word in the automaton's language.
inline bool accepts(const BuchiAutomaton& a, const ConcreteLasso& w, const CheckLimits& limits = {}) {
  Budget budget(limits);
  detail::WordProduct g(a, w, budget);
  return find_accepting_lasso(g, budget).has_value();
}

} // namespace ltlmine
