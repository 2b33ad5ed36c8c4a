#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltlmine/syntax.hpp"

namespace ltlmine {

/// Rewrite families used to drop duplicate candidates.
struct EliminationRules {
  bool double_negation = true;
  /// Conjuncts sorted by their Polish string.
  bool commutativity = true;
  /// Nested conjunctions flattened and rebuilt left-leaning.
  bool associativity = true;
  /// f & 1 becomes f, f & f becomes f.
  bool constant_folding = true;

  static EliminationRules none() { return {false, false, false, false}; }
  bool any() const { return double_negation || commutativity || associativity || constant_folding; }
};

struct EnumerationConfig {
  Alphabet alphabet;
  int max_operators = 2;
  EliminationRules rules;
  /// Budget for each satisfaction check made while mining.
  std::chrono::milliseconds check_timeout{30'000};
  std::size_t state_cap = 1'000'000;
};

namespace detail {

inline void collect_conjuncts(const Formula& f, bool flatten, std::vector<Formula>& out) {
  if (flatten && f.kind() == Kind::And) {
    collect_conjuncts(f.left(), flatten, out);
    collect_conjuncts(f.right(), flatten, out);
  } else {
    out.push_back(f);
  }
}

// Normalized conjunct list of l & r, both already canonical.
inline std::vector<Formula> conjunct_list(const Formula& l, const Formula& r, const EliminationRules& rules) {
  std::vector<Formula> cs;
  collect_conjuncts(l, rules.associativity, cs);
  collect_conjuncts(r, rules.associativity, cs);
  if (rules.constant_folding) {
    std::erase_if(cs, [](const Formula& c) { return c.kind() == Kind::True; });
    std::vector<Formula> kept;
    for (auto& c : cs)
      if (std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(std::move(c));
    cs = std::move(kept);
  }
  if (rules.commutativity)
    std::stable_sort(cs.begin(), cs.end(), [](const Formula& a, const Formula& b) { return compare_polish(a, b) < 0; });
  return cs;
}

// Whether `f` is the left-leaning conjunction of cs[0..n).
inline bool is_chain(const Formula& f, const std::vector<Formula>& cs, std::size_t n) {
  if (n == 1) return f == cs[0];
  return f.kind() == Kind::And && f.right() == cs[n - 1] && is_chain(f.left(), cs, n - 1);
}

} // namespace detail

/// Canonical representative of f under the enabled rules, computed bottom-up.
inline Formula canonicalize(const Formula& f, const EliminationRules& rules = {}) {
  switch (f.kind()) {
  case Kind::True:
  case Kind::False:
  case Kind::Atom:
    return f;
  case Kind::Not: {
    Formula c = canonicalize(f.child(), rules);
    if (rules.double_negation && c.kind() == Kind::Not) return c.child();
    return c == f.child() ? f : Formula::negation(c);
  }
  case Kind::Next: {
    Formula c = canonicalize(f.child(), rules);
    return c == f.child() ? f : Formula::next(c);
  }
  case Kind::Until: {
    Formula l = canonicalize(f.left(), rules), r = canonicalize(f.right(), rules);
    return l == f.left() && r == f.right() ? f : Formula::until(l, r);
  }
  case Kind::And: {
    auto cs = detail::conjunct_list(canonicalize(f.left(), rules), canonicalize(f.right(), rules), rules);
    if (cs.empty()) return Formula::top();
    if (detail::is_chain(f, cs, cs.size())) return f;
    Formula out = cs[0];
    for (std::size_t i = 1; i < cs.size(); ++i) out = Formula::conjunction(out, cs[i]);
    return out;
  }
  }
  return f;
}

/// Whether a formula with canonical children is itself canonical, i.e. it
/// survives elimination. Cheaper than canonicalize(f) == f.
inline bool retained_with_canonical_children(const Formula& f, const EliminationRules& rules = {}) {
  switch (f.kind()) {
  case Kind::Not:
    return !(rules.double_negation && f.child().kind() == Kind::Not);
  case Kind::And: {
    auto cs = detail::conjunct_list(f.left(), f.right(), rules);
    return !cs.empty() && detail::is_chain(f, cs, cs.size());
  }
  default:
    return true;
  }
}

inline bool is_canonical(const Formula& f, const EliminationRules& rules = {}) {
  return canonicalize(f, rules) == f;
}

namespace detail {

// Characters in ASCII order, so a depth-first walk yields Polish strings in
// lexicographic order.
inline std::string enumeration_glyphs(const Alphabet& alphabet) { return "!&01UX" + alphabet.letters(); }

} // namespace detail

/// Visits every candidate with at most cfg.max_operators operators, by
/// ascending operator count and then lexicographic Polish string, skipping
/// candidates that are not canonical. Returning false from `visit` stops
/// the walk. Candidates are produced one at a time from a depth-first walk
/// over token strings, so memory stays proportional to formula size.
inline void enumerate_formulae(const EnumerationConfig& cfg, const std::function<bool(const Formula&)>& visit) {
  if (cfg.max_operators < 0) throw std::invalid_argument("max_operators must be non-negative");
  const std::string glyphs = detail::enumeration_glyphs(cfg.alphabet);
  std::string buf;
  bool stop = false;

  std::function<void(int, long)> walk = [&](int ops_left, long expected) {
    if (stop) return;
    if (expected == 0) {
      if (ops_left != 0) return;
      Formula f = parse_formula(buf, cfg.alphabet);
      if (!cfg.rules.any() || is_canonical(f, cfg.rules))
        if (!visit(f)) stop = true;
      return;
    }
    for (char c : glyphs) {
      int n = operand_count(c);
      if (n == 0 && expected == 1 && ops_left > 0) continue;
      if (n > 0 && ops_left == 0) continue;
      buf.push_back(c);
      walk(ops_left - (n > 0 ? 1 : 0), expected + n - 1);
      buf.pop_back();
      if (stop) return;
    }
  };
  for (int k = 0; k <= cfg.max_operators && !stop; ++k) walk(k, 1);
}

inline std::vector<Formula> enumerate_all(const EnumerationConfig& cfg) {
  std::vector<Formula> out;
  enumerate_formulae(cfg, [&](const Formula& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

} // namespace ltlmine
