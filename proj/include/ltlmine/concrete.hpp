#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ltlmine/trace.hpp"

namespace ltlmine {

/// Ultimately periodic word prefix · period^ω of full assignments.
struct ConcreteLasso {
  std::vector<Assignment> prefix;
  std::vector<Assignment> period;

  std::size_t length() const { return prefix.size() + period.size(); }
  Assignment at(std::size_t i) const {
    if (i < prefix.size()) return prefix[i];
    return period[(i - prefix.size()) % period.size()];
  }

  friend bool operator==(const ConcreteLasso&, const ConcreteLasso&) = default;
};

/// Truth of a temporal-operator-free formula under one assignment.
inline bool eval_propositional(const Formula& f, Assignment letter) {
  switch (f.kind()) {
  case Kind::True:
    return true;
  case Kind::False:
    return false;
  case Kind::Atom:
    return letter >> f.prop() & 1u;
  case Kind::Not:
    return !eval_propositional(f.child(), letter);
  case Kind::And:
    return eval_propositional(f.left(), letter) && eval_propositional(f.right(), letter);
  case Kind::Next:
  case Kind::Until:
    break;
  }
  throw std::invalid_argument("eval_propositional: formula has temporal operators");
}

namespace detail {

// Truth value of f at each of the |prefix| + |period| distinct positions.
inline std::vector<char> eval_positions(const ConcreteLasso& w, const Formula& f) {
  const std::size_t n = w.length();
  const std::size_t loop = w.prefix.size();
  auto succ = [&](std::size_t i) { return i + 1 < n ? i + 1 : loop; };
  std::vector<char> out(n);
  switch (f.kind()) {
  case Kind::True:
    std::fill(out.begin(), out.end(), 1);
    break;
  case Kind::False:
    break;
  case Kind::Atom:
    for (std::size_t i = 0; i < n; ++i) out[i] = w.at(i) >> f.prop() & 1u;
    break;
  case Kind::Not: {
    auto a = eval_positions(w, f.child());
    for (std::size_t i = 0; i < n; ++i) out[i] = !a[i];
    break;
  }
  case Kind::And: {
    auto a = eval_positions(w, f.left());
    auto b = eval_positions(w, f.right());
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] && b[i];
    break;
  }
  case Kind::Next: {
    auto a = eval_positions(w, f.child());
    for (std::size_t i = 0; i < n; ++i) out[i] = a[succ(i)];
    break;
  }
  case Kind::Until: {
    // Least fixed point of  v = b ∨ (a ∧ X v)  over the lasso positions.
    auto a = eval_positions(w, f.left());
    auto b = eval_positions(w, f.right());
    out = b;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = n; i-- > 0;) {
        char v = b[i] || (a[i] && out[succ(i)]);
        if (v != out[i]) {
          out[i] = v;
          changed = true;
        }
      }
    }
    break;
  }
  }
  return out;
}

} // namespace detail

/// Whether prefix · period^ω satisfies f at position 0.
inline bool eval_concrete(const ConcreteLasso& w, const Formula& f) {
  if (w.period.empty()) throw std::invalid_argument("concrete lasso period must be non-empty");
  return detail::eval_positions(w, f)[0];
}

/// Whether the symbolic trace represents the concrete word: every unrolled
/// position's letter satisfies that position's constraint.
inline bool represents(const SymbolicTrace& t, const ConcreteLasso& w) {
  // Both are lassos; checking positions up to the joint period suffices.
  std::size_t stem = std::max(t.prefix().size(), w.prefix.size());
  std::size_t a = t.period().size(), b = w.period.size();
  std::size_t g = a, h = b;
  while (h) {
    std::size_t r = g % h;
    g = h;
    h = r;
  }
  std::size_t horizon = stem + a / g * b;
  for (std::size_t i = 0; i < horizon; ++i)
    if (!eval_propositional(t.at(i), w.at(i))) return false;
  return true;
}

/// Trace-grammar rendering of a concrete word: each position is the full
/// conjunction of literals over `props`.
inline std::string print_concrete(const ConcreteLasso& w, std::uint32_t props) {
  auto letter = [&](Assignment a) {
    std::string lits;
    int count = 0;
    for (int p = 0; p < kMaxProps; ++p) {
      if (!(props >> p & 1u)) continue;
      if (!(a >> p & 1u)) lits.push_back('!');
      lits.push_back(prop_char(static_cast<PropId>(p)));
      ++count;
    }
    if (count == 0) return std::string("1");
    return std::string(static_cast<std::size_t>(count - 1), '&') + lits;
  };
  std::string out;
  for (Assignment a : w.prefix) out += letter(a) + ";";
  out.push_back('{');
  for (std::size_t i = 0; i < w.period.size(); ++i) {
    if (i) out.push_back(';');
    out += letter(w.period[i]);
  }
  out.push_back('}');
  return out;
}

} // namespace ltlmine
