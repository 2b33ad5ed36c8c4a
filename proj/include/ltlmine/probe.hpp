#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ltlmine/check.hpp"

namespace ltlmine {

enum class ProbeVerdict { Holds, Violated, Unknown };

/// Sound but incomplete universal check against one trace, on bitmasks.
///
/// Each formula gets, per symbolic position, a must-true and a must-false
/// bit (true resp. false in every represented word at every unrolling of
/// that position), plus its exact value on a handful of represented sample
/// words. Holds needs must-true at 0; a falsifying sample is a genuine
/// counterexample. Everything else is Unknown and needs the full check.
class TraceProbe {
public:
  static constexpr int kSamples = 6;

  struct Value {
    std::uint64_t must_true = 0;
    std::uint64_t must_false = 0;
    std::array<std::uint64_t, kSamples> sample{};
  };

  explicit TraceProbe(const SymbolicTrace& t, std::uint64_t seed = 0x5eedu) : trace_(t) {
    n_ = t.length();
    loop_ = t.loop_start();
    if (n_ > 64) return;
    TraceSteps steps(t);
    for (std::size_t i = 0; i < n_; ++i)
      if (!steps.satisfiable(i)) empty_ = true;
    if (empty_) {
      usable_ = true;
      return;
    }

    std::size_t per = t.period().size();
    copies_ = loop_ + 2 * per <= 64 ? 2 : 1;
    m_ = loop_ + copies_ * per;

    // Letters of each sample word at each of its m_ positions.
    std::mt19937_64 rng(seed);
    const Assignment free_bits = (1u << kMaxProps) - 1u;
    words_.assign(kSamples, std::vector<Assignment>(m_));
    for (int s = 0; s < kSamples; ++s) {
      for (std::size_t j = 0; j < m_; ++j) {
        std::size_t i = j < n_ ? j : loop_ + (j - loop_) % per;
        const auto& step = t.at(i);
        Assignment vars = step.atoms();
        std::vector<Assignment> models;
        Assignment sub = 0;
        do {
          if (eval_propositional(step, sub)) models.push_back(sub);
          sub = (sub - vars) & vars;
        } while (sub != 0);
        Assignment rest;
        std::size_t pick;
        if (s == 0) {
          rest = 0;
          pick = 0;
        } else if (s == 1) {
          rest = free_bits;
          pick = models.size() - 1;
        } else {
          rest = static_cast<Assignment>(rng());
          pick = static_cast<std::size_t>(rng() % models.size());
        }
        words_[s][j] = models[pick] | (rest & free_bits & ~vars);
      }
    }

    // Atoms each step forces true or false.
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& step = t.at(i);
      Assignment vars = step.atoms();
      Assignment all = ~0u, none = ~0u;
      Assignment sub = 0;
      do {
        if (eval_propositional(step, sub)) {
          all &= sub;
          none &= ~sub;
        }
        sub = (sub - vars) & vars;
      } while (sub != 0);
      forced_true_.push_back(all & vars);
      forced_false_.push_back(none & vars);
    }
    usable_ = true;
  }

  /// False when the trace is too long for the bitmask encoding; every
  /// verdict is then Unknown.
  bool usable() const { return usable_; }
  /// Some step is unsatisfiable, so the trace represents no word at all.
  bool empty_language() const { return empty_; }
  const SymbolicTrace& trace() const { return trace_; }

  Value top() const {
    Value v;
    v.must_true = full(n_);
    v.sample.fill(full(m_));
    return v;
  }
  Value bottom() const {
    Value v;
    v.must_false = full(n_);
    return v;
  }
  Value atom(PropId p) const {
    Value v;
    if (!usable_ || empty_) return v;
    for (std::size_t i = 0; i < n_; ++i) {
      if (forced_true_[i] >> p & 1u) v.must_true |= bit(i);
      if (forced_false_[i] >> p & 1u) v.must_false |= bit(i);
    }
    for (int s = 0; s < kSamples; ++s)
      for (std::size_t j = 0; j < m_; ++j)
        if (words_[s][j] >> p & 1u) v.sample[s] |= bit(j);
    return v;
  }
  Value negation(const Value& a) const {
    Value v;
    v.must_true = a.must_false;
    v.must_false = a.must_true;
    for (int s = 0; s < kSamples; ++s) v.sample[s] = ~a.sample[s] & full(m_);
    return v;
  }
  Value conjunction(const Value& a, const Value& b) const {
    Value v;
    v.must_true = a.must_true & b.must_true;
    v.must_false = a.must_false | b.must_false;
    for (int s = 0; s < kSamples; ++s) v.sample[s] = a.sample[s] & b.sample[s];
    return v;
  }
  Value next(const Value& a) const {
    Value v;
    v.must_true = shift(a.must_true, n_, loop_);
    v.must_false = shift(a.must_false, n_, loop_);
    for (int s = 0; s < kSamples; ++s) v.sample[s] = shift(a.sample[s], m_, loop_);
    return v;
  }
  Value until(const Value& a, const Value& b) const {
    Value v;
    // must-true: least fixpoint of b | (a & X x)
    std::uint64_t x = b.must_true;
    for (;;) {
      std::uint64_t y = b.must_true | (a.must_true & shift(x, n_, loop_));
      if (y == x) break;
      x = y;
    }
    v.must_true = x;
    // must-false: greatest fixpoint of !b & (!a | X y)
    x = b.must_false;
    for (;;) {
      std::uint64_t y = b.must_false & (a.must_false | shift(x, n_, loop_));
      if (y == x) break;
      x = y;
    }
    v.must_false = x;
    for (int s = 0; s < kSamples; ++s) {
      std::uint64_t z = b.sample[s];
      for (;;) {
        std::uint64_t y = b.sample[s] | (a.sample[s] & shift(z, m_, loop_));
        if (y == z) break;
        z = y;
      }
      v.sample[s] = z;
    }
    return v;
  }

  Value eval(const Formula& f) const {
    switch (f.kind()) {
    case Kind::True:
      return top();
    case Kind::False:
      return bottom();
    case Kind::Atom:
      return atom(f.prop());
    case Kind::Not:
      return negation(eval(f.child()));
    case Kind::And:
      return conjunction(eval(f.left()), eval(f.right()));
    case Kind::Next:
      return next(eval(f.child()));
    case Kind::Until:
      return until(eval(f.left()), eval(f.right()));
    }
    return {};
  }

  ProbeVerdict verdict(const Value& v) const {
    if (!usable_) return ProbeVerdict::Unknown;
    if (empty_) return ProbeVerdict::Holds;
    if (v.must_true & 1u) return ProbeVerdict::Holds;
    if (v.must_false & 1u) return ProbeVerdict::Violated;
    for (int s = 0; s < kSamples; ++s)
      if (!(v.sample[s] & 1u)) return ProbeVerdict::Violated;
    return ProbeVerdict::Unknown;
  }
  ProbeVerdict verdict(const Formula& f) const { return usable_ ? verdict(eval(f)) : ProbeVerdict::Unknown; }

  /// A sample word falsifying the formula, if any.
  std::optional<ConcreteLasso> witness(const Value& v) const {
    if (!usable_ || empty_) return std::nullopt;
    for (int s = 0; s < kSamples; ++s)
      if (!(v.sample[s] & 1u)) return sample_word(s);
    return std::nullopt;
  }

  ConcreteLasso sample_word(int s) const {
    ConcreteLasso w;
    w.prefix.assign(words_[s].begin(), words_[s].begin() + static_cast<std::ptrdiff_t>(loop_));
    w.period.assign(words_[s].begin() + static_cast<std::ptrdiff_t>(loop_), words_[s].end());
    return w;
  }

private:
  static std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }
  static std::uint64_t full(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }
  // Value at the successor of every position of a lasso with n positions
  // looping back to `loop`.
  static std::uint64_t shift(std::uint64_t m, std::size_t n, std::size_t loop) {
    return (m >> 1) | ((m >> loop) & 1u) << (n - 1);
  }

  SymbolicTrace trace_;
  std::size_t n_ = 0, loop_ = 0, m_ = 0, copies_ = 1;
  bool usable_ = false;
  bool empty_ = false;
  std::vector<Assignment> forced_true_, forced_false_;
  std::vector<std::vector<Assignment>> words_;
};

} // namespace ltlmine
