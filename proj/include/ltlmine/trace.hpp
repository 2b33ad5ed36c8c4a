#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ltlmine/syntax.hpp"

namespace ltlmine {

/// A temporal-operator-free formula constraining one trace position.
using PropConstraint = Formula;

/// Lasso u v^ω whose positions carry propositional constraints. It stands
/// for every concrete infinite word consistent with each position.
class SymbolicTrace {
public:
  SymbolicTrace(std::vector<PropConstraint> prefix, std::vector<PropConstraint> period)
      : prefix_(std::move(prefix)), period_(std::move(period)) {
    if (period_.empty()) throw std::invalid_argument("symbolic trace period must be non-empty");
    for (const auto* part : {&prefix_, &period_})
      for (const auto& c : *part)
        if (!c.is_propositional()) throw std::invalid_argument("trace step constraint contains X or U");
  }

  const std::vector<PropConstraint>& prefix() const { return prefix_; }
  const std::vector<PropConstraint>& period() const { return period_; }

  /// |u| + |v|: number of distinct positions.
  std::size_t length() const { return prefix_.size() + period_.size(); }
  std::size_t loop_start() const { return prefix_.size(); }

  /// Constraint at unrolled position i.
  const PropConstraint& at(std::size_t i) const {
    if (i < prefix_.size()) return prefix_[i];
    return period_[(i - prefix_.size()) % period_.size()];
  }
  /// Successor among the |u| + |v| distinct positions.
  std::size_t successor(std::size_t i) const { return i + 1 < length() ? i + 1 : loop_start(); }

  std::uint32_t atoms() const {
    std::uint32_t m = 0;
    for (const auto& c : prefix_) m |= c.atoms();
    for (const auto& c : period_) m |= c.atoms();
    return m;
  }

  friend bool operator==(const SymbolicTrace&, const SymbolicTrace&) = default;

private:
  std::vector<PropConstraint> prefix_;
  std::vector<PropConstraint> period_;
};

namespace detail {

inline std::vector<PropConstraint> parse_steps(std::string_view text, std::size_t offset, const Alphabet& alphabet,
                                               const ParseOptions& opts) {
  std::vector<PropConstraint> steps;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    if (end == start) throw ParseError(ParseErrorKind::MalformedLasso, offset + start, "empty trace step");
    steps.push_back(parse_formula(text.substr(start, end - start), alphabet, opts, offset + start));
    start = end + 1;
  }
  return steps;
}

} // namespace detail

/// Parse `step;step;...;{step;...}`.
inline SymbolicTrace parse_trace(std::string_view text, const Alphabet& alphabet = {}, ParseOptions opts = {}) {
  opts.propositional_only = true;
  std::size_t open = text.find('{');
  if (open == std::string_view::npos) throw ParseError(ParseErrorKind::MalformedLasso, text.size(), "missing '{'");
  if (text.find('{', open + 1) != std::string_view::npos)
    throw ParseError(ParseErrorKind::MalformedLasso, text.find('{', open + 1), "second '{'");
  std::size_t close = text.find('}');
  if (close == std::string_view::npos) throw ParseError(ParseErrorKind::MalformedLasso, text.size(), "missing '}'");
  if (close < open) throw ParseError(ParseErrorKind::MalformedLasso, close, "'}' before '{'");
  if (close + 1 != text.size())
    throw ParseError(ParseErrorKind::MalformedLasso, close + 1, "text after the period block");
  if (close == open + 1) throw ParseError(ParseErrorKind::MalformedLasso, close, "empty period");

  std::vector<PropConstraint> prefix;
  if (open > 0) {
    if (text[open - 1] != ';')
      throw ParseError(ParseErrorKind::MalformedLasso, open, "'{' must follow ';' or start the trace");
    prefix = detail::parse_steps(text.substr(0, open - 1), 0, alphabet, opts);
  }
  auto period = detail::parse_steps(text.substr(open + 1, close - open - 1), open + 1, alphabet, opts);
  return SymbolicTrace(std::move(prefix), std::move(period));
}

inline std::string print_trace(const SymbolicTrace& t) {
  std::string out;
  for (const auto& c : t.prefix()) {
    out += print_formula(c);
    out.push_back(';');
  }
  out.push_back('{');
  for (std::size_t i = 0; i < t.period().size(); ++i) {
    if (i) out.push_back(';');
    out += print_formula(t.period()[i]);
  }
  out.push_back('}');
  return out;
}

} // namespace ltlmine
