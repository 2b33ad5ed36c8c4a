#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ltlmine {

enum class ParseErrorKind {
  PrematureEnd,      // an operator is missing an operand
  ExcessTokens,      // tokens remain after a complete formula
  UnknownCharacter,  // character outside the grammar or alphabet
  MalformedLasso,    // braces missing or misplaced, empty step or period
};

inline const char* to_string(ParseErrorKind k) {
  switch (k) {
  case ParseErrorKind::PrematureEnd:
    return "premature end";
  case ParseErrorKind::ExcessTokens:
    return "excess tokens";
  case ParseErrorKind::UnknownCharacter:
    return "unknown character";
  case ParseErrorKind::MalformedLasso:
    return "malformed lasso";
  }
  return "parse error";
}

class ParseError : public std::runtime_error {
public:
  ParseError(ParseErrorKind kind, std::size_t position, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + " at position " + std::to_string(position) +
                           (detail.empty() ? "" : ": " + detail)),
        kind_(kind), position_(position) {}

  ParseErrorKind kind() const { return kind_; }
  /// Zero-based character offset into the parsed text.
  std::size_t position() const { return position_; }

private:
  ParseErrorKind kind_;
  std::size_t position_;
};

/// Wall-clock budget of a check was exhausted.
struct TimeoutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An automaton or product exceeded the configured state cap.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace ltlmine
