#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ltlmine/alphabet.hpp"
#include "ltlmine/errors.hpp"
#include "ltlmine/formula.hpp"

namespace ltlmine {

enum class Notation { Polish, Infix, Unicode };

struct ParseOptions {
  /// Only propositional connectives are accepted (trace step constraints).
  bool propositional_only = false;
  /// Accept `|` and rewrite x|y to !(&!x!y). Off by default; the core
  /// grammar has no disjunction.
  bool allow_disjunction = false;
};

/// Number of operands a formula character takes, or -1 if the character
/// is not part of the formula grammar.
inline int operand_count(char c) {
  switch (c) {
  case '1':
  case '0':
    return 0;
  case '!':
  case 'X':
    return 1;
  case '&':
  case 'U':
    return 2;
  default:
    return prop_of(c) ? 0 : -1;
  }
}

namespace detail {

inline int token_arity(char c, const Alphabet& alphabet, const ParseOptions& opts) {
  if (prop_of(c)) return alphabet.contains_char(c) ? 0 : -1;
  if (c == '|') return opts.allow_disjunction ? 2 : -1;
  if (opts.propositional_only && (c == 'X' || c == 'U')) return -1;
  return operand_count(c);
}

inline Formula disjunction(const Formula& l, const Formula& r) {
  return Formula::negation(Formula::conjunction(Formula::negation(l), Formula::negation(r)));
}

} // namespace detail

/// Parse a Polish-notation formula. `offset` shifts reported error
/// positions when the text is a slice of a larger string.
inline Formula parse_formula(std::string_view text, const Alphabet& alphabet = {}, const ParseOptions& opts = {},
                             std::size_t offset = 0) {
  if (text.empty()) throw ParseError(ParseErrorKind::PrematureEnd, offset, "empty formula");

  // Left-to-right pass: syntax errors are decided by the running count of
  // still-expected operands.
  long expected = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (expected == 0)
      throw ParseError(ParseErrorKind::ExcessTokens, offset + i,
                       std::string("'") + text[i] + "' does not belong to the parse tree");
    int n = detail::token_arity(text[i], alphabet, opts);
    if (n < 0) throw ParseError(ParseErrorKind::UnknownCharacter, offset + i, std::string("'") + text[i] + "'");
    expected += n - 1;
  }
  if (expected > 0)
    throw ParseError(ParseErrorKind::PrematureEnd, offset + text.size(),
                     std::to_string(expected) + " operand(s) missing");

  // Right-to-left pass builds the tree with an operand stack.
  std::vector<Formula> stack;
  stack.reserve(text.size());
  for (std::size_t i = text.size(); i-- > 0;) {
    char c = text[i];
    switch (c) {
    case '1':
      stack.push_back(Formula::top());
      break;
    case '0':
      stack.push_back(Formula::bottom());
      break;
    case '!':
    case 'X': {
      Formula a = std::move(stack.back());
      stack.back() = c == '!' ? Formula::negation(a) : Formula::next(a);
      break;
    }
    case '&':
    case 'U':
    case '|': {
      Formula l = std::move(stack.back());
      stack.pop_back();
      Formula r = std::move(stack.back());
      stack.back() = c == '&' ? Formula::conjunction(l, r)
                     : c == 'U' ? Formula::until(l, r)
                                : detail::disjunction(l, r);
      break;
    }
    default:
      stack.push_back(Formula::atom(*prop_of(c)));
    }
  }
  return stack.back();
}

namespace detail {

inline char polish_char(const Formula& f) {
  switch (f.kind()) {
  case Kind::True:
    return '1';
  case Kind::False:
    return '0';
  case Kind::Atom:
    return prop_char(f.prop());
  case Kind::Not:
    return '!';
  case Kind::And:
    return '&';
  case Kind::Next:
    return 'X';
  case Kind::Until:
    return 'U';
  }
  return '?';
}

inline void append_polish(const Formula& f, std::string& out) {
  out.push_back(polish_char(f));
  switch (arity(f.kind())) {
  case 2:
    append_polish(f.left(), out);
    append_polish(f.right(), out);
    break;
  case 1:
    append_polish(f.child(), out);
    break;
  default:
    break;
  }
}

// Binding strength for infix output: unary > U > &.
inline int precedence(Kind k) {
  switch (k) {
  case Kind::And:
    return 1;
  case Kind::Until:
    return 2;
  default:
    return 3;
  }
}

inline void append_infix(const Formula& f, bool unicode, std::string& out) {
  auto sub = [&](const Formula& g, bool parens) {
    if (parens) out.push_back('(');
    append_infix(g, unicode, out);
    if (parens) out.push_back(')');
  };
  switch (f.kind()) {
  case Kind::True:
  case Kind::False:
  case Kind::Atom:
    out.push_back(polish_char(f));
    break;
  case Kind::Not:
    out += unicode ? "¬" : "!";
    sub(f.child(), precedence(f.child().kind()) < 3);
    break;
  case Kind::Next:
    out.push_back('X');
    sub(f.child(), precedence(f.child().kind()) < 3);
    break;
  case Kind::And:
    // Left-nested conjunctions print flat; a right-nested one keeps parens
    // so the tree shape is recoverable.
    sub(f.left(), false);
    out += unicode ? " ∧ " : " & ";
    sub(f.right(), f.right().kind() == Kind::And);
    break;
  case Kind::Until:
    // U groups to the right.
    sub(f.left(), precedence(f.left().kind()) <= 2);
    out += " U ";
    sub(f.right(), precedence(f.right().kind()) < 2);
    break;
  }
}

} // namespace detail

inline std::string print_formula(const Formula& f, Notation notation = Notation::Polish) {
  std::string out;
  if (notation == Notation::Polish) {
    out.reserve(f.node_count());
    detail::append_polish(f, out);
  } else {
    detail::append_infix(f, notation == Notation::Unicode, out);
  }
  return out;
}

/// Three-way comparison of the Polish strings of two formulae without
/// materializing them.
inline int compare_polish(const Formula& a, const Formula& b) {
  if (a.id() == b.id()) return 0;
  char ca = detail::polish_char(a), cb = detail::polish_char(b);
  if (ca != cb) return ca < cb ? -1 : 1;
  switch (arity(a.kind())) {
  case 0:
    return 0;
  case 1:
    return compare_polish(a.child(), b.child());
  default:
    if (int c = compare_polish(a.left(), b.left())) return c;
    return compare_polish(a.right(), b.right());
  }
}

} // namespace ltlmine
