#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ltlmine/alphabet.hpp"
#include "ltlmine/errors.hpp"
#include "ltlmine/syntax.hpp"

namespace ltlmine {

using TokenId = std::uint16_t;

enum class Domain : std::uint8_t { Trace, Formula, Special };

inline const char* to_string(Domain d) {
  switch (d) {
  case Domain::Trace:
    return "trace";
  case Domain::Formula:
    return "formula";
  case Domain::Special:
    return "special";
  }
  return "?";
}

struct TokenInfo {
  TokenId id;
  Domain domain;
  /// Character for trace/formula tokens, 0 for specials.
  char glyph;
  /// True for characters that appear in both domains and so own two ids.
  bool duplicated;
  std::string name;
};

/// Manually defined token inventory.
///
/// Layout: PAD, START, trace tokens, formula tokens, EOS. Characters used by
/// both traces and formulae (propositions, constants, `!`, `&`) get one id per
/// domain. EOS is always the last id, so the formula-domain logit vector
/// (formula tokens followed by EOS) also ends in EOS.
class Vocabulary {
public:
  explicit Vocabulary(const Alphabet& alphabet = {}) : alphabet_(alphabet) {
    add(Domain::Special, 0, false, "PAD");
    add(Domain::Special, 0, false, "START");
    std::string props = alphabet.letters();
    for (char c : props) add(Domain::Trace, c, true, std::string(1, c));
    for (char c : std::string_view("10!&")) add(Domain::Trace, c, true, std::string(1, c));
    for (char c : std::string_view(";{}")) add(Domain::Trace, c, false, std::string(1, c));
    formula_begin_ = static_cast<TokenId>(tokens_.size());
    for (char c : props) add(Domain::Formula, c, true, std::string(1, c));
    for (char c : std::string_view("10!&")) add(Domain::Formula, c, true, std::string(1, c));
    for (char c : std::string_view("XU")) add(Domain::Formula, c, false, std::string(1, c));
    add(Domain::Special, 0, false, "EOS");
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return tokens_.size(); }
  const TokenInfo& info(TokenId id) const { return tokens_.at(id); }
  bool valid(TokenId id) const { return id < tokens_.size(); }

  TokenId pad() const { return 0; }
  TokenId start() const { return 1; }
  TokenId eos() const { return static_cast<TokenId>(tokens_.size() - 1); }

  std::optional<TokenId> find(char c, Domain d) const {
    std::size_t lo = d == Domain::Formula ? formula_begin_ : 2;
    std::size_t hi = d == Domain::Formula ? tokens_.size() - 1 : formula_begin_;
    for (std::size_t i = lo; i < hi; ++i)
      if (tokens_[i].glyph == c) return static_cast<TokenId>(i);
    return std::nullopt;
  }

  /// Formula-domain tokens plus EOS: the length of every scorer logit vector.
  std::size_t formula_size() const { return tokens_.size() - formula_begin_; }

  /// Position of a formula token (or EOS) in a formula-domain logit vector.
  std::size_t formula_index(TokenId id) const {
    if (id < formula_begin_ || id >= tokens_.size()) throw std::out_of_range("not a formula-domain token");
    return id - formula_begin_;
  }
  TokenId formula_token(std::size_t index) const {
    if (index >= formula_size()) throw std::out_of_range("formula index out of range");
    return static_cast<TokenId>(formula_begin_ + index);
  }
  bool is_formula_token(TokenId id) const { return id >= formula_begin_ && id + 1u < tokens_.size(); }

  /// One line per token: "<id> <domain> <glyph-or-special-name>".
  std::string manifest() const {
    std::ostringstream out;
    for (const auto& t : tokens_) out << t.id << ' ' << to_string(t.domain) << ' ' << t.name << '\n';
    return out.str();
  }

private:
  void add(Domain d, char glyph, bool duplicated, std::string name) {
    tokens_.push_back(TokenInfo{static_cast<TokenId>(tokens_.size()), d, glyph, duplicated, std::move(name)});
  }

  Alphabet alphabet_;
  std::vector<TokenInfo> tokens_;
  TokenId formula_begin_ = 0;
};

struct TokenSeq {
  Domain domain = Domain::Formula;
  std::vector<TokenId> ids;

  std::size_t size() const { return ids.size(); }
  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

inline TokenSeq tokenize(std::string_view text, Domain domain, const Vocabulary& vocab) {
  if (domain == Domain::Special) throw std::invalid_argument("cannot tokenize into the special domain");
  TokenSeq seq{domain, {}};
  seq.ids.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto id = vocab.find(text[i], domain);
    if (!id)
      throw ParseError(ParseErrorKind::UnknownCharacter, i,
                       std::string("'") + text[i] + "' is not a " + to_string(domain) + " token");
    seq.ids.push_back(*id);
  }
  return seq;
}

/// Inverse of tokenize. EOS ends the text; PAD is skipped.
inline std::string detokenize(const TokenSeq& seq, const Vocabulary& vocab) {
  std::string out;
  for (TokenId id : seq.ids) {
    const auto& t = vocab.info(id);
    if (id == vocab.eos()) break;
    if (t.domain == Domain::Special) continue;
    out.push_back(t.glyph);
  }
  return out;
}

struct NotAFormulaToken : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operands required by a formula-domain token: 0, 1 or 2.
inline int operand_count(TokenId id, const Vocabulary& vocab) {
  if (!vocab.is_formula_token(id)) throw NotAFormulaToken("token " + std::to_string(id) + " is not a formula token");
  return operand_count(vocab.info(id).glyph);
}

} // namespace ltlmine
