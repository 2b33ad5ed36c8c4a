#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ltlmine {

/// Proposition identifier: 0 is `a`, 25 is `z`.
using PropId = std::uint8_t;

/// A full assignment of truth values; bit p is set iff proposition p holds.
using Assignment = std::uint32_t;

inline constexpr int kMaxProps = 26;

inline char prop_char(PropId p) { return static_cast<char>('a' + p); }

inline std::optional<PropId> prop_of(char c) {
  if (c >= 'a' && c <= 'z') return static_cast<PropId>(c - 'a');
  return std::nullopt;
}

/// The set of atomic propositions a formula or trace may mention.
class Alphabet {
public:
  /// The first five letters, `a` through `e`.
  Alphabet() : Alphabet(5) {}

  explicit Alphabet(int count) {
    if (count < 0 || count > kMaxProps)
      throw std::invalid_argument("alphabet size must be in [0, 26]");
    mask_ = (1u << count) - 1u;
  }

  static Alphabet from_letters(std::string_view letters) {
    Alphabet a(0);
    for (char c : letters) {
      auto p = prop_of(c);
      if (!p) throw std::invalid_argument(std::string("not a proposition letter: ") + c);
      a.mask_ |= 1u << *p;
    }
    return a;
  }

  static Alphabet from_mask(std::uint32_t mask) {
    Alphabet a(0);
    a.mask_ = mask & ((1u << kMaxProps) - 1u);
    return a;
  }

  bool contains(PropId p) const { return p < kMaxProps && (mask_ >> p & 1u); }
  bool contains_char(char c) const {
    auto p = prop_of(c);
    return p && contains(*p);
  }

  std::uint32_t mask() const { return mask_; }
  int size() const { return std::popcount(mask_); }

  std::vector<PropId> props() const {
    std::vector<PropId> out;
    for (int p = 0; p < kMaxProps; ++p)
      if (mask_ >> p & 1u) out.push_back(static_cast<PropId>(p));
    return out;
  }

  std::string letters() const {
    std::string s;
    for (PropId p : props()) s.push_back(prop_char(p));
    return s;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
  std::uint32_t mask_ = 0;
};

} // namespace ltlmine
