#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltlmine/dataset_pair.hpp"
#include "ltlmine/vocabulary.hpp"

namespace ltlmine {

inline constexpr double kMasked = -std::numeric_limits<double>::infinity();

struct ScorerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VectorLengthMismatch : ScorerError {
  using ScorerError::ScorerError;
};

/// Next-token scorer: given the trace tokens and the formula prefix so far,
/// one logit per formula-domain token with EOS last.
class Scorer {
public:
  virtual ~Scorer() = default;
  virtual std::vector<double> next_logits(const TokenSeq& trace, const TokenSeq& prefix) = 0;
};

struct TokenAfterComplete : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operands still missing after `prefix`, starting from one expected
/// statement. Throws TokenAfterComplete if a token follows a complete
/// formula.
inline long expected_statements(const TokenSeq& prefix, const Vocabulary& vocab) {
  long expected = 1;
  for (std::size_t i = 0; i < prefix.ids.size(); ++i) {
    if (expected == 0)
      throw TokenAfterComplete("token " + std::to_string(i) + " follows a complete formula");
    expected += operand_count(prefix.ids[i], vocab) - 1;
  }
  return expected;
}

/// Mask for a given count of expected statements: with none left only EOS
/// stays, otherwise EOS is removed.
inline void apply_mask(long expected, std::vector<double>& logits) {
  if (expected == 0)
    std::fill(logits.begin(), logits.end() - 1, kMasked);
  else
    logits.back() = kMasked;
}

inline std::vector<double> enforce(const TokenSeq& prefix, std::vector<double> logits, const Vocabulary& vocab) {
  if (logits.size() != vocab.formula_size())
    throw VectorLengthMismatch("expected " + std::to_string(vocab.formula_size()) + " logits, got " +
                               std::to_string(logits.size()));
  apply_mask(expected_statements(prefix, vocab), logits);
  return logits;
}

struct DecodeConfig {
  int beam_size = 3;
  int max_tokens = 100;
  bool enforce_syntax = true;
};

struct DecodeResult {
  /// Formula tokens, without EOS.
  TokenSeq tokens;
  /// Summed log-probabilities of the tokens (and EOS, if finished).
  double log_prob = 0;
  bool finished = false;
  /// Parsed formula; empty when the output is invalid.
  std::optional<Formula> formula;
  std::string text;

  bool valid() const { return formula.has_value(); }
};

inline std::vector<double> log_softmax(const std::vector<double>& logits) {
  double mx = kMasked;
  for (double x : logits) mx = std::max(mx, x);
  std::vector<double> out(logits.size(), kMasked);
  if (mx == kMasked) return out;
  double sum = 0;
  for (double x : logits)
    if (x != kMasked) sum += std::exp(x - mx);
  double lse = mx + std::log(sum);
  for (std::size_t i = 0; i < logits.size(); ++i)
    if (logits[i] != kMasked) out[i] = logits[i] - lse;
  return out;
}

/// Beam search over formula tokens. At each step the 2k best extensions
/// are ranked; EOS among the best k finishes a hypothesis and the first k
/// other extensions stay live. Scores are raw summed log-probabilities.
/// Ties go to the earlier beam, then the lower token index.
inline DecodeResult beam_decode(Scorer& scorer, const SymbolicTrace& t, const Vocabulary& vocab,
                                const DecodeConfig& cfg = {}) {
  if (cfg.beam_size < 1) throw std::invalid_argument("beam_size must be at least 1");
  if (cfg.max_tokens < 1) throw std::invalid_argument("max_tokens must be at least 1");
  const std::size_t k = static_cast<std::size_t>(cfg.beam_size);
  const std::size_t width = vocab.formula_size();
  const std::size_t eos_index = width - 1;
  TokenSeq trace_seq = tokenize(print_trace(t), Domain::Trace, vocab);

  struct Hyp {
    TokenSeq seq{Domain::Formula, {}};
    double score = 0;
    long expected = 1;
  };
  struct Cand {
    double score;
    std::size_t beam;
    std::size_t token;
  };

  std::vector<Hyp> live(1);
  std::vector<Hyp> finished;
  for (int step = 0; step <= cfg.max_tokens && !live.empty() && finished.size() < k; ++step) {
    bool last = step == cfg.max_tokens;
    std::vector<Cand> cands;
    for (std::size_t b = 0; b < live.size(); ++b) {
      auto logits = scorer.next_logits(trace_seq, live[b].seq);
      if (logits.size() != width)
        throw VectorLengthMismatch("scorer returned " + std::to_string(logits.size()) + " logits, expected " +
                                   std::to_string(width));
      if (cfg.enforce_syntax) apply_mask(live[b].expected, logits);
      auto lp = log_softmax(logits);
      for (std::size_t j = 0; j < width; ++j) {
        if (lp[j] == kMasked || std::isnan(lp[j])) continue;
        if (last && j != eos_index) continue;
        cands.push_back(Cand{live[b].score + lp[j], b, j});
      }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
      if (x.score != y.score) return x.score > y.score;
      if (x.beam != y.beam) return x.beam < y.beam;
      return x.token < y.token;
    });
    if (cands.size() > 2 * k) cands.resize(2 * k);

    std::vector<Hyp> next;
    for (std::size_t r = 0; r < cands.size(); ++r) {
      const Cand& c = cands[r];
      const Hyp& h = live[c.beam];
      if (c.token == eos_index) {
        if (r < k && finished.size() < k) finished.push_back(Hyp{h.seq, c.score, h.expected});
        continue;
      }
      if (next.size() >= k) continue;
      Hyp n = h;
      TokenId id = vocab.formula_token(c.token);
      n.seq.ids.push_back(id);
      n.score = c.score;
      n.expected = n.expected == 0 ? 0 : n.expected + operand_count(id, vocab) - 1;
      next.push_back(std::move(n));
    }
    // Keep the last live set so an exhausted budget still reports raw tokens.
    if (next.empty()) break;
    live = std::move(next);
  }

  DecodeResult out;
  const Hyp* best = nullptr;
  for (const auto& h : finished)
    if (!best || h.score > best->score) best = &h;
  out.finished = best != nullptr;
  if (!best)
    for (const auto& h : live)
      if (!best || h.score > best->score) best = &h;
  if (!best) return out;
  out.tokens = best->seq;
  out.log_prob = best->score;
  out.text = detokenize(best->seq, vocab);
  if (out.finished) {
    try {
      out.formula = parse_formula(out.text, vocab.alphabet());
    } catch (const ParseError&) {
    }
  }
  return out;
}

/// Equal logits everywhere.
class UniformScorer : public Scorer {
public:
  explicit UniformScorer(const Vocabulary& vocab) : width_(vocab.formula_size()) {}
  std::vector<double> next_logits(const TokenSeq&, const TokenSeq&) override { return std::vector<double>(width_, 0.0); }

private:
  std::size_t width_;
};

/// Pseudo-random logits that are a fixed function of (seed, trace, prefix).
/// Useful for exercising many different decoding paths deterministically.
class NoiseScorer : public Scorer {
public:
  NoiseScorer(const Vocabulary& vocab, std::uint64_t seed) : width_(vocab.formula_size()), seed_(seed) {}

  std::vector<double> next_logits(const TokenSeq& trace, const TokenSeq& prefix) override {
    std::uint64_t h = seed_ ^ 0x9e3779b97f4a7c15ull;
    auto mix = [&](std::uint64_t x) {
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xbf58476d1ce4e5b9ull;
      h ^= h >> 31;
    };
    for (TokenId id : trace.ids) mix(id);
    mix(0xffff);
    for (TokenId id : prefix.ids) mix(id);
    std::vector<double> out(width_);
    for (auto& x : out) {
      mix(0x51);
      x = static_cast<double>(h >> 11) / static_cast<double>(1ull << 53) * 6.0 - 3.0;
    }
    return out;
  }

private:
  std::size_t width_;
  std::uint64_t seed_;
};

struct EmptyTrainingSet : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Add-one-smoothed n-gram model of formula tokens over the concatenated
/// trace then formula token stream. The context is the previous n-1 tokens,
/// left-padded with PAD.
class NgramScorer : public Scorer {
public:
  NgramScorer(const std::vector<DatasetPair>& training, int n, const Vocabulary& vocab)
      : vocab_(vocab), n_(n), width_(vocab.formula_size()) {
    if (n < 1) throw std::invalid_argument("n-gram order must be at least 1");
    if (training.empty()) throw EmptyTrainingSet("n-gram scorer needs at least one training pair");
    for (const auto& p : training) {
      TokenSeq trace = tokenize(print_trace(p.trace), Domain::Trace, vocab);
      TokenSeq formula = tokenize(print_formula(p.formula), Domain::Formula, vocab);
      std::vector<TokenId> stream = trace.ids;
      std::size_t first = stream.size();
      stream.insert(stream.end(), formula.ids.begin(), formula.ids.end());
      stream.push_back(vocab.eos());
      for (std::size_t i = first; i < stream.size(); ++i) {
        auto& row = counts_[context_at(stream, i)];
        if (row.empty()) row.assign(width_ + 1, 0);
        ++row[vocab.formula_index(stream[i])];
        ++row[width_];
      }
    }
  }

  std::vector<double> next_logits(const TokenSeq& trace, const TokenSeq& prefix) override {
    std::vector<TokenId> stream = trace.ids;
    stream.insert(stream.end(), prefix.ids.begin(), prefix.ids.end());
    auto it = counts_.find(context_at(stream, stream.size()));
    std::vector<double> out(width_);
    double total = it == counts_.end() ? 0.0 : static_cast<double>(it->second[width_]);
    for (std::size_t j = 0; j < width_; ++j) {
      double c = it == counts_.end() ? 0.0 : static_cast<double>(it->second[j]);
      out[j] = std::log((c + 1.0) / (total + static_cast<double>(width_)));
    }
    return out;
  }

  int order() const { return n_; }

private:
  std::vector<TokenId> context_at(const std::vector<TokenId>& stream, std::size_t pos) const {
    std::vector<TokenId> ctx(static_cast<std::size_t>(n_ - 1), vocab_.pad());
    for (std::size_t j = 0; j < ctx.size(); ++j) {
      std::size_t back = ctx.size() - j;
      if (pos >= back) ctx[j] = stream[pos - back];
    }
    return ctx;
  }

  Vocabulary vocab_;
  int n_;
  std::size_t width_;
  std::map<std::vector<TokenId>, std::vector<std::uint32_t>> counts_;
};

/// Replays fixed logits for a known token sequence: at step i the token
/// script[i] gets logit 0 and everything else a large negative value.
class ScriptedScorer : public Scorer {
public:
  ScriptedScorer(const Vocabulary& vocab, TokenSeq script) : vocab_(vocab), script_(std::move(script)) {}

  std::vector<double> next_logits(const TokenSeq&, const TokenSeq& prefix) override {
    std::vector<double> out(vocab_.formula_size(), -50.0);
    std::size_t i = prefix.ids.size();
    TokenId want = i < script_.ids.size() ? script_.ids[i] : vocab_.eos();
    out[vocab_.formula_index(want)] = 0.0;
    return out;
  }

private:
  Vocabulary vocab_;
  TokenSeq script_;
};

} // namespace ltlmine
