#include <gtest/gtest.h>

#include <random>

#include "ltlmine/metrics.hpp"
#include "ltlmine/miner.hpp"
#include "random_trace.hpp"

using namespace ltlmine;

namespace {

EnumerationConfig config(int props, int ops) {
  EnumerationConfig cfg;
  cfg.alphabet = Alphabet(props);
  cfg.max_operators = ops;
  return cfg;
}

std::vector<std::string> polish_of(const std::vector<Formula>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(print_formula(f));
  return out;
}

} // namespace

TEST(Miner, TrueTraceLeaves) {
  auto fs = polish_of(mine(parse_trace("{1}"), config(5, 0)));
  EXPECT_EQ(fs, std::vector<std::string>{"1"});
}

TEST(Miner, NegatedAtomTrace) {
  auto fs = polish_of(mine(parse_trace("{!a}", Alphabet(2)), config(2, 1)));
  for (const char* want : {"1", "!0", "!a", "X1", "U01", "X!a"})
    EXPECT_EQ(std::find(fs.begin(), fs.end(), want) != fs.end(), std::string(want) != "X!a") << want;
  EXPECT_EQ(std::find(fs.begin(), fs.end(), "a"), fs.end());
  EXPECT_EQ(std::find(fs.begin(), fs.end(), "b"), fs.end());
  EXPECT_EQ(std::find(fs.begin(), fs.end(), "!b"), fs.end());
}

// Every candidate is checked with the full checker; mining must return
// exactly the ones that hold, in enumeration order.
TEST(Miner, MatchesFullCheckOfEveryCandidate) {
  std::mt19937_64 rng(8);
  auto cfg = config(2, 2);
  auto all = enumerate_all(cfg);
  for (int i = 0; i < 25; ++i) {
    SymbolicTrace t = testing_util::random_trace(rng, 2, 2, 2);
    std::vector<Formula> want;
    for (const auto& f : all)
      if (check_universal(t, f).verdict == Verdict::Holds) want.push_back(f);
    MineStats stats;
    auto got = mine(t, cfg, &stats);
    EXPECT_EQ(polish_of(got), polish_of(want)) << print_trace(t);
    EXPECT_EQ(stats.candidates, all.size());
    EXPECT_EQ(stats.satisfied, want.size());
  }
}

TEST(Miner, SoundOnLargerUniverse) {
  std::mt19937_64 rng(9);
  auto cfg = config(3, 3);
  Universe u(cfg.alphabet, cfg.max_operators);
  for (int i = 0; i < 5; ++i) {
    SymbolicTrace t = testing_util::random_trace(rng, 3, 3, 2);
    std::vector<std::size_t> idx;
    mine_indices(u, t, limits_of(cfg), [&](std::size_t k) { idx.push_back(k); });
    for (std::size_t j = 0; j < idx.size(); j += 37)
      ASSERT_EQ(check_universal(t, u.formula(idx[j])).verdict, Verdict::Holds) << print_formula(u.formula(idx[j]));
  }
}

TEST(Miner, Deterministic) {
  auto t = parse_trace("a;&a!b;{c}");
  auto cfg = config(3, 2);
  EXPECT_EQ(polish_of(mine(t, cfg)), polish_of(mine(t, cfg)));
  Universe u(cfg.alphabet, 2);
  std::vector<SymbolicTrace> ts{t, parse_trace("{b}", cfg.alphabet), parse_trace("!a;{1}", cfg.alphabet)};
  auto one = mine_batch(u, ts, limits_of(cfg), 1);
  auto two = mine_batch(u, ts, limits_of(cfg), 3);
  for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_EQ(one[i].formulas, two[i].formulas);
}

// Most-distinct agrees with scoring every mined formula separately.
TEST(Miner, MostDistinctMatchesExhaustiveScoring) {
  std::mt19937_64 rng(12);
  auto cfg = config(2, 2);
  for (int i = 0; i < 6; ++i) {
    SymbolicTrace t = testing_util::random_trace(rng, 2, 2, 2);
    std::vector<SymbolicTrace> others;
    for (int k = 0; k < 6; ++k) others.push_back(testing_util::random_trace(rng, 2, 2, 2));
    auto mined = mine(t, cfg);
    double best = -1;
    std::string best_f;
    for (const auto& f : mined) {
      auto d = distinctiveness(f, t, others, CheckLimits{});
      if (d.value > best) {
        best = d.value;
        best_f = print_formula(f);
      }
    }
    auto got = mine_most_distinct(t, others, cfg);
    EXPECT_DOUBLE_EQ(got.score.value, best);
    EXPECT_EQ(print_formula(got.formula), best_f);
  }
}

TEST(Miner, MostDistinctOfTrueTraceIsTrue) {
  auto got = mine_most_distinct(parse_trace("{1}"), {parse_trace("{a}"), parse_trace("{b}")}, config(5, 0));
  EXPECT_EQ(print_formula(got.formula), "1");
  EXPECT_EQ(got.score.value, 0.0);
}

TEST(Miner, EmptyOthersRejected) {
  EXPECT_THROW(mine_most_distinct(parse_trace("{1}"), {}, config(1, 0)), std::invalid_argument);
}
