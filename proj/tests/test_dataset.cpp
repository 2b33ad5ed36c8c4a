#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "ltlmine/dataset.hpp"
#include "oracle.hpp"

using namespace ltlmine;

namespace {

GenConfig small_config(std::uint64_t seed) {
  GenConfig cfg;
  cfg.seed = seed;
  return cfg;
}

std::vector<DatasetPair> read_tsv(const std::string& text, bool validate = true) {
  std::istringstream in(text);
  LoadOptions lo;
  lo.validate = validate;
  return deserialize(in, DatasetFormat::Tsv, lo);
}

} // namespace

TEST(Dataset, UnsatisfiableFormulaRejected) {
  EXPECT_EQ(pair_from_formula(parse_formula("0"), GenConfig{}).rejection, Rejection::Unsatisfiable);
  EXPECT_EQ(pair_from_formula(parse_formula("&a!a"), GenConfig{}).rejection, Rejection::Unsatisfiable);
}

TEST(Dataset, AtomFormulaGivesTraceStartingWithAtom) {
  auto o = pair_from_formula(parse_formula("a"), GenConfig{});
  ASSERT_TRUE(o.pair);
  const auto& t = o.pair->trace;
  // Every represented word has a in its first letter.
  testing_util::for_each_represented(t, 0b11, 0, 2, 2, [&](const ConcreteLasso& w) { EXPECT_TRUE(w.at(0) & 1u); });
  EXPECT_EQ(check_universal(t, parse_formula("a")).verdict, Verdict::Holds);
}

TEST(Dataset, GeneratedPairsVerifyAndFit) {
  GenStats stats;
  auto pairs = generate_dataset(200, small_config(7), &stats);
  ASSERT_EQ(pairs.size(), 200u);
  EXPECT_GE(stats.attempts, 200u);
  for (const auto& p : pairs) {
    EXPECT_LE(print_trace(p.trace).size(), 35u);
    EXPECT_GE(p.formula.node_count(), 3u);
    EXPECT_LE(p.formula.node_count(), 15u);
    EXPECT_EQ(check_universal(p.trace, p.formula).verdict, Verdict::Holds);
  }
}

TEST(Dataset, SameSeedSameBytes) {
  EXPECT_EQ(serialize(generate_dataset(100, small_config(3))), serialize(generate_dataset(100, small_config(3))));
  EXPECT_NE(serialize(generate_dataset(100, small_config(3))), serialize(generate_dataset(100, small_config(4))));
}

TEST(Dataset, ConfigValidation) {
  GenConfig cfg;
  cfg.min_nodes = 5;
  cfg.max_nodes = 4;
  EXPECT_THROW(generate_dataset(1, cfg), std::invalid_argument);
}

TEST(Dataset, ExampleLine) {
  auto pairs = read_tsv("a;&ab;{b}\t&X!bUac\n", false);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(print_trace(pairs[0].trace), "a;&ab;{b}");
  EXPECT_EQ(print_formula(pairs[0].formula), "&X!bUac");
}

TEST(Dataset, RoundTrip) {
  auto pairs = generate_dataset(50, small_config(11));
  for (auto format : {DatasetFormat::Tsv, DatasetFormat::Jsonl}) {
    std::istringstream in(serialize(pairs, format));
    auto back = deserialize(in, format);
    EXPECT_EQ(back, pairs);
  }
}

TEST(Dataset, ErrorsNameTheLine) {
  try {
    read_tsv("{a}\ta\n{a}\t&a\n");
    FAIL();
  } catch (const DatasetParseError& e) {
    EXPECT_EQ(e.line, 2u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  try {
    read_tsv("{a}\ta\n{a}\ta\n{b}\ta\n");
    FAIL();
  } catch (const InvariantViolation& e) {
    EXPECT_EQ(e.line, 3u);
  }
  EXPECT_THROW(read_tsv("{a} a\n"), DatasetParseError);
  EXPECT_THROW(read_tsv("{a}\ta\tb\n"), DatasetParseError);
  std::istringstream bad_json("{\"trace\": \"{a}\"}\n");
  EXPECT_THROW(deserialize(bad_json, DatasetFormat::Jsonl), DatasetParseError);
  // Without validation a wrong pair loads.
  EXPECT_EQ(read_tsv("{b}\ta\n", false).size(), 1u);
}

TEST(Dataset, FormatFromPath) {
  EXPECT_EQ(format_for_path("x.jsonl"), DatasetFormat::Jsonl);
  EXPECT_EQ(format_for_path("x.tsv"), DatasetFormat::Tsv);
  EXPECT_EQ(format_for_path("jsonl"), DatasetFormat::Tsv);
}

TEST(Dataset, FilterCounts) {
  auto pairs = read_tsv("{a}\ta\na;a;a;a;a;a;a;a;a;a;a;a;{a}\ta\n{&ab}\ta\n", false);
  FilterStats s;
  auto kept = filter_by_trace_length(pairs, 10, &s);
  EXPECT_EQ(kept.size(), 2u);
  EXPECT_EQ(s.retained, 2u);
  EXPECT_EQ(s.dropped, 1u);
}

TEST(Dataset, SplitIsDeterministicPartition) {
  auto pairs = generate_dataset(101, small_config(5));
  auto a = split(pairs, {0.8, 0.1, 0.1}, 9);
  auto b = split(pairs, {0.8, 0.1, 0.1}, 9);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(a.train.size(), 80u);
  EXPECT_EQ(a.val.size(), 10u);
  EXPECT_EQ(a.test.size(), 11u);
  std::multiset<std::string> all, parts;
  for (const auto& p : pairs) all.insert(serialize({p}));
  for (const auto* part : {&a.train, &a.val, &a.test})
    for (const auto& p : *part) parts.insert(serialize({p}));
  EXPECT_EQ(all, parts);
  EXPECT_NE(split(pairs, {0.8, 0.1, 0.1}, 10).train, a.train);
  EXPECT_THROW(split(pairs, {0.5, 0.5, 0.5}, 1), std::invalid_argument);
}

TEST(Dataset, UniformIndexInRange) {
  std::mt19937_64 rng(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[uniform_index(rng, 7)];
  for (int h : hits) EXPECT_GT(h, 800);
}
