#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "ltlmine/metrics.hpp"

using namespace ltlmine;

namespace {

DatasetPair pair_of(std::string_view trace, std::string_view formula) {
  return DatasetPair{parse_trace(trace), parse_formula(formula)};
}

std::vector<SymbolicTrace> traces(std::initializer_list<const char*> texts) {
  std::vector<SymbolicTrace> out;
  for (const char* t : texts) out.push_back(parse_trace(t));
  return out;
}

} // namespace

TEST(Categorize, Outcomes) {
  auto t = parse_trace("a;&a!b;{c}");
  EXPECT_EQ(categorize("U1c", "U1c", t), Outcome::Exact);
  EXPECT_EQ(categorize("&X!bUac", "U1c", t), Outcome::Correct);
  EXPECT_EQ(categorize("XXb", "U1c", t), Outcome::Incorrect);
  EXPECT_EQ(categorize("&a", "U1c", t), Outcome::Invalid);
  EXPECT_EQ(categorize("", "U1c", t), Outcome::Invalid);
  EXPECT_EQ(categorize("INVALID &a", "U1c", t), Outcome::Invalid);
  EXPECT_TRUE(is_correct(Outcome::Exact));
  EXPECT_FALSE(is_correct(Outcome::Timeout));
}

TEST(Categorize, ResourceLimitCountsAsTimeout) {
  CheckLimits tight;
  tight.state_cap = 2;
  EXPECT_EQ(categorize("U1c", "a", parse_trace("a;&a!b;{c}"), tight), Outcome::Timeout);
}

TEST(Distinctiveness, Anchors) {
  auto others = traces({"{a}", "{b}", "!a;{c}", "{!a}"});
  EXPECT_EQ(distinctiveness(parse_formula("1"), parse_trace("{a}"), others).value, 0.0);
  // "&ab" holds on none of the others.
  EXPECT_EQ(distinctiveness(parse_formula("&ab"), parse_trace("{&ab}"), others).value, 1.0);
  // "a" holds on "{a}" and nothing else: 1 - 1/4.
  auto d = distinctiveness(parse_formula("a"), parse_trace("&ab;{1}"), others);
  EXPECT_EQ(d.satisfied_others, 1u);
  EXPECT_DOUBLE_EQ(d.value, 0.75);
}

TEST(Distinctiveness, HalfAndMonotone) {
  auto others = traces({"{a}", "{!a}"});
  EXPECT_DOUBLE_EQ(distinctiveness(parse_formula("a"), parse_trace("{a}"), others).value, 0.5);
  // A stronger formula is never less distinctive.
  auto weak = distinctiveness(parse_formula("a"), parse_trace("{&ab}"), traces({"{a}", "{b}", "{&ab}", "a;{1}"}));
  auto strong = distinctiveness(parse_formula("&ab"), parse_trace("{&ab}"), traces({"{a}", "{b}", "{&ab}", "a;{1}"}));
  EXPECT_GE(strong.value, weak.value);
}

TEST(Distinctiveness, Errors) {
  EXPECT_THROW(distinctiveness(parse_formula("b"), parse_trace("{a}"), traces({"{b}"})), NotCorrectForOwnTrace);
  EXPECT_THROW(distinctiveness(parse_formula("a"), parse_trace("{a}"), {}), std::invalid_argument);
}

TEST(Summary, NearestRankQuartiles) {
  std::vector<double> v{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  EXPECT_EQ(nearest_rank(v, 0.25), 0.2);
  EXPECT_EQ(nearest_rank(v, 0.5), 0.4);
  EXPECT_EQ(nearest_rank(v, 0.75), 0.6);
  EXPECT_EQ(nearest_rank({0.9}, 0.25), 0.9);
  std::vector<DistinctivenessScore> s;
  for (double x : {1.0, 0.5, 0.0, 1.0}) s.push_back({x, x == 1.0 ? 0u : 1u, 2, 0});
  auto sum = summarize(s);
  EXPECT_DOUBLE_EQ(sum.mean, 0.625);
  EXPECT_DOUBLE_EQ(sum.stddev, std::sqrt((0.375 * 0.375 * 2 + 0.125 * 0.125 + 0.625 * 0.625) / 4));
  EXPECT_EQ(sum.q1, 0.0);
  EXPECT_EQ(sum.q2, 0.5);
  EXPECT_EQ(sum.q3, 1.0);
  EXPECT_EQ(sum.perfect, 2u);
}

// Five pairs worked out by hand.
TEST(BatchReport, ToyBatch) {
  std::vector<DatasetPair> pairs{pair_of("{a}", "a"), pair_of("{b}", "b"), pair_of("{&ab}", "&ab"),
                                 pair_of("!a;{1}", "!a"), pair_of("{c}", "c")};
  std::vector<std::string> preds{"a", "1", "&ab", "XXa", "&c"};
  auto r = batch_report(pairs, preds);
  EXPECT_EQ(r.total, 5u);
  EXPECT_EQ(r.exact, 2u);
  EXPECT_EQ(r.correct, 1u);
  EXPECT_EQ(r.correct_column(), 3u);
  EXPECT_EQ(r.incorrect, 1u);
  EXPECT_EQ(r.invalid, 1u);
  EXPECT_DOUBLE_EQ(r.percent(r.correct_column()), 60.0);
  // "a" holds on {&ab}: 1 - 1/4. "1": 0. "&ab": 1.
  ASSERT_TRUE(r.distinct);
  EXPECT_EQ(r.distinct->count, 3u);
  EXPECT_DOUBLE_EQ(r.pairs[0].distinct->value, 0.75);
  EXPECT_DOUBLE_EQ(r.pairs[1].distinct->value, 0.0);
  EXPECT_DOUBLE_EQ(r.pairs[2].distinct->value, 1.0);
  EXPECT_FALSE(r.pairs[3].distinct);
  EXPECT_NEAR(r.distinct->mean, 1.75 / 3, 1e-12);

  // Only the first two pairs take part when capped.
  ReportOptions capped;
  capped.distinctiveness_limit = 2;
  auto c = batch_report(pairs, preds, capped);
  EXPECT_EQ(c.distinct->count, 2u);
  EXPECT_EQ(c.pairs[0].distinct->other_count, 1u);
  EXPECT_FALSE(c.pairs[2].distinct);

  auto table = format_table(r);
  EXPECT_NE(table.find("correct"), std::string::npos);
  EXPECT_NE(table.find("60.00%"), std::string::npos);

  std::istringstream jsonl(format_jsonl(r, pairs, preds));
  std::string line;
  int records = 0;
  nlohmann::json last;
  while (std::getline(jsonl, line)) {
    last = nlohmann::json::parse(line);
    ++records;
  }
  EXPECT_EQ(records, 6);
  EXPECT_EQ(last["summary"]["correct"], 3);
  EXPECT_EQ(last["summary"]["invalid"], 1);

  auto csv = format_scatter_csv(r, pairs, preds);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "distinctiveness,trace_length,trace_tokens,formula_tokens");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(BatchReport, LengthMismatch) {
  EXPECT_THROW(batch_report({pair_of("{a}", "a")}, {}), LengthMismatch);
}

TEST(BatchReport, WorkersDoNotChangeResults) {
  std::vector<DatasetPair> pairs{pair_of("{a}", "a"), pair_of("{b}", "b"), pair_of("{&ab}", "&ab"),
                                 pair_of("!a;{1}", "!a")};
  std::vector<std::string> preds{"a", "b", "a", "!a"};
  ReportOptions par;
  par.workers = 3;
  EXPECT_EQ(format_jsonl(batch_report(pairs, preds), pairs, preds), format_jsonl(batch_report(pairs, preds, par), pairs, preds));
}
