#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = ltlmine::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ltlmine_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

} // namespace

TEST_F(Cli, CheckExitCodes) {
  auto holds = run({"check", "a;&a!b;{c}", "U1c"});
  EXPECT_EQ(holds.code, 0);
  EXPECT_EQ(holds.out, "HOLDS\n");
  EXPECT_EQ(run({"check", "a;&a!b;{c}", "&X!bUac"}).code, 0);
  auto violated = run({"check", "a;&a!b;{c}", "XXb"});
  EXPECT_EQ(violated.code, 1);
  EXPECT_NE(violated.out.find("counterexample: "), std::string::npos);
  EXPECT_EQ(run({"check", "--existential", "a;&a!b;{c}", "XXb"}).code, 0);
}

TEST_F(Cli, ParseErrorsNamePosition) {
  auto bad_formula = run({"check", "{a}", "&a"});
  EXPECT_EQ(bad_formula.code, 65);
  EXPECT_NE(bad_formula.err.find("formula"), std::string::npos);
  EXPECT_NE(bad_formula.err.find("position"), std::string::npos);
  auto bad_trace = run({"check", "a;b", "a"});
  EXPECT_EQ(bad_trace.code, 65);
  EXPECT_NE(bad_trace.err.find("trace"), std::string::npos);
}

TEST_F(Cli, UsageAndHelp) {
  EXPECT_EQ(run({}).code, 64);
  EXPECT_EQ(run({"frobnicate"}).code, 64);
  EXPECT_EQ(run({"check", "{a}"}).code, 64);
  EXPECT_EQ(run({"check", "--timeout-secs", "-1", "{a}", "a"}).code, 64);
  auto help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("mine"), std::string::npos);
}

TEST_F(Cli, StateCapFromEnvironment) {
  ::setenv("LTLMINE_STATE_CAP", "2", 1);
  auto r = run({"check", "a;&a!b;{c}", "U1c"});
  ::unsetenv("LTLMINE_STATE_CAP");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.out, "TIMEOUT\n");
}

TEST_F(Cli, Vocab) {
  auto r = run({"vocab"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines_of(r.out).size(), 26u);
  EXPECT_EQ(lines_of(r.out)[0], "0 special PAD");
}

TEST_F(Cli, MineTrueTrace) {
  auto r = run({"mine", "{1}", "--max-ops", "0"});
  EXPECT_EQ(r.code, 0);
  auto ls = lines_of(r.out);
  EXPECT_NE(std::find(ls.begin(), ls.end(), "1"), ls.end());
  EXPECT_EQ(std::find(ls.begin(), ls.end(), "0"), ls.end());
}

TEST_F(Cli, MineIsSoundAndRepeatable) {
  auto a = run({"mine", "a;&a!b;{c}", "--max-ops", "2", "--props", "3"});
  auto b = run({"mine", "a;&a!b;{c}", "--max-ops", "2", "--props", "3"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.err.find("# candidates"), std::string::npos);
  auto la = lines_of(a.out);
  auto t = ltlmine::parse_trace("a;&a!b;{c}");
  for (const auto& f : la) EXPECT_EQ(ltlmine::check_universal(t, ltlmine::parse_formula(f)).verdict, ltlmine::Verdict::Holds);
}

TEST_F(Cli, MineAgainstOthers) {
  std::ofstream(path("others.txt")) << "{a}\n{b}\n!a;{c}\n";
  auto r = run({"mine", "{&ab}", "--max-ops", "1", "--others", path("others.txt"), "--props", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto first = lines_of(r.out)[0];
  EXPECT_EQ(first.substr(first.find('\t') + 1), "1.000000");
}

TEST_F(Cli, PipelineGenDecodeEval) {
  auto gen = run({"gen", "--count", "40", "--seed", "5", "-o", path("d.tsv")});
  ASSERT_EQ(gen.code, 0) << gen.err;
  EXPECT_EQ(lines_of(slurp(path("d.tsv"))).size(), 40u);
  auto again = run({"gen", "--count", "40", "--seed", "5", "-o", path("d2.tsv")});
  EXPECT_EQ(slurp(path("d.tsv")), slurp(path("d2.tsv")));

  auto dec = run({"decode", "--dataset", path("d.tsv"), "--max-tokens", "200", "-o", path("p.txt")});
  ASSERT_EQ(dec.code, 0) << dec.err;
  auto preds = lines_of(slurp(path("p.txt")));
  EXPECT_EQ(preds.size(), 40u);
  for (const auto& p : preds) EXPECT_NE(p.rfind("INVALID", 0), 0u);

  auto free = run({"decode", "--dataset", path("d.tsv"), "--no-enforce", "--max-tokens", "30"});
  EXPECT_NE(free.out.find("INVALID"), std::string::npos);

  auto ev = run({"eval", "--dataset", path("d.tsv"), "--predictions", path("p.txt"), "--out-prefix", path("r")});
  ASSERT_EQ(ev.code, 0) << ev.err;
  EXPECT_NE(ev.out.find("total"), std::string::npos);
  EXPECT_EQ(lines_of(slurp(path("r.jsonl"))).size(), 41u);
  EXPECT_EQ(slurp(path("r.scatter.csv")).rfind("distinctiveness,", 0), 0u);

  std::ofstream(path("short.txt")) << "a\n";
  EXPECT_EQ(run({"eval", "--dataset", path("d.tsv"), "--predictions", path("short.txt")}).code, 65);
}

TEST_F(Cli, DatasetErrorsReportLine) {
  std::ofstream(path("bad.tsv")) << "{a}\ta\n{a}\t&&\n";
  std::ofstream(path("p.txt")) << "a\na\n";
  auto r = run({"eval", "--dataset", path("bad.tsv"), "--predictions", path("p.txt")});
  EXPECT_EQ(r.code, 65);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST_F(Cli, Split) {
  ASSERT_EQ(run({"gen", "--count", "20", "-o", path("d.tsv")}).code, 0);
  auto r = run({"split", "--dataset", path("d.tsv"), "--ratios", "0.5,0.25,0.25", "--out-prefix", path("s")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_of(slurp(path("s.train.tsv"))).size(), 10u);
  EXPECT_EQ(lines_of(slurp(path("s.val.tsv"))).size(), 5u);
  EXPECT_EQ(lines_of(slurp(path("s.test.tsv"))).size(), 5u);
}

TEST_F(Cli, DecodeScorers) {
  ASSERT_EQ(run({"gen", "--count", "30", "-o", path("train.tsv")}).code, 0);
  auto ng = run({"decode", "--trace", "a;{b}", "--scorer", "ngram:8:" + path("train.tsv")});
  EXPECT_EQ(ng.code, 0) << ng.err;
  EXPECT_NO_THROW(ltlmine::parse_formula(lines_of(ng.out).at(0)));
  EXPECT_EQ(run({"decode", "--trace", "a;{b}", "--scorer", "noise:3"}).code, 0);
  EXPECT_EQ(run({"decode", "--trace", "a;{b}", "--scorer", "bogus"}).code, 64);
  EXPECT_EQ(run({"decode", "--trace", "a;{b}", "--scorer", "ngram:2:" + path("missing.tsv")}).code, 70);
#ifdef FAKE_PEER_PATH
  auto remote = run({"decode", "--trace", "a;{b}", "--scorer", std::string("remote:") + FAKE_PEER_PATH + " fixed 12"});
  EXPECT_EQ(remote.code, 0) << remote.err;
  auto broken = run({"decode", "--trace", "a;{b}", "--scorer", std::string("remote:") + FAKE_PEER_PATH + " garbage 12"});
  EXPECT_EQ(broken.code, 70);
#endif
}

TEST_F(Cli, BenchWritesComparison) {
  ASSERT_EQ(run({"gen", "--count", "12", "-o", path("d.tsv")}).code, 0);
  auto r = run({"bench", "--dataset", path("d.tsv"), "--max-ops", "2", "--scorer", "ngram:8:" + path("d.tsv"), "-o",
                path("bench.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto text = slurp(path("bench.tsv"));
  EXPECT_NE(text.find("# traces 12 decoded 12"), std::string::npos);
  EXPECT_NE(text.find("mine_total_s"), std::string::npos);
}

TEST_F(Cli, SpecExamples) {
  EXPECT_EQ(run({"check", "a;{b}", "Ua"}).code, 65);
  auto mined = lines_of(run({"mine", "{!a}", "--max-ops", "0"}).out);
  EXPECT_NE(std::find(mined.begin(), mined.end(), "1"), mined.end());
  EXPECT_EQ(std::find(mined.begin(), mined.end(), "a"), mined.end());

  ASSERT_EQ(run({"gen", "--count", "25", "--seed", "7", "-o", path("d.tsv")}).code, 0);
  std::ofstream preds(path("gt.txt"));
  for (const auto& line : lines_of(slurp(path("d.tsv")))) preds << line.substr(line.find('\t') + 1) << '\n';
  preds.close();
  auto ev = run({"eval", "--dataset", path("d.tsv"), "--predictions", path("gt.txt"), "--out-prefix", path("r")});
  ASSERT_EQ(ev.code, 0) << ev.err;
  auto summary = nlohmann::json::parse(lines_of(slurp(path("r.jsonl"))).back())["summary"];
  EXPECT_EQ(summary["exact"], 25);
  EXPECT_EQ(summary["total"], 25);
}

// The printed score matches distinctiveness computed separately.
TEST_F(Cli, MineOthersScoreRecomputed) {
  std::ofstream(path("others.txt")) << "{a}\n{b}\na;{c}\n{&ab}\n!c;{1}\n";
  auto r = run({"mine", "a;{b}", "--max-ops", "2", "--others", path("others.txt"), "--props", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto line = lines_of(r.out).at(0);
  auto tab = line.find('\t');
  auto f = ltlmine::parse_formula(line.substr(0, tab));
  std::vector<ltlmine::SymbolicTrace> others;
  for (const auto& t : lines_of(slurp(path("others.txt")))) others.push_back(ltlmine::parse_trace(t));
  auto d = ltlmine::distinctiveness(f, ltlmine::parse_trace("a;{b}"), others);
  EXPECT_NEAR(std::stod(line.substr(tab + 1)), d.value, 1e-6);
}
