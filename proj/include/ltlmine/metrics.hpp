#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ltlmine/check.hpp"
#include "ltlmine/dataset_pair.hpp"
#include "ltlmine/parallel.hpp"
#include "ltlmine/probe.hpp"
#include "ltlmine/vocabulary.hpp"

namespace ltlmine {

enum class Outcome { Correct, Exact, Incorrect, Invalid, Timeout };

inline const char* to_string(Outcome o) {
  switch (o) {
  case Outcome::Correct:
    return "correct";
  case Outcome::Exact:
    return "exact";
  case Outcome::Incorrect:
    return "incorrect";
  case Outcome::Invalid:
    return "invalid";
  case Outcome::Timeout:
    return "timeout";
  }
  return "?";
}

inline bool is_correct(Outcome o) { return o == Outcome::Correct || o == Outcome::Exact; }

/// Category of a predicted formula for a (trace, ground truth) pair.
/// Internal checker errors land in Timeout.
inline Outcome categorize(std::string_view prediction, std::string_view ground_truth, const SymbolicTrace& t,
                          const CheckLimits& limits = {}, const Alphabet& alphabet = {}) {
  parse_formula(ground_truth, alphabet);
  Formula f;
  try {
    f = parse_formula(prediction, alphabet);
  } catch (const ParseError&) {
    return Outcome::Invalid;
  }
  Vocabulary vocab(alphabet);
  if (tokenize(prediction, Domain::Formula, vocab) == tokenize(ground_truth, Domain::Formula, vocab))
    return Outcome::Exact;
  switch (check_universal(t, f, limits).verdict) {
  case Verdict::Holds:
    return Outcome::Correct;
  case Verdict::Violated:
    return Outcome::Incorrect;
  default:
    return Outcome::Timeout;
  }
}

/// A set of traces prepared for many universal checks: each check tries the
/// bitmask probe first and falls back to the automaton.
class TraceBatch {
public:
  explicit TraceBatch(std::vector<SymbolicTrace> traces) : traces_(std::move(traces)) {
    steps_.reserve(traces_.size());
    probes_.reserve(traces_.size());
    for (const auto& t : traces_) {
      steps_.emplace_back(t);
      probes_.emplace_back(t);
    }
  }

  std::size_t size() const { return traces_.size(); }
  const SymbolicTrace& trace(std::size_t i) const { return traces_[i]; }
  const TraceSteps& steps(std::size_t i) const { return steps_[i]; }
  const TraceProbe& probe(std::size_t i) const { return probes_[i]; }

  Verdict check(FormulaChecker& checker, std::size_t i) const {
    switch (probes_[i].verdict(checker.formula())) {
    case ProbeVerdict::Holds:
      return Verdict::Holds;
    case ProbeVerdict::Violated:
      return Verdict::Violated;
    case ProbeVerdict::Unknown:
      break;
    }
    return checker.universal(steps_[i]).verdict;
  }

private:
  std::vector<SymbolicTrace> traces_;
  std::vector<TraceSteps> steps_;
  std::vector<TraceProbe> probes_;
};

struct DistinctivenessScore {
  double value = 0.0;
  std::size_t satisfied_others = 0;
  std::size_t other_count = 0;
  /// Pairs whose check timed out or failed; counted as not satisfied.
  std::size_t timeout_pairs = 0;
};

struct NotCorrectForOwnTrace : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// 1 - satisfied/others over every trace of `batch` except `own_index`.
/// Pass own_index = npos when the formula's own trace is not in the batch.
inline DistinctivenessScore distinctiveness_against(FormulaChecker& checker, const TraceBatch& batch,
                                                    std::size_t own_index) {
  DistinctivenessScore s;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (i == own_index) continue;
    ++s.other_count;
    Verdict v = batch.check(checker, i);
    if (v == Verdict::Holds)
      ++s.satisfied_others;
    else if (v != Verdict::Violated)
      ++s.timeout_pairs;
  }
  if (s.other_count == 0) throw std::invalid_argument("distinctiveness needs at least one other trace");
  s.value = 1.0 - static_cast<double>(s.satisfied_others) / static_cast<double>(s.other_count);
  return s;
}

inline DistinctivenessScore distinctiveness(const Formula& f, const SymbolicTrace& own,
                                            const std::vector<SymbolicTrace>& others, const CheckLimits& limits = {}) {
  if (others.empty()) throw std::invalid_argument("distinctiveness needs at least one other trace");
  FormulaChecker checker(f, limits);
  if (checker.universal(own).verdict != Verdict::Holds)
    throw NotCorrectForOwnTrace(print_formula(f) + " does not hold on " + print_trace(own));
  return distinctiveness_against(checker, TraceBatch(others), static_cast<std::size_t>(-1));
}

/// Nearest-rank percentile of sorted values: element ceil(p * n), 1-based.
inline double nearest_rank(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of an empty sample");
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

struct DistinctivenessSummary {
  std::size_t count = 0;
  double mean = 0.0;
  /// Population standard deviation.
  double stddev = 0.0;
  double q1 = 0.0, q2 = 0.0, q3 = 0.0;
  std::size_t perfect = 0;
  std::size_t timeout_pairs = 0;
};

inline DistinctivenessSummary summarize(const std::vector<DistinctivenessScore>& scores) {
  DistinctivenessSummary s;
  s.count = scores.size();
  if (scores.empty()) return s;
  std::vector<double> v;
  for (const auto& d : scores) {
    v.push_back(d.value);
    s.timeout_pairs += d.timeout_pairs;
    if (d.satisfied_others == 0) ++s.perfect;
  }
  double sum = 0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double sq = 0;
  for (double x : v) sq += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(sq / static_cast<double>(v.size()));
  std::sort(v.begin(), v.end());
  s.q1 = nearest_rank(v, 0.25);
  s.q2 = nearest_rank(v, 0.50);
  s.q3 = nearest_rank(v, 0.75);
  return s;
}

struct LengthMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PairEvaluation {
  Outcome outcome = Outcome::Invalid;
  std::optional<DistinctivenessScore> distinct;
};

struct ReportOptions {
  std::size_t distinctiveness_limit = 1000;
  bool compute_distinctiveness = true;
  CheckLimits limits;
  Alphabet alphabet;
  unsigned workers = 1;
};

struct EvalReport {
  std::size_t total = 0;
  /// Exclusive counts: an Exact pair is not also in `correct` here.
  std::size_t exact = 0, correct = 0, incorrect = 0, invalid = 0, timeout = 0;
  std::vector<PairEvaluation> pairs;
  std::optional<DistinctivenessSummary> distinct;

  /// Correct column as reported: includes exact matches.
  std::size_t correct_column() const { return correct + exact; }
  double percent(std::size_t n) const { return total ? 100.0 * static_cast<double>(n) / static_cast<double>(total) : 0.0; }
};

inline EvalReport batch_report(const std::vector<DatasetPair>& pairs, const std::vector<std::string>& predictions,
                               const ReportOptions& opts = {}) {
  if (pairs.size() != predictions.size())
    throw LengthMismatch(std::to_string(predictions.size()) + " predictions for " + std::to_string(pairs.size()) +
                         " pairs");
  EvalReport r;
  r.total = pairs.size();
  r.pairs.resize(pairs.size());
  parallel_for(pairs.size(), opts.workers, [&](std::size_t i) {
    r.pairs[i].outcome =
        categorize(predictions[i], print_formula(pairs[i].formula), pairs[i].trace, opts.limits, opts.alphabet);
  });
  for (const auto& p : r.pairs) {
    switch (p.outcome) {
    case Outcome::Exact:
      ++r.exact;
      break;
    case Outcome::Correct:
      ++r.correct;
      break;
    case Outcome::Incorrect:
      ++r.incorrect;
      break;
    case Outcome::Invalid:
      ++r.invalid;
      break;
    case Outcome::Timeout:
      ++r.timeout;
      break;
    }
  }

  if (!opts.compute_distinctiveness) return r;
  std::size_t cap = std::min(opts.distinctiveness_limit, pairs.size());
  if (cap < 2) return r;
  std::vector<SymbolicTrace> traces;
  for (std::size_t i = 0; i < cap; ++i) traces.push_back(pairs[i].trace);
  TraceBatch batch(std::move(traces));
  parallel_for(cap, opts.workers, [&](std::size_t i) {
    if (!is_correct(r.pairs[i].outcome)) return;
    FormulaChecker checker(parse_formula(predictions[i], opts.alphabet), opts.limits);
    r.pairs[i].distinct = distinctiveness_against(checker, batch, i);
  });
  std::vector<DistinctivenessScore> scores;
  for (std::size_t i = 0; i < cap; ++i)
    if (r.pairs[i].distinct) scores.push_back(*r.pairs[i].distinct);
  r.distinct = summarize(scores);
  return r;
}

/// Human-readable category table and distinctiveness summary.
inline std::string format_table(const EvalReport& r) {
  std::ostringstream out;
  char line[160];
  auto row = [&](const char* name, std::size_t n) {
    std::snprintf(line, sizeof line, "%-10s %7.2f%% %8zu\n", name, r.percent(n), n);
    out << line;
  };
  out << "category   percent     count\n";
  row("correct", r.correct_column());
  row("  exact", r.exact);
  row("incorrect", r.incorrect);
  row("invalid", r.invalid);
  row("timeout", r.timeout);
  std::snprintf(line, sizeof line, "%-10s %8s %8zu\n", "total", "", r.total);
  out << line;
  if (r.distinct && r.distinct->count > 0) {
    const auto& d = *r.distinct;
    std::snprintf(line, sizeof line,
                  "distinctiveness over %zu correct: avg %.3f +- %.3f  Q1 %.3f  Q2 %.3f  Q3 %.3f  perfect %zu"
                  "  timeout pairs %zu\n",
                  d.count, d.mean, d.stddev, d.q1, d.q2, d.q3, d.perfect, d.timeout_pairs);
    out << line;
  }
  return out.str();
}

/// One JSON record per pair followed by a summary record.
inline std::string format_jsonl(const EvalReport& r, const std::vector<DatasetPair>& pairs,
                                const std::vector<std::string>& predictions) {
  using nlohmann::json;
  std::string out;
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    json rec{{"index", i},
             {"trace", print_trace(pairs[i].trace)},
             {"ground_truth", print_formula(pairs[i].formula)},
             {"prediction", predictions[i]},
             {"category", to_string(r.pairs[i].outcome)}};
    if (const auto& d = r.pairs[i].distinct) {
      rec["distinctiveness"] = d->value;
      rec["satisfied_others"] = d->satisfied_others;
      rec["other_count"] = d->other_count;
      rec["timeout_pairs"] = d->timeout_pairs;
    }
    out += rec.dump() + "\n";
  }
  json summary{{"total", r.total},         {"correct", r.correct_column()}, {"exact", r.exact},
               {"incorrect", r.incorrect}, {"invalid", r.invalid},          {"timeout", r.timeout}};
  if (r.distinct) {
    const auto& d = *r.distinct;
    summary["distinctiveness"] = {{"count", d.count}, {"mean", d.mean},       {"std", d.stddev},
                                  {"q1", d.q1},       {"q2", d.q2},           {"q3", d.q3},
                                  {"perfect", d.perfect}, {"timeout_pairs", d.timeout_pairs}};
  }
  out += json{{"summary", summary}}.dump() + "\n";
  return out;
}

/// Scatter data: distinctiveness against trace length |u|+|v|, trace token
/// count and formula token count.
inline std::string format_scatter_csv(const EvalReport& r, const std::vector<DatasetPair>& pairs,
                                      const std::vector<std::string>& predictions) {
  std::ostringstream out;
  out << "distinctiveness,trace_length,trace_tokens,formula_tokens\n";
  char buf[32];
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    const auto& d = r.pairs[i].distinct;
    if (!d) continue;
    std::snprintf(buf, sizeof buf, "%.6f", d->value);
    out << buf << ',' << pairs[i].trace.length() << ',' << print_trace(pairs[i].trace).size() << ','
        << predictions[i].size() << '\n';
  }
  return out.str();
}

} // namespace ltlmine
