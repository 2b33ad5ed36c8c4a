#pragma once

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ltlmine/ltlmine.hpp"
#include "ltlmine/remote_scorer.hpp"

namespace ltlmine::cli {

enum Exit : int {
  kOk = 0,
  kViolated = 1,
  kTimeout = 2,
  kNoFormula = 3,
  kUsage = 64,
  kDataError = 65,
  kFailure = 70,
};

struct CommonOptions {
  int props = 5;
  double timeout_secs = 30;
  unsigned workers = 1;

  Alphabet alphabet() const { return Alphabet(props); }
  CheckLimits limits() const {
    CheckLimits l;
    l.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_secs * 1000));
    if (const char* cap = std::getenv("LTLMINE_STATE_CAP")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(cap, &end, 10);
      if (end == cap || *end != '\0' || v == 0) throw CLI::ValidationError("LTLMINE_STATE_CAP must be a positive integer");
      l.state_cap = static_cast<std::size_t>(v);
    }
    return l;
  }
};

/// Failure tied to an input line, reported with exit code 65.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << data;
  if (!out) throw std::runtime_error("write failed: " + path);
}

/// Traces from a file with one trace per line; for dataset lines only the
/// part before the TAB is used. Blank lines are skipped.
inline std::vector<SymbolicTrace> read_traces(const std::string& path, const Alphabet& alphabet) {
  std::vector<SymbolicTrace> out;
  auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string text = lines[i].substr(0, lines[i].find('\t'));
    if (text.empty()) continue;
    try {
      out.push_back(parse_trace(text, alphabet));
    } catch (const ParseError& e) {
      throw InputError(path + ": line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

/// Scorer from a spec: uniform, noise:<seed>, ngram:<n>:<trainfile> or
/// remote:<shell command>.
inline std::unique_ptr<Scorer> make_scorer(const std::string& spec, const Vocabulary& vocab) {
  if (spec == "uniform") return std::make_unique<UniformScorer>(vocab);
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "noise") return std::make_unique<NoiseScorer>(vocab, std::stoull(rest.empty() ? "0" : rest));
  if (kind == "remote") {
    if (rest.empty()) throw CLI::ValidationError("remote scorer needs a command: remote:<command>");
    return std::make_unique<RemoteScorer>(rest, vocab);
  }
  if (kind == "ngram") {
    auto c2 = rest.find(':');
    if (c2 == std::string::npos) throw CLI::ValidationError("expected ngram:<n>:<trainfile>");
    int n = std::stoi(rest.substr(0, c2));
    LoadOptions lo;
    lo.alphabet = vocab.alphabet();
    lo.validate = false;
    return std::make_unique<NgramScorer>(load(rest.substr(c2 + 1), lo), n, vocab);
  }
  throw CLI::ValidationError("unknown scorer '" + spec + "'");
}

inline std::string decode_line(const DecodeResult& r) {
  if (r.valid()) return r.text;
  return r.text.empty() ? "INVALID" : "INVALID " + r.text;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string fixed(double x, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"LTL specification mining from symbolic traces", "ltlmine"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  CommonOptions common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--props", common.props, "Number of propositions (a, b, ...)")->check(CLI::Range(1, 26));
    sub->add_option("--timeout-secs", common.timeout_secs, "Per-check timeout in seconds")
        ->check(CLI::PositiveNumber);
    sub->add_option("--workers", common.workers, "Worker threads (0: one per core)");
  };

  // check
  auto* check = app.add_subcommand("check", "Check a formula against a symbolic trace");
  std::string check_trace, check_formula;
  bool existential = false;
  check->add_option("trace", check_trace, "Trace, e.g. a;&a!b;{c}")->required();
  check->add_option("formula", check_formula, "Formula in Polish notation, e.g. U1c")->required();
  check->add_flag("--existential", existential, "Some represented word satisfies the formula");
  add_common(check);

  // mine
  auto* mine_cmd = app.add_subcommand("mine", "Enumerate formulas that hold on a trace");
  std::string mine_trace, others_file, traces_file;
  int max_ops = 2;
  bool count_only = false;
  mine_cmd->add_option("trace", mine_trace, "Trace to mine");
  mine_cmd->add_option("--max-ops", max_ops, "Maximum operator count")->check(CLI::NonNegativeNumber);
  mine_cmd->add_option("--others", others_file, "Traces to score distinctiveness against; prints the best formula");
  mine_cmd->add_option("--traces-file", traces_file, "Mine every trace of a file");
  mine_cmd->add_flag("--count-only", count_only, "Print counts instead of formulas");
  add_common(mine_cmd);

  // decode
  auto* decode_cmd = app.add_subcommand("decode", "Beam-decode a formula for each trace");
  std::string decode_dataset, decode_trace, scorer_spec = "uniform", predictions_out;
  DecodeConfig dcfg;
  bool no_enforce = false;
  decode_cmd->add_option("--dataset", decode_dataset, "Dataset or trace file");
  decode_cmd->add_option("--trace", decode_trace, "Single trace");
  decode_cmd->add_option("--scorer", scorer_spec, "uniform | noise:<seed> | ngram:<n>:<trainfile> | remote:<command>");
  decode_cmd->add_option("--beam", dcfg.beam_size, "Beam size")->check(CLI::PositiveNumber);
  decode_cmd->add_option("--max-tokens", dcfg.max_tokens, "Token budget")->check(CLI::PositiveNumber);
  decode_cmd->add_flag("--no-enforce", no_enforce, "Disable the syntax mask");
  decode_cmd->add_option("-o,--out", predictions_out, "Predictions file (default: standard output)");
  add_common(decode_cmd);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Categorize predictions and score distinctiveness");
  std::string eval_dataset, eval_predictions, out_prefix;
  std::size_t distinct_limit = 1000;
  bool no_distinct = false;
  eval_cmd->add_option("--dataset", eval_dataset, "Dataset file")->required();
  eval_cmd->add_option("--predictions", eval_predictions, "One prediction per line")->required();
  eval_cmd->add_option("--distinct-limit", distinct_limit, "Pairs used for distinctiveness");
  eval_cmd->add_flag("--no-distinct", no_distinct, "Skip distinctiveness");
  eval_cmd->add_option("--out-prefix", out_prefix, "Write <prefix>.jsonl and <prefix>.scatter.csv");
  add_common(eval_cmd);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Generate a dataset of (trace, formula) pairs");
  GenConfig gcfg;
  std::size_t gen_count = 1000;
  std::string gen_out;
  gen_cmd->add_option("--count", gen_count, "Number of pairs");
  gen_cmd->add_option("--seed", gcfg.seed, "Random seed");
  gen_cmd->add_option("--min-nodes", gcfg.min_nodes, "Smallest formula size in nodes");
  gen_cmd->add_option("--max-nodes", gcfg.max_nodes, "Largest formula size in nodes");
  gen_cmd->add_option("--max-trace-chars", gcfg.max_trace_chars, "Longest trace string kept");
  gen_cmd->add_option("-o,--out", gen_out, "Output file (.tsv or .jsonl)")->required();
  add_common(gen_cmd);

  // split
  auto* split_cmd = app.add_subcommand("split", "Shuffle a dataset and cut it into train/val/test");
  std::string split_dataset, split_prefix;
  std::vector<double> ratios{0.8, 0.1, 0.1};
  std::uint64_t split_seed = 1;
  split_cmd->add_option("--dataset", split_dataset, "Dataset file")->required();
  split_cmd->add_option("--ratios", ratios, "Three ratios")->expected(3)->delimiter(',');
  split_cmd->add_option("--seed", split_seed, "Shuffle seed");
  split_cmd->add_option("--out-prefix", split_prefix, "Writes <prefix>.{train,val,test}.tsv")->required();
  add_common(split_cmd);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Time the miner against beam decoding on the same traces");
  std::string bench_dataset, bench_out, bench_scorer = "uniform";
  std::size_t bench_limit = 100;
  int bench_ops = 4;
  bench_cmd->add_option("--dataset", bench_dataset, "Dataset or trace file")->required();
  bench_cmd->add_option("--limit", bench_limit, "Traces to use");
  bench_cmd->add_option("--max-ops", bench_ops, "Miner operator limit")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--scorer", bench_scorer, "Decoder scorer spec");
  bench_cmd->add_option("--beam", dcfg.beam_size, "Beam size")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--max-tokens", dcfg.max_tokens, "Token budget")->check(CLI::PositiveNumber);
  bench_cmd->add_option("-o,--out", bench_out, "Timing comparison file")->required();
  add_common(bench_cmd);

  // vocab
  auto* vocab_cmd = app.add_subcommand("vocab", "Print the token manifest");
  add_common(vocab_cmd);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    const Alphabet alphabet = common.alphabet();
    const CheckLimits limits = common.limits();
    Vocabulary vocab(alphabet);

    if (*check) {
      SymbolicTrace t = [&] {
        try {
          return parse_trace(check_trace, alphabet);
        } catch (const ParseError& e) {
          throw InputError(std::string("trace: ") + e.what());
        }
      }();
      Formula f = [&] {
        try {
          return parse_formula(check_formula, alphabet);
        } catch (const ParseError& e) {
          throw InputError(std::string("formula: ") + e.what());
        }
      }();
      CheckResult r = existential ? check_existential(t, f, limits) : check_universal(t, f, limits);
      out << to_string(r.verdict == Verdict::InternalError ? Verdict::Timeout : r.verdict) << "\n";
      if (r.witness) {
        const char* label = existential ? "witness" : "counterexample";
        out << label << ": " << print_concrete(*r.witness, t.atoms() | f.atoms()) << "\n";
      }
      if (!r.message.empty()) err << r.message << "\n";
      switch (r.verdict) {
      case Verdict::Holds:
        return kOk;
      case Verdict::Violated:
        return kViolated;
      default:
        return kTimeout;
      }
    }

    if (*mine_cmd) {
      if (mine_trace.empty() == traces_file.empty()) throw CLI::ValidationError("give either a trace or --traces-file");
      auto t0 = std::chrono::steady_clock::now();
      EliminationRules rules;
      Universe u(alphabet, max_ops, rules);
      double enumerate_s = seconds_since(t0);

      if (!traces_file.empty()) {
        auto traces = read_traces(traces_file, alphabet);
        auto results = mine_batch(u, traces, limits, common.workers);
        double check_s = 0;
        for (std::size_t i = 0; i < traces.size(); ++i) {
          const auto& r = results[i];
          check_s += r.stats.check_seconds;
          if (count_only) {
            out << print_trace(traces[i]) << '\t' << r.stats.satisfied << '\t' << r.stats.timeouts << '\n';
          } else {
            out << "## " << print_trace(traces[i]) << '\n';
            for (const auto& f : r.formulas) out << f << '\n';
          }
        }
        err << "# traces " << traces.size() << " candidates " << u.size() << " enumerate_s " << fixed(enumerate_s)
            << " check_s " << fixed(check_s) << "\n";
        return kOk;
      }

      SymbolicTrace t = [&] {
        try {
          return parse_trace(mine_trace, alphabet);
        } catch (const ParseError& e) {
          throw InputError(std::string("trace: ") + e.what());
        }
      }();
      if (!others_file.empty()) {
        TraceBatch others(read_traces(others_file, alphabet));
        MineStats stats;
        try {
          auto best = mine_most_distinct(u, t, others, limits, &stats);
          out << print_formula(best.formula) << '\t' << fixed(best.score.value, 6) << '\n';
          err << "# satisfied_others " << best.score.satisfied_others << " of " << best.score.other_count
              << " timeout_pairs " << best.score.timeout_pairs << " mined " << stats.satisfied << " enumerate_s "
              << fixed(enumerate_s) << " check_s " << fixed(stats.check_seconds) << "\n";
        } catch (const NoSatisfyingFormula& e) {
          err << e.what() << "\n";
          return kNoFormula;
        }
        return kOk;
      }
      MineStats stats = mine_indices(u, t, limits, [&](std::size_t i) {
        if (!count_only) out << print_formula(u.formula(i)) << '\n';
      });
      err << "# candidates " << stats.candidates << " satisfied " << stats.satisfied << " timeouts " << stats.timeouts
          << " enumerate_s " << fixed(enumerate_s) << " check_s " << fixed(stats.check_seconds) << "\n";
      if (stats.satisfied == 0) {
        err << "no enumerated formula holds on " << print_trace(t) << "\n";
        return kNoFormula;
      }
      return kOk;
    }

    if (*decode_cmd) {
      if (decode_dataset.empty() == decode_trace.empty()) throw CLI::ValidationError("give either --trace or --dataset");
      dcfg.enforce_syntax = !no_enforce;
      std::vector<SymbolicTrace> traces;
      if (!decode_trace.empty()) {
        try {
          traces.push_back(parse_trace(decode_trace, alphabet));
        } catch (const ParseError& e) {
          throw InputError(std::string("trace: ") + e.what());
        }
      } else {
        traces = read_traces(decode_dataset, alphabet);
      }
      auto scorer = make_scorer(scorer_spec, vocab);
      std::ostringstream lines;
      std::size_t invalid = 0;
      for (const auto& t : traces) {
        auto r = beam_decode(*scorer, t, vocab, dcfg);
        if (!r.valid()) ++invalid;
        lines << decode_line(r) << '\n';
      }
      if (predictions_out.empty())
        out << lines.str();
      else
        write_file(predictions_out, lines.str());
      err << "decoded " << traces.size() << " traces, " << invalid << " invalid\n";
      return kOk;
    }

    if (*eval_cmd) {
      LoadOptions lo;
      lo.alphabet = alphabet;
      lo.validate = false;
      lo.limits = limits;
      auto pairs = load(eval_dataset, lo);
      auto preds = read_lines(eval_predictions);
      ReportOptions ro;
      ro.alphabet = alphabet;
      ro.limits = limits;
      ro.workers = common.workers;
      ro.distinctiveness_limit = distinct_limit;
      ro.compute_distinctiveness = !no_distinct;
      EvalReport r;
      try {
        r = batch_report(pairs, preds, ro);
      } catch (const LengthMismatch& e) {
        throw InputError(e.what());
      }
      out << format_table(r);
      if (!out_prefix.empty()) {
        write_file(out_prefix + ".jsonl", format_jsonl(r, pairs, preds));
        write_file(out_prefix + ".scatter.csv", format_scatter_csv(r, pairs, preds));
      }
      return kOk;
    }

    if (*gen_cmd) {
      gcfg.props = common.props;
      gcfg.limits = limits;
      GenStats stats;
      auto pairs = generate_dataset(gen_count, gcfg, &stats);
      save(pairs, gen_out);
      err << "generated " << pairs.size() << " pairs from " << stats.attempts << " attempts (unsatisfiable "
          << stats.unsatisfiable << ", trace too long " << stats.too_long << ", resource limit "
          << stats.resource_limit << ")\n";
      return kOk;
    }

    if (*split_cmd) {
      LoadOptions lo;
      lo.alphabet = alphabet;
      lo.validate = false;
      auto pairs = load(split_dataset, lo);
      Split s = split(pairs, {ratios[0], ratios[1], ratios[2]}, split_seed);
      save(s.train, split_prefix + ".train.tsv");
      save(s.val, split_prefix + ".val.tsv");
      save(s.test, split_prefix + ".test.tsv");
      err << "train " << s.train.size() << ", val " << s.val.size() << ", test " << s.test.size() << "\n";
      return kOk;
    }

    if (*bench_cmd) {
      auto traces = read_traces(bench_dataset, alphabet);
      if (traces.size() > bench_limit) traces.erase(traces.begin() + static_cast<long>(bench_limit), traces.end());

      auto t0 = std::chrono::steady_clock::now();
      Universe u(alphabet, bench_ops);
      double enumerate_s = seconds_since(t0);
      std::vector<MineStats> mined(traces.size());
      for (std::size_t i = 0; i < traces.size(); ++i) mined[i] = mine_indices(u, traces[i], limits, [](std::size_t) {});

      t0 = std::chrono::steady_clock::now();
      auto scorer = make_scorer(bench_scorer, vocab);
      double scorer_s = seconds_since(t0);
      std::vector<double> decode_s(traces.size());
      std::vector<DecodeResult> decoded(traces.size());
      for (std::size_t i = 0; i < traces.size(); ++i) {
        t0 = std::chrono::steady_clock::now();
        decoded[i] = beam_decode(*scorer, traces[i], vocab, dcfg);
        decode_s[i] = seconds_since(t0);
      }

      std::ostringstream f;
      double mine_total = enumerate_s, decode_total = scorer_s;
      std::size_t valid = 0;
      f << "# miner: max-ops " << bench_ops << ", " << u.size() << " candidates; decoder: " << bench_scorer
        << ", beam " << dcfg.beam_size << "\n";
      f << "index\ttrace\tmine_seconds\tmined\tdecode_seconds\tprediction\n";
      for (std::size_t i = 0; i < traces.size(); ++i) {
        mine_total += mined[i].check_seconds;
        decode_total += decode_s[i];
        if (decoded[i].valid()) ++valid;
        f << i << '\t' << print_trace(traces[i]) << '\t' << fixed(mined[i].check_seconds, 6) << '\t'
          << mined[i].satisfied << '\t' << fixed(decode_s[i], 6) << '\t' << decode_line(decoded[i]) << '\n';
      }
      f << "# traces " << traces.size() << " decoded " << decoded.size() << " valid " << valid << "\n";
      f << "# mine_total_s " << fixed(mine_total, 6) << " (enumerate " << fixed(enumerate_s, 6) << ")\n";
      f << "# decode_total_s " << fixed(decode_total, 6) << " (scorer setup " << fixed(scorer_s, 6) << ")\n";
      write_file(bench_out, f.str());
      out << "traces " << traces.size() << "  mine " << fixed(mine_total) << " s  decode " << fixed(decode_total)
          << " s  decoded " << decoded.size() << " (" << valid << " valid)\n";
      return kOk;
    }

    if (*vocab_cmd) {
      out << vocab.manifest();
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    err << "parse error: " << e.what() << "\n";
    return kDataError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kDataError;
  } catch (const DatasetError& e) {
    err << "dataset error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

} // namespace ltlmine::cli
