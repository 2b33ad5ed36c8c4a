#include <gtest/gtest.h>

#include "ltlmine/trace.hpp"

using namespace ltlmine;

namespace {

ParseError trace_error(std::string_view text) {
  try {
    parse_trace(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse error for " << text;
  return ParseError(ParseErrorKind::PrematureEnd, 0, "");
}

} // namespace

TEST(ParseTrace, PrefixAndPeriod) {
  auto t = parse_trace("a;&ab;{b}");
  ASSERT_EQ(t.prefix().size(), 2u);
  ASSERT_EQ(t.period().size(), 1u);
  EXPECT_EQ(print_formula(t.prefix()[1]), "&ab");
  EXPECT_EQ(t.length(), 3u);
  EXPECT_EQ(t.loop_start(), 2u);
  EXPECT_EQ(t.successor(2), 2u);
  EXPECT_EQ(print_formula(t.at(7)), "b");
}

TEST(ParseTrace, PeriodOnly) {
  auto t = parse_trace("{1}");
  EXPECT_TRUE(t.prefix().empty());
  EXPECT_EQ(t.period().size(), 1u);
  EXPECT_EQ(t.at(0), Formula::top());
}

TEST(ParseTrace, MultiStepPeriod) {
  auto t = parse_trace("c;{a;!b}");
  EXPECT_EQ(t.length(), 3u);
  EXPECT_EQ(t.successor(2), 1u);
  EXPECT_EQ(print_formula(t.at(4)), "!b");
}

TEST(ParseTrace, MalformedLasso) {
  EXPECT_EQ(trace_error("a;b").kind(), ParseErrorKind::MalformedLasso);
  EXPECT_EQ(trace_error("a;{b").kind(), ParseErrorKind::MalformedLasso);
  EXPECT_EQ(trace_error("a;{}").kind(), ParseErrorKind::MalformedLasso);
  EXPECT_EQ(trace_error("a{b}").kind(), ParseErrorKind::MalformedLasso);
  EXPECT_EQ(trace_error("{a};b").kind(), ParseErrorKind::MalformedLasso);
  EXPECT_EQ(trace_error("{a}{b}").kind(), ParseErrorKind::MalformedLasso);
  EXPECT_EQ(trace_error("a;;{b}").kind(), ParseErrorKind::MalformedLasso);
  EXPECT_EQ(trace_error("}a;{b").kind(), ParseErrorKind::MalformedLasso);
}

TEST(ParseTrace, StepErrorsReportAbsolutePosition) {
  auto e = trace_error("a;&a;{b}");
  EXPECT_EQ(e.kind(), ParseErrorKind::PrematureEnd);
  EXPECT_EQ(e.position(), 4u);
  e = trace_error("a;{&b?}");
  EXPECT_EQ(e.kind(), ParseErrorKind::UnknownCharacter);
  EXPECT_EQ(e.position(), 5u);
}

TEST(ParseTrace, TemporalOperatorsRejectedInSteps) {
  EXPECT_EQ(trace_error("Xa;{b}").kind(), ParseErrorKind::UnknownCharacter);
  EXPECT_EQ(trace_error("{Uab}").kind(), ParseErrorKind::UnknownCharacter);
}

TEST(SymbolicTraceType, InvariantsEnforced) {
  EXPECT_THROW(SymbolicTrace({}, {}), std::invalid_argument);
  EXPECT_THROW(SymbolicTrace({}, {parse_formula("Xa")}), std::invalid_argument);
}

TEST(PrintTrace, RoundTrip) {
  for (const char* s : {"a;&ab;{b}", "{1}", "&a!e;e;d;{1}", "!c;&!c!d;&c!d;!b;!b;{1}", "c;{a;!b;0}"}) {
    EXPECT_EQ(print_trace(parse_trace(s)), s);
  }
}
