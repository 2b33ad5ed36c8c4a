#include <gtest/gtest.h>

#include "ltlmine/remote_scorer.hpp"

using namespace ltlmine;

#ifndef FAKE_PEER_PATH
#error "FAKE_PEER_PATH must point at the fake_peer binary"
#endif

namespace {

const Vocabulary& vocab() {
  static const Vocabulary v{Alphabet(5)};
  return v;
}

std::string peer(const std::string& mode) {
  return std::string(FAKE_PEER_PATH) + " " + mode + " " + std::to_string(vocab().formula_size());
}

// Local scorer with the same fixed logits the peer sends.
class RampScorer : public Scorer {
public:
  std::vector<double> next_logits(const TokenSeq&, const TokenSeq&) override {
    std::vector<double> out(vocab().formula_size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(i) / 10.0;
    return out;
  }
};

} // namespace

TEST(Remote, MatchesLocalScorerWithSameLogits) {
  RemoteScorer remote(peer("fixed"), vocab());
  RampScorer local;
  auto t = parse_trace("a;&a!b;{c}");
  auto trace_seq = tokenize(print_trace(t), Domain::Trace, vocab());
  EXPECT_EQ(remote.next_logits(trace_seq, TokenSeq{Domain::Formula, {}}),
            local.next_logits(trace_seq, TokenSeq{Domain::Formula, {}}));
  for (int beam : {1, 3}) {
    DecodeConfig cfg;
    cfg.beam_size = beam;
    auto a = beam_decode(remote, t, vocab(), cfg);
    auto b = beam_decode(local, t, vocab(), cfg);
    EXPECT_EQ(a.text, b.text);
    EXPECT_EQ(a.log_prob, b.log_prob);
    EXPECT_EQ(a.valid(), b.valid());
  }
}

TEST(Remote, WrongLength) {
  RemoteScorer remote(peer("wrong-length"), vocab());
  EXPECT_THROW(beam_decode(remote, parse_trace("{a}"), vocab()), VectorLengthMismatch);
}

TEST(Remote, PeerDiesMidDecode) {
  RemoteScorer remote(peer("die-after-2"), vocab());
  EXPECT_THROW(beam_decode(remote, parse_trace("{a}"), vocab()), PeerClosed);
}

TEST(Remote, MalformedResponses) {
  {
    RemoteScorer remote(peer("garbage"), vocab());
    EXPECT_THROW(beam_decode(remote, parse_trace("{a}"), vocab()), ProtocolError);
  }
  {
    RemoteScorer remote(peer("wrong-id"), vocab());
    EXPECT_THROW(beam_decode(remote, parse_trace("{a}"), vocab()), ProtocolError);
  }
}

TEST(Remote, HandshakeChecks) {
  EXPECT_THROW(RemoteScorer(peer("bad-version"), vocab()), ProtocolError);
  EXPECT_THROW(RemoteScorer(peer("bad-size"), vocab()), ProtocolError);
  EXPECT_THROW(RemoteScorer("exit 0", vocab()), PeerClosed);
  EXPECT_THROW(RemoteScorer("/nonexistent/peer", vocab()), PeerClosed);
}
