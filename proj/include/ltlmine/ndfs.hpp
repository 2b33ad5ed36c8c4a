#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "ltlmine/errors.hpp"

namespace ltlmine {

/// Limits applied to one satisfaction check.
struct CheckLimits {
  std::chrono::milliseconds timeout{30'000};
  std::size_t state_cap = 1'000'000;
};

/// Cooperative deadline and state counter shared by the automata of one
/// check. The clock is sampled every 256 polls.
class Budget {
public:
  explicit Budget(const CheckLimits& limits)
      : deadline_(std::chrono::steady_clock::now() + limits.timeout), cap_(limits.state_cap) {}

  void poll() {
    if ((++polls_ & 0xffu) == 0 && std::chrono::steady_clock::now() > deadline_)
      throw TimeoutError("check exceeded its time budget");
  }

  void add_states(std::size_t n = 1) {
    states_ += n;
    if (states_ > cap_) throw ResourceLimitError("state cap of " + std::to_string(cap_) + " exceeded");
  }

  std::size_t states() const { return states_; }

private:
  std::chrono::steady_clock::time_point deadline_;
  std::size_t cap_;
  std::size_t states_ = 0;
  std::uint32_t polls_ = 0;
};

/// Accepting run u v^ω of a Büchi graph, as the labels of its edges.
template <class Label>
struct LassoRun {
  std::vector<Label> stem;
  std::vector<Label> cycle;
};

/// Nested depth-first search for an accepting lasso.
///
/// `Graph` exposes `int initial()`, `bool accepting(int)` and
/// `const std::vector<Edge>& successors(int)` where `Edge` has `label` and
/// `target`. State ids must be dense and the returned successor vectors must
/// stay valid while further states are discovered. Both searches use
/// explicit stacks. The inner search stops at any state still on the outer
/// stack, which closes a cycle through the seed.
template <class Graph>
auto find_accepting_lasso(Graph& g, Budget& budget) -> std::optional<LassoRun<typename Graph::Label>> {
  using Label = typename Graph::Label;
  enum : std::uint8_t { White, Cyan, Blue };

  struct Frame {
    int state;
    std::size_t next = 0;
    Label via{};
  };

  std::vector<std::uint8_t> color;
  std::vector<std::uint8_t> red;
  std::vector<int> stack_pos; // index in the blue stack while cyan
  auto touch = [&](int s) {
    if (static_cast<std::size_t>(s) >= color.size()) {
      color.resize(s + 1, White);
      red.resize(s + 1, 0);
      stack_pos.resize(s + 1, -1);
    }
  };

  std::vector<Frame> blue;
  auto build = [&](int target_pos, const std::vector<Label>& red_path) {
    LassoRun<Label> run;
    for (int k = 1; k <= target_pos; ++k) run.stem.push_back(blue[k].via);
    for (std::size_t k = target_pos + 1; k < blue.size(); ++k) run.cycle.push_back(blue[k].via);
    run.cycle.insert(run.cycle.end(), red_path.begin(), red_path.end());
    return run;
  };

  int init = g.initial();
  touch(init);
  blue.push_back(Frame{init});
  color[init] = Cyan;
  stack_pos[init] = 0;

  std::vector<Frame> red_stack;
  while (!blue.empty()) {
    budget.poll();
    Frame& top = blue.back();
    const auto& succ = g.successors(top.state);
    if (top.next < succ.size()) {
      const auto& e = succ[top.next++];
      int t = e.target;
      touch(t);
      if (color[t] == White) {
        color[t] = Cyan;
        stack_pos[t] = static_cast<int>(blue.size());
        blue.push_back(Frame{t, 0, e.label});
      } else if (color[t] == Cyan && (g.accepting(top.state) || g.accepting(t))) {
        // Back edge closing a cycle through an accepting state.
        return build(stack_pos[t], std::vector<Label>{e.label});
      }
      continue;
    }

    int seed = top.state;
    if (g.accepting(seed)) {
      red_stack.clear();
      red_stack.push_back(Frame{seed});
      red[seed] = 1;
      while (!red_stack.empty()) {
        budget.poll();
        Frame& rt = red_stack.back();
        const auto& rs = g.successors(rt.state);
        if (rt.next >= rs.size()) {
          red_stack.pop_back();
          continue;
        }
        const auto& e = rs[rt.next++];
        int t = e.target;
        touch(t);
        if (color[t] == Cyan) {
          std::vector<Label> path;
          for (std::size_t k = 1; k < red_stack.size(); ++k) path.push_back(red_stack[k].via);
          path.push_back(e.label);
          return build(stack_pos[t], path);
        }
        if (!red[t]) {
          red[t] = 1;
          red_stack.push_back(Frame{t, 0, e.label});
        }
      }
    }
    color[seed] = Blue;
    stack_pos[seed] = -1;
    blue.pop_back();
  }
  return std::nullopt;
}

} // namespace ltlmine
