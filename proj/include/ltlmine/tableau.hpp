#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <unordered_map>
#include <vector>

#include "ltlmine/formula.hpp"
#include "ltlmine/ndfs.hpp"

namespace ltlmine {

/// Conjunction of literals: `pos` atoms must hold, `neg` atoms must not.
struct Cube {
  Assignment pos = 0;
  Assignment neg = 0;

  bool satisfied_by(Assignment a) const { return (a & pos) == pos && (a & neg) == 0; }
  friend bool operator==(const Cube&, const Cube&) = default;
};

/// Renders a cube as a propositional formula, literals in proposition order.
inline Formula cube_formula(const Cube& c) {
  Formula out;
  bool first = true;
  for (int p = 0; p < kMaxProps; ++p) {
    bool pos = c.pos >> p & 1u, neg = c.neg >> p & 1u;
    if (!pos && !neg) continue;
    Formula lit = Formula::atom(static_cast<PropId>(p));
    if (neg) lit = Formula::negation(lit);
    out = first ? lit : Formula::conjunction(out, lit);
    first = false;
  }
  return out;
}

/// On-the-fly tableau automaton for an LTL formula.
///
/// The formula is put in negation normal form (¬ pushed to literals, with
/// release as the dual of until). A tableau state is a set of NNF
/// obligations; expanding it yields edges labelled by literal cubes to the
/// set of obligations for the next position. Each edge records, per until
/// subformula, whether that eventuality is not pending or was fulfilled,
/// giving a generalized Büchi condition with one set per until.
class Tableau {
public:
  enum class NKind : std::uint8_t { True, False, Lit, And, Or, Next, Until, Release };

  struct Node {
    NKind kind;
    PropId prop = 0;
    bool positive = true;
    int a = -1;
    int b = -1;
    auto key() const { return std::tuple(kind, prop, positive, a, b); }
  };

  struct Edge {
    Cube cube;
    int target;
    /// marks[j]: acceptance set j (the j-th until) is visited by this edge.
    std::vector<bool> marks;
  };

  explicit Tableau(const Formula& f, std::size_t state_cap = 1'000'000) : cap_(state_cap) {
    root_ = to_nnf(f, false);
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].kind == NKind::Until) untils_.push_back(static_cast<int>(i));
    std::vector<int> init;
    if (nodes_[root_].kind != NKind::True) init.push_back(root_);
    initial_ = intern_state(std::move(init));
  }

  int initial() const { return initial_; }
  std::size_t state_count() const { return states_.size(); }
  std::size_t until_count() const { return untils_.size(); }
  const std::vector<int>& state(int s) const { return states_[s]; }
  const Node& node(int id) const { return nodes_[id]; }

  /// Expansion of a state, computed on first use.
  const std::vector<Edge>& edges(int s) {
    if (expanded_[s] < 0) {
      auto terms = expand_state(states_[s]);
      std::vector<Edge> out;
      out.reserve(terms.size());
      for (auto& t : terms) {
        Edge e{Cube{t.pos, t.neg}, intern_state(t.next), std::vector<bool>(untils_.size())};
        for (std::size_t j = 0; j < untils_.size(); ++j) {
          int u = untils_[j];
          e.marks[j] = !std::binary_search(t.next.begin(), t.next.end(), u) ||
                       std::find(t.fulfilled.begin(), t.fulfilled.end(), u) != t.fulfilled.end();
        }
        if (std::find_if(out.begin(), out.end(), [&](const Edge& o) {
              return o.cube == e.cube && o.target == e.target && o.marks == e.marks;
            }) == out.end())
          out.push_back(std::move(e));
      }
      expanded_[s] = static_cast<int>(expansions_.size());
      expansions_.push_back(std::move(out));
    }
    return expansions_[expanded_[s]];
  }

private:
  struct Term {
    Assignment pos = 0, neg = 0;
    std::vector<int> todo;
    std::vector<int> next;
    std::vector<int> fulfilled;
    std::vector<int> done;
  };

  int intern_node(Node n) {
    auto [it, inserted] = node_ids_.emplace(n.key(), static_cast<int>(nodes_.size()));
    if (inserted) nodes_.push_back(n);
    return it->second;
  }

  int to_nnf(const Formula& f, bool negated) {
    switch (f.kind()) {
    case Kind::True:
      return intern_node({negated ? NKind::False : NKind::True});
    case Kind::False:
      return intern_node({negated ? NKind::True : NKind::False});
    case Kind::Atom:
      return intern_node({NKind::Lit, f.prop(), !negated});
    case Kind::Not:
      return to_nnf(f.child(), !negated);
    case Kind::And: {
      int a = to_nnf(f.left(), negated), b = to_nnf(f.right(), negated);
      return intern_node({negated ? NKind::Or : NKind::And, 0, true, a, b});
    }
    case Kind::Next:
      return intern_node({NKind::Next, 0, true, to_nnf(f.child(), negated)});
    case Kind::Until: {
      // ¬(a U b) = ¬a R ¬b
      int a = to_nnf(f.left(), negated), b = to_nnf(f.right(), negated);
      return intern_node({negated ? NKind::Release : NKind::Until, 0, true, a, b});
    }
    }
    return -1;
  }

  int intern_state(std::vector<int> obligations) {
    std::sort(obligations.begin(), obligations.end());
    obligations.erase(std::unique(obligations.begin(), obligations.end()), obligations.end());
    std::erase_if(obligations, [&](int id) { return nodes_[id].kind == NKind::True; });
    auto it = state_ids_.find(obligations);
    if (it != state_ids_.end()) return it->second;
    if (states_.size() >= cap_)
      throw ResourceLimitError("tableau state cap of " + std::to_string(cap_) + " exceeded");
    int id = static_cast<int>(states_.size());
    state_ids_.emplace(obligations, id);
    states_.push_back(std::move(obligations));
    expanded_.push_back(-1);
    return id;
  }

  std::vector<Term> expand_state(const std::vector<int>& obligations) {
    std::vector<Term> out;
    Term t;
    t.todo.assign(obligations.rbegin(), obligations.rend());
    expand(std::move(t), out);
    for (auto& term : out) {
      std::sort(term.next.begin(), term.next.end());
      term.next.erase(std::unique(term.next.begin(), term.next.end()), term.next.end());
    }
    return out;
  }

  // Branches are explored in order: the branch that discharges an
  // eventuality now comes first.
  void expand(Term t, std::vector<Term>& out) {
    while (!t.todo.empty()) {
      int id = t.todo.back();
      t.todo.pop_back();
      if (std::find(t.done.begin(), t.done.end(), id) != t.done.end()) continue;
      t.done.push_back(id);
      const Node n = nodes_[id];
      switch (n.kind) {
      case NKind::True:
        break;
      case NKind::False:
        return;
      case NKind::Lit: {
        Assignment bit = 1u << n.prop;
        (n.positive ? t.pos : t.neg) |= bit;
        if (t.pos & t.neg) return;
        break;
      }
      case NKind::And:
        t.todo.push_back(n.b);
        t.todo.push_back(n.a);
        break;
      case NKind::Or: {
        Term alt = t;
        alt.todo.push_back(n.b);
        t.todo.push_back(n.a);
        expand(std::move(t), out);
        expand(std::move(alt), out);
        return;
      }
      case NKind::Next:
        if (nodes_[n.a].kind == NKind::False) return;
        t.next.push_back(n.a);
        break;
      case NKind::Until: {
        Term alt = t;
        t.todo.push_back(n.b);
        t.fulfilled.push_back(id);
        alt.todo.push_back(n.a);
        alt.next.push_back(id);
        expand(std::move(t), out);
        expand(std::move(alt), out);
        return;
      }
      case NKind::Release: {
        Term alt = t;
        t.todo.push_back(n.b);
        t.todo.push_back(n.a);
        alt.todo.push_back(n.b);
        alt.next.push_back(id);
        expand(std::move(t), out);
        expand(std::move(alt), out);
        return;
      }
      }
    }
    out.push_back(std::move(t));
  }

  std::size_t cap_;
  std::vector<Node> nodes_;
  std::map<std::tuple<NKind, PropId, bool, int, int>, int> node_ids_;
  std::vector<int> untils_;
  int root_ = -1;
  std::vector<std::vector<int>> states_;
  std::map<std::vector<int>, int> state_ids_;
  std::vector<int> expanded_;
  std::deque<std::vector<Edge>> expansions_;
  int initial_ = -1;
};

/// Generalized-to-plain Büchi conversion: a state carries a level counting
/// how many acceptance sets have been visited in order; level == #sets is
/// accepting and the count restarts on the next edge.
inline int next_level(int level, int sets, const std::vector<bool>& marks) {
  int j = level == sets ? 0 : level;
  while (j < sets && marks[j]) ++j;
  return j;
}

} // namespace ltlmine
