#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <memory>

#include "ltlmine/alphabet.hpp"

namespace ltlmine {

enum class Kind : std::uint8_t { True, False, Atom, Not, And, Next, Until };

inline int arity(Kind k) {
  switch (k) {
  case Kind::True:
  case Kind::False:
  case Kind::Atom:
    return 0;
  case Kind::Not:
  case Kind::Next:
    return 1;
  case Kind::And:
  case Kind::Until:
    return 2;
  }
  return 0;
}

/// Immutable LTL syntax tree over T, F, atoms, negation, conjunction, X and U.
///
/// Subtrees are shared, so copies are cheap and values are safe to hand
/// across threads. Node count, operator count and the atom set are cached
/// at construction.
class Formula {
  struct Node {
    Kind kind;
    PropId prop;
    bool propositional;
    std::uint32_t atoms;
    std::uint32_t nodes;
    std::uint32_t ops;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };
  using NodePtr = std::shared_ptr<const Node>;

public:
  /// Defaults to True.
  Formula() : node_(top().node_) {}

  static Formula top() {
    static const Formula t(make(Kind::True, 0, nullptr, nullptr));
    return t;
  }
  static Formula bottom() {
    static const Formula f(make(Kind::False, 0, nullptr, nullptr));
    return f;
  }
  static Formula atom(PropId p) {
    assert(p < kMaxProps);
    return Formula(make(Kind::Atom, p, nullptr, nullptr));
  }
  static Formula negation(const Formula& f) { return Formula(make(Kind::Not, 0, f.node_, nullptr)); }
  static Formula conjunction(const Formula& l, const Formula& r) {
    return Formula(make(Kind::And, 0, l.node_, r.node_));
  }
  static Formula next(const Formula& f) { return Formula(make(Kind::Next, 0, f.node_, nullptr)); }
  static Formula until(const Formula& l, const Formula& r) {
    return Formula(make(Kind::Until, 0, l.node_, r.node_));
  }

  /// Generic constructor used by parsers and enumerators.
  static Formula make_node(Kind k, PropId p, const Formula* l, const Formula* r) {
    switch (arity(k)) {
    case 0:
      if (k == Kind::True) return top();
      if (k == Kind::False) return bottom();
      return atom(p);
    case 1:
      return Formula(make(k, 0, l->node_, nullptr));
    default:
      return Formula(make(k, 0, l->node_, r->node_));
    }
  }

  Kind kind() const { return node_->kind; }
  PropId prop() const { return node_->prop; }

  /// Operand of a unary node, or the left operand of a binary node.
  Formula left() const {
    assert(node_->lhs);
    return Formula(node_->lhs);
  }
  Formula child() const { return left(); }
  Formula right() const {
    assert(node_->rhs);
    return Formula(node_->rhs);
  }

  std::size_t node_count() const { return node_->nodes; }
  /// Number of ¬, ∧, X and U nodes; leaves are free.
  std::size_t operator_count() const { return node_->ops; }
  bool is_propositional() const { return node_->propositional; }
  /// Bit mask of the propositions mentioned.
  std::uint32_t atoms() const { return node_->atoms; }

  /// Identity of the shared node; equal ids imply structural equality.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) { return equal(a.node_.get(), b.node_.get()); }

private:
  explicit Formula(NodePtr n) : node_(std::move(n)) {}

  static NodePtr make(Kind k, PropId p, NodePtr l, NodePtr r) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->prop = p;
    n->atoms = k == Kind::Atom ? 1u << p : 0u;
    n->nodes = 1;
    n->ops = arity(k) > 0 ? 1 : 0;
    n->propositional = k != Kind::Next && k != Kind::Until;
    if (l) {
      n->atoms |= l->atoms;
      n->nodes += l->nodes;
      n->ops += l->ops;
      n->propositional = n->propositional && l->propositional;
    }
    if (r) {
      n->atoms |= r->atoms;
      n->nodes += r->nodes;
      n->ops += r->ops;
      n->propositional = n->propositional && r->propositional;
    }
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  static bool equal(const Node* x, const Node* y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind || x->nodes != y->nodes || x->atoms != y->atoms || x->prop != y->prop) return false;
    return equal(x->lhs.get(), y->lhs.get()) && equal(x->rhs.get(), y->rhs.get());
  }

  NodePtr node_;
};

} // namespace ltlmine
