#pragma once

#include <map>
#include <string>
#include <vector>

#include "gpl/perm.hpp"
#include "gpl/ring.hpp"
#include "gpl/tree.hpp"

namespace gpl {

/// Finitely supported linear combination of operations of one arity.
template <class Key>
class Combination {
 public:
  Combination(Ring ring, int arity) : ring_(ring), arity_(arity) {}
  static Combination basis(Ring ring, int arity, Key key) {
    Combination c(ring, arity);
    c.add(std::move(key), Scalar::one(ring));
    return c;
  }

  const Ring& ring() const { return ring_; }
  int arity() const { return arity_; }
  const std::map<Key, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(Key key, const Scalar& coefficient) {
    if (coefficient.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(std::move(key), coefficient);
    if (!inserted) {
      it->second += coefficient;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  Combination& operator+=(const Combination& other) {
    for (const auto& [k, c] : other.terms_) add(k, c);
    return *this;
  }
  Combination operator+(const Combination& other) const { return Combination(*this) += other; }
  Combination scaled(const Scalar& s) const {
    Combination out(ring_, arity_);
    for (const auto& [k, c] : terms_) out.add(k, c * s);
    return out;
  }
  friend bool operator==(const Combination& a, const Combination& b) {
    return a.ring_ == b.ring_ && a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }

 private:
  Ring ring_;
  int arity_;
  std::map<Key, Scalar> terms_;
};

using PreLieElement = Combination<LabeledTree>;
using BraceElement = Combination<PlanarTree>;

/// Labeled trees of S o_i T: vertex i replaced by T, each child of i reattached to any vertex of T.
std::vector<LabeledTree> partial_compose(const LabeledTree& s, int i, const LabeledTree& t);
PreLieElement partial_compose(const PreLieElement& s, int i, const PreLieElement& t);

/// Relabels vertex j as sigma(j).
LabeledTree sigma_action(const Permutation& sigma, const LabeledTree& t);
PreLieElement sigma_action(const Permutation& sigma, const PreLieElement& x);

/// Sum of all planar representatives of a labeled tree.
BraceElement symmetrize(const LabeledTree& t, const Ring& ring);
BraceElement symmetrize(const PreLieElement& x);

/// Planar partial composition: the children of i are distributed order-preservingly over the corners of T.
std::vector<PlanarTree> partial_compose(const PlanarTree& s, int i, const PlanarTree& t);
BraceElement partial_compose(const BraceElement& s, int i, const BraceElement& t);
PlanarTree sigma_action(const Permutation& sigma, const PlanarTree& t);

/// f<g_1,...,g_n> in the brace algebra of planar trees: the roots of the g_j are
/// grafted in order onto corners of f. Labels are f's, then each g_j's, shifted in order.
std::vector<PlanarTree> brace_compose(const PlanarTree& f, const std::vector<PlanarTree>& args);
BraceElement brace_compose(const BraceElement& f, const std::vector<BraceElement>& args);

/// The tree with a single vertex labeled 1.
LabeledTree unit_tree();
/// Labeled 2-chain with root r and leaf 3-r.
LabeledTree chain2(int root);

}  // namespace gpl
