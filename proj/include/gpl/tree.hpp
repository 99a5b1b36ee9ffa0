#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gpl {

using GeneratorId = int;

/// Rooted tree with vertices decorated by generator ids, kept in canonical form.
///
/// Vertices are numbered in canonical preorder (root is 0, siblings sorted by
/// subtree code). The code lists (decoration, child count) per vertex and
/// identifies the isomorphism class.
class DecoratedTree {
 public:
  DecoratedTree() = default;  // the empty tree

  static DecoratedTree vertex(GeneratorId g);
  /// parents[v] is the parent of v, -1 for the root. Any vertex order.
  static DecoratedTree from_parents(const std::vector<int>& parents, const std::vector<GeneratorId>& decorations);
  /// Rebuilds a tree from its code; the code must already be canonical.
  static DecoratedTree from_code(std::vector<int> code);

  int size() const { return static_cast<int>(code_.size() / 2); }
  bool empty() const { return code_.empty(); }
  GeneratorId generator(int v) const { return code_[static_cast<std::size_t>(2 * v)]; }
  int child_count(int v) const { return code_[static_cast<std::size_t>(2 * v + 1)]; }
  const std::vector<int>& code() const { return code_; }

  std::vector<int> parents() const;
  std::vector<std::vector<int>> children() const;
  std::vector<GeneratorId> decorations() const;
  int depth() const;
  /// Subtree rooted at v, canonical.
  DecoratedTree subtree(int v) const;
  int degree(std::span<const int> generator_degrees) const;

  friend bool operator==(const DecoratedTree&, const DecoratedTree&) = default;
  friend std::strong_ordering operator<=>(const DecoratedTree& a, const DecoratedTree& b);

 private:
  std::vector<int> code_;
};

struct TreeCodeHash {
  std::size_t operator()(const DecoratedTree& t) const;
};

/// Result of canonicalization with respect to generator degrees.
struct Canonical {
  DecoratedTree tree;
  std::uint64_t automorphism_order = 1;
  /// Some automorphism has Koszul sign -1 on the vertex degrees.
  bool sign_degenerate = false;
};

/// UnknownGenerator if a decoration has no degree entry.
Canonical canonicalize(const DecoratedTree& t, std::span<const int> generator_degrees);
Canonical canonicalize(const std::vector<int>& parents, const std::vector<GeneratorId>& decorations,
                       std::span<const int> generator_degrees);

/// Canonical preorder of the tree on `vertices` (a subset closed under parent
/// except for its root) of a tree given by parents/decorations: the returned
/// ids are in the order they receive in the canonical form.
std::vector<int> canonical_order(const std::vector<int>& parents, const std::vector<GeneratorId>& decorations,
                                 const std::vector<int>& vertices);

/// Attach subtree's root as a new child of host's vertex. BadVertex if out of range.
DecoratedTree graft(const DecoratedTree& host, int vertex, const DecoratedTree& subtree);

/// Undecorated isomorphism classes with at most max_vertices vertices, grouped by size.
std::vector<std::vector<DecoratedTree>> enumerate_unlabeled(int max_vertices);

/// Rooted tree on vertex labels 1..n; parent[i-1] is the parent label of i, 0 at the root.
struct LabeledTree {
  std::vector<int> parent;

  int size() const { return static_cast<int>(parent.size()); }
  int root() const;
  std::vector<std::vector<int>> children() const;  // by label, sorted
  std::string to_string() const;

  friend bool operator==(const LabeledTree&, const LabeledTree&) = default;
  friend auto operator<=>(const LabeledTree&, const LabeledTree&) = default;
};

inline constexpr int kLabeledCap = 7;

/// All labeled rooted trees on n vertices in lexicographic parent order. CapExceeded beyond kLabeledCap.
std::vector<LabeledTree> enumerate_labeled(int n);

/// Rooted tree on labels 1..n with an order on each vertex's children.
struct PlanarTree {
  int root = 1;
  std::vector<std::vector<int>> children;  // children[label-1], in planar order

  int size() const { return static_cast<int>(children.size()); }
  std::string to_string() const;

  friend bool operator==(const PlanarTree&, const PlanarTree&) = default;
  friend auto operator<=>(const PlanarTree&, const PlanarTree&) = default;
};

/// Text form `a[b,b[c]]` with children in canonical order.
std::string to_text(const DecoratedTree& t, const std::function<std::string(GeneratorId)>& name);
/// Parses the text form; `lookup` returns -1 for unknown names (UnknownGenerator).
DecoratedTree parse_tree(const std::string& text, const std::function<GeneratorId(const std::string&)>& lookup);

}  // namespace gpl
