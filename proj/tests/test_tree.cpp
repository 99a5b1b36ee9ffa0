#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "gpl/error.hpp"
#include "gpl/perm.hpp"
#include "gpl/tree.hpp"

using namespace gpl;

namespace {

const std::vector<std::string> kNames = {"a", "b", "c", "x", "y"};

GeneratorId lookup(const std::string& s) {
  const auto it = std::find(kNames.begin(), kNames.end(), s);
  return it == kNames.end() ? -1 : static_cast<GeneratorId>(it - kNames.begin());
}
std::string name(GeneratorId g) { return kNames[static_cast<std::size_t>(g)]; }

DecoratedTree tree(const std::string& s) { return parse_tree(s, lookup); }

/// Oracle: brute-force isomorphism search over all vertex bijections.
bool isomorphic_brute(const std::vector<int>& p1, const std::vector<int>& d1, const std::vector<int>& p2,
                      const std::vector<int>& d2) {
  if (p1.size() != p2.size()) return false;
  std::vector<int> f(p1.size());
  std::iota(f.begin(), f.end(), 0);
  do {
    bool ok = true;
    for (std::size_t v = 0; v < p1.size() && ok; ++v) {
      const int w = f[v];
      if (d1[v] != d2[static_cast<std::size_t>(w)]) ok = false;
      const int pv = p1[v], pw = p2[static_cast<std::size_t>(w)];
      if ((pv < 0) != (pw < 0)) ok = false;
      else if (pv >= 0 && f[static_cast<std::size_t>(pv)] != pw) ok = false;
    }
    if (ok) return true;
  } while (std::next_permutation(f.begin(), f.end()));
  return false;
}

/// Oracle: automorphisms and their Koszul signs by enumerating all bijections.
std::pair<std::uint64_t, bool> automorphisms_brute(const std::vector<int>& p, const std::vector<int>& d,
                                                   const std::vector<int>& degrees) {
  const int n = static_cast<int>(p.size());
  std::uint64_t count = 0;
  bool negative = false;
  std::vector<int> vdeg;
  for (int g : d) vdeg.push_back(degrees[static_cast<std::size_t>(g)]);
  for (const auto& perm : all_permutations(n)) {
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) {
      const int w = perm(v + 1) - 1;
      if (d[static_cast<std::size_t>(v)] != d[static_cast<std::size_t>(w)]) ok = false;
      const int pv = p[static_cast<std::size_t>(v)], pw = p[static_cast<std::size_t>(w)];
      if ((pv < 0) != (pw < 0)) ok = false;
      else if (pv >= 0 && perm(pv + 1) - 1 != pw) ok = false;
    }
    if (!ok) continue;
    ++count;
    if (koszul_sign(perm, vdeg) < 0) negative = true;
  }
  return {count, negative};
}

/// Oracle for unlabeled counts: parent maps with parent[i] < i, deduplicated.
std::vector<std::size_t> unlabeled_counts_brute(int max_n) {
  std::vector<std::size_t> counts;
  for (int n = 1; n <= max_n; ++n) {
    std::set<std::vector<int>> seen;
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    std::function<void(int)> rec = [&](int i) {
      if (i == n) {
        seen.insert(DecoratedTree::from_parents(parent, std::vector<int>(static_cast<std::size_t>(n), 0)).code());
        return;
      }
      for (int p = 0; p < i; ++p) {
        parent[static_cast<std::size_t>(i)] = p;
        rec(i + 1);
      }
    };
    rec(1);
    counts.push_back(seen.size());
  }
  return counts;
}

}  // namespace

TEST(Canonicalize, Examples) {
  const std::vector<int> even_b = {0, 0, 0};
  const std::vector<int> odd_b = {0, 1, 0};
  const auto c1 = canonicalize(tree("a[b,b]"), even_b);
  EXPECT_EQ(c1.automorphism_order, 2u);
  EXPECT_FALSE(c1.sign_degenerate);
  const auto c2 = canonicalize(tree("a[b,b]"), odd_b);
  EXPECT_TRUE(c2.sign_degenerate);
  const auto c3 = canonicalize(tree("a[b[c]]"), even_b);
  EXPECT_EQ(c3.automorphism_order, 1u);
  EXPECT_FALSE(c3.sign_degenerate);
  EXPECT_THROW(canonicalize(tree("a[y]"), even_b), Error);
}

TEST(Canonicalize, KeyIgnoresChildOrder) {
  EXPECT_EQ(tree("a[b[c],b,c]"), tree("a[c,b,b[c]]"));
  EXPECT_NE(tree("a[b[c],b]"), tree("a[b,c[b]]"));
}

/// Keys agree exactly when a decoration-preserving isomorphism exists (<= 6 vertices).
TEST(Canonicalize, MatchesBruteIsomorphism) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    auto random_tree = [&](std::vector<int>& p, std::vector<int>& d) {
      p.assign(static_cast<std::size_t>(n), -1);
      d.assign(static_cast<std::size_t>(n), 0);
      for (int v = 0; v < n; ++v) {
        if (v > 0) p[static_cast<std::size_t>(v)] = static_cast<int>(rng() % static_cast<unsigned>(v));
        d[static_cast<std::size_t>(v)] = static_cast<int>(rng() % 2);
      }
      // Shuffle vertex ids so the root is not always 0.
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<int> p2(p.size()), d2(d.size());
      for (int v = 0; v < n; ++v) {
        const int pv = p[static_cast<std::size_t>(v)];
        p2[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] = pv < 0 ? -1 : perm[static_cast<std::size_t>(pv)];
        d2[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])] = d[static_cast<std::size_t>(v)];
      }
      p = p2;
      d = d2;
    };
    std::vector<int> p1, d1, p2, d2;
    random_tree(p1, d1);
    random_tree(p2, d2);
    const bool same_key = DecoratedTree::from_parents(p1, d1) == DecoratedTree::from_parents(p2, d2);
    ASSERT_EQ(same_key, isomorphic_brute(p1, d1, p2, d2));
  }
}

/// Automorphism order and degeneracy agree with full enumeration.
TEST(Canonicalize, AutomorphismsMatchBrute) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<int> p(static_cast<std::size_t>(n), -1), d(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      if (v > 0) p[static_cast<std::size_t>(v)] = static_cast<int>(rng() % static_cast<unsigned>(v));
      d[static_cast<std::size_t>(v)] = static_cast<int>(rng() % 2);
    }
    const std::vector<int> degrees = {static_cast<int>(rng() % 3) - 1, static_cast<int>(rng() % 3)};
    const auto c = canonicalize(p, d, degrees);
    const auto [count, negative] = automorphisms_brute(p, d, degrees);
    ASSERT_EQ(c.automorphism_order, count);
    ASSERT_EQ(c.sign_degenerate, negative);
    if (degrees[0] % 2 == 0 && degrees[1] % 2 == 0) ASSERT_FALSE(c.sign_degenerate);
  }
}

TEST(Enumerate, UnlabeledCounts) {
  const auto by_size = enumerate_unlabeled(7);
  const std::vector<std::size_t> expected = {1, 1, 2, 4, 9, 20, 48};
  const auto oracle = unlabeled_counts_brute(7);
  for (int n = 1; n <= 7; ++n) {
    EXPECT_EQ(by_size[static_cast<std::size_t>(n)].size(), expected[static_cast<std::size_t>(n - 1)]);
    EXPECT_EQ(by_size[static_cast<std::size_t>(n)].size(), oracle[static_cast<std::size_t>(n - 1)]);
  }
  ASSERT_EQ(by_size[1].size(), 1u);
  EXPECT_EQ(by_size[1][0].size(), 1);
}

TEST(Enumerate, LabeledCounts) {
  const std::vector<std::size_t> expected = {1, 2, 9, 64, 625};
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(enumerate_labeled(n).size(), expected[static_cast<std::size_t>(n - 1)]);
  EXPECT_THROW(enumerate_labeled(kLabeledCap + 1), Error);
}

/// Orbit counting: sum over unlabeled classes of n!/|Aut| = n^(n-1).
TEST(Enumerate, OrbitCountingConsistency) {
  const auto by_size = enumerate_unlabeled(5);
  const std::vector<int> degrees = {0};
  std::uint64_t fact = 1;
  for (int n = 1; n <= 5; ++n) {
    fact *= static_cast<std::uint64_t>(n);
    std::uint64_t total = 0;
    for (const auto& t : by_size[static_cast<std::size_t>(n)]) total += fact / canonicalize(t, degrees).automorphism_order;
    std::uint64_t expect = 1;
    for (int k = 1; k < n; ++k) expect *= static_cast<std::uint64_t>(n);
    EXPECT_EQ(total, expect);
  }
}

TEST(Graft, Examples) {
  const auto chain = graft(tree("a"), 0, tree("b"));
  EXPECT_EQ(chain, tree("a[b]"));
  const auto host = tree("a[b]");
  const auto deeper = graft(host, 1, tree("c[c]"));
  EXPECT_EQ(deeper.depth(), host.depth() + 2);
  const auto g1 = graft(graft(host, 0, tree("c")), 0, tree("b[c]"));
  const auto g2 = graft(graft(host, 0, tree("b[c]")), 0, tree("c"));
  EXPECT_EQ(g1, g2);
  EXPECT_THROW(graft(host, 5, tree("c")), Error);
}

TEST(Text, RoundTrip) {
  for (const char* s : {"a", "a[b,b[c]]", "x[y[a,b],c]", "a[b[c[a]]]"}) {
    const auto t = tree(s);
    EXPECT_EQ(tree(to_text(t, name)), t);
    EXPECT_EQ(to_text(tree(to_text(t, name)), name), to_text(t, name));
  }
  EXPECT_EQ(to_text(tree("a[b[c],b]"), name), "a[b,b[c]]");
  EXPECT_THROW(tree("a[b"), Error);
  EXPECT_THROW(tree("q"), Error);
}

TEST(Tree, SubtreeAndDegree) {
  const auto t = tree("a[b,b[c]]");
  EXPECT_EQ(t.subtree(2), tree("b[c]"));
  const std::vector<int> degrees = {0, 1, 2};
  EXPECT_EQ(t.degree(degrees), 4);
}
