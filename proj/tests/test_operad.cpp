#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "gpl/error.hpp"
#include "gpl/operad.hpp"
#include "operad_oracles.hpp"

using namespace gpl;

namespace {

using oracle::basis;
using oracle::compose_by_contraction;
using oracle::compose_perms;
using oracle::kZ;

Permutation random_perm(int n, std::mt19937_64& rng) {
  auto p = Permutation::identity(n).images();
  std::shuffle(p.begin(), p.end(), rng);
  return Permutation(p);
}

PlanarTree random_planar(int n, std::mt19937_64& rng) {
  PlanarTree t{1, std::vector<std::vector<int>>(static_cast<std::size_t>(n))};
  for (int v = 2; v <= n; ++v) {
    auto& kids = t.children[rng() % static_cast<unsigned>(v - 1)];
    kids.insert(kids.begin() + static_cast<long>(rng() % (kids.size() + 1)), v);
  }
  return t;
}

}  // namespace

TEST(PartialCompose, Examples) {
  const auto c = chain2(1);
  for (int i = 1; i <= 2; ++i) EXPECT_EQ(partial_compose(basis(c), i, basis(unit_tree())), basis(c));
  EXPECT_EQ(partial_compose(basis(unit_tree()), 1, basis(c)), basis(c));
  EXPECT_EQ(partial_compose(c, 1, c).size(), 2u);
  EXPECT_EQ(partial_compose(c, 2, c).size(), 1u);
  EXPECT_THROW(partial_compose(c, 3, c), Error);
}

TEST(PartialCompose, MatchesContractionOracle) {
  for (int p = 1; p <= 3; ++p)
    for (int q = 1; p + q - 1 <= 5; ++q)
      for (const auto& s : enumerate_labeled(p))
        for (const auto& t : enumerate_labeled(q))
          for (int i = 1; i <= p; ++i)
            ASSERT_EQ(partial_compose(basis(s), i, basis(t)), compose_by_contraction(s, i, t))
                << s.to_string() << " o" << i << " " << t.to_string();
}

/// Sequential and parallel associativity for all instances with at most 5 vertices.
TEST(PartialCompose, Associativity) {
  int checked = 0;
  for (int p = 1; p <= 5; ++p)
    for (int q = 1; p + q - 1 <= 5; ++q)
      for (int u = 1; p + q + u - 2 <= 5; ++u)
        for (const auto& s : enumerate_labeled(p))
          for (const auto& t : enumerate_labeled(q))
            for (const auto& w : enumerate_labeled(u))
              for (int i = 1; i <= p; ++i)
                for (int j = 1; j <= p + q - 1; ++j) {
                  const auto lhs = partial_compose(partial_compose(basis(s), i, basis(t)), j, basis(w));
                  PreLieElement rhs(kZ, lhs.arity());
                  if (j < i) rhs = partial_compose(partial_compose(basis(s), j, basis(w)), i + u - 1, basis(t));
                  else if (j < i + q) rhs = partial_compose(basis(s), i, partial_compose(basis(t), j - i + 1, basis(w)));
                  else rhs = partial_compose(partial_compose(basis(s), j - q + 1, basis(w)), i, basis(t));
                  ASSERT_EQ(lhs, rhs);
                  ++checked;
                }
  EXPECT_GT(checked, 1000);
}

TEST(SigmaAction, Examples) {
  const auto c = chain2(1);
  const Permutation swap({2, 1});
  EXPECT_EQ(sigma_action(Permutation::identity(2), basis(c)), basis(c));
  EXPECT_EQ(sigma_action(swap, c), chain2(2));
  std::mt19937_64 rng(3);
  for (const auto& t : enumerate_labeled(4)) {
    const auto s = random_perm(4, rng), r = random_perm(4, rng);
    ASSERT_EQ(sigma_action(s.inverse(), sigma_action(s, t)), t);
    ASSERT_EQ(sigma_action(s, sigma_action(r, t)), sigma_action(s * r, t));
  }
  EXPECT_THROW(sigma_action(swap, unit_tree()), Error);
}

TEST(PartialCompose, Equivariance) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const int p = 1 + static_cast<int>(rng() % 3), q = 1 + static_cast<int>(rng() % 3);
    const auto ss = enumerate_labeled(p), ts = enumerate_labeled(q);
    const auto& s = ss[rng() % ss.size()];
    const auto& t = ts[rng() % ts.size()];
    const int i = 1 + static_cast<int>(rng() % static_cast<unsigned>(p));
    const auto sigma = random_perm(p, rng), tau = random_perm(q, rng);
    const auto lhs = partial_compose(sigma_action(sigma, basis(s)), sigma(i), sigma_action(tau, basis(t)));
    const auto rhs = sigma_action(compose_perms(sigma, i, tau), partial_compose(basis(s), i, basis(t)));
    ASSERT_EQ(lhs, rhs);
  }
}

TEST(Symmetrize, Examples) {
  const LabeledTree corolla{{0, 1, 1, 1}};
  EXPECT_EQ(symmetrize(corolla, kZ).terms().size(), 6u);
  EXPECT_EQ(symmetrize(unit_tree(), kZ).terms().size(), 1u);
  EXPECT_EQ(symmetrize(chain2(1), kZ).terms().size(), 1u);
}

/// symmetrize(S o_i T) = symmetrize(S) o_i symmetrize(T) for at most 4 vertices.
TEST(Symmetrize, IsOperadMap) {
  for (int p = 1; p <= 4; ++p)
    for (int q = 1; p + q - 1 <= 4; ++q)
      for (const auto& s : enumerate_labeled(p))
        for (const auto& t : enumerate_labeled(q))
          for (int i = 1; i <= p; ++i)
            ASSERT_EQ(symmetrize(partial_compose(basis(s), i, basis(t))),
                      partial_compose(symmetrize(s, kZ), i, symmetrize(t, kZ)));
}

TEST(BraceCompose, EmptyAndUnit) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_planar(1 + static_cast<int>(rng() % 4), rng);
    const auto fe = BraceElement::basis(kZ, f.size(), f);
    EXPECT_EQ(brace_compose(fe, {}), fe);
    const PlanarTree unit{1, {{}}};
    const auto ue = BraceElement::basis(kZ, 1, unit);
    for (int i = 1; i <= f.size(); ++i) EXPECT_EQ(partial_compose(fe, i, ue), fe);
    EXPECT_EQ(partial_compose(ue, 1, fe), fe);
  }
}

TEST(BraceCompose, SingleArgumentOnChain) {
  const PlanarTree f{1, {{2}, {}}};
  const PlanarTree g{1, {{}}};
  // f<g> grafts g before the child, under the child, or after it.
  const auto terms = brace_compose(f, {g});
  const std::set<PlanarTree> got(terms.begin(), terms.end());
  const std::set<PlanarTree> expect = {PlanarTree{1, {{3, 2}, {}, {}}}, PlanarTree{1, {{2}, {3}, {}}},
                                       PlanarTree{1, {{2, 3}, {}, {}}}};
  EXPECT_EQ(got, expect);
}

/// f<g_1..g_n><h_1..h_m> = sum over consecutive splits of f<H_0, g_1<H_1>, H_2, ..., g_n<H_{2n-1}>, H_{2n}>.
TEST(BraceCompose, BraceRelation) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = static_cast<int>(rng() % 3), m = static_cast<int>(rng() % 3);
    const auto f = random_planar(1 + static_cast<int>(rng() % 2), rng);
    std::vector<PlanarTree> gs, hs;
    for (int k = 0; k < n; ++k) gs.push_back(random_planar(1 + static_cast<int>(rng() % 2), rng));
    for (int k = 0; k < m; ++k) hs.push_back(random_planar(1 + static_cast<int>(rng() % 2), rng));
    auto el = [](const PlanarTree& t) { return BraceElement::basis(kZ, t.size(), t); };

    std::vector<BraceElement> ge, he;
    for (const auto& g : gs) ge.push_back(el(g));
    for (const auto& h : hs) he.push_back(el(h));
    const auto lhs = brace_compose(brace_compose(el(f), ge), he);

    // Label offsets in the left-hand numbering.
    std::vector<int> g_off, h_off;
    int off = f.size();
    for (const auto& g : gs) g_off.push_back(off), off += g.size();
    for (const auto& h : hs) h_off.push_back(off), off += h.size();
    const int total = off;

    BraceElement rhs(kZ, total);
    // cuts[0] <= ... <= cuts[2n] split h_1..h_m into 2n+1 consecutive blocks.
    std::vector<int> cuts(static_cast<std::size_t>(2 * n), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t k, int lo) {
      if (k < cuts.size()) {
        for (int c = lo; c <= m; ++c) {
          cuts[k] = c;
          rec(k + 1, c);
        }
        return;
      }
      auto block = [&](int b) {
        const int lo_b = b == 0 ? 0 : cuts[static_cast<std::size_t>(b - 1)];
        const int hi_b = b == 2 * n ? m : cuts[static_cast<std::size_t>(b)];
        return std::make_pair(lo_b, hi_b);
      };
      std::vector<BraceElement> args;
      std::vector<int> origin{};  // left-hand label for each right-hand label
      for (int v = 1; v <= f.size(); ++v) origin.push_back(v);
      auto push_h = [&](int j) {
        args.push_back(he[static_cast<std::size_t>(j)]);
        for (int v = 1; v <= hs[static_cast<std::size_t>(j)].size(); ++v) origin.push_back(h_off[static_cast<std::size_t>(j)] + v);
      };
      for (int b = 0; b <= 2 * n; ++b) {
        const auto [lo_b, hi_b] = block(b);
        if (b % 2 == 0) {
          for (int j = lo_b; j < hi_b; ++j) push_h(j);
        } else {
          const int gi = b / 2;
          std::vector<BraceElement> inner;
          for (int v = 1; v <= gs[static_cast<std::size_t>(gi)].size(); ++v) origin.push_back(g_off[static_cast<std::size_t>(gi)] + v);
          for (int j = lo_b; j < hi_b; ++j) {
            inner.push_back(he[static_cast<std::size_t>(j)]);
            for (int v = 1; v <= hs[static_cast<std::size_t>(j)].size(); ++v) origin.push_back(h_off[static_cast<std::size_t>(j)] + v);
          }
          args.push_back(brace_compose(ge[static_cast<std::size_t>(gi)], inner));
        }
      }
      const auto term = brace_compose(el(f), args);
      const Permutation relabel(origin);
      for (const auto& [t, c] : term.terms()) rhs.add(sigma_action(relabel, t), c);
    };
    rec(0, 0);
    ASSERT_EQ(lhs, rhs) << "n=" << n << " m=" << m;
  }
}

TEST(PreLie, DimensionsAreLabeledTreeCounts) {
  const std::vector<std::size_t> expect = {1, 2, 9, 64, 625};
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(enumerate_labeled(n).size(), expect[static_cast<std::size_t>(n - 1)]);
}
