#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include "gpl/error.hpp"
#include "gpl/perm.hpp"

using namespace gpl;

namespace {

/// Oracle: filter all of Sigma_n by block-order preservation.
std::vector<Permutation> shuffles_by_filter(const std::vector<int>& blocks, bool pointed) {
  int n = 0;
  for (int r : blocks) n += r;
  std::vector<Permutation> out;
  for (const auto& p : all_permutations(n)) {
    bool ok = true;
    int offset = 0;
    int last_leader = 0;
    for (int r : blocks) {
      for (int k = 1; k < r; ++k)
        if (p(offset + k) > p(offset + k + 1)) ok = false;
      if (pointed && r > 0) {
        if (p(offset + 1) < last_leader) ok = false;
        last_leader = p(offset + 1);
      }
      offset += r;
    }
    if (ok) out.push_back(p);
  }
  return out;
}

std::vector<std::vector<int>> block_tuples(int max_total) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int left) {
    if (!cur.empty()) out.push_back(cur);
    if (cur.size() == 4) return;
    for (int r = 0; r <= left; ++r) {
      cur.push_back(r);
      rec(left - r);
      cur.pop_back();
    }
  };
  rec(max_total);
  return out;
}

Permutation random_perm(int n, std::mt19937_64& rng) {
  auto p = Permutation::identity(n).images();
  std::shuffle(p.begin(), p.end(), rng);
  return Permutation(p);
}

}  // namespace

TEST(Shuffles, Examples) {
  EXPECT_EQ(shuffles({1, 1}).size(), 2u);
  EXPECT_EQ(shuffles({2, 1}).size(), 3u);
  const auto s03 = shuffles({0, 3});
  ASSERT_EQ(s03.size(), 1u);
  EXPECT_TRUE(s03[0].is_identity());
  EXPECT_EQ(pointed_shuffles({1, 1}).size(), 1u);
  EXPECT_TRUE(pointed_shuffles({1, 1})[0].is_identity());
  EXPECT_EQ(pointed_shuffles({1, 1, 1}).size(), 1u);
  EXPECT_EQ(pointed_shuffles({2, 1}).size(), 2u);
}

TEST(Shuffles, EmptyBlockRejectedForPointed) {
  try {
    (void)pointed_shuffles({2, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyBlock);
  }
}

/// Counts match the multinomial and the brute-force filter for sum r_i <= 7.
TEST(Shuffles, MatchFilterOracle) {
  for (const auto& blocks : block_tuples(7)) {
    const auto sh = shuffles(blocks);
    ASSERT_EQ(sh.size(), multinomial(blocks));
    ASSERT_EQ(sh, shuffles_by_filter(blocks, false));
    ASSERT_TRUE(std::is_sorted(sh.begin(), sh.end()));
    if (std::find(blocks.begin(), blocks.end(), 0) != blocks.end()) continue;
    const auto psh = pointed_shuffles(blocks);
    ASSERT_EQ(psh, shuffles_by_filter(blocks, true));
    for (const auto& p : psh) ASSERT_TRUE(std::find(sh.begin(), sh.end(), p) != sh.end());
  }
}

/// Distinguishing the n! leader orderings of nonempty blocks recovers all shuffles
/// up to reordering blocks of equal size: |Sh*| * n! = sum over block orders of |Sh|.
TEST(Shuffles, PointedTimesLeaderOrders) {
  for (const auto& blocks : block_tuples(7)) {
    if (std::find(blocks.begin(), blocks.end(), 0) != blocks.end()) continue;
    std::vector<int> idx(blocks.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::uint64_t total = 0, orders = 0;
    do {
      std::vector<int> perm_blocks;
      for (int i : idx) perm_blocks.push_back(blocks[static_cast<std::size_t>(i)]);
      total += pointed_shuffles(perm_blocks).size();
      ++orders;
    } while (std::next_permutation(idx.begin(), idx.end()));
    ASSERT_EQ(total, multinomial(blocks)) << orders;
  }
}

TEST(Koszul, Examples) {
  const Permutation swap({2, 1});
  EXPECT_EQ(koszul_sign(swap, {1, 1}), -1);
  EXPECT_EQ(koszul_sign(Permutation::identity(4), {1, 3, 5, 2}), 1);
  EXPECT_EQ(koszul_sign(swap, {1, 0}), 1);
  EXPECT_THROW(koszul_sign(swap, {1}), Error);
}

/// Oracle: count adjacent transpositions of odd elements in a bubble sort.
TEST(Koszul, MatchesBubbleSortAndCocycle) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> deg(-3, 3);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<int> t(static_cast<std::size_t>(n));
    for (auto& x : t) x = deg(rng);
    const auto sigma = random_perm(n, rng), tau = random_perm(n, rng);

    // Bubble sort the list of (target slot, degree) pairs.
    std::vector<std::pair<int, int>> items;
    for (int i = 1; i <= n; ++i) items.emplace_back(tau(i), t[static_cast<std::size_t>(i - 1)]);
    int sign = 1;
    for (int pass = 0; pass < n; ++pass)
      for (int j = 0; j + 1 < n; ++j)
        if (items[static_cast<std::size_t>(j)].first > items[static_cast<std::size_t>(j + 1)].first) {
          if ((items[static_cast<std::size_t>(j)].second & 1) && (items[static_cast<std::size_t>(j + 1)].second & 1)) sign = -sign;
          std::swap(items[static_cast<std::size_t>(j)], items[static_cast<std::size_t>(j + 1)]);
        }
    ASSERT_EQ(koszul_sign(tau, t), sign);
    ASSERT_EQ(koszul_sign(sigma * tau, t), koszul_sign(sigma, permute_degrees(tau, t)) * koszul_sign(tau, t));
  }
}

TEST(FactorByBlocks, Examples) {
  const auto id = factor_by_blocks(Permutation::identity(4), {2, 2});
  EXPECT_TRUE(id.shuffle.is_identity());
  for (const auto& b : id.blocks) EXPECT_TRUE(b.is_identity());

  const Permutation s({3, 1, 2});
  const auto single = factor_by_blocks(s, {3});
  EXPECT_TRUE(single.shuffle.is_identity());
  EXPECT_EQ(single.blocks[0], s);

  const auto f = factor_by_blocks(Permutation({2, 1, 3}), {2, 1});
  EXPECT_TRUE(f.shuffle.is_identity());
  EXPECT_EQ(f.blocks[0], Permutation({2, 1}));
  EXPECT_TRUE(f.blocks[1].is_identity());
  EXPECT_THROW(factor_by_blocks(s, {1, 1}), Error);
}

/// Every permutation factors uniquely: the map is a bijection onto Sh x prod Sigma.
TEST(FactorByBlocks, BijectionRoundTrip) {
  for (const auto& blocks : block_tuples(6)) {
    int n = 0;
    for (int r : blocks) n += r;
    const auto sh = shuffles(blocks);
    std::set<std::pair<Permutation, std::vector<Permutation>>> seen;
    for (const auto& sigma : all_permutations(n)) {
      const auto f = factor_by_blocks(sigma, blocks);
      ASSERT_TRUE(std::binary_search(sh.begin(), sh.end(), f.shuffle));
      ASSERT_EQ(f.shuffle * block_sum(f.blocks), sigma);
      ASSERT_TRUE(seen.emplace(f.shuffle, f.blocks).second);
    }
  }
}
