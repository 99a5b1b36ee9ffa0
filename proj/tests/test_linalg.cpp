#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "gpl/error.hpp"
#include "gpl/linalg.hpp"

using namespace gpl;

namespace {

ModMatrix random_matrix(std::mt19937_64& rng, std::int64_t p, int rows, int cols) {
  ModMatrix m(p, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.set(i, j, static_cast<std::int64_t>(rng() % static_cast<unsigned>(p)));
  return m;
}

// Oracle: determinant by cofactor expansion, rank as the largest nonvanishing minor.
std::int64_t det(const std::vector<std::vector<std::int64_t>>& a, std::int64_t p) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  std::int64_t out = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<std::int64_t>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<std::int64_t> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    const std::int64_t term = a[0][c] * det(minor, p) % p;
    out = ((c % 2 == 0 ? out + term : out - term) % p + p) % p;
  }
  return out;
}

int minor_rank(const ModMatrix& m) {
  int best = 0;
  for (int size = 1; size <= std::min(m.rows(), m.cols()); ++size) {
    std::vector<int> rows, cols;
    bool found = false;
    std::function<void(int, int, std::vector<int>&, const std::function<void()>&)> choose =
        [&](int lo, int hi, std::vector<int>& pick, const std::function<void()>& done) {
          if (static_cast<int>(pick.size()) == size) return done();
          for (int v = lo; v < hi && !found; ++v) {
            pick.push_back(v);
            choose(v + 1, hi, pick, done);
            pick.pop_back();
          }
        };
    choose(0, m.rows(), rows, [&] {
      choose(0, m.cols(), cols, [&] {
        std::vector<std::vector<std::int64_t>> a;
        for (int r : rows) {
          std::vector<std::int64_t> row;
          for (int c : cols) row.push_back(m.at(r, c));
          a.push_back(row);
        }
        if (det(a, m.prime()) != 0) found = true;
      });
    });
    if (found) best = size;
  }
  return best;
}

// Oracle: enumerate every vector of F_p^n.
void for_all_vectors(std::int64_t p, int n, const std::function<void(const ModVector&)>& f) {
  ModVector v(static_cast<std::size_t>(n), 0);
  for (;;) {
    f(v);
    int i = 0;
    while (i < n && ++v[static_cast<std::size_t>(i)] == p) v[static_cast<std::size_t>(i++)] = 0;
    if (i == n) return;
  }
}

}  // namespace

TEST(Linalg, RankMatchesMinorOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const auto m = random_matrix(rng, 3, 4, 6);
    ASSERT_EQ(rank(m), minor_rank(m));
    // Force rank deficiency by duplicating a row.
    auto d = m;
    for (int j = 0; j < 6; ++j) d.set(3, j, 2 * m.at(0, j) + m.at(1, j));
    ASSERT_EQ(rank(d), minor_rank(d));
  }
}

TEST(Linalg, KernelAndSolve) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = random_matrix(rng, 5, 3, 5);
    const auto ker = kernel_basis(m);
    EXPECT_EQ(static_cast<int>(ker.size()), 5 - rank(m));
    for (const auto& v : ker)
      for (auto x : m.apply(v)) EXPECT_EQ(x, 0);
    ModVector x(5);
    for (auto& e : x) e = static_cast<std::int64_t>(rng() % 5);
    const auto b = m.apply(x);
    const auto sol = solve(m, b);
    ASSERT_TRUE(sol.has_value());
    EXPECT_EQ(m.apply(*sol), b);
  }
  ModMatrix z(2, 2, 2);
  z.set(0, 0, 1);
  EXPECT_FALSE(solve(z, {0, 1}).has_value());
  EXPECT_EQ(mod_inverse(3, 7), 5);
  EXPECT_THROW(mod_inverse(0, 7), Error);
}

TEST(Linalg, CohomologyMatchesEnumeration) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    // C^0 (dim 4) -> C^1 (dim 6) -> C^2 (dim 3) over F_3 with d1 d0 = 0.
    const auto d0 = random_matrix(rng, 3, 6, 4);
    auto d0_trunc = d0;
    if (trial % 2 == 0)
      for (int i = 0; i < 6; ++i) d0_trunc.set(i, 3, d0.at(i, 0) + d0.at(i, 1));
    // Rows of d1 drawn from the left kernel of d0.
    ModMatrix transpose(3, 4, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 4; ++j) transpose.set(j, i, d0_trunc.at(i, j));
    const auto left = kernel_basis(transpose);
    ModMatrix d1(3, 3, 6);
    for (int r = 0; r < 3; ++r)
      for (const auto& v : left) {
        const auto c = static_cast<std::int64_t>(rng() % 3);
        for (int j = 0; j < 6; ++j) d1.add(r, j, c * v[static_cast<std::size_t>(j)]);
      }
    CochainComplex cx{3, {{0, 4}, {1, 6}, {2, 3}}, {{0, d0_trunc}, {1, d1}}};
    ASSERT_NO_THROW(cx.validate());

    std::set<ModVector> image;
    for_all_vectors(3, 4, [&](const ModVector& v) { image.insert(d0_trunc.apply(v)); });
    std::size_t kernel = 0, kernel0 = 0;
    for_all_vectors(3, 6, [&](const ModVector& v) {
      bool zero = true;
      for (auto x : d1.apply(v)) zero = zero && x == 0;
      if (zero) ++kernel;
    });
    for_all_vectors(3, 4, [&](const ModVector& v) {
      bool zero = true;
      for (auto x : d0_trunc.apply(v)) zero = zero && x == 0;
      if (zero) ++kernel0;
    });
    std::size_t h1 = 1;
    for (int k = 0; k < cx.cohomology_dim(1); ++k) h1 *= 3;
    EXPECT_EQ(h1 * image.size(), kernel);
    std::size_t h0 = 1;
    for (int k = 0; k < cx.cohomology_dim(0); ++k) h0 *= 3;
    EXPECT_EQ(h0, kernel0);
    EXPECT_EQ(static_cast<int>(cx.cohomology_basis(1).size()), cx.cohomology_dim(1));
    for (const auto& z : cx.cohomology_basis(1)) EXPECT_FALSE(cx.is_coboundary(1, z));
  }
}

TEST(Linalg, TrivialComplexes) {
  CochainComplex zero{5, {{0, 2}, {1, 3}}, {}};
  EXPECT_EQ(zero.cohomology_dim(0), 2);
  EXPECT_EQ(zero.cohomology_dim(1), 3);
  CochainComplex id{5, {{0, 3}, {1, 3}}, {{0, ModMatrix::identity(5, 3)}}};
  EXPECT_EQ(id.cohomology_dim(0), 0);
  EXPECT_EQ(id.cohomology_dim(1), 0);
  ModMatrix bad(5, 2, 2);
  bad.set(0, 0, 1);
  CochainComplex sq{5, {{0, 2}, {1, 2}, {2, 2}}, {{0, bad}, {1, bad}}};
  EXPECT_THROW(sq.validate(), Error);
}

TEST(Linalg, InducedMaps) {
  // Inclusion of C into C + (acyclic K^0 -> K^1) induces isomorphisms.
  const std::int64_t p = 3;
  ModMatrix d(p, 2, 2);
  d.set(0, 0, 1);
  CochainComplex c{p, {{0, 2}, {1, 2}}, {{0, d}}};
  ModMatrix dt(p, 3, 3);
  dt.set(0, 0, 1);
  dt.set(2, 2, 1);
  CochainComplex t{p, {{0, 3}, {1, 3}}, {{0, dt}}};
  ModMatrix inc(p, 3, 2);
  inc.set(0, 0, 1);
  inc.set(1, 1, 1);
  const std::map<int, ModMatrix> f{{0, inc}, {1, inc}};
  for (int k : {0, 1}) {
    const auto h = induced_map(c, t, f, k);
    EXPECT_EQ(h.rows(), h.cols());
    EXPECT_EQ(rank(h), h.rows());
  }
  EXPECT_THROW(induced_map(c, t, {{0, inc}}, 0), Error);
}
