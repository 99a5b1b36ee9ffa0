#include <gtest/gtest.h>

#include <random>

#include "gpl/error.hpp"
#include "gpl/finite_algebra.hpp"
#include "gpl/gauge.hpp"
#include "gpl/identities.hpp"

using namespace gpl;

namespace {

SpecPtr small_spec(std::int64_t p, int cap) {
  const Ring ring = Ring::prime_field(p);
  return AlgebraSpec::make(ring, {{"a", 0}, {"x", 1}}, cap, {{0, {{1, Scalar::one(ring)}}}});
}

}  // namespace

TEST(FiniteAlgebra, TruncatedFreeBasis) {
  // Two generators, cap 2: a, x, and the four 2-vertex classes, minus x[x] which is degenerate over F_3.
  const auto f2 = FiniteAlgebra::truncated_free(small_spec(2, 2));
  const auto f3 = FiniteAlgebra::truncated_free(small_spec(3, 2));
  EXPECT_EQ(f2->dim(), 6);
  EXPECT_EQ(f3->dim(), 6);  // x[x] is a single edge, so no automorphism flips it
  EXPECT_EQ(f2->indices_of_degree(0).size(), 2u);
  EXPECT_EQ(f2->indices_of_degree(1).size(), 3u);
  EXPECT_EQ(f2->max_weight(), 2);
  // x[x,x] has an odd swap over F_3.
  const auto g2 = FiniteAlgebra::truncated_free(small_spec(2, 3));
  const auto g3 = FiniteAlgebra::truncated_free(small_spec(3, 3));
  EXPECT_EQ(g2->dim(), g3->dim() + 2);  // x[x,x] and a[x,x]
  EXPECT_THROW(FiniteAlgebra::truncated_free(AlgebraSpec::make(Ring::integers(), {{"a", 0}}, 2)), Error);
}

TEST(FiniteAlgebra, AgreesWithFreeAlgebra) {
  for (std::int64_t p : {2, 3, 5}) {
    const auto spec = AlgebraSpec::make(Ring::prime_field(p), {{"a", 0}, {"b", 0}, {"x", 1}}, 4,
                                        {{0, {{2, Scalar::one(Ring::prime_field(p))}}}});
    const FreeModel free(spec);
    const FiniteModel fin(FiniteAlgebra::truncated_free(spec), Ring::prime_field(p));
    std::mt19937_64 rng(static_cast<unsigned>(p));
    for (int trial = 0; trial < 80; ++trial) {
      const auto x = free.random_homogeneous(rng, 2);
      const auto y = free.random_homogeneous(rng, 2);
      const int r = (spec->signed_ring() && free.degree(y) % 2 != 0) ? 1 : 1 + static_cast<int>(rng() % 2);
      ASSERT_EQ(to_finite(free.brace(x, {{y, r}}), fin), fin.brace(to_finite(x, fin), {{to_finite(y, fin), r}}))
          << "p=" << p << " x=" << x.to_string() << " y=" << y.to_string();
      ASSERT_EQ(to_finite(free.differentiate(x), fin), fin.differentiate(to_finite(x, fin)));
    }
  }
}

TEST(FiniteAlgebra, IdentitiesOverArtinianCoefficients) {
  for (const auto& [p, n] : std::vector<std::pair<std::int64_t, int>>{{2, 3}, {3, 2}, {5, 1}}) {
    const auto spec = small_spec(p, 4);
    const Ring base = Ring::prime_field(p);
    const FiniteModel m(FiniteAlgebra::truncated_free(spec), n == 1 ? base : Ring::truncated_local(base, n));
    for (Identity which : kCesaroIdentities) {
      const auto report = verify_identity(m, which, 60, 3);
      EXPECT_EQ(report.failures, 0) << m.ring().name() << " " << identity_name(which) << ": " << report.first_failure;
    }
    const auto leibniz = verify_identity(m, Identity::Leibniz, 60, 4);
    EXPECT_EQ(leibniz.failures, 0) << leibniz.first_failure;
  }
}

TEST(FiniteAlgebra, BracesMultiplyArtinianCoordinates) {
  const auto spec = small_spec(2, 3);
  const auto alg = FiniteAlgebra::truncated_free(spec);
  const Ring a = Ring::truncated_local(Ring::prime_field(2), 4);
  const FiniteModel m(alg, a), base(alg, Ring::prime_field(2));
  const FiniteModel lifted(alg, a);
  const auto t = Scalar::t_power(1, a);
  for (int i = 0; i < alg->dim(); ++i)
    for (int j = 0; j < alg->dim(); ++j)
      for (int r = 1; r <= 2; ++r) {
        const auto plain = base.brace(base.basis(i), {{base.basis(j), r}});
        const auto expected = base.lift_coefficients(plain, lifted).scaled(Scalar::t_power(1 + r, a));
        ASSERT_EQ(m.brace(m.basis(i, t), {{m.basis(j, t), r}}), expected);
      }
  // Terms vanish once the t-adic valuation reaches N.
  EXPECT_TRUE(m.brace(m.basis(0, t), {{m.basis(0, t), 3}}).is_zero());
}

TEST(FiniteAlgebra, GaugeGroupOverArtinianCoefficients) {
  const auto spec = AlgebraSpec::make(Ring::prime_field(3), {{"a", 0}, {"b", 0}, {"x", 1}}, 3,
                                      {{0, {{2, Scalar::one(Ring::prime_field(3))}}}});
  const FiniteModel m(FiniteAlgebra::truncated_free(spec), Ring::truncated_local(Ring::prime_field(3), 3));
  EXPECT_EQ(m.series_bound(), 2);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto mu = m.random_small(rng, 0), nu = m.random_small(rng, 0), xi = m.random_small(rng, 0);
    ASSERT_EQ(gauge_product(m, gauge_product(m, mu, nu), xi), gauge_product(m, mu, gauge_product(m, nu, xi)));
    const auto inv = gauge_inverse(m, mu);
    ASSERT_EQ(inv, gauge_inverse_solve(m, mu));
    ASSERT_TRUE(gauge_product(m, mu, inv).is_zero());
    ASSERT_TRUE(gauge_product(m, inv, mu).is_zero());
    const auto alpha = gauge_act(m, nu, m.zero());
    ASSERT_TRUE(is_mc(m, alpha));
    ASSERT_TRUE(is_mc(m, gauge_act(m, mu, alpha)));
    ASSERT_EQ(gauge_act(m, gauge_product(m, mu, nu), alpha), gauge_act(m, mu, gauge_act(m, nu, alpha)));
  }
}

TEST(FiniteAlgebra, CoordinatesRoundTrip) {
  const auto alg = FiniteAlgebra::truncated_free(small_spec(2, 2));
  const FiniteModel m(alg, Ring::truncated_local(Ring::prime_field(2), 3));
  EXPECT_EQ(m.linear_basis(1).size(), 6u);
  EXPECT_EQ(m.linear_basis(0).size(), 4u);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = m.random_small(rng, 1);
    EXPECT_EQ(m.from_coordinates(m.coordinates(x, 1), 1), x);
  }
  EXPECT_THROW(m.coordinates(m.basis(0), 0), Error);        // constant term
  EXPECT_THROW(m.coordinates(m.basis(0, Scalar::t_power(1, m.ring())), 1), Error);  // wrong degree
}

TEST(FiniteAlgebra, DirectSumWithAcyclicSummand) {
  const auto l = FiniteAlgebra::truncated_free(small_spec(2, 2));
  const auto k = FiniteAlgebra::abelian(2, {{"k0", 0, 1}, {"k1", 1, 1}}, {{{1, 1}}, {}});
  const auto sum = FiniteAlgebra::direct_sum(l, k);
  EXPECT_EQ(sum->dim(), l->dim() + 2);
  const auto phi = summand_inclusion(l, sum);
  EXPECT_TRUE(phi.is_morphism(2));
  const auto src = l->complex(), tgt = sum->complex();
  const auto f = phi.degree_matrices();
  for (int deg : {0, 1}) {
    EXPECT_EQ(src.cohomology_dim(deg), tgt.cohomology_dim(deg));
    const auto h = induced_map(src, tgt, f, deg);
    EXPECT_EQ(rank(h), src.cohomology_dim(deg));
  }
  // Mixed braces vanish.
  const FiniteModel m(sum, Ring::prime_field(2));
  EXPECT_TRUE(m.brace(m.basis(0), {{m.basis(l->dim()), 1}}).is_zero());
  EXPECT_THROW(FiniteAlgebra::abelian(2, {{"k0", 0, 1}, {"k1", 0, 1}}, {{{1, 1}}, {}}), Error);
}
