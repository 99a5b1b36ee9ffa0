#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <tuple>

#include "gpl/convolution.hpp"
#include "gpl/error.hpp"
#include "gpl/gauge.hpp"
#include "gpl/identities.hpp"

using namespace gpl;

namespace {

std::uint64_t ipow(std::int64_t p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::uint64_t>(p);
  return r;
}

Convolution make(const std::string& co, const std::string& op, std::int64_t p, int cap) {
  return Convolution(cooperad_by_name(co, p, cap), operad_by_name(op, p, cap));
}

Coordinates coords(const Convolution& conv, const HomElement& h) {
  const FiniteModel m = conv.model();
  return m.coordinates(conv.to_element(h), 1);
}

}  // namespace

TEST(OperadData, BuiltinsValidate) {
  for (std::int64_t p : {2, 3}) {
    associative_operad(p, 4).validate();
    commutative_operad(p, 4).validate();
    unit_operad(p, 4).validate();
    commutative_operad(p, 4, CommutativeAlgebra::exterior(p, 2)).validate();
    operad_by_name("com_square_zero", p, 4)->validate();
    operad_by_name("as_exterior1", p, 4)->validate();
    dual_cooperad(associative_operad(p, 4)).validate();
    cooperad_by_name("com_exterior2_dual", p, 4)->validate();
    primitive_family(p, 4, 3).validate();
  }
}

TEST(OperadData, DoubleDualRoundTrip) {
  for (std::int64_t p : {2, 3}) {
    for (const auto& name : {"as", "com_exterior2", "as_exterior1"}) {
      const auto op = operad_by_name(name, p, 4);
      const OperadData back = dual_operad(dual_cooperad(*op));
      EXPECT_EQ(back.table(), op->table()) << name << " over F_" << p;
      for (int n = 1; n <= 4; ++n) {
        EXPECT_EQ(back.sequence().degrees(n), op->sequence().degrees(n));
        EXPECT_EQ(back.sequence().differential(n), op->sequence().differential(n));
      }
    }
  }
}

TEST(OperadData, RejectsBrokenData) {
  // Com with one product rescaled breaks associativity.
  auto table = commutative_operad(3, 3).table();
  table[{1, 1}] = {{{0, 2}}};
  std::vector<SymmetricSequence::Component> comps;
  for (int n = 1; n <= 3; ++n) comps.push_back(SymmetricSequence::trivial(3, n, "c", 0));
  const OperadData broken(SymmetricSequence(3, comps), table);
  EXPECT_THROW(broken.validate(), Error);

  // s_1 s_2 s_1 != s_2 s_1 s_2 with these generators.
  SymmetricSequence::Component bad = SymmetricSequence::regular(2, 3, "x", 0);
  bad.transpositions[1] = ModMatrix::identity(2, 6);
  try {
    SymmetricSequence(2, {SymmetricSequence::trivial(2, 1, "1", 0), SymmetricSequence::trivial(2, 2, "m", 0), bad});
    FAIL() << "expected NotEquivariant";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotEquivariant);
  }
  EXPECT_THROW(associative_operad(2, 7), Error);
}

TEST(OperadData, ComposeProductCounts) {
  // Com o Com counts set partitions, As o Com ordered set partitions.
  const auto com = commutative_operad(2, 5).sequence();
  const auto as = associative_operad(2, 5).sequence();
  const std::vector<std::size_t> bell{1, 2, 5, 15, 52}, fubini{1, 3, 13, 75, 541};
  for (int n = 1; n <= 5; ++n) {
    EXPECT_EQ(compose_product(com, com, n).size(), bell[static_cast<std::size_t>(n - 1)]);
    EXPECT_EQ(compose_product(as, com, n).size(), fubini[static_cast<std::size_t>(n - 1)]);
  }
  EXPECT_THROW(compose_product(com, com, 6), Error);
}

TEST(OperadData, InfinitesimalDecomposition) {
  const auto prim = primitive_family(3, 4, 0);
  const auto dual = dual_cooperad(associative_operad(3, 4));
  EXPECT_TRUE(dual.infinitesimal_decompose(2, 0, 1).empty());  // only counit terms in arity 2
  for (int n = 2; n <= 4; ++n) {
    for (int c = 0; c < prim.sequence().dim(n); ++c) EXPECT_TRUE(prim.infinitesimal_decompose(n, c, 1).empty());
    if (n >= 3) EXPECT_FALSE(dual.infinitesimal_decompose(n, 0, 1).empty());
    EXPECT_TRUE(dual.infinitesimal_decompose(n, 0, n).empty());
  }
  EXPECT_TRUE(prim.primitive());
  EXPECT_FALSE(dual.primitive());
}

TEST(OperadData, JsonRoundTrip) {
  const nlohmann::json j = {{"prime", 3},
                            {"arity_cap", 3},
                            {"components",
                             {{{"arity", 2}, {"basis", {{{"name", "m"}, {"degree", 0}}}}, {"action", {{{1}}}}},
                              {{"arity", 3}, {"basis", {{{"name", "m3"}, {"degree", 0}}}}, {"action", {{{1}}, {{1}}}}}}},
                            {"composition", {{{"profile", {2, {2, 1}}}, {"matrix", {{1}}}}, {{"profile", {2, {1, 2}}}, {"matrix", {{1}}}}}}};
  const auto op = operad_from_json(j);
  EXPECT_EQ(op->table(), commutative_operad(3, 3).table());
  nlohmann::json broken = j;
  broken["composition"][0]["matrix"] = {{2}};
  EXPECT_THROW(operad_from_json(broken), Error);
  const auto co = cooperad_from_json({{"prime", 3}, {"arity_cap", 3}, {"components", j["components"]}, {"primitive", true}});
  EXPECT_TRUE(co->primitive());
}

TEST(Convolution, BasisAndInvariants) {
  // Hom_Sigma(As*(n), As(n)) is End of the regular representation: n! dimensional.
  const auto conv = make("as_dual", "as", 3, 4);
  EXPECT_EQ(conv.algebra()->dim(), 2 + 6 + 24);
  const auto com = make("com_dual", "com", 5, 4);
  EXPECT_EQ(com.algebra()->dim(), 3);
  std::mt19937_64 rng(7);
  const auto h = conv.random_element(rng, 0);
  EXPECT_TRUE(conv.is_equivariant(h));
  EXPECT_EQ(conv.to_hom(conv.to_element(h)), h);
  HomElement bad = conv.zero();
  bad.at(2).set(0, 0, 1);
  EXPECT_FALSE(conv.is_equivariant(bad));
  EXPECT_THROW(conv.to_element(bad), Error);
  EXPECT_THROW(Convolution(cooperad_by_name("as_dual", 2, 4), operad_by_name("as", 3, 4)), Error);
  EXPECT_THROW(Convolution(cooperad_by_name("as_dual", 2, 3), operad_by_name("as", 2, 4)), Error);
}

TEST(Convolution, BracePathsAgree) {
  for (std::int64_t p : {2, 3}) {
    for (const auto& [co, op] : std::vector<std::pair<std::string, std::string>>{
             {"as_dual", "as"}, {"com_exterior2_dual", "com"}, {"as_exterior1_dual", "as"}}) {
      const auto conv = make(co, op, p, 4);
      std::mt19937_64 rng(static_cast<unsigned>(p) * 31u + static_cast<unsigned>(co.size()));
      for (int trial = 0; trial < 20; ++trial) {
        const int df = static_cast<int>(rng() % 3);
        const int dg = p == 2 ? static_cast<int>(rng() % 3) : 0;
        const auto f = conv.random_element(rng, df);
        const auto g = conv.random_element(rng, dg);
        for (int k = 1; k <= 4; ++k)
          ASSERT_EQ(conv.hom_brace(f, {{g, k}}), conv.hom_brace_one_input(f, g, k)) << co << " p=" << p << " k=" << k;
        const auto odd = conv.random_element(rng, 1);
        ASSERT_EQ(conv.hom_brace(f, {{odd, 1}}), conv.hom_brace_one_input(f, odd, 1)) << co << " odd input";
      }
    }
  }
}

TEST(Convolution, CircMatchesGaugeProduct) {
  int pairs = 0;
  for (std::int64_t p : {2, 3}) {
    for (const auto& [co, op] : std::vector<std::pair<std::string, std::string>>{{"as_dual", "as"}, {"com_exterior2_dual", "com"}}) {
      const auto conv = make(co, op, p, 4);
      const FiniteModel m = conv.model();
      std::mt19937_64 rng(static_cast<unsigned>(100 + p));
      for (int trial = 0; trial < 30; ++trial, ++pairs) {
        const auto f = conv.random_element(rng, 0);
        const auto g = conv.random_element(rng, 0);
        const auto expected = conv.add(conv.unit(), conv.to_hom(gauge_product(m, conv.to_element(f), conv.to_element(g))));
        ASSERT_EQ(conv.circ_full(conv.add(conv.unit(), f), conv.add(conv.unit(), g)), expected) << co << " p=" << p;
      }
      EXPECT_THROW(conv.circ_full(conv.zero(), conv.unit()), Error);
    }
  }
  EXPECT_GE(pairs, 100);
}

TEST(Convolution, BraceIdentities) {
  for (std::int64_t p : {2, 3}) {
    for (const auto& [co, op, cap] : std::vector<std::tuple<std::string, std::string, int>>{{"as_dual", "as", 5}, {"com_exterior2_dual", "com", 6}}) {
      const auto conv = make(co, op, p, cap);
      const FiniteModel m = conv.model();
      for (Identity which : kCesaroIdentities) {
        const auto report = verify_identity(m, which, 150, 11);
        EXPECT_EQ(report.failures, 0) << co << " p=" << p << " " << identity_name(which) << ": " << report.first_failure;
      }
      const auto leibniz = verify_identity(m, Identity::Leibniz, 150, 12);
      EXPECT_EQ(leibniz.failures, 0) << leibniz.first_failure;
    }
  }
  // A nonzero differential on the cooperad side.
  const auto sq = Convolution(cooperad_by_name("com_square_zero_dual", 3, 4), operad_by_name("com", 3, 4));
  EXPECT_TRUE(sq.algebra()->has_differential());
  const auto leibniz = verify_identity(sq.model(), Identity::Leibniz, 40, 13);
  EXPECT_EQ(leibniz.failures, 0) << leibniz.first_failure;
}

TEST(Convolution, AssociatorMatchesTwoInputBrace) {
  // (a{b}){c} - a{b{c}} through the direct evaluation equals a{b,c} from the shuffle formula.
  for (std::int64_t p : {2, 3}) {
    for (const auto& [co, op, cap] : std::vector<std::tuple<std::string, std::string, int>>{{"as_dual", "as", 5}, {"com_exterior2_dual", "com", 6}}) {
      const auto conv = make(co, op, p, cap);
      const auto& alg = *conv.algebra();
      const FiniteModel m = conv.model();
      std::vector<std::tuple<int, int, int>> triples;
      for (int a = 0; a < alg.dim(); ++a)
        for (int b = 0; b < alg.dim(); ++b)
          for (int c = 0; c < alg.dim(); ++c)
            if (alg.basis(a).weight + alg.basis(b).weight + alg.basis(c).weight <= cap - 1) triples.emplace_back(a, b, c);
      std::mt19937_64 rng(static_cast<unsigned>(p));
      std::shuffle(triples.begin(), triples.end(), rng);
      if (triples.size() > 300) triples.resize(300);
      int nonzero = 0, checked = 0;
      for (const auto& [a, b, c] : triples) {
        const auto ha = conv.to_hom(m.basis(a)), hb = conv.to_hom(m.basis(b)), hc = conv.to_hom(m.basis(c));
        const auto lhs = conv.add(conv.hom_brace_one_input(conv.hom_brace_one_input(ha, hb, 1), hc, 1),
                                  conv.scale(conv.hom_brace_one_input(ha, conv.hom_brace_one_input(hb, hc, 1), 1), -1));
        const auto rhs = conv.hom_brace(ha, {{hb, 1}, {hc, 1}});
        ASSERT_EQ(lhs, rhs) << co << " p=" << p << " basis " << a << "," << b << "," << c;
        ++checked;
        if (!(rhs == conv.zero())) ++nonzero;
      }
      EXPECT_GT(checked, 0);
      EXPECT_GE(nonzero, 8) << co << " p=" << p << ": " << nonzero << " of " << checked;
    }
  }
}

TEST(Convolution, PrimitiveMatchesLinearModel) {
  for (std::int64_t p : {2, 3, 5}) {
    for (unsigned variant : {0u, 1u, 2u, 5u, 7u}) {
      const Convolution conv(std::make_shared<const CooperadData>(primitive_family(p, 4, variant)), operad_by_name("com", p, 4));
      const auto report = conv.pi0({}, true);
      EXPECT_TRUE(report.cofibrancy_asserted);
      const CochainComplex cx = conv.algebra()->complex();
      const int z1 = cx.dim(1) - rank(cx.differential(1));
      const int z0 = cx.dim(0) - rank(cx.differential(0));
      const auto& g = report.groupoid;
      EXPECT_EQ(g.mc_elements.size(), ipow(p, z1)) << "p=" << p << " variant=" << variant;
      EXPECT_EQ(g.orbits.size(), ipow(p, cx.cohomology_dim(1)));
      for (const auto& o : g.orbits) EXPECT_EQ(o.aut_order, ipow(p, z0));
      for (std::size_t i = 0; i < g.mc_elements.size(); ++i)
        for (std::size_t j = i; j < g.mc_elements.size(); j += 3) {
          ModVector diff(g.mc_elements[i].size());
          for (std::size_t t = 0; t < diff.size(); ++t) diff[t] = (g.mc_elements[i][t] - g.mc_elements[j][t] + p) % p;
          EXPECT_EQ(g.orbit_of[i] == g.orbit_of[j], cx.is_coboundary(1, diff));
        }
    }
  }
}

TEST(Convolution, HomotopyCertificates) {
  int checked = 0;
  for (std::int64_t p : {2, 3}) {
    // As (x) exterior stays at cap 3 so that the MC set can be enumerated.
    for (const auto& [co, op, cap] : std::vector<std::tuple<std::string, std::string, int>>{{"com_exterior2_dual", "com", 4}, {"as_exterior1_dual", "as", 3}}) {
      if (p == 3 && cap == 3) continue;  // 3^8 x 3^8 gauge actions: too slow for a unit test
      const auto conv = make(co, op, p, cap);
      const FiniteModel m = conv.model();
      const auto report = conv.pi0();
      const auto& mcs = report.groupoid.mc_elements;
      ASSERT_GT(mcs.size(), 1u);
      std::mt19937_64 rng(static_cast<unsigned>(p * 7 + 1));
      for (int trial = 0; trial < 20; ++trial, ++checked) {
        const auto alpha_e = m.from_coordinates(mcs[rng() % mcs.size()], 1);
        const auto alpha = conv.to_hom(alpha_e);
        ASSERT_TRUE(conv.mc_certificate(alpha).certified);
        const auto lambda = conv.random_element(rng, 0);
        const auto beta = conv.to_hom(gauge_act(m, conv.to_element(lambda), alpha_e));
        ASSERT_TRUE(conv.mc_certificate(beta).certified) << "gauge action left the MC set";
        ASSERT_EQ(report.groupoid.orbit_index(coords(conv, alpha)), report.groupoid.orbit_index(coords(conv, beta)));
        const auto cert = conv.homotopy_certificate(alpha, beta, lambda);
        ASSERT_TRUE(cert.holds) << co << " p=" << p << " arity " << cert.first_failing_arity.value_or(0);
        // Any other MC element fails with the same homotopy.
        const auto pos = static_cast<std::size_t>(std::lower_bound(mcs.begin(), mcs.end(), coords(conv, beta)) - mcs.begin());
        const auto other = conv.to_hom(m.from_coordinates(mcs[(pos + 1) % mcs.size()], 1));
        EXPECT_FALSE(conv.homotopy_certificate(alpha, other, lambda).holds);
      }
      HomElement odd = conv.zero();
      while (odd == conv.zero()) odd = conv.random_element(rng, 1);
      EXPECT_THROW(conv.homotopy_certificate(conv.zero(), conv.zero(), odd), Error);
    }
  }
  EXPECT_GE(checked, 50);
}

TEST(Convolution, McCertificateRejectsNonMc) {
  const auto conv = make("com_exterior2_dual", "com", 3, 4);
  const auto report = conv.pi0();
  const FiniteModel m = conv.model();
  EXPECT_LT(report.groupoid.mc_elements.size(), report.groupoid.candidates);
  std::mt19937_64 rng(5);
  int rejected = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = conv.random_element(rng, 1);
    const auto cert = conv.mc_certificate(a);
    EXPECT_EQ(cert.certified, report.groupoid.orbit_index(coords(conv, a)).has_value());
    if (!cert.certified) {
      ++rejected;
      EXPECT_THROW(conv.homotopy_certificate(a, a, conv.zero()), Error);
    }
  }
  EXPECT_GT(rejected, 0);
  HomElement even = conv.zero();
  while (even == conv.zero()) even = conv.random_element(rng, 0);
  EXPECT_THROW(conv.mc_certificate(even), Error);
}

TEST(Convolution, UnitOperadHasOneOrbit) {
  for (std::int64_t p : {2, 3}) {
    const Convolution conv(cooperad_by_name("as_dual", p, 4), std::make_shared<const OperadData>(unit_operad(p, 4)));
    EXPECT_EQ(conv.algebra()->dim(), 0);
    const auto report = conv.pi0();
    EXPECT_EQ(report.groupoid.mc_elements.size(), 1u);
    EXPECT_EQ(report.groupoid.orbits.size(), 1u);
    EXPECT_EQ(report.to_json()["arity_cap"], 4);
  }
}
