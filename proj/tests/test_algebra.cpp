#include <gtest/gtest.h>

#include <random>

#include "gpl/algebra.hpp"
#include "gpl/error.hpp"
#include "gpl/identities.hpp"

using namespace gpl;

namespace {

SpecPtr make_spec(const Ring& ring, std::vector<Generator> gens, int cap = 6, std::map<GeneratorId, LinearTerms> d = {}) {
  return AlgebraSpec::make(ring, std::move(gens), cap, std::move(d));
}

AlgebraElement tree(const SpecPtr& spec, const std::string& text) { return AlgebraElement::parse_tree(spec, text); }

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InternalInvariant;
}

/// Oracle over Q: c_T = |Aut T| * N_T / (|Aut s| * prod r_i! * prod |Aut t_i|^{r_i}),
/// N_T the signed number of ways to graft the argument copies onto vertices of s.
std::map<DecoratedTree, mpq_class> graft_oracle(const DecoratedTree& s, const std::vector<std::pair<DecoratedTree, int>>& args,
                                                const std::vector<int>& degrees, bool signed_ring) {
  std::vector<int> sign_degrees = degrees;
  if (!signed_ring) std::fill(sign_degrees.begin(), sign_degrees.end(), 0);
  std::vector<std::size_t> copies;
  mpz_class denominator = canonicalize(s, sign_degrees).automorphism_order;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const mpz_class aut = canonicalize(args[i].first, sign_degrees).automorphism_order;
    for (int k = 1; k <= args[i].second; ++k) {
      copies.push_back(i);
      denominator *= k;
      denominator *= aut;
    }
  }
  std::map<DecoratedTree, long long> signed_count;
  std::map<DecoratedTree, std::uint64_t> aut_of;
  std::vector<int> host(copies.size(), 0);
  const auto s_parents = s.parents();
  const auto s_decs = s.decorations();
  for (;;) {
    auto parents = s_parents;
    auto decs = s_decs;
    for (std::size_t c = 0; c < copies.size(); ++c) {
      const auto& t = args[copies[c]].first;
      const auto tp = t.parents();
      const int offset = static_cast<int>(parents.size());
      for (int v = 0; v < t.size(); ++v) {
        parents.push_back(tp[static_cast<std::size_t>(v)] < 0 ? host[c] : tp[static_cast<std::size_t>(v)] + offset);
        decs.push_back(t.generator(v));
      }
    }
    const auto canon = canonicalize(parents, decs, sign_degrees);
    std::vector<int> all(parents.size());
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = static_cast<int>(v);
    const auto order = canonical_order(parents, decs, all);
    std::vector<int> pos(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) pos[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    int parity = 0;
    for (std::size_t a = 0; a < pos.size(); ++a)
      for (std::size_t b = a + 1; b < pos.size(); ++b)
        if ((sign_degrees[static_cast<std::size_t>(decs[a])] & 1) && (sign_degrees[static_cast<std::size_t>(decs[b])] & 1) && pos[a] > pos[b])
          parity ^= 1;
    if (!canon.sign_degenerate) {
      signed_count[canon.tree] += parity ? -1 : 1;
      aut_of[canon.tree] = canon.automorphism_order;
    }
    std::size_t k = 0;
    while (k < host.size() && ++host[k] == s.size()) host[k++] = 0;
    if (k == host.size()) break;
  }
  std::map<DecoratedTree, mpq_class> out;
  for (const auto& [t, n] : signed_count) {
    if (n == 0) continue;
    mpq_class c(mpz_class(static_cast<long>(n)) * mpz_class(static_cast<unsigned long>(aut_of[t])), denominator);
    c.canonicalize();
    out[t] = c;
  }
  return out;
}

DecoratedTree random_tree(std::mt19937_64& rng, int max_size, int n_gens) {
  const int size = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_size));
  std::vector<int> parents{-1};
  std::vector<GeneratorId> decs{static_cast<GeneratorId>(rng() % static_cast<unsigned>(n_gens))};
  for (int v = 1; v < size; ++v) {
    parents.push_back(static_cast<int>(rng() % static_cast<unsigned>(v)));
    decs.push_back(static_cast<GeneratorId>(rng() % static_cast<unsigned>(n_gens)));
  }
  return DecoratedTree::from_parents(parents, decs);
}

}  // namespace

TEST(WeightedBrace, Examples) {
  const auto z = make_spec(Ring::integers(), {{"a", 0}, {"b", 0}});
  const auto a = tree(z, "a"), b = tree(z, "b");
  EXPECT_EQ(weighted_brace(a, {{b, 1}}), tree(z, "a[b]"));
  EXPECT_EQ(weighted_brace(a, {{b, 2}}), tree(z, "a[b,b]"));
  EXPECT_EQ(weighted_brace(a, {{b, 1}, {b, 1}}), weighted_brace(a, {{b, 2}}).scaled(Scalar::from_integer(2, z->ring())));
  EXPECT_EQ(weighted_brace(a, {{b, 1}, {a, 0}}), weighted_brace(a, {{b, 1}}));
  const auto two = Scalar::from_integer(2, z->ring());
  EXPECT_EQ(weighted_brace(a, {{b.scaled(two), 2}}), weighted_brace(a, {{b, 2}}).scaled(two * two));
  EXPECT_EQ(star(tree(z, "a[b]"), b), tree(z, "a[b,b]").scaled(two) + tree(z, "a[b[b]]"));

  const auto f2 = make_spec(Ring::prime_field(2), {{"a", 0}, {"b", 0}});
  EXPECT_TRUE(weighted_brace(tree(f2, "a"), {{tree(f2, "b"), 1}, {tree(f2, "b"), 1}}).is_zero());
}

TEST(WeightedBrace, OddArguments) {
  const auto z = make_spec(Ring::integers(), {{"a", 0}, {"x", 1}, {"y", 1}});
  const auto a = tree(z, "a"), x = tree(z, "x"), y = tree(z, "y");
  EXPECT_EQ(code_of([&] { weighted_brace(a, {{x, 2}}); }), Errc::OddWeightViolation);
  EXPECT_TRUE(weighted_brace(a, {{x, 1}, {x, 1}}).is_zero());
  EXPECT_EQ(weighted_brace(a, {{y, 1}, {x, 1}}), -weighted_brace(a, {{x, 1}, {y, 1}}));
  // x{x}_1 survives: the 2-chain is not degenerate.
  EXPECT_FALSE(star(x, x).is_zero());
  // In characteristic 2 the convention is lifted and a[x,x] is a basis class.
  const auto f2 = make_spec(Ring::prime_field(2), {{"a", 0}, {"x", 1}});
  EXPECT_EQ(weighted_brace(tree(f2, "a"), {{tree(f2, "x"), 2}}), tree(f2, "a[x,x]"));
  EXPECT_TRUE(tree(z, "a[x,x]").is_zero());
}

TEST(WeightedBrace, UnitSlot) {
  const auto z = make_spec(Ring::integers(), {{"a", 0}, {"b", 2}});
  const auto one = AlgebraElement::one(z), a = tree(z, "a"), b = tree(z, "b");
  EXPECT_EQ(weighted_brace(one, {}), one);
  EXPECT_EQ(weighted_brace(one, {{b, 1}}), b);
  EXPECT_TRUE(weighted_brace(one, {{b, 2}}).is_zero());
  EXPECT_TRUE(weighted_brace(one, {{a, 1}, {b, 1}}).is_zero());
  EXPECT_EQ(code_of([&] { weighted_brace(a, {{one, 1}}); }), Errc::UnitArgument);
  EXPECT_EQ(weighted_brace(a, {{one, 0}}), a);
}

TEST(WeightedBrace, TruncatesAtCap) {
  const auto z = make_spec(Ring::integers(), {{"a", 0}}, 3);
  const auto a = tree(z, "a");
  EXPECT_FALSE(weighted_brace(a, {{a, 2}}).is_zero());
  EXPECT_TRUE(weighted_brace(a, {{a, 3}}).is_zero());
  EXPECT_TRUE(weighted_brace(tree(z, "a[a]"), {{tree(z, "a[a]"), 1}}).is_zero());
}

/// The cut-count structure constants agree with the graft-function oracle.
TEST(BasisBrace, MatchesGraftOracle) {
  std::mt19937_64 rng(2024);
  const std::vector<int> degrees = {0, 1, 2};
  for (int trial = 0; trial < 400; ++trial) {
    const bool signed_ring = trial % 4 != 0;
    std::vector<int> sdeg = degrees;
    if (!signed_ring) sdeg = {0, 0, 0};
    auto s = canonicalize(random_tree(rng, 3, 3), sdeg);
    if (s.sign_degenerate) continue;
    std::vector<std::pair<DecoratedTree, int>> args;
    int size = s.tree.size();
    const int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) {
      auto t = canonicalize(random_tree(rng, 2, 3), sdeg);
      if (t.sign_degenerate) continue;
      int r = 1 + static_cast<int>(rng() % 2);
      if (signed_ring && t.tree.degree(degrees) % 2 != 0) r = 1;
      if (size + r * t.tree.size() > 7) continue;
      size += r * t.tree.size();
      args.emplace_back(t.tree, r);
    }
    const auto expect = graft_oracle(s.tree, args, degrees, signed_ring);
    std::map<DecoratedTree, mpq_class> got;
    for (const auto& [t, c] : basis_brace(s.tree, args, sdeg, 7)) got[t] = mpq_class(static_cast<long>(c));
    ASSERT_EQ(got, expect) << "trial " << trial;
  }
}

TEST(Star, RightSymmetricAssociator) {
  std::mt19937_64 rng(7);
  for (const auto& ring : {Ring::integers(), Ring::prime_field(3)}) {
    const auto spec = make_spec(ring, {{"a", 0}, {"x", 1}, {"c", 2}}, 6);
    FreeModel m(spec);
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = m.random_homogeneous(rng, 2), y = m.random_homogeneous(rng, 2), z = m.random_homogeneous(rng, 2);
      const auto assoc_yz = star(star(x, y), z) - star(x, star(y, z));
      const auto assoc_zy = star(star(x, z), y) - star(x, star(z, y));
      const bool odd = (m.degree(y) & 1) && (m.degree(z) & 1);
      ASSERT_EQ(assoc_yz, odd ? -assoc_zy : assoc_zy);
    }
  }
}

TEST(Identities, HoldOnRandomInstances) {
  for (const auto& ring : {Ring::integers(), Ring::prime_field(2), Ring::prime_field(3), Ring::integers_mod(4),
                           Ring::truncated_local(Ring::prime_field(2), 3)}) {
    FreeModel m(make_spec(ring, {{"a", 0}, {"x", 1}, {"c", 2}}, 6));
    for (Identity which : kCesaroIdentities) {
      const auto report = verify_identity(m, which, 60, 11);
      EXPECT_EQ(report.failures, 0) << ring.name() << " " << identity_name(which) << ": " << report.first_failure;
    }
  }
}

TEST(Identities, CompositionIntegralMatchesRational) {
  std::mt19937_64 rng(5);
  FreeModel m(make_spec(Ring::rationals(), {{"a", 0}, {"x", 1}, {"c", 0}}, 6));
  for (int trial = 0; trial < 60; ++trial) {
    const auto d = detail::draw(m, rng, 3, 6);
    const std::size_t n = 1 + rng() % 2;
    std::vector<std::pair<AlgebraElement, int>> ys(d.args.begin(), d.args.begin() + static_cast<long>(n));
    std::vector<std::pair<AlgebraElement, int>> zs(d.args.begin() + static_cast<long>(n), d.args.end());
    ASSERT_EQ(rhs_vi_integral(m, d.x, ys, zs), rhs_vi_rational(m, d.x, ys, zs));
  }
}

TEST(Identities, CompositionExample) {
  // n = m = 1, r = 2, s = 1 over the integers.
  const auto z = make_spec(Ring::integers(), {{"a", 0}, {"b", 0}, {"c", 0}});
  FreeModel m(z);
  const auto a = tree(z, "a"), b = tree(z, "b"), c = tree(z, "c");
  const auto lhs = weighted_brace(weighted_brace(a, {{b, 2}}), {{c, 1}});
  const auto rhs = weighted_brace(a, {{star(b, c), 1}, {b, 1}}) + weighted_brace(a, {{b, 2}, {c, 1}});
  EXPECT_EQ(lhs, rhs);
  EXPECT_EQ(rhs_vi_integral(m, a, {{b, 2}}, {{c, 1}}), rhs);
}

/// Over Q, prod r_i! times the divided brace is the iterated symmetric brace.
TEST(Identities, RationalBridge) {
  std::mt19937_64 rng(13);
  FreeModel m(make_spec(Ring::rationals(), {{"a", 0}, {"x", 1}, {"c", 2}}, 6));
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = detail::draw(m, rng, 1 + rng() % 3, 6);
    std::vector<AlgebraElement> flat;
    mpz_class fact = 1;
    for (const auto& [y, r] : d.args)
      for (int k = 1; k <= r; ++k) {
        flat.push_back(y);
        fact *= k;
      }
    const auto lhs = m.brace(d.x, d.args).scaled(Scalar::from_integer(fact, m.ring()));
    ASSERT_EQ(lhs, symmetric_brace(m, d.x, flat));
  }
}

TEST(Differential, GeneratorsAndLeibniz) {
  for (const auto& ring : {Ring::integers(), Ring::prime_field(2), Ring::prime_field(5)}) {
    const Scalar one = Scalar::one(ring);
    // d u = v, d w = x; p is a cycle.
    const auto spec = make_spec(ring, {{"u", 0}, {"v", 1}, {"w", 1}, {"x", 2}, {"p", 0}}, 5,
                                {{0, {{1, one}}}, {2, {{3, one}}}});
    EXPECT_EQ(differentiate(tree(spec, "u")), tree(spec, "v"));
    EXPECT_TRUE(differentiate(tree(spec, "p")).is_zero());
    FreeModel m(spec);
    const auto report = verify_identity(m, Identity::Leibniz, 150, 3);
    EXPECT_EQ(report.failures, 0) << ring.name() << ": " << report.first_failure;
    const auto u = tree(spec, "u"), w = tree(spec, "w");
    EXPECT_EQ(differentiate(star(u, w)), star(tree(spec, "v"), w) + star(u, tree(spec, "x")));
  }
}

TEST(Spec, RejectsBadDifferentials) {
  const Ring z = Ring::integers();
  const Scalar one = Scalar::one(z);
  EXPECT_EQ(code_of([&] { make_spec(z, {{"u", 0}, {"v", 2}}, 3, {{0, {{1, one}}}}); }), Errc::NotAComplexSpec);
  EXPECT_EQ(code_of([&] { make_spec(z, {{"u", 0}, {"v", 1}, {"w", 2}}, 3, {{0, {{1, one}}}, {1, {{2, one}}}}); }),
            Errc::NotAComplexSpec);
  EXPECT_EQ(code_of([&] { make_spec(z, {{"u", 0}, {"u", 1}}); }), Errc::ConfigError);
}

TEST(Spec, JsonRoundTrip) {
  const nlohmann::json j = nlohmann::json::parse(R"({"ring":{"kind":"prime_field","p":3},
    "generators":[{"name":"u","degree":0},{"name":"v","degree":1}],
    "differential":{"u":[["v","2"]]}, "weight_cap":4})");
  const auto spec = AlgebraSpec::from_json(j);
  EXPECT_EQ(spec->weight_cap(), 4);
  EXPECT_EQ(differentiate(tree(spec, "u")), tree(spec, "v").scaled(Scalar::from_integer(2, spec->ring())));
  EXPECT_EQ(AlgebraSpec::from_json(spec->to_json())->to_json(), spec->to_json());
}

TEST(ChangeRing, CommutesWithBraces) {
  std::mt19937_64 rng(17);
  const auto src = make_spec(Ring::integers(), {{"a", 0}, {"x", 1}, {"c", 2}}, 6);
  FreeModel m(src);
  for (const auto& target_ring : {Ring::prime_field(3), Ring::integers_mod(4), Ring::prime_field(2)}) {
    const auto dst = make_spec(target_ring, {{"a", 0}, {"x", 1}, {"c", 2}}, 6);
    for (int trial = 0; trial < 60; ++trial) {
      auto d = detail::draw(m, rng, 1 + rng() % 2, 6);
      std::vector<BraceArg> mapped;
      std::vector<BraceArg> orig;
      for (const auto& [y, r] : d.args) {
        mapped.push_back({change_ring(y, dst), r});
        orig.push_back({y, r});
      }
      ASSERT_EQ(change_ring(weighted_brace(d.x, orig), dst), weighted_brace(change_ring(d.x, dst), mapped));
    }
  }
}

TEST(Element, PrintsDeterministically) {
  const auto z = make_spec(Ring::integers(), {{"a", 0}, {"b", 0}});
  const auto e = star(tree(z, "a[b]"), tree(z, "b")) + AlgebraElement::one(z).scaled(Scalar::from_integer(3, z->ring()));
  EXPECT_EQ(e.to_string(), "3 + a[b[b]] + 2*a[b,b]");
  EXPECT_EQ(AlgebraElement::zero(z).to_string(), "0");
  EXPECT_EQ(e.degree(), 0);
  EXPECT_EQ(e.weight(), 0);
}
