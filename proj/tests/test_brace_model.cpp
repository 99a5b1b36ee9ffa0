#include <gtest/gtest.h>

#include <functional>

#include "gpl/brace_model.hpp"
#include "gpl/error.hpp"
#include "gpl/identities.hpp"

using namespace gpl;

namespace {

NsElement to_ring(const NsElement& x, const Ring& target) {
  NsElement out(target, x.cap());
  for (int n = 1; n <= x.cap(); ++n) out.add(n, change_ring(x.coefficient(n), target));
  return out;
}

}  // namespace

TEST(AsModel, Insertions) {
  const AsOperadModel m(Ring::integers(), 6);
  EXPECT_EQ(m.insert(m.mu(2), {m.mu(2)}), m.mu(3).scaled(Scalar::from_integer(2, m.ring())));
  EXPECT_EQ(m.insert(m.mu(3), {m.mu(2), m.mu(2)}), m.mu(5).scaled(Scalar::from_integer(3, m.ring())));
  EXPECT_TRUE(m.insert(m.mu(1), {m.mu(1), m.mu(1)}).is_zero());
  EXPECT_EQ(m.insert(m.mu(1), {m.mu(4)}), m.mu(4));
  EXPECT_TRUE(m.insert(m.mu(4), {m.mu(4)}).is_zero());  // arity 7 is above the cap
  EXPECT_THROW(m.insert(m.mu(2), {AsOperadModel(Ring::integers(), 5).mu(1)}), Error);
}

TEST(AsModel, FormulaExamples) {
  const AsOperadModel m(Ring::integers(), 8);
  const auto f = m.mu(3), g = m.mu(2), h = m.mu(1) + m.mu(3);
  EXPECT_EQ(brace_via_brace_algebra(m, f, {g}, {1}), m.insert(f, {g}));
  EXPECT_EQ(brace_via_brace_algebra(m, f, {g}, {2}), m.insert(f, {g, g}));
  EXPECT_EQ(brace_via_brace_algebra(m, f, {g, h}, {1, 1}), m.insert(f, {g, h}) + m.insert(f, {h, g}));
  EXPECT_EQ(brace_via_brace_algebra(m, f, {g}, {0}), f);
}

/// The shuffle formula reproduces the divided structure obtained over Q from the
/// symmetric-brace recursion, for every brace of total weight at most 4 on basis operations.
TEST(AsModel, FormulaMatchesRationalStructure) {
  const int cap = 8;
  const AsOperadModel mz(Ring::integers(), cap), mq(Ring::rationals(), cap);
  int checked = 0;
  std::vector<int> bs, rs;
  std::function<void(int, int)> rec = [&](int left, int min_b) {
    if (!bs.empty())
      for (int a = 1; a <= cap; ++a) {
        std::vector<NsElement> gz, gq;
        std::vector<NsElement> flat;
        mpz_class fact = 1;
        for (std::size_t i = 0; i < bs.size(); ++i) {
          gz.push_back(mz.mu(bs[i]));
          gq.push_back(mq.mu(bs[i]));
          for (int k = 1; k <= rs[i]; ++k) {
            flat.push_back(mq.mu(bs[i]));
            fact *= k;
          }
        }
        const auto formula = to_ring(brace_via_brace_algebra(mz, mz.mu(a), gz, rs), mq.ring());
        const auto intrinsic = symmetric_brace(mq, mq.mu(a), flat)
                                   .scaled(Scalar::from_rational(mpq_class(mpz_class(1), fact), mq.ring()));
        ASSERT_EQ(formula, intrinsic) << "mu" << a;
        ++checked;
      }
    for (int b = min_b; b <= 4; ++b)
      for (int r = 1; r <= left; ++r) {
        bs.push_back(b);
        rs.push_back(r);
        rec(left - r, b + 1);
        bs.pop_back();
        rs.pop_back();
      }
  };
  rec(4, 1);
  EXPECT_GT(checked, 100);
}

TEST(AsModel, SatisfiesIdentities) {
  for (const auto& ring : {Ring::integers(), Ring::prime_field(2), Ring::prime_field(3)}) {
    const AsOperadModel m(ring, 7);
    for (Identity which : kCesaroIdentities) {
      const auto report = verify_identity(m, which, 80, 23);
      EXPECT_EQ(report.failures, 0) << ring.name() << " " << identity_name(which) << ": " << report.first_failure;
    }
  }
}
