#pragma once

#include <concepts>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gpl/algebra.hpp"
#include "gpl/error.hpp"
#include "gpl/perm.hpp"
#include "gpl/ring.hpp"

namespace gpl {

/// What the identity harness needs from an algebra with weighted braces.
template <class M>
concept BracedModel = requires(const M& m, const typename M::Element& e, std::mt19937_64& rng,
                               const std::vector<std::pair<typename M::Element, int>>& args) {
  { m.ring() } -> std::convertible_to<Ring>;
  { m.zero() } -> std::same_as<typename M::Element>;
  { m.brace(e, args) } -> std::same_as<typename M::Element>;
  { m.differentiate(e) } -> std::same_as<typename M::Element>;
  { m.has_differential() } -> std::convertible_to<bool>;
  { m.degree(e) } -> std::convertible_to<int>;
  { m.weight(e) } -> std::convertible_to<int>;
  { m.cap() } -> std::convertible_to<int>;
  { m.random_homogeneous(rng, 1) } -> std::same_as<typename M::Element>;
  { e + e } -> std::same_as<typename M::Element>;
  { e - e } -> std::same_as<typename M::Element>;
  { e.scaled(Scalar()) } -> std::same_as<typename M::Element>;
  { e == e } -> std::convertible_to<bool>;
  { e.to_string() } -> std::convertible_to<std::string>;
};

/// The free algebra of a spec seen through the harness interface.
class FreeModel {
 public:
  using Element = AlgebraElement;
  explicit FreeModel(SpecPtr spec) : spec_(std::move(spec)) {}

  const SpecPtr& spec() const { return spec_; }
  const Ring& ring() const { return spec_->ring(); }
  Element zero() const { return AlgebraElement::zero(spec_); }
  Element brace(const Element& x, const std::vector<std::pair<Element, int>>& args) const;
  Element differentiate(const Element& x) const { return gpl::differentiate(x); }
  bool has_differential() const { return spec_->has_differential(); }
  int degree(const Element& x) const { return x.degree().value_or(0); }
  /// Largest vertex count present.
  int weight(const Element& x) const;
  int cap() const { return spec_->weight_cap(); }
  /// a{mu}_n has more than cap vertices once n >= cap.
  int series_bound() const { return spec_->weight_cap() - 1; }
  std::optional<int> homogeneous_degree(const Element& x) const { return x.degree(); }
  /// Nonzero homogeneous element with one or two tree classes of at most max_weight vertices.
  Element random_homogeneous(std::mt19937_64& rng, int max_weight) const;

 private:
  SpecPtr spec_;
};

/// Random scalar with small integer coefficients (and t terms over local rings).
Scalar random_scalar(const Ring& ring, std::mt19937_64& rng);

/// Sign of moving tokens into target order: sources[k] is the target slot of token k.
int token_sign(const std::vector<int>& target_slots, const std::vector<int>& degrees);

/// x{y_1,...,y_n} by the recursion from x*y = x{y}_1, with Koszul signs. Ring-agnostic.
template <BracedModel M>
typename M::Element symmetric_brace(const M& m, const typename M::Element& x,
                                    const std::vector<typename M::Element>& ys) {
  using E = typename M::Element;
  if (ys.empty()) return x;
  auto star = [&](const E& a, const E& b) { return m.brace(a, {{b, 1}}); };
  const E& last = ys.back();
  std::vector<E> head(ys.begin(), ys.end() - 1);
  E out = star(symmetric_brace(m, x, head), last);
  int passed = 0;  // degree of the arguments y_n moves across
  for (std::size_t i = head.size(); i-- > 0;) {
    std::vector<E> inner = head;
    inner[i] = star(head[i], last);
    const bool odd = (m.degree(last) & 1) && (passed & 1);
    const E term = symmetric_brace(m, x, inner);
    out = odd ? out + term : out - term;
    passed += m.degree(head[i]);
  }
  return out;
}

namespace detail {

/// Token bookkeeping for (vi): the left side lists x, y_i^{r_i}, z_j^{s_j}.
struct TokenLayout {
  std::vector<int> y_start, z_start;
  std::vector<int> degrees;
};

template <BracedModel M>
TokenLayout layout(const M& m, const typename M::Element& x, const std::vector<std::pair<typename M::Element, int>>& ys,
                   const std::vector<std::pair<typename M::Element, int>>& zs) {
  TokenLayout t;
  t.degrees.push_back(m.degree(x));
  for (const auto& [y, r] : ys) {
    t.y_start.push_back(static_cast<int>(t.degrees.size()));
    for (int k = 0; k < r; ++k) t.degrees.push_back(m.degree(y));
  }
  for (const auto& [z, s] : zs) {
    t.z_start.push_back(static_cast<int>(t.degrees.size()));
    for (int k = 0; k < s; ++k) t.degrees.push_back(m.degree(z));
  }
  return t;
}

}  // namespace detail

/// Right side of (vi) with integer coefficients: for each y_i the r_i inner tuples are taken as a
/// multiset, and a tuple repeated t times becomes one argument of weight t.
template <BracedModel M>
typename M::Element rhs_vi_integral(const M& m, const typename M::Element& x,
                                    const std::vector<std::pair<typename M::Element, int>>& ys,
                                    const std::vector<std::pair<typename M::Element, int>>& zs) {
  using E = typename M::Element;
  const std::size_t n = ys.size(), mz = zs.size();
  const auto lay = detail::layout(m, x, ys, zs);
  // All inner tuples alpha with alpha_j <= s_j.
  std::vector<std::vector<int>> tuples{{}};
  for (const auto& [z, s] : zs) {
    std::vector<std::vector<int>> next;
    for (const auto& t : tuples)
      for (int a = 0; a <= s; ++a) {
        next.push_back(t);
        next.back().push_back(a);
      }
    tuples = std::move(next);
  }
  std::vector<int> used(mz, 0);
  std::vector<std::vector<int>> picks(n);  // nondecreasing tuple indices per y_i
  E out = m.zero();

  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t lo) {
    if (i == n) {
      std::vector<std::pair<E, int>> args;
      std::vector<int> slots(lay.degrees.size(), -1);  // token -> right-hand slot
      int slot = 0;
      slots[0] = slot++;
      std::vector<int> next_z(mz);
      for (std::size_t j = 0; j < mz; ++j) next_z[j] = lay.z_start[j];
      for (std::size_t a = 0; a < n; ++a) {
        int next_y = lay.y_start[a];
        const auto& p = picks[a];
        for (std::size_t q = 0; q < p.size();) {
          std::size_t e = q;
          while (e < p.size() && p[e] == p[q]) ++e;
          const auto& alpha = tuples[static_cast<std::size_t>(p[q])];
          std::vector<std::pair<E, int>> inner;
          for (std::size_t j = 0; j < mz; ++j) inner.emplace_back(zs[j].first, alpha[j]);
          args.emplace_back(m.brace(ys[a].first, inner), static_cast<int>(e - q));
          for (std::size_t c = q; c < e; ++c) {
            slots[static_cast<std::size_t>(next_y++)] = slot++;
            for (std::size_t j = 0; j < mz; ++j)
              for (int k = 0; k < alpha[j]; ++k) slots[static_cast<std::size_t>(next_z[j]++)] = slot++;
          }
          q = e;
        }
      }
      for (std::size_t j = 0; j < mz; ++j) {
        const int beta = zs[j].second - used[j];
        args.emplace_back(zs[j].first, beta);
        for (int k = 0; k < beta; ++k) slots[static_cast<std::size_t>(next_z[j]++)] = slot++;
      }
      const E term = m.brace(x, args);
      out = token_sign(slots, lay.degrees) < 0 ? out - term : out + term;
      return;
    }
    if (static_cast<int>(picks[i].size()) == ys[i].second) {
      rec(i + 1, 0);
      return;
    }
    for (std::size_t k = lo; k < tuples.size(); ++k) {
      const auto& alpha = tuples[k];
      bool fits = true;
      for (std::size_t j = 0; j < mz; ++j) fits = fits && used[j] + alpha[j] <= zs[j].second;
      if (!fits) continue;
      for (std::size_t j = 0; j < mz; ++j) used[j] += alpha[j];
      picks[i].push_back(static_cast<int>(k));
      rec(i, k);
      picks[i].pop_back();
      for (std::size_t j = 0; j < mz; ++j) used[j] -= alpha[j];
    }
  };
  rec(0, 0);
  return out;
}

/// Right side of (vi) as written with 1/prod r_j!, summing over ordered inner tuples.
/// Only meaningful when prod r_j! is invertible in the ring.
template <BracedModel M>
typename M::Element rhs_vi_rational(const M& m, const typename M::Element& x,
                                    const std::vector<std::pair<typename M::Element, int>>& ys,
                                    const std::vector<std::pair<typename M::Element, int>>& zs) {
  using E = typename M::Element;
  const std::size_t mz = zs.size();
  const auto lay = detail::layout(m, x, ys, zs);
  std::vector<std::pair<std::size_t, int>> copies;  // (y index, copy) in left-hand order
  mpz_class denominator = 1;
  for (std::size_t a = 0; a < ys.size(); ++a) {
    for (int q = 0; q < ys[a].second; ++q) copies.emplace_back(a, q);
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(ys[a].second));
    denominator *= f;
  }
  const Scalar scale = Scalar::from_rational(mpq_class(mpz_class(1), denominator), m.ring());
  std::vector<std::vector<int>> alphas(copies.size(), std::vector<int>(mz, 0));
  std::vector<int> used(mz, 0);
  E out = m.zero();
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t c, std::size_t j) {
    if (c == copies.size()) {
      std::vector<std::pair<E, int>> args;
      std::vector<int> slots(lay.degrees.size(), -1);
      int slot = 0;
      slots[0] = slot++;
      std::vector<int> next_z(mz);
      for (std::size_t k = 0; k < mz; ++k) next_z[k] = lay.z_start[k];
      for (std::size_t q = 0; q < copies.size(); ++q) {
        const auto [a, copy] = copies[q];
        std::vector<std::pair<E, int>> inner;
        for (std::size_t k = 0; k < mz; ++k) inner.emplace_back(zs[k].first, alphas[q][k]);
        args.emplace_back(m.brace(ys[a].first, inner), 1);
        slots[static_cast<std::size_t>(lay.y_start[a] + copy)] = slot++;
        for (std::size_t k = 0; k < mz; ++k)
          for (int e = 0; e < alphas[q][k]; ++e) slots[static_cast<std::size_t>(next_z[k]++)] = slot++;
      }
      for (std::size_t k = 0; k < mz; ++k) {
        const int beta = zs[k].second - used[k];
        args.emplace_back(zs[k].first, beta);
        for (int e = 0; e < beta; ++e) slots[static_cast<std::size_t>(next_z[k]++)] = slot++;
      }
      const E term = m.brace(x, args).scaled(scale);
      out = token_sign(slots, lay.degrees) < 0 ? out - term : out + term;
      return;
    }
    if (j == mz) {
      rec(c + 1, 0);
      return;
    }
    for (int a = 0; used[j] + a <= zs[j].second; ++a) {
      alphas[c][j] = a;
      used[j] += a;
      rec(c, j + 1);
      used[j] -= a;
    }
    alphas[c][j] = 0;
  };
  rec(0, 0);
  return out;
}

enum class Identity { Symmetry, ZeroWeight, Scaling, Merge, Additivity, Composition, Leibniz };

const char* identity_name(Identity which);
std::optional<Identity> parse_identity(const std::string& name);
inline constexpr Identity kCesaroIdentities[] = {Identity::Symmetry, Identity::ZeroWeight, Identity::Scaling,
                                                 Identity::Merge,    Identity::Additivity, Identity::Composition};

struct IdentityReport {
  Identity which = Identity::Symmetry;
  int trials = 0;
  int failures = 0;
  std::string first_failure;
  /// Expression in the command-line syntax that evaluates to zero iff the reported instance holds;
  /// the shortest one among all failures.
  std::string replay;
};

namespace detail {

template <BracedModel M>
struct Drawn {
  typename M::Element x;
  std::vector<std::pair<typename M::Element, int>> args;
};

/// Random x and weighted arguments whose total weight stays within the cap; odd arguments get weight <= 1
/// outside characteristic 2. `slots` arguments are drawn.
template <BracedModel M>
Drawn<M> draw(const M& m, std::mt19937_64& rng, std::size_t slots, int budget) {
  const bool signed_ring = m.ring().characteristic() != 2;
  const int elem_cap = std::max(1, std::min(2, budget / static_cast<int>(slots + 1)));
  Drawn<M> d{m.random_homogeneous(rng, elem_cap), {}};
  int left = budget - m.weight(d.x);
  for (std::size_t i = 0; i < slots; ++i) {
    auto y = m.random_homogeneous(rng, elem_cap);
    const int w = std::max(1, m.weight(y));
    int r_max = std::max(0, std::min(2, left / w));
    if (signed_ring && (m.degree(y) & 1)) r_max = std::min(r_max, 1);
    const int r = r_max == 0 ? 0 : static_cast<int>(rng() % static_cast<unsigned>(r_max + 1));
    left -= r * w;
    d.args.emplace_back(std::move(y), r);
  }
  return d;
}

inline std::vector<int> expand_degrees(const std::vector<int>& degrees, const std::vector<int>& weights) {
  std::vector<int> out;
  for (std::size_t i = 0; i < degrees.size(); ++i)
    for (int k = 0; k < weights[i]; ++k) out.push_back(degrees[i]);
  return out;
}

}  // namespace detail

/// Checks one identity on `trials` random instances; both sides are evaluated exactly.
template <BracedModel M>
IdentityReport verify_identity(const M& m, Identity which, int trials, std::uint64_t seed) {
  using E = typename M::Element;
  std::mt19937_64 rng(seed);
  IdentityReport report{which, 0, 0, {}, {}};
  const bool signed_ring = m.ring().characteristic() != 2;
  // `what` is the left side written as an expression.
  auto fail = [&](const E& lhs, const E& rhs, const std::string& what) {
    ++report.failures;
    std::string replay = "(" + what + ") - (" + rhs.to_string() + ")";
    if (report.replay.empty() || replay.size() < report.replay.size()) {
      report.replay = std::move(replay);
      report.first_failure = what + ": " + lhs.to_string() + " != " + rhs.to_string();
    }
  };
  auto braced = [](const std::string& head, const std::vector<std::pair<E, int>>& args) {
    std::string s = "(" + head + "){", w;
    for (std::size_t i = 0; i < args.size(); ++i) {
      s += (i ? ",(" : "(") + args[i].first.to_string() + ")";
      w += (i ? "," : "") + std::to_string(args[i].second);
    }
    return s + "}_{" + w + "}";
  };
  auto describe = [&](const E& x, const std::vector<std::pair<E, int>>& args) { return braced(x.to_string(), args); };
  const int cap = m.cap();
  for (int trial = 0; trial < trials; ++trial) {
    ++report.trials;
    switch (which) {
      case Identity::Symmetry: {
        auto d = detail::draw(m, rng, 1 + rng() % 3, cap);
        const std::size_t n = d.args.size();
        auto p = Permutation::identity(static_cast<int>(n)).images();
        std::shuffle(p.begin(), p.end(), rng);
        std::vector<std::pair<E, int>> permuted;
        for (int i : p) permuted.push_back(d.args[static_cast<std::size_t>(i - 1)]);
        // Tokens of the permuted side go to the blocks of the natural order.
        std::vector<int> start(n, 0);
        for (std::size_t i = 1; i < n; ++i) start[i] = start[i - 1] + d.args[i - 1].second;
        std::vector<int> slots, degrees;
        for (int i : p) {
          const auto& [y, r] = d.args[static_cast<std::size_t>(i - 1)];
          for (int k = 0; k < r; ++k) {
            slots.push_back(start[static_cast<std::size_t>(i - 1)] + k);
            degrees.push_back(m.degree(y));
          }
        }
        const E lhs = m.brace(d.x, permuted);
        const E base = m.brace(d.x, d.args);
        const E rhs = token_sign(slots, degrees) < 0 ? m.zero() - base : base;
        if (!(lhs == rhs)) fail(lhs, rhs, describe(d.x, permuted));
        break;
      }
      case Identity::ZeroWeight: {
        auto d = detail::draw(m, rng, rng() % 3, cap);
        auto with = d.args;
        const auto pos = static_cast<long>(rng() % (with.size() + 1));
        with.insert(with.begin() + pos, {m.random_homogeneous(rng, 2), 0});
        const E lhs = m.brace(d.x, with), rhs = m.brace(d.x, d.args);
        if (!(lhs == rhs)) fail(lhs, rhs, describe(d.x, with));
        break;
      }
      case Identity::Scaling: {
        auto d = detail::draw(m, rng, 1 + rng() % 3, cap);
        const std::size_t i = rng() % d.args.size();
        const Scalar lambda = random_scalar(m.ring(), rng);
        auto scaled = d.args;
        scaled[i].first = scaled[i].first.scaled(lambda);
        const E lhs = m.brace(d.x, scaled);
        const E rhs = m.brace(d.x, d.args).scaled(lambda.pow(static_cast<unsigned>(d.args[i].second)));
        if (!(lhs == rhs)) fail(lhs, rhs, describe(d.x, scaled));
        break;
      }
      case Identity::Merge: {
        auto d = detail::draw(m, rng, 1 + rng() % 2, cap);
        const std::size_t i = rng() % d.args.size();
        const auto [y, r] = d.args[i];
        int r1 = r == 0 ? 0 : static_cast<int>(rng() % static_cast<unsigned>(r + 1));
        if (signed_ring && (m.degree(y) & 1)) r1 = r;  // odd elements keep a total weight of at most 1
        auto split = d.args;
        split[i].second = r1;
        split.insert(split.begin() + static_cast<long>(i) + 1, {y, r - r1});
        const E lhs = m.brace(d.x, split);
        const E rhs = m.brace(d.x, d.args).scaled(Scalar::from_integer(static_cast<long long>(multinomial({r1, r - r1})), m.ring()));
        if (!(lhs == rhs)) fail(lhs, rhs, describe(d.x, split));
        break;
      }
      case Identity::Additivity: {
        auto d = detail::draw(m, rng, 1 + rng() % 2, cap);
        const std::size_t i = rng() % d.args.size();
        const auto& [y, r] = d.args[i];
        // A second summand of the same degree.
        E other = m.random_homogeneous(rng, std::max(1, m.weight(y)));
        for (int attempt = 0; attempt < 20 && m.degree(other) != m.degree(y); ++attempt)
          other = m.random_homogeneous(rng, std::max(1, m.weight(y)));
        if (m.degree(other) != m.degree(y)) other = y.scaled(random_scalar(m.ring(), rng));
        auto summed = d.args;
        summed[i].first = y + other;
        const E lhs = m.brace(d.x, summed);
        E rhs = m.zero();
        for (int s = 0; s <= r; ++s) {
          auto split = d.args;
          split[i].second = s;
          split.insert(split.begin() + static_cast<long>(i) + 1, {other, r - s});
          rhs = rhs + m.brace(d.x, split);
        }
        if (!(lhs == rhs)) fail(lhs, rhs, describe(d.x, summed));
        break;
      }
      case Identity::Composition: {
        const std::size_t n = rng() % 3, mz = rng() % 3;
        auto d = detail::draw(m, rng, n + mz, cap);
        std::vector<std::pair<E, int>> ys(d.args.begin(), d.args.begin() + static_cast<long>(n));
        std::vector<std::pair<E, int>> zs(d.args.begin() + static_cast<long>(n), d.args.end());
        const E lhs = m.brace(m.brace(d.x, ys), zs);
        const E rhs = rhs_vi_integral(m, d.x, ys, zs);
        if (!(lhs == rhs)) fail(lhs, rhs, braced(describe(d.x, ys), zs));
        break;
      }
      case Identity::Leibniz: {
        if (!m.has_differential()) break;
        auto d = detail::draw(m, rng, rng() % 3, cap);
        const E lhs = m.differentiate(m.brace(d.x, d.args));
        E rhs = m.brace(m.differentiate(d.x), d.args);
        int eps = m.degree(d.x);
        for (std::size_t k = 0; k < d.args.size(); ++k) {
          const auto& [y, r] = d.args[k];
          if (r >= 1) {
            auto with = d.args;
            with[k].second = r - 1;
            with.insert(with.begin() + static_cast<long>(k) + 1, {m.differentiate(y), 1});
            const E term = m.brace(d.x, with);
            rhs = (eps & 1) ? rhs - term : rhs + term;
          }
          eps += r * m.degree(y);
        }
        if (!(lhs == rhs)) fail(lhs, rhs, "d(" + describe(d.x, d.args) + ")");
        const E dd = m.differentiate(m.differentiate(d.x));
        if (!(dd == m.zero())) fail(dd, m.zero(), "d(d(" + d.x.to_string() + "))");
        break;
      }
    }
  }
  return report;
}

}  // namespace gpl
