#pragma once

#include <optional>
#include <vector>

#include "gpl/error.hpp"
#include "gpl/identities.hpp"
#include "gpl/tree.hpp"

namespace gpl {

/// A braced algebra whose gauge series terminate: a{mu}_n vanishes for n > series_bound()
/// whenever mu has positive filtration weight.
template <class M>
concept GaugeModel = BracedModel<M> && requires(const M& m, const typename M::Element& e) {
  { m.series_bound() } -> std::convertible_to<int>;
  { m.homogeneous_degree(e) } -> std::same_as<std::optional<int>>;
};

// Gauge elements 1 + mu are carried by mu alone.

namespace detail {

template <GaugeModel M>
void require_degree(const M& m, const typename M::Element& x, int degree, const char* what) {
  if (x == m.zero()) return;
  const auto d = m.homogeneous_degree(x);
  if (!d || *d != degree) raise(Errc::DegreeError, std::string(what) + " must be homogeneous of degree " + std::to_string(degree));
}

}  // namespace detail

/// a (.) (1+mu) = sum_n a{mu}_n.
template <GaugeModel M>
typename M::Element circ(const M& m, const typename M::Element& a, const typename M::Element& mu) {
  detail::require_degree(m, mu, 0, "gauge element");
  auto out = a;
  for (int n = 1; n <= m.series_bound(); ++n) out = out + m.brace(a, {{mu, n}});
  return out;
}

/// a (.) (1+mu; beta) = sum_n a{mu, beta}_{n,1}.
template <GaugeModel M>
typename M::Element circ_pointed(const M& m, const typename M::Element& a, const typename M::Element& mu,
                                 const typename M::Element& beta) {
  detail::require_degree(m, mu, 0, "gauge element");
  auto out = m.zero();
  for (int n = 0; n <= m.series_bound(); ++n) out = out + m.brace(a, {{mu, n}, {beta, 1}});
  return out;
}

/// (1+mu) (.) (1+nu) = 1 + nu + mu (.) (1+nu); returns the part in L.
template <GaugeModel M>
typename M::Element gauge_product(const M& m, const typename M::Element& mu, const typename M::Element& nu) {
  detail::require_degree(m, mu, 0, "gauge element");
  return nu + circ(m, mu, nu);
}

/// Nested brace evaluation of an undecorated tree with every vertex carrying mu;
/// isomorphic children are grouped into one weighted slot.
template <GaugeModel M>
typename M::Element ot_eval(const M& m, const DecoratedTree& t, const typename M::Element& mu) {
  detail::require_degree(m, mu, 0, "tree input");
  if (t.empty()) raise(Errc::BadVertex, "empty tree");
  const auto children = t.children();
  std::vector<std::pair<typename M::Element, int>> slots;
  const auto& kids = children[0];
  for (std::size_t i = 0; i < kids.size();) {
    const auto sub = t.subtree(kids[i]);
    std::size_t j = i + 1;
    while (j < kids.size() && t.subtree(kids[j]) == sub) ++j;
    slots.emplace_back(ot_eval(m, sub, mu), static_cast<int>(j - i));
    i = j;
  }
  return m.brace(mu, slots);
}

/// Inverse of 1+mu by the tree sum: (1 - nu)^{-1} = 1 + sum over rooted trees of O_t(nu) with nu = -mu.
template <GaugeModel M>
typename M::Element gauge_inverse(const M& m, const typename M::Element& mu) {
  detail::require_degree(m, mu, 0, "gauge element");
  const auto nu = m.zero() - mu;
  auto out = m.zero();
  const auto trees = enumerate_unlabeled(m.series_bound() + 1);
  for (const auto& by_size : trees)
    for (const auto& t : by_size) out = out + ot_eval(m, t, nu);
  return out;
}

/// Oracle: solve (1+mu) (.) (1+x) = 1 one filtration step at a time, x = -mu (.) (1+x).
template <GaugeModel M>
typename M::Element gauge_inverse_solve(const M& m, const typename M::Element& mu) {
  detail::require_degree(m, mu, 0, "gauge element");
  auto x = m.zero();
  for (int step = 0; step <= m.series_bound() + 1; ++step) {
    auto next = m.zero() - circ(m, mu, x);
    if (next == x) return x;
    x = next;
  }
  return x;
}

/// d(alpha) + alpha{alpha}_1.
template <GaugeModel M>
typename M::Element mc_residual(const M& m, const typename M::Element& alpha) {
  detail::require_degree(m, alpha, 1, "Maurer-Cartan candidate");
  return m.differentiate(alpha) + m.brace(alpha, {{alpha, 1}});
}

template <GaugeModel M>
bool is_mc(const M& m, const typename M::Element& alpha) {
  return mc_residual(m, alpha) == m.zero();
}

/// (1+mu).alpha = (alpha + mu{alpha}_1 - d(mu)) (.) (1+mu)^{-1}. NotMaurerCartan unless alpha is MC.
template <GaugeModel M>
typename M::Element gauge_act(const M& m, const typename M::Element& mu, const typename M::Element& alpha,
                              bool check = true) {
  detail::require_degree(m, mu, 0, "gauge element");
  if (check && !is_mc(m, alpha)) raise(Errc::NotMaurerCartan, "gauge action on a non-MC element");
  const auto shifted = alpha + m.brace(mu, {{alpha, 1}}) - m.differentiate(mu);
  return circ(m, shifted, gauge_inverse(m, mu));
}

}  // namespace gpl
