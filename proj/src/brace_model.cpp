#include "gpl/brace_model.hpp"

#include <functional>

#include "gpl/error.hpp"
#include "gpl/perm.hpp"

namespace gpl {

NsElement::NsElement(Ring ring, int cap) : ring_(std::move(ring)) {
  if (cap < 1) raise(Errc::ConfigError, "arity cap must be at least 1");
  coefficients_.assign(static_cast<std::size_t>(cap), Scalar::zero(ring_));
}

void NsElement::add(int arity, const Scalar& c) {
  if (arity < 1) raise(Errc::BadIndex, "arity " + std::to_string(arity));
  if (arity > cap()) return;
  coefficients_[static_cast<std::size_t>(arity - 1)] += c;
}

bool NsElement::is_zero() const { return top_arity() == 0; }

int NsElement::top_arity() const {
  for (int n = cap(); n >= 1; --n)
    if (!coefficient(n).is_zero()) return n;
  return 0;
}

NsElement NsElement::operator+(const NsElement& b) const {
  if (!(ring_ == b.ring_) || cap() != b.cap()) raise(Errc::ModelMismatch, "operad elements of different models");
  NsElement out = *this;
  for (int n = 1; n <= cap(); ++n) out.add(n, b.coefficient(n));
  return out;
}

NsElement NsElement::operator-(const NsElement& b) const { return *this + b.scaled(-Scalar::one(ring_)); }

NsElement NsElement::scaled(const Scalar& s) const {
  NsElement out(ring_, cap());
  for (int n = 1; n <= cap(); ++n) out.add(n, coefficient(n) * s);
  return out;
}

bool operator==(const NsElement& a, const NsElement& b) { return a.ring_ == b.ring_ && a.coefficients_ == b.coefficients_; }

std::string NsElement::to_string() const {
  std::string out;
  for (int n = 1; n <= cap(); ++n) {
    const Scalar& c = coefficient(n);
    if (c.is_zero()) continue;
    if (!out.empty()) out += " + ";
    const std::string s = c.to_string();
    out += (s == "1" ? "" : (c.is_compound() ? "(" + s + ")" : s) + "*") + "mu" + std::to_string(n);
  }
  return out.empty() ? "0" : out;
}

AsOperadModel::AsOperadModel(Ring ring, int arity_cap) : ring_(std::move(ring)), cap_(arity_cap) {
  if (cap_ < 1) raise(Errc::ConfigError, "arity cap must be at least 1");
}

void AsOperadModel::check(const Element& x) const {
  if (!(x.ring() == ring_) || x.cap() != cap_) raise(Errc::ModelMismatch, "element of another operad model");
}

NsElement AsOperadModel::mu(int arity) const {
  NsElement out = zero();
  out.add(arity, Scalar::one(ring_));
  return out;
}

NsElement AsOperadModel::insert(const Element& p, const std::vector<Element>& qs) const {
  check(p);
  for (const auto& q : qs) check(q);
  NsElement out = zero();
  const long long n = static_cast<long long>(qs.size());
  // mu_a<mu_b1,...,mu_bn> = C(a, n) mu_{a + sum(b_i - 1)}: one term per increasing choice of positions.
  std::vector<int> arities;
  std::function<void(std::size_t, const Scalar&)> rec = [&](std::size_t k, const Scalar& coef) {
    if (k == qs.size()) {
      for (int a = 1; a <= cap_; ++a) {
        if (p.coefficient(a).is_zero() || a < n) continue;
        int arity = a;
        for (int b : arities) arity += b - 1;
        const auto positions = static_cast<long long>(multinomial({static_cast<int>(n), a - static_cast<int>(n)}));
        out.add(arity, p.coefficient(a) * coef * Scalar::from_integer(positions, ring_));
      }
      return;
    }
    for (int b = 1; b <= cap_; ++b) {
      if (qs[k].coefficient(b).is_zero()) continue;
      arities.push_back(b);
      rec(k + 1, coef * qs[k].coefficient(b));
      arities.pop_back();
    }
  };
  rec(0, Scalar::one(ring_));
  return out;
}

NsElement AsOperadModel::brace(const Element& f, const std::vector<std::pair<Element, int>>& args) const {
  std::vector<Element> flat;
  std::vector<int> blocks;
  for (const auto& [g, r] : args) {
    if (r < 0) raise(Errc::BadIndex, "negative weight");
    blocks.push_back(r);
    for (int k = 0; k < r; ++k) flat.push_back(g);
  }
  if (flat.empty()) {
    check(f);
    return f;
  }
  NsElement out = zero();
  // All operations sit in degree 0, so every shuffle contributes with sign +1.
  for (const auto& sigma : shuffles(blocks)) {
    std::vector<Element> ordered(flat.size(), zero());
    for (int i = 1; i <= sigma.size(); ++i) ordered[static_cast<std::size_t>(sigma(i) - 1)] = flat[static_cast<std::size_t>(i - 1)];
    out = out + insert(f, ordered);
  }
  return out;
}

NsElement AsOperadModel::random_homogeneous(std::mt19937_64& rng, int max_weight) const {
  max_weight = std::max(1, std::min(max_weight, cap_));
  NsElement out = zero();
  while (out.is_zero()) {
    const int terms = 1 + static_cast<int>(rng() % 2);
    for (int k = 0; k < terms; ++k) {
      const int arity = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_weight));
      out.add(arity, Scalar::from_integer(static_cast<long long>(rng() % 5) - 2, ring_));
    }
  }
  return out;
}

NsElement brace_via_brace_algebra(const AsOperadModel& model, const NsElement& f, const std::vector<NsElement>& gs,
                                  const std::vector<int>& rs) {
  if (gs.size() != rs.size()) raise(Errc::SizeMismatch, "one weight per argument");
  std::vector<std::pair<NsElement, int>> args;
  for (std::size_t i = 0; i < gs.size(); ++i) args.emplace_back(gs[i], rs[i]);
  return model.brace(f, args);
}

}  // namespace gpl
