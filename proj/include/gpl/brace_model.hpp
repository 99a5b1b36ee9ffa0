#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gpl/ring.hpp"

namespace gpl {

/// Element of the arity-capped associative operad: coefficient of mu_n for n = 1..cap.
class NsElement {
 public:
  NsElement(Ring ring, int cap);

  const Ring& ring() const { return ring_; }
  int cap() const { return static_cast<int>(coefficients_.size()); }
  const Scalar& coefficient(int arity) const { return coefficients_[static_cast<std::size_t>(arity - 1)]; }
  /// Drops contributions above the cap.
  void add(int arity, const Scalar& c);
  bool is_zero() const;
  /// Largest arity with a nonzero coefficient, 0 for zero.
  int top_arity() const;

  NsElement operator+(const NsElement& b) const;
  NsElement operator-(const NsElement& b) const;
  NsElement scaled(const Scalar& s) const;
  friend bool operator==(const NsElement& a, const NsElement& b);
  std::string to_string() const;

 private:
  Ring ring_;
  std::vector<Scalar> coefficients_;
};

/// The brace algebra of the non-symmetric associative operad As (all operations in degree 0),
/// with weighted braces obtained from the shuffle-sum formula. ModelMismatch on foreign elements.
class AsOperadModel {
 public:
  using Element = NsElement;
  AsOperadModel(Ring ring, int arity_cap);

  const Ring& ring() const { return ring_; }
  int cap() const { return cap_; }
  Element zero() const { return NsElement(ring_, cap_); }
  Element mu(int arity) const;

  /// p<q_1,...,q_n>: each q_i inserted at increasing positions of p.
  Element insert(const Element& p, const std::vector<Element>& qs) const;
  /// f{g_1..g_n}_{r_1..r_n} = sum over Sh(r_1..r_n) of f<g_sigma^{-1}(1), ...>.
  Element brace(const Element& f, const std::vector<std::pair<Element, int>>& args) const;
  Element differentiate(const Element&) const { return zero(); }
  bool has_differential() const { return false; }
  int degree(const Element&) const { return 0; }
  int weight(const Element& x) const { return x.top_arity(); }
  Element random_homogeneous(std::mt19937_64& rng, int max_weight) const;

 private:
  void check(const Element& x) const;
  Ring ring_;
  int cap_;
};

/// Cross-check path: the weighted brace of the model computed through its brace operations.
NsElement brace_via_brace_algebra(const AsOperadModel& model, const NsElement& f, const std::vector<NsElement>& gs,
                                  const std::vector<int>& rs);

}  // namespace gpl
