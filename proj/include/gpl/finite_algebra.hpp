#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gpl/algebra.hpp"
#include "gpl/linalg.hpp"
#include "gpl/ring.hpp"

namespace gpl {

struct BasisVector {
  std::string name;
  int degree = 0;
  int weight = 1;  // filtration weight, at least 1
};

/// Sparse column: (basis index, coefficient in F_p).
using SparseColumn = std::vector<std::pair<int, std::int64_t>>;

/// A finite-dimensional braced algebra over F_p presented on a basis: the differential as columns
/// and the weighted braces through structure constants on basis elements.
class FiniteAlgebra {
 public:
  /// Constants of head{b_1..b_k}_{r_1..r_k} for basis indices (slot order preserved, repeats allowed).
  using BraceRule = std::function<SparseColumn(int head, const std::vector<std::pair<int, int>>& args)>;

  FiniteAlgebra(std::int64_t p, std::vector<BasisVector> basis, std::vector<SparseColumn> differential, BraceRule rule);

  /// Classes of the truncated free algebra of spec (ring F_p), in canonical order.
  static std::shared_ptr<const FiniteAlgebra> truncated_free(const SpecPtr& spec);
  /// All braces vanish.
  static std::shared_ptr<const FiniteAlgebra> abelian(std::int64_t p, std::vector<BasisVector> basis,
                                                      std::vector<SparseColumn> differential);
  /// Componentwise structure on a (+) b: braces mixing the summands vanish.
  static std::shared_ptr<const FiniteAlgebra> direct_sum(const std::shared_ptr<const FiniteAlgebra>& a,
                                                         const std::shared_ptr<const FiniteAlgebra>& b);

  std::int64_t prime() const { return p_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const BasisVector& basis(int i) const { return basis_[static_cast<std::size_t>(i)]; }
  int max_weight() const { return max_weight_; }
  bool signed_ring() const { return p_ != 2; }
  const SparseColumn& differential(int i) const { return differential_[static_cast<std::size_t>(i)]; }
  bool has_differential() const;
  /// Memoized structure constants.
  const SparseColumn& brace_constants(int head, const std::vector<std::pair<int, int>>& args) const;
  /// Basis indices of one degree, ascending.
  std::vector<int> indices_of_degree(int degree) const;
  /// The underlying cochain complex, with degree k spanned by indices_of_degree(k).
  CochainComplex complex() const;
  /// Tree of a truncated_free basis element; BadIndex for other presentations.
  const DecoratedTree& tree(int i) const;

 private:
  std::int64_t p_;
  std::vector<BasisVector> basis_;
  std::vector<SparseColumn> differential_;
  BraceRule rule_;
  int max_weight_ = 1;
  std::vector<DecoratedTree> trees_;
  mutable std::mutex mutex_;
  mutable std::map<std::vector<int>, std::unique_ptr<SparseColumn>> cache_;
};

using FiniteAlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

/// Element of L (x) R for a finite algebra L over F_p and coefficients R = F_p or F_p[t]/(t^N).
class FiniteElement {
 public:
  FiniteElement(FiniteAlgebraPtr algebra, Ring coefficients);

  const FiniteAlgebraPtr& algebra() const { return algebra_; }
  const Ring& ring() const { return ring_; }
  const Scalar& coefficient(int i) const { return coefficients_[static_cast<std::size_t>(i)]; }
  void add(int i, const Scalar& c);
  bool is_zero() const;
  /// Degree if homogeneous and nonzero.
  std::optional<int> degree() const;

  FiniteElement operator+(const FiniteElement& b) const;
  FiniteElement operator-(const FiniteElement& b) const;
  FiniteElement scaled(const Scalar& s) const;
  friend bool operator==(const FiniteElement& a, const FiniteElement& b);
  std::string to_string() const;

 private:
  FiniteAlgebraPtr algebra_;
  Ring ring_;
  std::vector<Scalar> coefficients_;
};

/// L (x) R as a braced algebra; with local R the braces multiply the artinian coordinates.
class FiniteModel {
 public:
  using Element = FiniteElement;
  /// coefficients must be F_p or F_p[t]/(t^N) with p the prime of the algebra.
  FiniteModel(FiniteAlgebraPtr algebra, Ring coefficients);

  const FiniteAlgebraPtr& algebra() const { return algebra_; }
  const Ring& ring() const { return ring_; }
  bool local() const { return ring_.is_local(); }
  /// N for F_p[t]/(t^N), 1 for F_p itself.
  int nilpotency() const { return local() ? ring_.nilpotency() : 1; }
  Element zero() const { return FiniteElement(algebra_, ring_); }
  Element basis(int i, const Scalar& c) const;
  Element basis(int i) const { return basis(i, Scalar::one(ring_)); }

  Element brace(const Element& x, const std::vector<std::pair<Element, int>>& args) const;
  Element differentiate(const Element& x) const;
  bool has_differential() const { return algebra_->has_differential(); }
  int degree(const Element& x) const { return x.degree().value_or(0); }
  std::optional<int> homogeneous_degree(const Element& x) const { return x.degree(); }
  /// Largest basis weight in the support.
  int weight(const Element& x) const;
  int cap() const { return algebra_->max_weight(); }
  int series_bound() const;
  Element random_homogeneous(std::mt19937_64& rng, int max_weight) const;
  /// Random element of degree k with coefficients in the maximal ideal (all of R when R is a field).
  Element random_small(std::mt19937_64& rng, int degree) const;

  // Enumeration over F_p: the F_p-basis of (L (x) m)^k when local, of L^k otherwise.
  std::int64_t prime() const { return algebra_->prime(); }
  std::vector<Element> linear_basis(int degree) const;
  std::vector<std::int64_t> coordinates(const Element& x, int degree) const;
  Element from_coordinates(const std::vector<std::int64_t>& coords, int degree) const;

  /// Coefficientwise ring change along R -> R'.
  Element change_coefficients(const Element& x, const FiniteModel& target) const;
  /// Lift along F_p[t]/(t^M) -> F_p[t]/(t^N) for M <= N, t^k -> t^k.
  Element lift_coefficients(const Element& x, const FiniteModel& target) const;

 private:
  void check(const Element& x) const;
  FiniteAlgebraPtr algebra_;
  Ring ring_;
};

/// Linear map between finite algebras given by images of basis vectors.
struct FiniteMorphism {
  FiniteAlgebraPtr source, target;
  std::vector<SparseColumn> images;

  FiniteElement apply(const FiniteElement& x, const FiniteModel& target_model) const;
  /// F_p matrices per degree, for induced maps in cohomology.
  std::map<int, ModMatrix> degree_matrices() const;
  /// Checks d f = f d and f(x{y}) = f(x){f(y)} on basis braces up to total weight max_weight.
  bool is_morphism(int max_weight) const;
};

/// The inclusion of the first summand into direct_sum(a, b).
FiniteMorphism summand_inclusion(const FiniteAlgebraPtr& a, const FiniteAlgebraPtr& sum);

/// Embed an element of the free algebra into its truncated_free presentation.
FiniteElement to_finite(const AlgebraElement& x, const FiniteModel& model);

}  // namespace gpl
