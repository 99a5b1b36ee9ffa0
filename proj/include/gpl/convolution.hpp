#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gpl/deligne.hpp"
#include "gpl/finite_algebra.hpp"
#include "gpl/linalg.hpp"
#include "gpl/perm.hpp"
#include "json.hpp"

namespace gpl {

/// Sparse vector over F_p: (basis index, coefficient in [0, p)).
using SparseVector = std::vector<std::pair<int, std::int64_t>>;

/// Arity profile (i_1, ..., i_k) of a two-level composite.
using Profile = std::vector<int>;

/// Arity-capped symmetric sequence of finite graded F_p-spaces. Arity 1 may be anything here;
/// operads and cooperads require it to be F_p in degree 0.
class SymmetricSequence {
 public:
  struct Component {
    std::vector<std::string> names;
    std::vector<int> degrees;
    /// Matrices of the adjacent transpositions s_1, ..., s_{n-1} (columns are images of basis vectors).
    std::vector<ModMatrix> transpositions;
    /// Square, degree +1; empty (0x0) means zero.
    std::optional<ModMatrix> differential;
  };

  /// components[n-1] is arity n. NotEquivariant if the generators do not define a Sigma_n action or
  /// d does not commute with it; NotAComplex if d^2 != 0 or d does not raise degree by one.
  SymmetricSequence(std::int64_t p, std::vector<Component> components);

  std::int64_t prime() const { return p_; }
  int cap() const { return static_cast<int>(components_.size()); }
  int dim(int n) const;
  int degree(int n, int i) const { return component(n).degrees[static_cast<std::size_t>(i)]; }
  const std::string& name(int n, int i) const { return component(n).names[static_cast<std::size_t>(i)]; }
  const std::vector<int>& degrees(int n) const { return component(n).degrees; }
  /// Matrix of sigma acting on arity n; left action.
  const ModMatrix& action(int n, const Permutation& sigma) const;
  const ModMatrix& differential(int n) const { return differentials_[static_cast<std::size_t>(n - 1)]; }
  bool has_differential() const;
  const Component& component(int n) const;

  /// Trivial (or sign) representation on one vector of the given degree.
  static Component trivial(std::int64_t p, int n, const std::string& name, int degree, bool sign = false);
  /// K[Sigma_n] with basis ordered as all_permutations(n) and sigma.tau = sigma tau.
  static Component regular(std::int64_t p, int n, const std::string& prefix, int degree);
  /// Direct sum of components of the same arity; the differential is block diagonal.
  static Component sum(std::int64_t p, int n, const std::vector<Component>& parts);

 private:
  std::int64_t p_;
  std::vector<Component> components_;
  std::vector<std::map<Permutation, ModMatrix>> actions_;
  std::vector<ModMatrix> differentials_;
};

/// One basis vector x (x) y_1 (x) ... (x) y_k (x) omega of (M o N)(n), omega a pointed shuffle of the profile.
struct CompositeBasis {
  Profile profile;
  int x = 0;
  std::vector<int> ys;
  Permutation shuffle;
  int degree = 0;
};

/// Quotient-free basis of (M o N)(n) indexed by pointed shuffles. CapExceeded past either cap.
std::vector<CompositeBasis> compose_product(const SymmetricSequence& m, const SymmetricSequence& n, int arity);

/// Operad with P(0) = 0, P(1) = F_p: compositions gamma(x; y_1..y_k) for the identity shuffle.
class OperadData {
 public:
  /// Per profile: one column over P(sum i_j) for every (x, y_1..y_k) in mixed radix, x most significant.
  /// Unit profiles (n) and (1,...,1) are filled in when absent.
  OperadData(SymmetricSequence seq, std::map<Profile, std::vector<SparseVector>> composition);

  const SymmetricSequence& sequence() const { return seq_; }
  std::int64_t prime() const { return seq_.prime(); }
  int cap() const { return seq_.cap(); }
  /// gamma(x; ys) with the identity shuffle; zero for an unknown profile.
  SparseVector compose(const Profile& profile, int x, const std::vector<int>& ys) const;
  /// Unit, equivariance, associativity and compatibility with d, all within the cap.
  /// Throws NotEquivariant, InternalInvariant or NotAComplex naming the first failure.
  void validate() const;

  std::map<Profile, std::vector<SparseVector>> const& table() const { return table_; }

 private:
  SymmetricSequence seq_;
  std::map<Profile, std::vector<SparseVector>> table_;
};

/// One term coefficient * x (x) y_1 .. y_k (x) omega of a decomposition.
struct CoTerm {
  std::int64_t coefficient = 1;
  Profile profile;
  int x = 0;
  std::vector<int> ys;
  Permutation shuffle;
};

/// Conilpotent cooperad with C(0) = 0, C(1) = F_p, given by the full decomposition of every basis vector.
class CooperadData {
 public:
  /// decomposition[n-1][c] lists Delta(c); counit terms 1 (x) c and c (x) (1..1) are added when missing.
  CooperadData(SymmetricSequence seq, std::vector<std::vector<std::vector<CoTerm>>> decomposition);

  const SymmetricSequence& sequence() const { return seq_; }
  std::int64_t prime() const { return seq_.prime(); }
  int cap() const { return seq_.cap(); }
  const std::vector<CoTerm>& decompose(int n, int c) const;
  /// Delta_(k) for k >= 1: terms with x and exactly k of the y's outside arity 1, all other y's units.
  /// Delta_(0): the counit terms. Zero when k > n - 1. CapExceeded for n past the cap.
  std::vector<CoTerm> infinitesimal_decompose(int n, int c, int k) const;
  /// True when every decomposition is counit terms only.
  bool primitive() const;
  /// Counit, equivariance of Delta along pointed shuffles, and coassociativity through the dual operad.
  void validate() const;

 private:
  SymmetricSequence seq_;
  std::vector<std::vector<std::vector<CoTerm>>> delta_;
};

using OperadPtr = std::shared_ptr<const OperadData>;
using CooperadPtr = std::shared_ptr<const CooperadData>;

/// Arity-wise linear dual with transposed structure maps (degrees negate, Koszul pairing signs).
CooperadData dual_cooperad(const OperadData& p);
OperadData dual_operad(const CooperadData& c);

// ---------------------------------------------------------------- built-in data
/// Finite graded commutative algebra with unit basis vector 0, used as coefficients of Com.
struct CommutativeAlgebra {
  std::vector<std::string> names;
  std::vector<int> degrees;
  /// product[i][j] = e_i e_j.
  std::vector<std::vector<SparseVector>> product;
  std::vector<SparseVector> differential;

  /// Exterior algebra on g generators of degree 1.
  static CommutativeAlgebra exterior(std::int64_t p, int g);
  /// F_p (+) V with V a complex and V.V = 0; v_degrees and v_differential describe V.
  static CommutativeAlgebra square_zero(std::int64_t p, std::vector<int> v_degrees, std::vector<SparseVector> v_differential);
};

OperadData associative_operad(std::int64_t p, int cap);
OperadData commutative_operad(std::int64_t p, int cap);
/// P(1) = F_p, P(n) = 0 for n >= 2.
OperadData unit_operad(std::int64_t p, int cap);
/// Com (x) A: P(n) = A with trivial action and gamma(a; b_1..b_k) = a b_1 ... b_k.
OperadData commutative_operad(std::int64_t p, int cap, const CommutativeAlgebra& a);
/// Arity-wise tensor product with diagonal action.
OperadData hadamard(const OperadData& a, const OperadData& b);
/// Decomposition made of counit terms only, on any sequence with C(1) = F_p.
CooperadData primitive_cooperad(SymmetricSequence seq);
/// Member `variant` of the primitive family: in arity n, trivial (+) sign in degree -1 and a trivial
/// vector in degree 0, with d(trivial) = that vector when bit n-2 of variant is set.
CooperadData primitive_family(std::int64_t p, int cap, unsigned variant);

/// Names understood by the front end: as, com, unit, com_exterior<g>, as_exterior<g>, com_square_zero.
OperadPtr operad_by_name(const std::string& name, std::int64_t p, int cap);
/// as_dual, com_dual, com_exterior<g>_dual, as_exterior<g>_dual, primitive<variant>.
CooperadPtr cooperad_by_name(const std::string& name, std::int64_t p, int cap);
/// {"prime","arity_cap","components":[{"arity","basis":[{"name","degree"}],"action":[matrices],
///  "differential":matrix}],"composition":[{"profile":[k,[i..]],"matrix":rows}]}
OperadPtr operad_from_json(const nlohmann::json& j);
/// Same components; "decomposition":[{"profile":[k,[i..]],"matrix":rows}] with rows indexed by
/// (x, y.., shuffle) in mixed radix and columns by C(n); or "primitive": true.
CooperadPtr cooperad_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------- convolution
/// Per-arity matrices P(n) x C(n) for n = 1..cap, not necessarily equivariant or homogeneous.
struct HomElement {
  std::vector<ModMatrix> parts;
  const ModMatrix& at(int n) const { return parts[static_cast<std::size_t>(n - 1)]; }
  ModMatrix& at(int n) { return parts[static_cast<std::size_t>(n - 1)]; }
  friend bool operator==(const HomElement&, const HomElement&) = default;
};

struct McCertificate {
  bool certified = false;
  HomElement residual;
  std::optional<int> first_failing_arity;
};

struct HomotopyCertificate {
  bool holds = false;
  HomElement residual;  // d(lambda) - alpha - lambda{alpha}_1 + beta (.) (1 + lambda)
  std::optional<int> first_failing_arity;
};

struct Pi0Report {
  GroupoidReport groupoid;
  int arity_cap = 0;
  bool cofibrancy_asserted = false;  // recorded, never checked
  nlohmann::json to_json() const;
};

/// Hom_Sigma(C-bar, P-bar) with its braces, over F_p, one cohomological convention throughout.
class Convolution {
 public:
  /// RingMismatch for different primes, CapExceeded for different caps.
  Convolution(CooperadPtr c, OperadPtr p);

  const CooperadData& cooperad() const;
  const OperadData& operad() const;
  int cap() const { return operad().cap(); }
  std::int64_t prime() const { return operad().prime(); }
  /// Invariant maps on a basis: weight n-1 in arity n, degree |p| - |c|; braces from the shuffle formula.
  const FiniteAlgebraPtr& algebra() const { return algebra_; }
  FiniteModel model() const { return FiniteModel(algebra_, Ring::prime_field(prime())); }

  HomElement zero() const;
  HomElement unit() const;  // 1 on C(1), zero elsewhere
  HomElement add(const HomElement& a, const HomElement& b) const;
  HomElement scale(const HomElement& a, std::int64_t s) const;
  HomElement to_hom(const FiniteElement& x) const;
  /// NotEquivariant if some part is not invariant; ArityMismatch if the arity-1 part is nonzero.
  FiniteElement to_element(const HomElement& f) const;
  bool is_equivariant(const HomElement& f) const;
  std::optional<int> degree(const HomElement& f) const;
  /// d(f) = d_P f - (-1)^|f| f d_C, entrywise in degree.
  HomElement differential(const HomElement& f) const;

  /// Through the algebra: basis constants from the shuffle formula, extended to sums.
  HomElement hom_brace(const HomElement& f, const std::vector<std::pair<HomElement, int>>& args) const;
  /// gamma_(k) o (f o_(k) g) o Delta_(k), evaluated directly; f for k = 0.
  HomElement hom_brace_one_input(const HomElement& f, const HomElement& g, int k) const;
  /// Delta, then a o g, then gamma; g must be 1 on C(1) (NotUnital).
  HomElement composite(const HomElement& a, const HomElement& g) const;
  /// Both arguments unital (NotUnital otherwise).
  HomElement circ_full(const HomElement& f, const HomElement& g) const;

  /// d(alpha) + alpha{alpha}_1 with the brace from the composite; DegreeError unless degree 1.
  McCertificate mc_certificate(const HomElement& alpha) const;
  /// NotMaurerCartan unless alpha and beta are certified; DegreeError unless lambda has degree 0.
  HomotopyCertificate homotopy_certificate(const HomElement& alpha, const HomElement& beta, const HomElement& lambda) const;
  Pi0Report pi0(const DeligneOptions& options = {}, bool cofibrancy_asserted = false) const;

  HomElement random_element(std::mt19937_64& rng, int degree) const;
  /// Brace constants of basis vectors by the shuffle formula.
  SparseColumn basis_brace(int head, const std::vector<std::pair<int, int>>& args) const;

 private:
  struct Core;
  std::shared_ptr<const Core> core_;
  FiniteAlgebraPtr algebra_;
};

}  // namespace gpl
