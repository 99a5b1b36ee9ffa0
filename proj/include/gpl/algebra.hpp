#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gpl/ring.hpp"
#include "gpl/tree.hpp"

namespace gpl {

struct Generator {
  std::string name;
  int degree = 0;
};

/// Linear combination of generators, the image of one generator under d.
using LinearTerms = std::vector<std::pair<GeneratorId, Scalar>>;

class BraceCache;

/// Free complete algebra on graded generators, truncated above weight_cap vertices.
/// Immutable once built; shared by every element living in it.
class AlgebraSpec {
 public:
  /// Checks names, the degree of d and d^2 = 0 on generators (NotAComplexSpec).
  AlgebraSpec(Ring ring, std::vector<Generator> generators, int weight_cap,
              std::map<GeneratorId, LinearTerms> differential = {});
  ~AlgebraSpec();
  AlgebraSpec(const AlgebraSpec&) = delete;
  AlgebraSpec& operator=(const AlgebraSpec&) = delete;

  static std::shared_ptr<const AlgebraSpec> make(Ring ring, std::vector<Generator> generators, int weight_cap,
                                                 std::map<GeneratorId, LinearTerms> differential = {});
  static std::shared_ptr<const AlgebraSpec> from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const Ring& ring() const { return ring_; }
  const std::vector<Generator>& generators() const { return generators_; }
  const std::vector<int>& degrees() const { return degrees_; }
  /// Degrees used for signs: all even in characteristic 2.
  const std::vector<int>& sign_degrees() const { return sign_degrees_; }
  int weight_cap() const { return weight_cap_; }
  bool signed_ring() const { return ring_.characteristic() != 2; }
  /// -1 when unknown.
  GeneratorId find(const std::string& name) const;
  GeneratorId id(const std::string& name) const;  // UnknownGenerator
  const LinearTerms& differential(GeneratorId g) const;
  bool has_differential() const { return !differential_.empty(); }

  /// Same ring, generators and cap.
  bool same_as(const AlgebraSpec& other) const;

  BraceCache& cache() const { return *cache_; }

 private:
  Ring ring_;
  std::vector<Generator> generators_;
  std::vector<int> degrees_, sign_degrees_;
  int weight_cap_;
  std::map<GeneratorId, LinearTerms> differential_;
  std::unique_ptr<BraceCache> cache_;
};

using SpecPtr = std::shared_ptr<const AlgebraSpec>;

/// Element of the unital algebra k1 + L: a unit coefficient plus tree classes.
class AlgebraElement {
 public:
  explicit AlgebraElement(SpecPtr spec);

  static AlgebraElement zero(SpecPtr spec) { return AlgebraElement(std::move(spec)); }
  static AlgebraElement one(SpecPtr spec);
  static AlgebraElement generator(SpecPtr spec, GeneratorId g);
  static AlgebraElement generator(SpecPtr spec, const std::string& name);
  /// Tree class with coefficient; the tree is canonicalized. Zero for degenerate classes in signed rings.
  static AlgebraElement basis(SpecPtr spec, const DecoratedTree& tree, const Scalar& coefficient);
  static AlgebraElement parse_tree(SpecPtr spec, const std::string& text);

  const SpecPtr& spec() const { return spec_; }
  const Ring& ring() const { return spec_->ring(); }
  const Scalar& unit() const { return unit_; }
  const std::map<DecoratedTree, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return unit_.is_zero() && terms_.empty(); }

  /// Adds a canonical, non-degenerate class; silently drops it above the weight cap.
  void add_canonical(const DecoratedTree& tree, const Scalar& coefficient);
  void add_unit(const Scalar& coefficient);

  AlgebraElement& operator+=(const AlgebraElement& b);
  AlgebraElement& operator-=(const AlgebraElement& b);
  AlgebraElement operator+(const AlgebraElement& b) const { return AlgebraElement(*this) += b; }
  AlgebraElement operator-(const AlgebraElement& b) const { return AlgebraElement(*this) -= b; }
  AlgebraElement operator-() const;
  AlgebraElement scaled(const Scalar& s) const;
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);

  /// Degree when homogeneous (the unit has degree 0); nullopt for zero or mixed elements.
  std::optional<int> degree() const;
  /// Smallest vertex count present (0 if the unit is present); nullopt for zero.
  std::optional<int> weight() const;
  /// Part of the given degree / of the given exact weight.
  AlgebraElement degree_part(int degree) const;
  AlgebraElement weight_part(int weight) const;
  /// Drops every class of weight > cap.
  AlgebraElement truncated(int cap) const;
  AlgebraElement without_unit() const;

  std::string to_string() const;
  nlohmann::json to_json() const;

 private:
  SpecPtr spec_;
  Scalar unit_;
  std::map<DecoratedTree, Scalar> terms_;
};

/// One weighted slot y{...}_r of a brace.
struct BraceArg {
  AlgebraElement y;
  int r = 1;
};

/// x{y_1,...,y_n}_{r_1,...,r_n}, truncated at the weight cap.
/// OddWeightViolation for odd y with r >= 2 outside characteristic 2; UnitArgument for y with a unit part.
AlgebraElement weighted_brace(const AlgebraElement& x, const std::vector<BraceArg>& args);
/// x * y = x{y}_1.
AlgebraElement star(const AlgebraElement& x, const AlgebraElement& y);
/// Leibniz extension of the generator differential.
AlgebraElement differentiate(const AlgebraElement& x);
/// Image under the ring map spec.ring() -> target.ring(); same generators required (RingMismatch).
AlgebraElement change_ring(const AlgebraElement& x, const SpecPtr& target);

/// Integer structure constants s{t_1..t_n}_{r_1..r_n} on canonical classes (before reduction to the ring).
/// Signs follow `sign_degrees`; classes above `cap` are dropped.
std::vector<std::pair<DecoratedTree, long long>> basis_brace(const DecoratedTree& s,
                                                             const std::vector<std::pair<DecoratedTree, int>>& args,
                                                             const std::vector<int>& sign_degrees, int cap);

}  // namespace gpl
