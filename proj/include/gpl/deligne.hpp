#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpl/finite_algebra.hpp"
#include "gpl/linalg.hpp"
#include "json.hpp"

namespace gpl {

using Coordinates = std::vector<std::int64_t>;

struct OrbitSummary {
  Coordinates representative;  // lexicographically least member
  std::uint64_t size = 0;
  std::uint64_t aut_order = 0;
};

/// Exhaustive Deligne groupoid of a finite model: MC elements, gauge orbits, automorphism groups.
/// Objects are coordinate vectors in linear_basis(1); gauge elements in linear_basis(0).
struct GroupoidReport {
  std::int64_t prime = 2;
  std::uint64_t gauge_order = 1;
  std::uint64_t candidates = 0;
  std::vector<Coordinates> mc_elements;  // lexicographic
  std::vector<int> orbit_of;             // per MC element
  std::vector<OrbitSummary> orbits;

  /// Orbit index of an MC element, nullopt when the vector is not MC.
  std::optional<int> orbit_index(const Coordinates& alpha) const;
  /// Hom-set size between two MC elements.
  std::uint64_t hom_size(const Coordinates& a, const Coordinates& b) const;
  /// {"mc_count","orbit_count","gauge_order","orbits":[{"size","aut_order","representative"}]}
  nlohmann::json to_json() const;
};

struct DeligneOptions {
  std::uint64_t budget = std::uint64_t{1} << 20;  // bound on p^dim for either enumerated component
};

/// BudgetExceeded when an enumeration would exceed the budget.
GroupoidReport deligne_enumerate(const FiniteModel& m, const DeligneOptions& options = {});

/// Every vector of F_p^n in lexicographic order; BudgetExceeded above budget.
std::vector<Coordinates> all_vectors(std::int64_t p, int n, std::uint64_t budget);

/// Gauge elements (coordinates in linear_basis(0)) fixing alpha.
std::vector<Coordinates> stabilizer(const FiniteModel& m, const FiniteElement& alpha, std::uint64_t budget = std::uint64_t{1} << 20);

/// Map on pi_0 induced by a map of MC sets, with the checks needed for an equivalence.
struct Pi0Comparison {
  bool well_defined = true;   // orbits map into orbits
  bool bijective = false;
  bool automorphisms_match = false;  // aut orders equal along the map
  std::vector<int> orbit_map;
};
Pi0Comparison compare_pi0(const GroupoidReport& source, const GroupoidReport& target,
                          const std::function<Coordinates(const Coordinates&)>& map_objects);

/// Outcome of the groupoid-equivalence check for phi: L -> L (+) K with K an acyclic two-step summand.
struct GoldmanMillsonReport {
  int source_dimension = 0;  // dim of (L (x) m_A) in degrees 0 and 1
  bool cohomology_isomorphic = false;  // H^0 and H^1 of phi
  GroupoidReport source, target;
  Pi0Comparison comparison;
  bool stabilizers_embed = false;  // phi maps Stab(alpha) isomorphically onto Stab(phi alpha)
  bool passed() const;
  nlohmann::json to_json() const;
};

/// L = truncated free algebra on u (degree 0) and x (degree 1) at weight 2 over F_2, zero differential;
/// K = k0 -> k1; A = F_2[t]/(t^3).
GoldmanMillsonReport goldman_millson_desk_check(const DeligneOptions& options = {});
GoldmanMillsonReport goldman_millson_check(const FiniteAlgebraPtr& l, const FiniteAlgebraPtr& k, const Ring& a,
                                           const DeligneOptions& options = {});

// ---------------------------------------------------------------- obstructions
// Over A = F_p[t]/(t^N) with N >= 2 and I = (t^{N-1}), so that I * m_A = 0 and L (x) I = L (x) t^{N-1}.

struct CohomologyClass {
  int degree = 0;
  ModVector cocycle;       // coordinates in FiniteAlgebra::indices_of_degree(degree)
  ModVector coordinates;   // in CochainComplex::cohomology_basis(degree)
  bool is_zero = true;
};

/// Coordinates of x in L^k (x) I; IdealConditionViolated when x has components outside the ideal.
ModVector ideal_part(const FiniteModel& m, const FiniteElement& x, int degree);
FiniteElement from_ideal(const FiniteModel& m, const ModVector& v, int degree);

/// Class of Q(lift) = d(lift) + lift{lift}_1 in H^2(L (x) I). FiberConditionViolated if the reduction is not MC.
CohomologyClass obstruction_o2(const FiniteModel& m, const FiniteElement& lift);
/// Class of alpha - beta in H^1(L (x) I) for MC alpha, beta with the same reduction.
CohomologyClass obstruction_o1(const FiniteModel& m, const FiniteElement& alpha, const FiniteElement& beta);
/// Class of mu - mu' in H^0(L (x) I) for gauge lifts with the same reduction sending alpha to the same element.
CohomologyClass obstruction_o0(const FiniteModel& m, const FiniteElement& mu, const FiniteElement& mu_prime,
                               const FiniteElement& alpha);

/// Exhaustive check of the obstruction statements on a finite instance.
struct ObstructionReport {
  std::uint64_t reductions = 0, o2_mismatches = 0, lift_independence_failures = 0;
  std::uint64_t fibers = 0, fiber_torsor_failures = 0;
  std::uint64_t fiber_pairs = 0, o1_mismatches = 0;
  std::uint64_t gauge_shift_checks = 0, gauge_shift_failures = 0;
  std::uint64_t o0_checks = 0, o0_failures = 0;
  bool passed() const;
  nlohmann::json to_json() const;
};
ObstructionReport verify_obstructions(const FiniteModel& m, const DeligneOptions& options = {});

}  // namespace gpl
