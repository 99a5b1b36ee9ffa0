#include "gpl/deligne.hpp"

#include <algorithm>
#include <set>

#include "gpl/error.hpp"
#include "gpl/gauge.hpp"
#include "gpl/parallel.hpp"

namespace gpl {

namespace {

FiniteElement combine(const FiniteModel& m, const std::vector<FiniteElement>& basis, const Coordinates& c) {
  FiniteElement out = m.zero();
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (c[k] != 0) out = out + basis[k].scaled(Scalar::from_integer(static_cast<long long>(c[k]), m.ring()));
  return out;
}

std::uint64_t power(std::int64_t p, std::size_t n, std::uint64_t budget) {
  std::uint64_t out = 1;
  for (std::size_t k = 0; k < n; ++k) {
    out *= static_cast<std::uint64_t>(p);
    if (out > budget) raise(Errc::BudgetExceeded, "enumeration of " + std::to_string(p) + "^" + std::to_string(n) + " exceeds the budget");
  }
  return out;
}

Ring quotient_ring(const FiniteModel& m) {
  if (!m.local() || m.nilpotency() < 2) raise(Errc::IdealConditionViolated, "obstructions need F_p[t]/(t^N) with N >= 2");
  return Ring::truncated_local(Ring::prime_field(m.prime()), m.nilpotency() - 1);
}

CohomologyClass make_class(const FiniteModel& m, int degree, ModVector cocycle) {
  const auto cx = m.algebra()->complex();
  CohomologyClass c;
  c.degree = degree;
  c.coordinates = cx.class_of(degree, cocycle);
  c.is_zero = cx.is_coboundary(degree, cocycle);
  c.cocycle = std::move(cocycle);
  return c;
}

bool all_zero(const ModVector& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

}  // namespace

std::vector<Coordinates> all_vectors(std::int64_t p, int n, std::uint64_t budget) {
  const std::uint64_t count = power(p, static_cast<std::size_t>(n), budget);
  std::vector<Coordinates> out;
  out.reserve(count);
  Coordinates v(static_cast<std::size_t>(n), 0);
  for (std::uint64_t k = 0; k < count; ++k) {
    out.push_back(v);
    for (int i = n - 1; i >= 0; --i) {
      if (++v[static_cast<std::size_t>(i)] < p) break;
      v[static_cast<std::size_t>(i)] = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------- groupoid

std::optional<int> GroupoidReport::orbit_index(const Coordinates& alpha) const {
  const auto it = std::lower_bound(mc_elements.begin(), mc_elements.end(), alpha);
  if (it == mc_elements.end() || *it != alpha) return std::nullopt;
  return orbit_of[static_cast<std::size_t>(it - mc_elements.begin())];
}

std::uint64_t GroupoidReport::hom_size(const Coordinates& a, const Coordinates& b) const {
  const auto ia = orbit_index(a), ib = orbit_index(b);
  if (!ia || !ib || *ia != *ib) return 0;
  return orbits[static_cast<std::size_t>(*ia)].aut_order;
}

nlohmann::json GroupoidReport::to_json() const {
  nlohmann::json j;
  j["mc_count"] = mc_elements.size();
  j["orbit_count"] = orbits.size();
  j["gauge_order"] = gauge_order;
  j["orbits"] = nlohmann::json::array();
  for (const auto& o : orbits) j["orbits"].push_back({{"size", o.size}, {"aut_order", o.aut_order}, {"representative", o.representative}});
  return j;
}

GroupoidReport deligne_enumerate(const FiniteModel& m, const DeligneOptions& options) {
  const auto basis1 = m.linear_basis(1), basis0 = m.linear_basis(0);
  GroupoidReport report;
  report.prime = m.prime();
  const auto candidates = all_vectors(m.prime(), static_cast<int>(basis1.size()), options.budget);
  const auto gauge = all_vectors(m.prime(), static_cast<int>(basis0.size()), options.budget);
  report.candidates = candidates.size();
  report.gauge_order = gauge.size();

  std::vector<char> mc(candidates.size(), 0);
  parallel_for(candidates.size(), [&](std::size_t i) { mc[i] = is_mc(m, combine(m, basis1, candidates[i])) ? 1 : 0; });
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (mc[i]) report.mc_elements.push_back(candidates[i]);
  report.orbit_of.assign(report.mc_elements.size(), -1);

  std::vector<FiniteElement> gauge_elements;
  for (const auto& g : gauge) gauge_elements.push_back(combine(m, basis0, g));
  for (std::size_t i = 0; i < report.mc_elements.size(); ++i) {
    if (report.orbit_of[i] >= 0) continue;
    const int index = static_cast<int>(report.orbits.size());
    const auto& rep = report.mc_elements[i];
    const auto alpha = combine(m, basis1, rep);
    std::vector<Coordinates> images(gauge.size());
    parallel_for(gauge.size(), [&](std::size_t g) { images[g] = m.coordinates(gauge_act(m, gauge_elements[g], alpha, false), 1); });
    std::set<Coordinates> orbit;
    std::uint64_t stab = 0;
    for (const auto& image : images) {
      orbit.insert(image);
      if (image == rep) ++stab;
    }
    for (const auto& image : orbit) {
      const auto it = std::lower_bound(report.mc_elements.begin(), report.mc_elements.end(), image);
      if (it == report.mc_elements.end() || *it != image) raise(Errc::InternalInvariant, "gauge action left the Maurer-Cartan set");
      report.orbit_of[static_cast<std::size_t>(it - report.mc_elements.begin())] = index;
    }
    if (orbit.size() * stab != report.gauge_order) raise(Errc::InternalInvariant, "orbit-stabilizer count fails");
    report.orbits.push_back({rep, orbit.size(), stab});
  }
  return report;
}

std::vector<Coordinates> stabilizer(const FiniteModel& m, const FiniteElement& alpha, std::uint64_t budget) {
  const auto basis0 = m.linear_basis(0);
  std::vector<Coordinates> out;
  for (const auto& g : all_vectors(m.prime(), static_cast<int>(basis0.size()), budget))
    if (gauge_act(m, combine(m, basis0, g), alpha) == alpha) out.push_back(g);
  return out;
}

Pi0Comparison compare_pi0(const GroupoidReport& source, const GroupoidReport& target,
                          const std::function<Coordinates(const Coordinates&)>& map_objects) {
  Pi0Comparison c;
  c.orbit_map.assign(source.orbits.size(), -1);
  for (std::size_t i = 0; i < source.mc_elements.size(); ++i) {
    const auto image = target.orbit_index(map_objects(source.mc_elements[i]));
    auto& slot = c.orbit_map[static_cast<std::size_t>(source.orbit_of[i])];
    if (!image || (slot >= 0 && slot != *image)) {
      c.well_defined = false;
      continue;
    }
    slot = *image;
  }
  std::set<int> hit(c.orbit_map.begin(), c.orbit_map.end());
  c.bijective = c.well_defined && hit.size() == source.orbits.size() && source.orbits.size() == target.orbits.size() && !hit.count(-1);
  c.automorphisms_match = c.well_defined;
  for (std::size_t o = 0; o < source.orbits.size() && c.automorphisms_match; ++o)
    c.automorphisms_match = c.orbit_map[o] >= 0 &&
                            source.orbits[o].aut_order == target.orbits[static_cast<std::size_t>(c.orbit_map[o])].aut_order;
  return c;
}

bool GoldmanMillsonReport::passed() const {
  return cohomology_isomorphic && comparison.well_defined && comparison.bijective && comparison.automorphisms_match &&
         stabilizers_embed;
}

nlohmann::json GoldmanMillsonReport::to_json() const {
  return {{"source_dimension", source_dimension},
          {"cohomology_isomorphic", cohomology_isomorphic},
          {"source", source.to_json()},
          {"target", target.to_json()},
          {"pi0_bijective", comparison.bijective},
          {"automorphisms_match", comparison.automorphisms_match},
          {"stabilizers_embed", stabilizers_embed},
          {"passed", passed()}};
}

GoldmanMillsonReport goldman_millson_check(const FiniteAlgebraPtr& l, const FiniteAlgebraPtr& k, const Ring& a,
                                           const DeligneOptions& options) {
  const auto sum = FiniteAlgebra::direct_sum(l, k);
  const auto phi = summand_inclusion(l, sum);
  const FiniteModel ms(l, a), mt(sum, a);
  GoldmanMillsonReport r;
  r.source_dimension = static_cast<int>(ms.linear_basis(0).size() + ms.linear_basis(1).size());

  const auto src = l->complex(), tgt = sum->complex();
  const auto f = phi.degree_matrices();
  r.cohomology_isomorphic = phi.is_morphism(l->max_weight());
  for (int deg : {0, 1}) {
    const auto h = induced_map(src, tgt, f, deg);
    r.cohomology_isomorphic = r.cohomology_isomorphic && h.rows() == h.cols() && rank(h) == h.rows();
  }

  r.source = deligne_enumerate(ms, options);
  r.target = deligne_enumerate(mt, options);
  const auto basis1 = ms.linear_basis(1);
  auto map_objects = [&](const Coordinates& c) { return mt.coordinates(phi.apply(combine(ms, basis1, c), mt), 1); };
  r.comparison = compare_pi0(r.source, r.target, map_objects);

  r.stabilizers_embed = r.comparison.well_defined;
  const auto basis0 = ms.linear_basis(0);
  for (std::size_t o = 0; o < r.source.orbits.size() && r.stabilizers_embed; ++o) {
    const auto alpha = combine(ms, basis1, r.source.orbits[o].representative);
    const auto image = phi.apply(alpha, mt);
    const auto stab = stabilizer(ms, alpha, options.budget);
    std::set<Coordinates> images;
    for (const auto& g : stab) {
      const auto phig = phi.apply(combine(ms, basis0, g), mt);
      if (!(gauge_act(mt, phig, image) == image)) r.stabilizers_embed = false;
      images.insert(mt.coordinates(phig, 0));
    }
    const int target_orbit = r.comparison.orbit_map[o];
    r.stabilizers_embed = r.stabilizers_embed && target_orbit >= 0 && images.size() == stab.size() &&
                          stab.size() == r.target.orbits[static_cast<std::size_t>(target_orbit)].aut_order;
  }
  return r;
}

GoldmanMillsonReport goldman_millson_desk_check(const DeligneOptions& options) {
  const Ring f2 = Ring::prime_field(2);
  const auto l = FiniteAlgebra::truncated_free(AlgebraSpec::make(f2, {{"u", 0}, {"x", 1}}, 2));
  const auto k = FiniteAlgebra::abelian(2, {{"k0", 0, 1}, {"k1", 1, 1}}, {{{1, 1}}, {}});
  return goldman_millson_check(l, k, Ring::truncated_local(f2, 3), options);
}

// ---------------------------------------------------------------- obstructions

ModVector ideal_part(const FiniteModel& m, const FiniteElement& x, int degree) {
  quotient_ring(m);
  const int top = m.nilpotency() - 1;
  const auto& alg = *m.algebra();
  ModVector out;
  for (int i = 0; i < alg.dim(); ++i) {
    const Scalar& c = x.coefficient(i);
    if (alg.basis(i).degree != degree) {
      if (!c.is_zero()) raise(Errc::DegreeError, "component outside degree " + std::to_string(degree));
      continue;
    }
    for (int j = 0; j < top; ++j)
      if (!c.coefficient(j).is_zero()) raise(Errc::IdealConditionViolated, "element outside L (x) I");
    out.push_back(c.coefficient(top).residue());
  }
  return out;
}

FiniteElement from_ideal(const FiniteModel& m, const ModVector& v, int degree) {
  quotient_ring(m);
  const auto indices = m.algebra()->indices_of_degree(degree);
  if (v.size() != indices.size()) raise(Errc::SizeMismatch, "ideal coordinate length");
  const Scalar top = Scalar::t_power(m.nilpotency() - 1, m.ring());
  FiniteElement out = m.zero();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] != 0) out.add(indices[k], top * Scalar::from_integer(static_cast<long long>(v[k]), m.ring()));
  return out;
}

CohomologyClass obstruction_o2(const FiniteModel& m, const FiniteElement& lift) {
  const auto q = mc_residual(m, lift);
  ModVector z;
  try {
    z = ideal_part(m, q, 2);
  } catch (const Error& e) {
    if (e.code() != Errc::IdealConditionViolated) throw;
    raise(Errc::FiberConditionViolated, "the reduction of the lift is not Maurer-Cartan");
  }
  return make_class(m, 2, std::move(z));
}

CohomologyClass obstruction_o1(const FiniteModel& m, const FiniteElement& alpha, const FiniteElement& beta) {
  if (!is_mc(m, alpha) || !is_mc(m, beta)) raise(Errc::NotMaurerCartan, "o1 needs Maurer-Cartan elements");
  ModVector z;
  try {
    z = ideal_part(m, alpha - beta, 1);
  } catch (const Error& e) {
    if (e.code() != Errc::IdealConditionViolated) throw;
    raise(Errc::FiberConditionViolated, "elements lie in different fibers");
  }
  return make_class(m, 1, std::move(z));
}

CohomologyClass obstruction_o0(const FiniteModel& m, const FiniteElement& mu, const FiniteElement& mu_prime,
                               const FiniteElement& alpha) {
  ModVector z;
  try {
    z = ideal_part(m, mu_prime - mu, 0);
  } catch (const Error& e) {
    if (e.code() != Errc::IdealConditionViolated) throw;
    raise(Errc::FiberConditionViolated, "gauge elements have different reductions");
  }
  if (!(gauge_act(m, mu, alpha) == gauge_act(m, mu_prime, alpha))) raise(Errc::FiberConditionViolated, "gauge lifts with different targets");
  return make_class(m, 0, std::move(z));
}

bool ObstructionReport::passed() const {
  return o2_mismatches == 0 && lift_independence_failures == 0 && fiber_torsor_failures == 0 && o1_mismatches == 0 &&
         gauge_shift_failures == 0 && o0_failures == 0 && reductions > 0;
}

nlohmann::json ObstructionReport::to_json() const {
  return {{"reductions", reductions},       {"o2_mismatches", o2_mismatches},
          {"lift_independence_failures", lift_independence_failures},
          {"fibers", fibers},               {"fiber_torsor_failures", fiber_torsor_failures},
          {"fiber_pairs", fiber_pairs},     {"o1_mismatches", o1_mismatches},
          {"gauge_shift_checks", gauge_shift_checks}, {"gauge_shift_failures", gauge_shift_failures},
          {"o0_checks", o0_checks},         {"o0_failures", o0_failures},
          {"passed", passed()}};
}

ObstructionReport verify_obstructions(const FiniteModel& m, const DeligneOptions& options) {
  const FiniteModel mq(m.algebra(), quotient_ring(m));
  const auto cx = m.algebra()->complex();
  const std::int64_t p = m.prime();
  const int n0 = cx.dim(0), n1 = cx.dim(1);
  const auto ideal0 = all_vectors(p, n0, options.budget), ideal1 = all_vectors(p, n1, options.budget);
  std::vector<ModVector> z1, z0;
  for (const auto& v : ideal1)
    if (all_zero(cx.differential(1).apply(v))) z1.push_back(v);
  for (const auto& v : ideal0)
    if (all_zero(cx.differential(0).apply(v))) z0.push_back(v);
  ObstructionReport r;

  // o2: vanishes exactly on the liftable reductions, independently of the lift.
  const auto quotient = deligne_enumerate(mq, options);
  const auto qbasis = mq.linear_basis(1);
  for (const auto& omega : quotient.mc_elements) {
    ++r.reductions;
    const auto lift = mq.lift_coefficients(combine(mq, qbasis, omega), m);
    const auto o2 = obstruction_o2(m, lift);
    const auto q0 = mc_residual(m, lift);
    bool liftable = false;
    for (const auto& i : ideal1) {
      const auto shifted = lift + from_ideal(m, i, 1);
      const auto q = mc_residual(m, shifted);
      if (q.is_zero()) liftable = true;
      if (!(q - q0 == m.differentiate(from_ideal(m, i, 1)))) ++r.lift_independence_failures;
    }
    if (o2.is_zero != liftable) ++r.o2_mismatches;
  }

  // Fibers of MC(A) -> MC(A/I) are Z^1(L (x) I)-torsors; o1 detects fiber morphisms.
  const auto full = deligne_enumerate(m, options);
  const auto basis1 = m.linear_basis(1), basis0 = m.linear_basis(0);
  std::map<Coordinates, std::vector<Coordinates>> fibers;
  for (const auto& alpha : full.mc_elements)
    fibers[mq.coordinates(m.change_coefficients(combine(m, basis1, alpha), mq), 1)].push_back(alpha);
  for (const auto& [xi, members] : fibers) {
    ++r.fibers;
    if (members.size() != z1.size()) ++r.fiber_torsor_failures;
    const auto alpha = combine(m, basis1, members.front());
    for (const auto& z : z1)
      if (!full.orbit_index(m.coordinates(alpha + from_ideal(m, z, 1), 1))) ++r.fiber_torsor_failures;
    const std::size_t limit = std::min<std::size_t>(members.size(), 8);
    for (std::size_t a = 0; a < limit; ++a)
      for (std::size_t b = 0; b < limit; ++b) {
        ++r.fiber_pairs;
        const auto x = combine(m, basis1, members[a]), y = combine(m, basis1, members[b]);
        const auto o1 = obstruction_o1(m, x, y);
        bool connected = false;
        for (const auto& u : ideal0)
          if (gauge_act(m, from_ideal(m, u, 0), x) == y) {
            connected = true;
            break;
          }
        if (o1.is_zero != connected) ++r.o1_mismatches;
      }
  }

  // Gauge shift and o0 on a bounded sample of objects and gauge elements.
  const auto gauge = all_vectors(p, static_cast<int>(basis0.size()), options.budget);
  const std::size_t objects = std::min<std::size_t>(full.mc_elements.size(), 6);
  const std::size_t etas = std::min<std::size_t>(gauge.size(), 8);
  for (std::size_t a = 0; a < objects; ++a) {
    const auto alpha = combine(m, basis1, full.mc_elements[a * full.mc_elements.size() / objects]);
    for (std::size_t e = 0; e < etas; ++e) {
      const auto eta = combine(m, basis0, gauge[e * gauge.size() / etas]);
      const auto moved = gauge_act(m, eta, alpha);
      std::vector<ModVector> fixing;
      for (const auto& u : ideal0) {
        ++r.gauge_shift_checks;
        const auto ue = from_ideal(m, u, 0);
        const auto shifted = gauge_act(m, eta + ue, alpha);
        if (!(shifted == moved - m.differentiate(ue))) ++r.gauge_shift_failures;
        if (shifted == moved) fixing.push_back(u);
      }
      // Lifts of 1+eta with the same target form a Z^0(L (x) I)-torsor, and o0 sees their difference.
      ++r.o0_checks;
      if (fixing != z0) ++r.o0_failures;
      for (const auto& u : fixing)
        for (const auto& v : fixing) {
          const auto o0 = obstruction_o0(m, eta + from_ideal(m, u, 0), eta + from_ideal(m, v, 0), alpha);
          ModVector diff(u.size());
          for (std::size_t k = 0; k < u.size(); ++k) diff[k] = ((v[k] - u[k]) % p + p) % p;
          if (o0.is_zero != cx.is_coboundary(0, diff)) ++r.o0_failures;
        }
    }
  }
  return r;
}

}  // namespace gpl
