#include "gpl/identities.hpp"

namespace gpl {

AlgebraElement FreeModel::brace(const AlgebraElement& x, const std::vector<std::pair<AlgebraElement, int>>& args) const {
  std::vector<BraceArg> slots;
  for (const auto& [y, r] : args) slots.push_back({y, r});
  return weighted_brace(x, slots);
}

int FreeModel::weight(const AlgebraElement& x) const {
  int w = 0;
  for (const auto& [t, c] : x.terms()) w = std::max(w, t.size());
  return w;
}

AlgebraElement FreeModel::random_homogeneous(std::mt19937_64& rng, int max_weight) const {
  const int n_gens = static_cast<int>(spec_->generators().size());
  if (n_gens == 0) raise(Errc::ConfigError, "algebra without generators");
  max_weight = std::max(1, std::min(max_weight, cap()));
  auto random_class = [&]() {
    for (;;) {
      const int size = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_weight));
      std::vector<int> parents{-1};
      std::vector<GeneratorId> decorations{static_cast<GeneratorId>(rng() % static_cast<unsigned>(n_gens))};
      for (int v = 1; v < size; ++v) {
        parents.push_back(static_cast<int>(rng() % static_cast<unsigned>(v)));
        decorations.push_back(static_cast<GeneratorId>(rng() % static_cast<unsigned>(n_gens)));
      }
      const auto canon = canonicalize(parents, decorations, spec_->degrees());
      if (!(spec_->signed_ring() && canon.sign_degenerate)) return canon.tree;
    }
  };
  auto nonzero_scalar = [&]() {
    for (;;) {
      const Scalar c = random_scalar(ring(), rng);
      if (!c.is_zero()) return c;
    }
  };
  AlgebraElement out = zero();
  const auto first = random_class();
  out.add_canonical(first, nonzero_scalar());
  if (rng() % 2 == 0) {
    const int degree = first.degree(spec_->degrees());
    for (int attempt = 0; attempt < 10; ++attempt) {
      const auto second = random_class();
      if (second != first && second.degree(spec_->degrees()) == degree) {
        out.add_canonical(second, nonzero_scalar());
        break;
      }
    }
  }
  return out;
}

Scalar random_scalar(const Ring& ring, std::mt19937_64& rng) {
  Scalar c = Scalar::from_integer(static_cast<long long>(rng() % 7) - 3, ring);
  if (ring.is_local())
    for (int k = 1; k < ring.nilpotency(); ++k)
      c += Scalar::from_integer(static_cast<long long>(rng() % 3) - 1, ring) * Scalar::t_power(k, ring);
  return c;
}

int token_sign(const std::vector<int>& target_slots, const std::vector<int>& degrees) {
  if (target_slots.size() != degrees.size()) raise(Errc::SizeMismatch, "token lists differ in length");
  int parity = 0;
  for (std::size_t a = 0; a < target_slots.size(); ++a) {
    if (!(degrees[a] & 1)) continue;
    for (std::size_t b = a + 1; b < target_slots.size(); ++b)
      if ((degrees[b] & 1) && target_slots[a] > target_slots[b]) parity ^= 1;
  }
  return parity ? -1 : 1;
}

const char* identity_name(Identity which) {
  switch (which) {
    case Identity::Symmetry: return "i";
    case Identity::ZeroWeight: return "ii";
    case Identity::Scaling: return "iii";
    case Identity::Merge: return "iv";
    case Identity::Additivity: return "v";
    case Identity::Composition: return "vi";
    case Identity::Leibniz: return "leibniz";
  }
  return "?";
}

std::optional<Identity> parse_identity(const std::string& name) {
  for (Identity which : {Identity::Symmetry, Identity::ZeroWeight, Identity::Scaling, Identity::Merge,
                         Identity::Additivity, Identity::Composition, Identity::Leibniz})
    if (name == identity_name(which)) return which;
  return std::nullopt;
}

}  // namespace gpl
