#include "gpl/finite_algebra.hpp"

#include <algorithm>
#include <set>

#include "gpl/error.hpp"
#include "gpl/identities.hpp"

namespace gpl {

namespace {

std::int64_t reduce(long long v, std::int64_t p) {
  const auto r = static_cast<std::int64_t>(v % p);
  return r < 0 ? r + p : r;
}

}  // namespace

// ---------------------------------------------------------------- algebra

FiniteAlgebra::FiniteAlgebra(std::int64_t p, std::vector<BasisVector> basis, std::vector<SparseColumn> differential,
                             BraceRule rule)
    : p_(p), basis_(std::move(basis)), differential_(std::move(differential)), rule_(std::move(rule)) {
  if (!is_prime(p_)) raise(Errc::NotFiniteField, "modulus " + std::to_string(p_) + " is not prime");
  if (differential_.empty()) differential_.resize(basis_.size());
  if (differential_.size() != basis_.size()) raise(Errc::SizeMismatch, "one differential column per basis vector");
  for (const auto& b : basis_) {
    if (b.weight < 1) raise(Errc::ConfigError, "basis weight must be positive: " + b.name);
    max_weight_ = std::max(max_weight_, b.weight);
  }
  for (std::size_t i = 0; i < differential_.size(); ++i) {
    SparseColumn cleaned;
    for (const auto& [j, c] : differential_[i]) {
      if (j < 0 || j >= dim()) raise(Errc::BadIndex, "differential target out of range");
      const auto v = reduce(c, p_);
      if (v == 0) continue;
      if (basis_[static_cast<std::size_t>(j)].degree != basis_[i].degree + 1) raise(Errc::NotAComplex, "differential of " + basis_[i].name + " has the wrong degree");
      cleaned.emplace_back(j, v);
    }
    differential_[i] = std::move(cleaned);
  }
  complex().validate();
}

FiniteAlgebraPtr FiniteAlgebra::truncated_free(const SpecPtr& spec) {
  const Ring& ring = spec->ring();
  if (ring.kind() != RingKind::PrimeField) raise(Errc::NotFiniteField, "truncated free algebra needs a prime field, got " + ring.name());
  const int n_gens = static_cast<int>(spec->generators().size());
  std::set<DecoratedTree> classes;
  const auto shapes = enumerate_unlabeled(spec->weight_cap());
  for (const auto& by_size : shapes)
    for (const auto& shape : by_size) {
      const auto parents = shape.parents();
      std::vector<GeneratorId> decorations(parents.size(), 0);
      for (;;) {
        const auto canon = canonicalize(parents, decorations, spec->sign_degrees());
        if (!(spec->signed_ring() && canon.sign_degenerate)) classes.insert(canon.tree);
        std::size_t k = 0;
        while (k < decorations.size() && ++decorations[k] == n_gens) decorations[k++] = 0;
        if (k == decorations.size()) break;
      }
    }
  std::vector<DecoratedTree> trees(classes.begin(), classes.end());
  std::map<DecoratedTree, int> index;
  std::vector<BasisVector> basis;
  for (const auto& t : trees) {
    index.emplace(t, static_cast<int>(basis.size()));
    basis.push_back({to_text(t, [&](GeneratorId g) { return spec->generators()[static_cast<std::size_t>(g)].name; }),
                     t.degree(spec->degrees()), t.size()});
  }
  const std::int64_t p = ring.modulus();
  std::vector<SparseColumn> d;
  for (const auto& t : trees) {
    SparseColumn col;
    const auto image = differentiate(AlgebraElement::basis(spec, t, Scalar::one(ring)));
    for (const auto& [u, c] : image.terms())
      col.emplace_back(index.at(u), c.residue());
    d.push_back(std::move(col));
  }
  auto rule = [spec, trees, index, p](int head, const std::vector<std::pair<int, int>>& args) {
    std::vector<std::pair<DecoratedTree, int>> tree_args;
    for (const auto& [j, r] : args) tree_args.emplace_back(trees[static_cast<std::size_t>(j)], r);
    SparseColumn out;
    for (const auto& [t, n] : basis_brace(trees[static_cast<std::size_t>(head)], tree_args, spec->sign_degrees(), spec->weight_cap())) {
      const auto v = reduce(n, p);
      if (v != 0) out.emplace_back(index.at(t), v);
    }
    return out;
  };
  auto algebra = std::make_shared<FiniteAlgebra>(p, std::move(basis), std::move(d), std::move(rule));
  algebra->trees_ = std::move(trees);
  return algebra;
}

FiniteAlgebraPtr FiniteAlgebra::abelian(std::int64_t p, std::vector<BasisVector> basis, std::vector<SparseColumn> differential) {
  return std::make_shared<const FiniteAlgebra>(p, std::move(basis), std::move(differential),
                                               [](int, const std::vector<std::pair<int, int>>&) { return SparseColumn{}; });
}

FiniteAlgebraPtr FiniteAlgebra::direct_sum(const FiniteAlgebraPtr& a, const FiniteAlgebraPtr& b) {
  if (a->prime() != b->prime()) raise(Errc::RingMismatch, "summands over different fields");
  const int shift = a->dim();
  std::vector<BasisVector> basis;
  std::vector<SparseColumn> d;
  for (int i = 0; i < a->dim(); ++i) {
    basis.push_back(a->basis(i));
    d.push_back(a->differential(i));
  }
  for (int i = 0; i < b->dim(); ++i) {
    basis.push_back(b->basis(i));
    SparseColumn col;
    for (const auto& [j, c] : b->differential(i)) col.emplace_back(j + shift, c);
    d.push_back(std::move(col));
  }
  auto rule = [a, b, shift](int head, const std::vector<std::pair<int, int>>& args) {
    const bool first = head < shift;
    std::vector<std::pair<int, int>> local;
    for (const auto& [j, r] : args) {
      if ((j < shift) != first) return SparseColumn{};
      local.emplace_back(first ? j : j - shift, r);
    }
    if (first) return a->brace_constants(head, local);
    SparseColumn out;
    for (const auto& [j, c] : b->brace_constants(head - shift, local)) out.emplace_back(j + shift, c);
    return out;
  };
  return std::make_shared<const FiniteAlgebra>(a->prime(), std::move(basis), std::move(d), std::move(rule));
}

bool FiniteAlgebra::has_differential() const {
  return std::any_of(differential_.begin(), differential_.end(), [](const SparseColumn& c) { return !c.empty(); });
}

const SparseColumn& FiniteAlgebra::brace_constants(int head, const std::vector<std::pair<int, int>>& args) const {
  std::vector<int> key{head};
  for (const auto& [j, r] : args) {
    key.push_back(j);
    key.push_back(r);
  }
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return *it->second;
  }
  auto value = std::make_unique<SparseColumn>(rule_(head, args));
  std::lock_guard lock(mutex_);
  return *cache_.emplace(key, std::move(value)).first->second;
}

std::vector<int> FiniteAlgebra::indices_of_degree(int degree) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i)
    if (basis(i).degree == degree) out.push_back(i);
  return out;
}

CochainComplex FiniteAlgebra::complex() const {
  CochainComplex cx;
  cx.p = p_;
  std::map<int, std::vector<int>> by_degree;
  std::vector<int> position(basis_.size());
  for (int i = 0; i < dim(); ++i) {
    auto& list = by_degree[basis(i).degree];
    position[static_cast<std::size_t>(i)] = static_cast<int>(list.size());
    list.push_back(i);
  }
  for (const auto& [k, list] : by_degree) cx.dims[k] = static_cast<int>(list.size());
  for (const auto& [k, list] : by_degree) {
    ModMatrix m(p_, cx.dim(k + 1), cx.dim(k));
    bool any = false;
    for (int i : list)
      for (const auto& [j, c] : differential(i)) {
        m.add(position[static_cast<std::size_t>(j)], position[static_cast<std::size_t>(i)], c);
        any = true;
      }
    if (any) cx.d.emplace(k, std::move(m));
  }
  return cx;
}

const DecoratedTree& FiniteAlgebra::tree(int i) const {
  if (trees_.empty() || i < 0 || i >= dim()) raise(Errc::BadIndex, "no tree for basis index " + std::to_string(i));
  return trees_[static_cast<std::size_t>(i)];
}

// ---------------------------------------------------------------- elements

FiniteElement::FiniteElement(FiniteAlgebraPtr algebra, Ring coefficients)
    : algebra_(std::move(algebra)), ring_(std::move(coefficients)) {
  coefficients_.assign(static_cast<std::size_t>(algebra_->dim()), Scalar::zero(ring_));
}

void FiniteElement::add(int i, const Scalar& c) {
  if (i < 0 || i >= algebra_->dim()) raise(Errc::BadIndex, "basis index " + std::to_string(i));
  coefficients_[static_cast<std::size_t>(i)] += c;
}

bool FiniteElement::is_zero() const {
  return std::all_of(coefficients_.begin(), coefficients_.end(), [](const Scalar& c) { return c.is_zero(); });
}

std::optional<int> FiniteElement::degree() const {
  std::optional<int> out;
  for (int i = 0; i < algebra_->dim(); ++i) {
    if (coefficient(i).is_zero()) continue;
    const int d = algebra_->basis(i).degree;
    if (out && *out != d) return std::nullopt;
    out = d;
  }
  return out;
}

FiniteElement FiniteElement::operator+(const FiniteElement& b) const {
  if (algebra_ != b.algebra_ || !(ring_ == b.ring_)) raise(Errc::ModelMismatch, "elements of different finite algebras");
  FiniteElement out = *this;
  for (int i = 0; i < algebra_->dim(); ++i) out.coefficients_[static_cast<std::size_t>(i)] += b.coefficient(i);
  return out;
}

FiniteElement FiniteElement::operator-(const FiniteElement& b) const { return *this + b.scaled(-Scalar::one(ring_)); }

FiniteElement FiniteElement::scaled(const Scalar& s) const {
  FiniteElement out = *this;
  for (auto& c : out.coefficients_) c = c * s;
  return out;
}

bool operator==(const FiniteElement& a, const FiniteElement& b) {
  return a.algebra_ == b.algebra_ && a.ring_ == b.ring_ && a.coefficients_ == b.coefficients_;
}

std::string FiniteElement::to_string() const {
  std::string out;
  for (int i = 0; i < algebra_->dim(); ++i) {
    const Scalar& c = coefficient(i);
    if (c.is_zero()) continue;
    if (!out.empty()) out += " + ";
    const std::string s = c.to_string();
    out += (s == "1" ? "" : (c.is_compound() ? "(" + s + ")" : s) + "*") + algebra_->basis(i).name;
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- model

FiniteModel::FiniteModel(FiniteAlgebraPtr algebra, Ring coefficients) : algebra_(std::move(algebra)), ring_(std::move(coefficients)) {
  const Ring field = Ring::prime_field(algebra_->prime());
  const bool ok = ring_ == field || (ring_.is_local() && ring_.base() == field);
  if (!ok) raise(Errc::RingMismatch, "coefficients " + ring_.name() + " over a finite algebra in characteristic " +
                                         std::to_string(algebra_->prime()));
}

void FiniteModel::check(const Element& x) const {
  if (x.algebra() != algebra_ || !(x.ring() == ring_)) raise(Errc::ModelMismatch, "element of another finite model");
}

FiniteElement FiniteModel::basis(int i, const Scalar& c) const {
  Element out = zero();
  out.add(i, c);
  return out;
}

FiniteElement FiniteModel::brace(const Element& x, const std::vector<std::pair<Element, int>>& args) const {
  check(x);
  struct Slot {
    std::vector<std::pair<int, Scalar>> support;  // ascending weight
    int r;
  };
  std::vector<Slot> slots;
  for (const auto& [y, r] : args) {
    check(y);
    if (r < 0) raise(Errc::BadIndex, "negative weight");
    if (r == 0) continue;
    Slot s{{}, r};
    for (int j = 0; j < algebra_->dim(); ++j) {
      if (y.coefficient(j).is_zero()) continue;
      if (algebra_->signed_ring() && r >= 2 && algebra_->basis(j).degree % 2 != 0)
        raise(Errc::OddWeightViolation, "odd element with weight " + std::to_string(r));
      s.support.emplace_back(j, y.coefficient(j));
    }
    std::stable_sort(s.support.begin(), s.support.end(),
                     [&](const auto& a, const auto& b) { return algebra_->basis(a.first).weight < algebra_->basis(b.first).weight; });
    slots.push_back(std::move(s));
  }
  if (slots.empty()) return x;

  Element out = zero();
  const int cap = algebra_->max_weight();
  std::vector<std::pair<int, int>> basis_args;
  for (int head = 0; head < algebra_->dim(); ++head) {
    const Scalar& ch = x.coefficient(head);
    if (ch.is_zero()) continue;
    std::function<void(std::size_t, std::size_t, int, int, const Scalar&)> split =
        [&](std::size_t i, std::size_t j, int left, int weight, const Scalar& coef) {
          if (i == slots.size()) {
            for (const auto& [t, v] : algebra_->brace_constants(head, basis_args))
              out.add(t, coef * Scalar::from_integer(static_cast<long long>(v), ring_));
            return;
          }
          if (left == 0) {
            split(i + 1, 0, i + 1 < slots.size() ? slots[i + 1].r : 0, weight, coef);
            return;
          }
          const auto& support = slots[i].support;
          if (j == support.size()) return;
          const auto& [b, c] = support[j];
          const int w = algebra_->basis(b).weight;
          if (weight + w > cap) return;
          split(i, j + 1, left, weight, coef);
          Scalar power = coef;
          for (int k = 1; k <= left && weight + k * w <= cap; ++k) {
            power = power * c;
            if (power.is_zero()) break;
            basis_args.emplace_back(b, k);
            split(i, j + 1, left - k, weight + k * w, power);
            basis_args.pop_back();
          }
        };
    split(0, 0, slots[0].r, algebra_->basis(head).weight, ch);
  }
  return out;
}

FiniteElement FiniteModel::differentiate(const Element& x) const {
  check(x);
  Element out = zero();
  for (int i = 0; i < algebra_->dim(); ++i) {
    if (x.coefficient(i).is_zero()) continue;
    for (const auto& [j, c] : algebra_->differential(i)) out.add(j, x.coefficient(i) * Scalar::from_integer(static_cast<long long>(c), ring_));
  }
  return out;
}

int FiniteModel::weight(const Element& x) const {
  int w = 0;
  for (int i = 0; i < algebra_->dim(); ++i)
    if (!x.coefficient(i).is_zero()) w = std::max(w, algebra_->basis(i).weight);
  return w;
}

int FiniteModel::series_bound() const {
  int bound = algebra_->max_weight() - 1;
  if (local()) bound = std::min(bound, ring_.nilpotency() - 1);
  return std::max(bound, 0);
}

FiniteElement FiniteModel::random_homogeneous(std::mt19937_64& rng, int max_weight) const {
  std::vector<int> eligible;
  for (int i = 0; i < algebra_->dim(); ++i)
    if (algebra_->basis(i).weight <= std::max(1, max_weight)) eligible.push_back(i);
  if (eligible.empty()) raise(Errc::ConfigError, "no basis vector of small enough weight");
  for (;;) {
    const int first = eligible[rng() % eligible.size()];
    Element out = zero();
    out.add(first, random_scalar(ring_, rng));
    if (rng() % 2 == 0) {
      const int second = eligible[rng() % eligible.size()];
      if (algebra_->basis(second).degree == algebra_->basis(first).degree) out.add(second, random_scalar(ring_, rng));
    }
    if (!out.is_zero()) return out;
  }
}

FiniteElement FiniteModel::random_small(std::mt19937_64& rng, int degree) const {
  const auto basis = linear_basis(degree);
  Element out = zero();
  for (const auto& b : basis) out = out + b.scaled(Scalar::from_integer(static_cast<long long>(rng() % static_cast<std::uint64_t>(prime())), ring_));
  return out;
}

std::vector<FiniteElement> FiniteModel::linear_basis(int degree) const {
  std::vector<Element> out;
  for (int i : algebra_->indices_of_degree(degree)) {
    if (!local()) {
      out.push_back(basis(i));
      continue;
    }
    for (int j = 1; j < ring_.nilpotency(); ++j) out.push_back(basis(i, Scalar::t_power(j, ring_)));
  }
  return out;
}

std::vector<std::int64_t> FiniteModel::coordinates(const Element& x, int degree) const {
  check(x);
  std::vector<std::int64_t> out;
  for (int i = 0; i < algebra_->dim(); ++i) {
    const Scalar& c = x.coefficient(i);
    if (algebra_->basis(i).degree != degree) {
      if (!c.is_zero()) raise(Errc::DegreeError, "component outside degree " + std::to_string(degree));
      continue;
    }
    if (!local()) {
      out.push_back(c.residue());
      continue;
    }
    if (!c.coefficient(0).is_zero()) raise(Errc::IdealConditionViolated, "coefficient outside the maximal ideal");
    for (int j = 1; j < ring_.nilpotency(); ++j) out.push_back(c.coefficient(j).residue());
  }
  return out;
}

FiniteElement FiniteModel::from_coordinates(const std::vector<std::int64_t>& coords, int degree) const {
  const auto basis = linear_basis(degree);
  if (coords.size() != basis.size()) raise(Errc::SizeMismatch, "coordinate vector length");
  Element out = zero();
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (coords[k] != 0) out = out + basis[k].scaled(Scalar::from_integer(static_cast<long long>(coords[k]), ring_));
  return out;
}

FiniteElement FiniteModel::change_coefficients(const Element& x, const FiniteModel& target) const {
  check(x);
  if (target.algebra_ != algebra_) raise(Errc::ModelMismatch, "coefficient change keeps the algebra");
  Element out = target.zero();
  for (int i = 0; i < algebra_->dim(); ++i) out.add(i, change_ring(x.coefficient(i), target.ring_));
  return out;
}

FiniteElement FiniteModel::lift_coefficients(const Element& x, const FiniteModel& target) const {
  check(x);
  if (target.algebra_ != algebra_) raise(Errc::ModelMismatch, "coefficient lift keeps the algebra");
  if (target.nilpotency() < nilpotency()) raise(Errc::WrongRingKind, "lift goes to a larger nilpotency");
  const Ring base = Ring::prime_field(prime());
  Element out = target.zero();
  for (int i = 0; i < algebra_->dim(); ++i) {
    const Scalar& c = x.coefficient(i);
    if (c.is_zero()) continue;
    if (!target.local()) {
      out.add(i, c);
      continue;
    }
    std::vector<Scalar> coefficients;
    for (int j = 0; j < nilpotency(); ++j) coefficients.push_back(local() ? c.coefficient(j) : (j == 0 ? c : Scalar::zero(base)));
    out.add(i, Scalar::from_coefficients(target.ring_, coefficients));
  }
  return out;
}

// ---------------------------------------------------------------- morphisms

FiniteElement FiniteMorphism::apply(const FiniteElement& x, const FiniteModel& target_model) const {
  if (x.algebra() != source || target_model.algebra() != target) raise(Errc::ModelMismatch, "morphism applied outside its domain");
  FiniteElement out = target_model.zero();
  for (int i = 0; i < source->dim(); ++i) {
    if (x.coefficient(i).is_zero()) continue;
    for (const auto& [j, c] : images[static_cast<std::size_t>(i)])
      out.add(j, x.coefficient(i) * Scalar::from_integer(static_cast<long long>(c), target_model.ring()));
  }
  return out;
}

std::map<int, ModMatrix> FiniteMorphism::degree_matrices() const {
  std::map<int, ModMatrix> out;
  std::set<int> degrees;
  for (int i = 0; i < source->dim(); ++i) degrees.insert(source->basis(i).degree);
  for (int k : degrees) {
    const auto src = source->indices_of_degree(k), tgt = target->indices_of_degree(k);
    ModMatrix m(source->prime(), static_cast<int>(tgt.size()), static_cast<int>(src.size()));
    for (std::size_t c = 0; c < src.size(); ++c)
      for (const auto& [j, v] : images[static_cast<std::size_t>(src[c])]) {
        const auto it = std::find(tgt.begin(), tgt.end(), j);
        if (it == tgt.end()) raise(Errc::DegreeError, "morphism does not preserve degrees");
        m.add(static_cast<int>(it - tgt.begin()), static_cast<int>(c), v);
      }
    out.emplace(k, std::move(m));
  }
  return out;
}

bool FiniteMorphism::is_morphism(int max_weight) const {
  const Ring field = Ring::prime_field(source->prime());
  const FiniteModel ms(source, field), mt(target, field);
  auto f = [&](const FiniteElement& x) { return apply(x, mt); };
  const int n = source->dim();
  for (int i = 0; i < n; ++i) {
    if (!(f(ms.differentiate(ms.basis(i))) == mt.differentiate(f(ms.basis(i))))) return false;
    for (int j = 0; j < n; ++j)
      for (int r = 1; r <= 2; ++r) {
        if (source->basis(i).weight + r * source->basis(j).weight > max_weight) continue;
        if (r == 2 && source->signed_ring() && source->basis(j).degree % 2 != 0) continue;
        if (!(f(ms.brace(ms.basis(i), {{ms.basis(j), r}})) == mt.brace(f(ms.basis(i)), {{f(ms.basis(j)), r}}))) return false;
      }
  }
  return true;
}

FiniteMorphism summand_inclusion(const FiniteAlgebraPtr& a, const FiniteAlgebraPtr& sum) {
  if (sum->dim() < a->dim()) raise(Errc::SizeMismatch, "summand larger than the sum");
  FiniteMorphism f{a, sum, {}};
  for (int i = 0; i < a->dim(); ++i) f.images.push_back({{i, 1}});
  return f;
}

FiniteElement to_finite(const AlgebraElement& x, const FiniteModel& model) {
  const auto& algebra = *model.algebra();
  FiniteElement out = model.zero();
  if (!x.unit().is_zero()) raise(Errc::UnitArgument, "the unit has no image in a finite presentation");
  for (const auto& [t, c] : x.terms()) {
    int found = -1;
    for (int i = 0; i < algebra.dim() && found < 0; ++i)
      if (algebra.tree(i) == t) found = i;
    if (found < 0) raise(Errc::BadIndex, "tree class missing from the finite presentation");
    out.add(found, Scalar::from_integer(static_cast<long long>(c.residue()), model.ring()));
  }
  return out;
}

}  // namespace gpl
